"""
Run records: a frozen CSV schema for metrics and JSON lines for structural
events.
"""
import csv
import json
import os
import typing as typ

import attr

#: Column order of the metrics CSV. Changing it breaks downstream readers.
CSV_COLUMNS = (
    'step', 'epoch', 'event', 'layer', 'conv_kernels', 'train_loss',
    'validation_accuracy', 'test_error', 'parameter_count', 'forward_ms',
)

EVENTS = ('baseline', 'finetune', 'split', 'merge', 'restore', 'epoch')


def _event(instance, attribute, value):
    if value not in EVENTS:
        raise ValueError('Unknown event {0!r}'.format(value))


@attr.s(frozen=True)
class MetricsRecord(object):
    step = attr.ib()
    epoch = attr.ib()
    event = attr.ib(validator=_event)
    parameter_count = attr.ib()
    conv_kernels = attr.ib(default='')
    layer = attr.ib(default=None)
    train_loss = attr.ib(default=None)
    validation_accuracy = attr.ib(default=None)
    test_error = attr.ib(default=None)
    forward_ms = attr.ib(default=None)

    def as_row(self) -> typ.Dict[str, str]:
        row = {}
        for column in CSV_COLUMNS:
            value = getattr(self, column)
            if value is None:
                row[column] = ''
            elif isinstance(value, float):
                row[column] = repr(value)
            else:
                row[column] = str(value)
        return row


class MetricsWriter(object):
    """Append-only CSV of :class:`MetricsRecord` rows."""

    def __init__(self, path: str):
        self.path = path
        if not os.path.exists(path) or os.path.getsize(path) == 0:
            with open(path, 'w', newline='') as f:
                csv.DictWriter(f, fieldnames=CSV_COLUMNS).writeheader()

    def write(self, record: MetricsRecord):
        with open(self.path, 'a', newline='') as f:
            csv.DictWriter(f, fieldnames=CSV_COLUMNS).writerow(record.as_row())


class EventLog(object):
    """Append-only JSON lines, one object per structural event."""

    def __init__(self, path: str):
        self.path = path

    def write(self, **fields):
        with open(self.path, 'a') as f:
            f.write(json.dumps(fields, sort_keys=True))
            f.write('\n')


class Recorder(object):
    """
    Collects the history of a run and mirrors it to the optional writers.
    """

    def __init__(self, metrics: typ.Optional[MetricsWriter] = None,
                 events: typ.Optional[EventLog] = None):
        self.metrics = metrics
        self.events = events
        self.history = []

    @classmethod
    def in_directory(cls, directory: str, fresh: bool = False) -> 'Recorder':
        """
        Write ``metrics.csv`` and ``events.jsonl`` under ``directory``;
        ``fresh`` discards what a previous run left there.
        """
        os.makedirs(directory, exist_ok=True)
        metrics_path = os.path.join(directory, 'metrics.csv')
        events_path = os.path.join(directory, 'events.jsonl')
        if fresh:
            for path in (metrics_path, events_path):
                if os.path.exists(path):
                    os.remove(path)
        return cls(metrics=MetricsWriter(metrics_path), events=EventLog(events_path))

    def record(self, record: MetricsRecord) -> MetricsRecord:
        self.history.append(record)
        if self.metrics is not None:
            self.metrics.write(record)
        return record

    def event(self, **fields):
        if self.events is not None:
            self.events.write(**fields)
