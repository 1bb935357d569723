from .dcck import dcck_run, DcckRun
from .metrics import CSV_COLUMNS, EventLog, MetricsRecord, MetricsWriter, Recorder
from .schedule import DcckSchedule, OptimizerConfig, ScheduleOrder
from .trainer import conv_kernel_summary, evaluate, finetune, Trainer

__all__ = (
    'dcck_run', 'DcckRun',
    'CSV_COLUMNS', 'EventLog', 'MetricsRecord', 'MetricsWriter', 'Recorder',
    'DcckSchedule', 'OptimizerConfig', 'ScheduleOrder',
    'conv_kernel_summary', 'evaluate', 'finetune', 'Trainer',
)
