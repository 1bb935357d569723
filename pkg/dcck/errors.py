class DcckException(Exception):

    """
    Serves as a base exception for all exceptions in this library.
    """


class DimensionError(DcckException, ValueError):

    """
    Raised when tensor extents do not fit the requested operation.
    """


class LayerConfigError(DcckException, ValueError):

    """
    A layer was constructed with hyper-parameters it cannot honour.
    """


class ModelValidationError(DcckException):

    """
    Raised when a network no longer chains shapes correctly.

    The failing :class:`~dcck.models.validation.ValidationReport` is kept on
    ``report``.
    """

    def __init__(self, report):
        super().__init__(report.message)
        self.report = report


class ClusteringError(DcckException, ValueError):

    """
    Invalid k-means request, or a clustering that broke its own invariants.
    """


class SurgeryError(DcckException):

    """
    A split or merge was requested on a layer that cannot take it.
    """


class TrainingError(DcckException):

    """
    Raised by the training loops, usually wrapping a lower level error.
    """


class DatasetError(DcckException, ValueError):

    """
    Invalid dataset contents or an invalid request against a dataset.
    """


class IdxFormatError(DatasetError):

    """
    The file is not a well formed IDX file of the expected kind.
    """


class CheckpointError(DcckException):

    """
    Base class for checkpoint integrity failures.
    """


class ChecksumError(CheckpointError):

    """
    The stored checksum does not match the file contents.
    """


class CheckpointVersionError(CheckpointError):

    """
    The checkpoint was written by an unsupported format version.
    """


class ManifestError(CheckpointError):

    """
    The manifest does not describe the payload, or has unknown fields.
    """


class ConfigError(DcckException):

    """
    A run configuration could not be parsed or is inconsistent.
    """

    def __init__(self, message, *, key=None, line=None):
        where = []
        if key is not None:
            where.append('key {0!r}'.format(key))
        if line is not None:
            where.append('line {0}'.format(line))
        if where:
            message = '{0} ({1})'.format(message, ', '.join(where))
        super().__init__(message)
        self.key = key
        self.line = line


class DcckWarning(UserWarning):

    """
    Base class for the warnings issued by this library.
    """


class DenseConsumerMergeWarning(DcckWarning):

    """
    Merging the kernels of a convolution that feeds a fully-connected layer.

    This tends to cost accuracy; it is allowed but flagged.
    """
