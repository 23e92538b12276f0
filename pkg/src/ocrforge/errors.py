"""Exception types shared across the toolkit."""


class ForgeError(Exception):
    """Base class for all toolkit errors."""


class EmptyInput(ForgeError):
    """Raw text normalizes to nothing."""


class MissingFile(ForgeError):
    """A referenced file does not exist."""


class UnsupportedFormat(ForgeError):
    """A file exists but is not a usable raster image."""


class RenderFailure(ForgeError):
    """Stand-in image rendering failed."""


class EmptyReference(ForgeError):
    """The reference (gold) text is empty; metrics are undefined."""


class NegativeDuration(ForgeError):
    """A phase ends before it starts."""


class ZeroLength(ForgeError):
    """gs_len must be at least 1."""


class EmptyGroup(ForgeError):
    """Aggregation over zero reports."""


class EmptySegmentList(ForgeError):
    """Task building needs at least one segment."""


class ImageUnavailable(ForgeError):
    """An image condition was requested but a segment has no image."""


class NoTasksAvailable(ForgeError):
    """The task pool is exhausted for this worker."""


class TaskAlreadyHeld(ForgeError):
    """Worker already holds an unsubmitted task."""


class UnknownTask(ForgeError):
    """Submission references a task id that does not exist."""


class WrongWorker(ForgeError):
    """Submission comes from a worker the task is not assigned to."""


class DuplicateSubmission(ForgeError):
    """A different payload was re-submitted against an already-submitted task."""


class PayloadMismatch(ForgeError):
    """Submission payload variant does not match the task structure."""


class ProfileInvalid(ForgeError):
    """A worker profile violates its parameter bounds."""


class ConfigError(ForgeError):
    """A pipeline config file is malformed."""
