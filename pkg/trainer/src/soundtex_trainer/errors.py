class TrainerError(Exception):
    """Base class for trainer failures."""


class LabelsError(TrainerError):
    """The labels file is malformed or references missing images."""


class ConfigError(TrainerError):
    """Invalid training configuration (bad arch, checkpoint mismatch, ...)."""
