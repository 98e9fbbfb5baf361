from custom_tools.exceptions import InputError, NumericalError


class NetworkSpecError(InputError):
    """Layer spec or batch shape does not fit the network."""


class CheckpointError(InputError):
    """Unreadable checkpoint: bad magic, unknown version, truncated blocks."""


class TrainingDivergedError(NumericalError):
    """
    A loss went non-finite. `epoch` is where it happened and `last_good`
    holds the parameters from the start of that epoch.
    """

    def __init__(self, epoch, stage, last_good=None):
        self.epoch = epoch
        self.stage = stage
        self.last_good = last_good
        super().__init__(f"non-finite loss in {stage} stage at epoch {epoch}")
