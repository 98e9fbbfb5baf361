from custom_tools.exceptions import InputError


class DatasetError(InputError):
    """Base class for loader and split failures."""


class DatasetFormatError(DatasetError):
    """A file could not be parsed. Carries the file and byte/row offset."""

    def __init__(self, path, offset, reason):
        self.path = str(path)
        self.offset = offset
        self.reason = reason
        super().__init__(f"{self.path} (offset {offset}): {reason}")


class IdxFormatError(DatasetFormatError):
    pass


class CsvFormatError(DatasetFormatError):
    pass


class CacheFormatError(DatasetFormatError):
    pass


class SplitError(DatasetError):
    pass
