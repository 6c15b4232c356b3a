"""Exception hierarchy.

Everything raised for bad input data derives from :class:`DataError`, which
the command line maps to exit status 1.
"""


class DataError(Exception):
    """Base class for errors caused by input data or data files."""


class UnknownLabel(DataError, KeyError):
    def __init__(self, label):
        super().__init__(label)
        self.label = label

    def __str__(self):
        return f"unknown CLS label {self.label!r}"


class InvalidUtf8(DataError):
    pass


class EmptyWord(DataError):
    pass


class UnknownCodepoint(DataError):
    """A character that the script table cannot place.

    ``offset`` is the character index inside the word. Text-level parsing adds
    ``word_index`` and ``byte_offset`` (UTF-8 offset into the whole text).
    """

    def __init__(self, char, offset, script=None, reason=None):
        self.char = char
        self.offset = offset
        self.script = script
        self.reason = reason
        self.word_index = None
        self.byte_offset = None
        super().__init__(char, offset)

    def __str__(self):
        if self.reason:
            what = self.reason
        elif self.script:
            what = f"not a {self.script} character"
        else:
            what = "unknown character"
        msg = f"U+{ord(self.char):04X} {self.char!r} at offset {self.offset}: {what}"
        if self.word_index is not None:
            msg += f" (word {self.word_index}, byte {self.byte_offset})"
        return msg


class MisplacedSign(UnknownCodepoint):
    """A known combining sign in a position where it cannot attach."""


class UnknownRulePack(DataError):
    pass


class MalformedProfile(DataError):
    def __init__(self, message, field=None):
        self.field = field
        super().__init__(f"{field}: {message}" if field else message)


class MalformedData(DataError):
    pass


class EmptyTargetInventory(DataError):
    pass


class NoCandidates(DataError):
    pass


class NotWav(DataError):
    pass


class UnsupportedEncoding(DataError):
    pass


class TruncatedFile(DataError):
    pass


class TooShort(DataError):
    pass


class DimensionMismatch(DataError):
    pass


class SampleRateMismatch(DataError):
    pass
