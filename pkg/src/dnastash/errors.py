"""Exception hierarchy for the codec.

Every error raised on purpose by this package derives from ``CodecError`` so
callers (and the CLI) can catch the whole family in one place.
"""


class CodecError(Exception):
    """Base class for all codec failures."""


# -- trit / DNA level -------------------------------------------------------

class TritOverflow(CodecError, OverflowError):
    """An integer does not fit in the requested number of trits."""


class InvalidBase(CodecError, ValueError):
    """A character outside the A/C/G/T alphabet."""

    def __init__(self, position, char):
        super().__init__(f"invalid base {char!r} at position {position}")
        self.position = position
        self.char = char


class HomopolymerViolation(CodecError, ValueError):
    """Two adjacent equal bases where the rotation code forbids them."""

    def __init__(self, position):
        super().__init__(f"adjacent equal bases at position {position}")
        self.position = position


class InvalidPrefix(CodecError, ValueError):
    """A full-length trit path that matches no codeword."""

    def __init__(self, position):
        super().__init__(f"no codeword matches trits at offset {position}")
        self.position = position


# -- encoder ----------------------------------------------------------------

class InputTooLarge(CodecError):
    """The input cannot be represented by the length footer or the index."""


class TooShort(CodecError, ValueError):
    """A DNA string too short to form a single oligo."""


# -- container --------------------------------------------------------------

class MalformedContainer(CodecError):
    """The ``.dnac`` byte stream does not follow the list grammar."""

    def __init__(self, offset, message):
        super().__init__(f"malformed container at byte {offset}: {message}")
        self.offset = offset


class BadOligo(CodecError):
    """A syntactically well-placed oligo with invalid content."""

    def __init__(self, ordinal, message):
        super().__init__(f"oligo #{ordinal}: {message}")
        self.ordinal = ordinal


# -- decoder ----------------------------------------------------------------

class ParityMismatch(CodecError):
    """An index region whose parity trit does not match."""

    def __init__(self, chunk_number, message="index parity mismatch"):
        super().__init__(f"{message} (claimed chunk {chunk_number})")
        self.chunk_number = chunk_number


class WrongFileId(CodecError):
    def __init__(self, expected, found, chunk_number):
        super().__init__(
            f"oligo for chunk {chunk_number} carries file id {found}, expected {expected}"
        )
        self.expected = expected
        self.found = found
        self.chunk_number = chunk_number


class CoverageGap(CodecError):
    """No surviving oligo covers a position of the DNA string."""

    def __init__(self, position):
        super().__init__(f"no oligo covers DNA position {position}")
        self.position = position


class VoteTie(CodecError):
    """Covering oligos disagree with no plurality winner."""

    def __init__(self, position):
        super().__init__(f"tied majority vote at DNA position {position}")
        self.position = position


class OutOfOrder(CodecError):
    """An oligo arrived after the region it covers was already emitted."""

    def __init__(self, chunk_number, frontier):
        super().__init__(
            f"oligo for chunk {chunk_number} arrived after block {frontier} was emitted"
        )
        self.chunk_number = chunk_number
        self.frontier = frontier


class BadFooter(CodecError):
    """The trailing length footer or its zero padding is inconsistent."""


class DanglingTrits(CodecError):
    """Trits left over after the last complete codeword."""

    def __init__(self, count):
        super().__init__(f"{count} trailing trits do not form a codeword")
        self.count = count


# -- estimator --------------------------------------------------------------

class EmptyPool(CodecError, ValueError):
    """Biochemical estimates need at least one oligo."""
