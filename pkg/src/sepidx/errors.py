"""Exception hierarchy shared by every sepidx module.

All validation and parse failures raise a subclass of :class:`SepidxError`,
so callers (and the CLI) can distinguish bad input (exit 2) from internal
faults (exit 1) with a single except clause.
"""


class SepidxError(Exception):
    """Base class for all expected sepidx failures."""


# --- feature-set validation ---

class TooFewPoints(SepidxError):
    pass


class DimensionMismatch(SepidxError):
    pass


class NonFiniteValue(SepidxError):
    def __init__(self, row, col):
        super().__init__(f"non-finite feature value at row {row}, column {col}")
        self.row = row
        self.col = col


class LengthMismatch(SepidxError):
    pass


# --- ranking ---

class DuplicateCandidateName(SepidxError):
    pass


class LabelSequenceMismatch(SepidxError):
    pass


class EmptyCandidateList(SepidxError):
    pass


# --- stability ---

class SubsampleTooSmall(SepidxError):
    pass


class FixtureModeUnsupported(SepidxError):
    pass


# --- reporting ---

class DegenerateInput(SepidxError):
    """Rank correlation undefined: one of the inputs is constant."""


class InsufficientOverlap(SepidxError):
    pass


# --- file formats ---

class FormatError(SepidxError):
    """Base class for on-disk container problems."""


class BadMagic(FormatError):
    pass


class UnsupportedVersion(FormatError):
    pass


class SizeMismatch(FormatError):
    pass


class RaggedRows(FormatError):
    pass


class NonNumericCell(FormatError):
    pass


class MissingLabelColumn(FormatError):
    pass


class ManifestError(FormatError):
    pass
