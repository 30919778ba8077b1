"""Exception types shared across the package.

Everything raised on purpose derives from OzoneLabError so callers (and the
command line driver) can tell our failures apart from genuine bugs.
"""


class OzoneLabError(Exception):
    """Base class for all errors raised by this package."""


# -- scalars ---------------------------------------------------------------

class DivisionByZero(OzoneLabError, ZeroDivisionError):
    pass


class ZeroInput(OzoneLabError):
    pass


class ScalarSyntaxError(OzoneLabError):
    def __init__(self, message, pos=None):
        self.pos = pos
        if pos is not None:
            message = f"{message} (at position {pos})"
        super().__init__(message)


# -- series ----------------------------------------------------------------

class SeriesFormatError(OzoneLabError):
    pass


class PoleAtOne(OzoneLabError):
    pass


class NonIntegerRank(OzoneLabError):
    pass


class SeriesUnavailable(OzoneLabError):
    pass


# -- linear algebra --------------------------------------------------------

class DimensionMismatch(OzoneLabError):
    pass


# -- presentations and rewriting -------------------------------------------

class InhomogeneousRelation(OzoneLabError):
    pass


class InconsistentPresentation(OzoneLabError):
    pass


class BudgetExceeded(OzoneLabError):
    pass


class DegreeOutOfRange(OzoneLabError):
    pass


class CertificationFailure(OzoneLabError):
    pass


class NonGradedTwist(OzoneLabError):
    pass


# -- central elements and automorphisms ------------------------------------

class NotNormal(OzoneLabError):
    pass


class NotAutomorphism(OzoneLabError):
    pass


class UnverifiedAutomorphism(OzoneLabError):
    pass


class MolienMismatch(OzoneLabError):
    pass


class NonCommutingGenerators(OzoneLabError):
    pass


# -- ozone group computations ----------------------------------------------

class SearchSpaceTooLarge(OzoneLabError):
    pass


class ContradictsDivisibility(OzoneLabError):
    pass


class NotSkew(OzoneLabError):
    pass


class NotDegreeOneGenerated(OzoneLabError):
    pass


# -- smash products --------------------------------------------------------

class CrossCheckFailure(OzoneLabError):
    pass


class NonAbelianGroup(OzoneLabError):
    pass


# -- families --------------------------------------------------------------

class NotAntisymmetric(OzoneLabError):
    pass


class BadOrder(OzoneLabError):
    pass


class DegenerateParameters(OzoneLabError):
    pass


# -- input files -----------------------------------------------------------

class SpecFileError(OzoneLabError):
    pass
