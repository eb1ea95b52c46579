class VerificationError(Exception):
    """Base class for every error raised by the verification toolkit."""


class AlgebraSpecError(VerificationError, ValueError):
    """Invalid algebra specification or configuration (CLI exit code 2)."""


class ClosureError(VerificationError):
    pass


class CartanError(VerificationError):
    pass


class CentralizerError(VerificationError):
    pass


class DegenerateBasisError(VerificationError):
    pass


class StructureError(VerificationError):
    pass


class NonReductiveError(VerificationError):
    pass


class CurvatureSymmetryError(VerificationError):
    pass


class DegeneratePlaneError(VerificationError, ValueError):
    pass


class JacobiSymmetryError(VerificationError):
    pass


class ScaleFitError(VerificationError):
    pass


class RiccatiIntegrationError(VerificationError):
    pass


class ProfileError(VerificationError, ValueError):
    pass


class CoercivityError(VerificationError):
    pass


class GrowthError(VerificationError, ValueError):
    pass
