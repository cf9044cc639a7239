"""Exception taxonomy shared by all modules.

Exit-code mapping for the CLI lives in cli.py; the classes here only
classify failures (user input vs. precision vs. unsupported request).
"""


class TrcyclesError(Exception):
    """Base class for all package errors."""

    code = "error"


class PrecisionError(TrcyclesError):
    """A coefficient outside a series' valid window was requested."""

    code = "precision"


class AdmissibilityError(TrcyclesError):
    """Curve data violates the admissibility conventions."""

    code = "admissibility"


class NonGenericRamificationError(AdmissibilityError):
    code = "non-generic-ramification"


class InadmissibleTimesError(AdmissibilityError):
    code = "inadmissible-times"


class NotARamificationPointError(AdmissibilityError):
    code = "not-a-ramification-point"


class DegenerateCurveError(AdmissibilityError):
    code = "degenerate-curve"


class BadDeclarationError(AdmissibilityError):
    code = "bad-declaration"


class FieldExtensionError(TrcyclesError):
    """An operation needs a root of unity the coefficient field lacks."""

    code = "field-extension-required"


class ResidueObstructionError(TrcyclesError):
    """No single-valued primitive exists (nonzero residue)."""

    code = "nonzero-residue"


class NotInRangeError(TrcyclesError):
    """A form is not in the image of the polar cycle span."""

    code = "not-in-range"


class PairingError(TrcyclesError):
    """An ill-defined pairing was requested."""

    code = "ill-defined-pairing"


class UnsupportedError(TrcyclesError):
    """The request is outside the supported scope."""

    code = "unsupported"
