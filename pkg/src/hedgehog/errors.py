"""Exception types shared across the package.

Every class carries a short machine-readable ``kind`` used by the CLI.
"""

from .exactnum import FactorBoundExceeded


class HedgehogError(Exception):
    kind = "error"


class ZeroElement(HedgehogError, ValueError):
    kind = "zero_element"


class UnsupportedField(HedgehogError):
    kind = "unsupported_field"


class FieldMismatch(HedgehogError, ValueError):
    kind = "field_mismatch"


class NotInField(HedgehogError, ValueError):
    kind = "not_in_field"


class SingularForm(HedgehogError, ValueError):
    kind = "singular_form"


class NotIsotropic(HedgehogError):
    kind = "not_isotropic"


class NotIsotropicVector(HedgehogError, ValueError):
    kind = "not_isotropic_vector"


class SearchExhausted(HedgehogError):
    kind = "search_exhausted"

    def __init__(self, bound, msg=None):
        super().__init__(msg or f"no isotropic vector found within height {bound}")
        self.bound = bound


class NonSquarefreeExtension(HedgehogError, ValueError):
    kind = "non_squarefree_extension"


class OddDimension(HedgehogError, ValueError):
    kind = "odd_dimension"


class OddCaseOnly(HedgehogError, ValueError):
    kind = "odd_case_only"


class DegreeTooHigh(HedgehogError, ValueError):
    kind = "degree_too_high"


class InvalidCertificate(HedgehogError, ValueError):
    kind = "invalid_certificate"


class NoOrthogonalVector(HedgehogError, ValueError):
    kind = "no_orthogonal_vector"


class DegenerateChoice(HedgehogError):
    kind = "degenerate_choice"


class SplitExtension(HedgehogError):
    """``alpha`` turned out to be a square: the point is already rational."""

    kind = "split_extension"

    def __init__(self, vector):
        super().__init__("quadratic point construction produced a rational zero")
        self.vector = vector


__all__ = [
    "HedgehogError",
    "FactorBoundExceeded",
    "ZeroElement",
    "UnsupportedField",
    "FieldMismatch",
    "NotInField",
    "SingularForm",
    "NotIsotropic",
    "NotIsotropicVector",
    "SearchExhausted",
    "NonSquarefreeExtension",
    "OddDimension",
    "OddCaseOnly",
    "DegreeTooHigh",
    "InvalidCertificate",
    "NoOrthogonalVector",
    "DegenerateChoice",
    "SplitExtension",
]
