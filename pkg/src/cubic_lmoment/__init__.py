"""Cubic characters over Q(w): Gauss sums, central L-values and mollified moments."""

__version__ = "0.1.0"

from .eisenstein import EisensteinInt, as_primary, cubic_symbol, gcd, norm, primary_associate  # noqa: E402
from .family import FamilyElement, enumerate_family, family_count  # noqa: E402
from .gauss import gauss_direct, gauss_fast, root_number  # noqa: E402
from .lfunction import central_value, grh_log_bound  # noqa: E402
from .mollifier import MollifierConfig, mollifier_M  # noqa: E402
from .moments import first_mollified_moment, reproduce_paper_constants  # noqa: E402

__all__ = [
    "EisensteinInt", "as_primary", "cubic_symbol", "gcd", "norm", "primary_associate",
    "FamilyElement", "enumerate_family", "family_count",
    "gauss_direct", "gauss_fast", "root_number",
    "central_value", "grh_log_bound",
    "MollifierConfig", "mollifier_M",
    "first_mollified_moment", "reproduce_paper_constants",
]
