"""Closed-form exponents of the large value bounds, conjectures and thresholds.

All exponents e are in the normalization |W| <~ N^e with T = N^alpha and
lambda = N^sigma. Values are rounded to 12 decimals so exact rational anchors
compare equal.
"""

from dataclasses import asdict, dataclass
from typing import Any

from .errors import InvalidParameter

PRECISION = 12
GM_ALPHA = 6 / 5
MMSTAR_THRESHOLD = 0.75


def _r(value: float) -> float:
    return round(value, PRECISION)


@dataclass(frozen=True)
class ExponentTable:
    alpha: float
    sigma: float
    basic: float
    gm: float | None
    dhpt: float
    montgomery: float
    montgomery_lq: float
    mmstar_threshold: float
    lowdeg_threshold: float

    def to_dict(self) -> dict[str, Any]:
        return asdict(self)


def montgomery_random_baseline(alpha: float, sigma: float) -> float:
    """Large value exponent 2 - 2 sigma of an i.i.d. random matrix.

    The same exponent is the conjectured bound for Dirichlet polynomials, so the
    table reports it once, as ``montgomery``. It does not depend on alpha.
    """
    del alpha
    return _r(2 - 2 * sigma)


def exponent_table(alpha: float, sigma: float) -> ExponentTable:
    """Every named exponent at (alpha, sigma).

    basic is the orthogonality bound alpha + 1 - 2 sigma, dhpt the Schatten
    tensor bound 3 - 4 sigma + alpha/2, montgomery the conjectured 2 - 2 sigma
    (which random matrices attain) and montgomery_lq its density form
    alpha (2 - 2 sigma). gm (18/5 - 4 sigma) is only defined at alpha = 6/5 and
    is None elsewhere.
    """
    if not 1 < alpha < 2:
        raise InvalidParameter(f"alpha must be in (1, 2), got {alpha}")
    if not 0.5 < sigma < 1:
        raise InvalidParameter(f"sigma must be in (1/2, 1), got {sigma}")
    gm = _r(18 / 5 - 4 * sigma) if abs(alpha - GM_ALPHA) <= 1e-12 else None
    return ExponentTable(
        alpha=alpha,
        sigma=sigma,
        basic=_r(alpha + 1 - 2 * sigma),
        gm=gm,
        dhpt=_r(3 - 4 * sigma + alpha / 2),
        montgomery=montgomery_random_baseline(alpha, sigma),
        montgomery_lq=_r(alpha * (2 - 2 * sigma)),
        mmstar_threshold=MMSTAR_THRESHOLD,
        lowdeg_threshold=_r(1 - alpha / 4),
    )
