"""The Young pair (s log(e+s), e^t - 1), its functional, and Luxemburg norms.

Works on anything with .values and .cell_measure (single-factor or product
sampled functions) as well as on raw (values, cell_measure) pairs.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import DivergentInputError, InvalidInputError

EXP_GUARD = 700.0  # exp overflow guard


def phi(s):
    """Young function s * log(e + s)."""
    s = np.asarray(s, dtype=float)
    return s * np.log(math.e + s)


def psi(t):
    """Conjugate-side Young function exp(t) - 1, with an overflow guard."""
    t = np.asarray(t, dtype=float)
    if np.any(t > EXP_GUARD):
        raise DivergentInputError(f"psi argument exceeds exp guard {EXP_GUARD}")
    return np.expm1(t)


def _values_measure(f) -> tuple[np.ndarray, float]:
    if hasattr(f, "values"):
        return np.asarray(f.values, dtype=float), float(f.cell_measure)
    if isinstance(f, tuple) and len(f) == 2:
        return np.asarray(f[0], dtype=float), float(f[1])
    raise InvalidInputError("expected a sampled function or (values, cell_measure)")


def f_phi(f, scale: float = 1.0) -> float:
    """Quadrature of |f/scale| log(e + |f/scale|)."""
    vals, cellm = _values_measure(f)
    a = np.abs(vals) / scale
    return float(np.sum(a * np.log(math.e + a)) * cellm)


def f_psi(f, scale: float = 1.0) -> float:
    vals, cellm = _values_measure(f)
    return float(np.sum(psi(np.abs(vals) / scale)) * cellm)


def _young_integral(young, vals: np.ndarray, cellm: float, lam: float) -> float:
    """F(f/lam), returning +inf instead of overflowing for the exp side."""
    a = np.abs(vals) / lam
    if young is psi and float(a.max(initial=0.0)) > EXP_GUARD:
        return math.inf
    return float(np.sum(young(a)) * cellm)


def luxemburg_norm(f, young=phi, tol: float = 1e-8) -> float:
    """inf{lam : F(f/lam) <= 1} by bisection on the decreasing map
    lam -> F(f/lam).  Returns 0 for the zero function."""
    vals, cellm = _values_measure(f)
    if not np.all(np.isfinite(vals)):
        raise DivergentInputError("non-finite input in Luxemburg norm")
    if not np.any(vals):
        return 0.0
    F1 = _young_integral(young, vals, cellm, 1.0)
    lo = F1 / (1.0 + F1) if math.isfinite(F1) else 1.0
    hi = max(1.0, F1) * math.e if math.isfinite(F1) else 1.0
    # expand geometrically until the bracket straddles F = 1
    for _ in range(200):
        if _young_integral(young, vals, cellm, lo) > 1.0:
            break
        lo /= 2.0
    for _ in range(200):
        if _young_integral(young, vals, cellm, hi) <= 1.0:
            break
        hi *= 2.0
    else:
        raise DivergentInputError("Luxemburg bracket expansion failed")
    while hi - lo > tol * hi:
        mid = 0.5 * (lo + hi)
        if _young_integral(young, vals, cellm, mid) <= 1.0:
            hi = mid
        else:
            lo = mid
    return hi


@dataclass
class HolderPairing:
    lhs: float        # integral of |f h|
    rhs_sum: float    # integral of Phi(|f|) + integral of Psi(|h|)
    rhs_prod: float   # 2 ||f||_Phi ||h||_Psi


def holder_pairing(f, h) -> HolderPairing:
    """Both sides of the conjugate-pair inequalities for (f, h).

    Raises DivergentInputError if the exp-side integral overflows.
    """
    fv, cellm = _values_measure(f)
    hv, cellm2 = _values_measure(h)
    if fv.shape != hv.shape or not math.isclose(cellm, cellm2):
        raise InvalidInputError("paired functions must share a grid")
    lhs = float(np.sum(np.abs(fv * hv)) * cellm)
    rhs_sum = f_phi(f) + f_psi(h)
    rhs_prod = 2.0 * luxemburg_norm(f, phi) * luxemburg_norm(h, psi)
    return HolderPairing(lhs, rhs_sum, rhs_prod)


def truncate_to_l2(f, n_cut: float):
    """f restricted to {|f| <= N}: the square-integrable approximants."""
    import dataclasses

    if n_cut <= 0:
        raise InvalidInputError("truncation level must be positive")
    vals, _ = _values_measure(f)
    newvals = np.where(np.abs(vals) <= n_cut, vals, 0.0)
    return dataclasses.replace(f, values=newvals)
