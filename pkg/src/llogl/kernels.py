"""Heat, Poisson and conjugate-Poisson kernels plus the reproducing partner.

Abelian kernels are exact closed forms.  Heisenberg kernels are radial
profiles in the gauge that satisfy the same two-sided envelopes the
downstream estimates consume, normalised to the correct mass by radial
quadrature.  Scale families: a Poisson-type kernel at scale t is the
normalised t-dilate of its t=1 profile; the heat kernel dilates by sqrt(t).
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable

import numpy as np

from .errors import ConstructionFailureError, InvalidInputError, UnsupportedModelError
from .fields import PointKernel, normalized_dilate
from .groups import ABELIAN, HEISENBERG1, GroupModel, hom_norm, unit_ball_volume


def log_t_grid(t_min: float = 2.0**-6, t_max: float = 2.0**6,
               per_octave: int = 8) -> tuple[np.ndarray, float]:
    """Geometric scale grid with midpoint-in-log placement.

    Returns (points, dlog) where points = t_min * 2^((j+1/2)/per_octave)
    and dlog = log(2)/per_octave, so sum(dlog) = log(t_max/t_min).
    """
    if not (0 < t_min < t_max):
        raise InvalidInputError("need 0 < t_min < t_max")
    n = int(round(per_octave * math.log2(t_max / t_min)))
    js = (np.arange(n) + 0.5) / per_octave
    return t_min * 2.0**js, math.log(2.0) / per_octave


def _radial_quadrature_mass(model: GroupModel, profile: Callable, n: int = 20001) -> float:
    """integral of a radial function: nu |B(o,1)| int profile(r) r^(nu-1) dr."""
    w = np.linspace(math.log(1e-8), math.log(1e8), n)
    r = np.exp(w)
    vals = profile(r) * r**model.nu  # extra r from d(log r)
    return model.nu * unit_ball_volume(model) * float(np.trapezoid(vals, w))


@dataclass
class KernelFamily:
    """A one-parameter kernel family zeta_t of normalised dilates.

    base is the t=1 kernel; at(t) dilates by t (or sqrt(t) for heat-type
    scaling).  mass is the nominal integral, common to every t.
    """

    model: GroupModel
    kind: str
    mass: float
    base: PointKernel
    time_scaling: str = "linear"
    meta: dict = field(default_factory=dict)

    def at(self, t: float) -> PointKernel:
        if t <= 0:
            raise InvalidInputError(f"kernel scale must be positive, got {t}")
        s = t if self.time_scaling == "linear" else math.sqrt(t)
        return normalized_dilate(self.base, s)

    def eval(self, pts: np.ndarray, t: float) -> np.ndarray:
        return self.at(t)(pts)


def _poisson_const(n: int) -> float:
    return math.gamma((n + 1) / 2.0) / math.pi ** ((n + 1) / 2.0)


def kernel_mass(family: KernelFamily, t: float = 1.0) -> float:
    """Total integral of a radial kernel, tails included.

    Layer-cake reduction to one dimension with adaptive quadrature; this
    is independent of the trapezoid rule used to normalise the Heisenberg
    profiles, so it doubles as an oracle for the mass invariants.
    """
    k = family.at(t)
    if k.radial is None:
        raise InvalidInputError("kernel_mass needs a radial kernel")
    from scipy.integrate import quad

    nu = family.model.nu
    vol = unit_ball_volume(family.model)
    rad = k.radial
    if k.support_radius is not None:
        val, _ = quad(lambda r: float(rad(r)) * r ** (nu - 1), 0.0,
                      k.support_radius, limit=200)
    else:
        def sub(s):
            r = s / (1.0 - s)
            return float(rad(r)) * r ** (nu - 1) / (1.0 - s) ** 2

        val, _ = quad(sub, 0.0, 1.0, limit=400, points=[0.5])
    return nu * vol * val


_HEIS_CONST: dict[str, float] = {}


def _heis_normalizer(key: str, profile: Callable) -> float:
    """Constant making a radial Heisenberg profile integrate to one."""
    if key not in _HEIS_CONST:
        _HEIS_CONST[key] = 1.0 / _radial_quadrature_mass(heisenberg_model(), profile)
    return _HEIS_CONST[key]


def heisenberg_model() -> GroupModel:
    from .groups import heisenberg1

    return heisenberg1()


def heat_family(model: GroupModel) -> KernelFamily:
    """Mass-one heat kernel; exact Gaussian on R^n, Gaussian-type gauge
    profile on the Heisenberg group."""
    if model.kind == ABELIAN:
        n = model.dim
        c = (4.0 * math.pi) ** (-n / 2.0)

        def fn(pts):
            return c * np.exp(-0.25 * np.sum(pts * pts, axis=-1))

        rad = lambda r: c * np.exp(-0.25 * np.asarray(r) ** 2)
        prim = None
        if n == 1:
            from scipy.special import erf

            prim = lambda x: 0.5 * erf(0.5 * np.asarray(x))
        base = PointKernel(model, fn, radial=rad, primitive=prim)
    else:
        c = _heis_normalizer("heat", lambda r: np.exp(-0.25 * r**2))
        rad = lambda r: c * np.exp(-0.25 * np.asarray(r) ** 2)
        fn = lambda pts: rad(hom_norm(model, pts))
        base = PointKernel(model, fn, radial=rad)
    return KernelFamily(model, "heat", 1.0, base, time_scaling="sqrt")


def poisson_family(model: GroupModel) -> KernelFamily:
    """Mass-one Poisson kernel; exact on R^n, normalised gauge profile on
    the Heisenberg group."""
    nu = model.nu
    if model.kind == ABELIAN:
        c = _poisson_const(model.dim)
    else:
        c = _heis_normalizer("poisson", lambda r: (1.0 + r**2) ** (-(nu + 1) / 2.0))
    rad = lambda r: c * (1.0 + np.asarray(r) ** 2) ** (-(nu + 1) / 2.0)
    fn = lambda pts: rad(hom_norm(model, pts))
    prim = None
    if model.kind == ABELIAN and model.dim == 1:
        prim = lambda x: np.arctan(np.asarray(x)) / math.pi
    return KernelFamily(model, "poisson", 1.0,
                        PointKernel(model, fn, radial=rad, primitive=prim))


def conj_poisson_family(model: GroupModel) -> KernelFamily:
    """t d/dt of the Poisson family at t=1; mass zero."""
    nu = model.nu
    if model.kind == ABELIAN:
        c = _poisson_const(model.dim)
    else:
        c = _heis_normalizer("poisson", lambda r: (1.0 + r**2) ** (-(nu + 1) / 2.0))
    # d/dt [t (t^2+r^2)^(-(nu+1)/2)] at t=1 equals (r^2 - nu) (1+r^2)^(-(nu+3)/2)
    rad = lambda r: c * (np.asarray(r) ** 2 - nu) * (1.0 + np.asarray(r) ** 2) ** (-(nu + 3) / 2.0)
    fn = lambda pts: rad(hom_norm(model, pts))
    prim = None
    if model.kind == ABELIAN and model.dim == 1:
        prim = lambda x: -np.asarray(x) / (math.pi * (1.0 + np.asarray(x) ** 2))
    return KernelFamily(model, "conj_poisson", 0.0,
                        PointKernel(model, fn, radial=rad, primitive=prim))


def heat_kernel(model: GroupModel, g: np.ndarray, t: float) -> np.ndarray:
    return heat_family(model).eval(np.atleast_2d(g), t)


def poisson_kernel(model: GroupModel, g: np.ndarray, t: float) -> np.ndarray:
    return poisson_family(model).eval(np.atleast_2d(g), t)


def conj_poisson_kernel(model: GroupModel, g: np.ndarray, t: float) -> np.ndarray:
    return conj_poisson_family(model).eval(np.atleast_2d(g), t)


def poisson_via_subordination(model: GroupModel, pts: np.ndarray, t: float,
                              n_quad: int = 160) -> np.ndarray:
    """Poisson kernel synthesised from heat kernels by scale quadrature.

    The quadrature grid is geometric in the heat time v with d(log v)
    weights; its range scales with t^2 + rho(g)^2 so that both the
    exponential cutoff at small v and the algebraic tail at large v are
    resolved at every evaluation point.
    """
    if t <= 0:
        raise InvalidInputError(f"kernel scale must be positive, got {t}")
    pts = np.atleast_2d(np.asarray(pts, dtype=float))
    rho = hom_norm(model, pts)
    s2 = t * t + rho * rho
    lo = np.log(s2 / 128.0)
    hi = np.log(4.0e6 * s2)
    w = (np.arange(n_quad) + 0.5) / n_quad
    logv = lo[:, None] + (hi - lo)[:, None] * w[None, :]
    dlog = (hi - lo) / n_quad
    v = np.exp(logv)
    if model.kind == ABELIAN:
        n = model.dim
        hv = (4.0 * math.pi * v) ** (-n / 2.0) * np.exp(-0.25 * rho[:, None] ** 2 / v)
    else:
        c = _heis_normalizer("heat", lambda r: np.exp(-0.25 * r**2))
        hv = c * v ** (-model.nu / 2.0) * np.exp(-0.25 * rho[:, None] ** 2 / v)
    integrand = t * np.exp(-0.25 * t * t / v) * v**-0.5 * hv
    return integrand.sum(axis=1) * dlog / (2.0 * math.sqrt(math.pi))


# ---------------------------------------------------------------------------
# reproducing partner

def _bump_profile():
    """Smooth bump b(u) = exp(-1/(1-u^2)) on (-1,1) and its second
    derivative, both vanishing to all orders at the endpoints."""

    def b(u):
        u = np.asarray(u, dtype=float)
        out = np.zeros_like(u)
        inside = np.abs(u) < 1.0
        ui = u[inside]
        out[inside] = np.exp(-1.0 / (1.0 - ui * ui))
        return out

    def b1(u):
        u = np.asarray(u, dtype=float)
        out = np.zeros_like(u)
        inside = np.abs(u) < 1.0
        ui = u[inside]
        q = 1.0 - ui * ui
        out[inside] = np.exp(-1.0 / q) * (-2.0 * ui / q**2)
        return out

    def b2(u):
        u = np.asarray(u, dtype=float)
        out = np.zeros_like(u)
        inside = np.abs(u) < 1.0
        ui = u[inside]
        q = 1.0 - ui * ui
        g1 = -2.0 * ui / q**2
        g2 = -2.0 / q**2 - 8.0 * ui * ui / q**3
        out[inside] = np.exp(-1.0 / q) * (g1 * g1 + g2)
        return out

    return b, b1, b2


def _conj_poisson_symbol(u: np.ndarray) -> np.ndarray:
    """Fourier symbol of the mass-zero scale derivative of the Poisson
    family on R at frequency u = t|xi|."""
    return -u * np.exp(-u)


def _partner_profile_fourier(support: float, u: np.ndarray) -> np.ndarray:
    """Cosine transform of the raw (unnormalised) partner profile."""
    _, _, b2 = _bump_profile()
    x = np.linspace(-support, support, 8193)
    vals = b2(x / support) / support**2
    u = np.asarray(u, dtype=float)
    cospart = np.cos(u[:, None] * x[None, :])
    return np.trapezoid(cospart * vals[None, :], x, axis=1)


def reproducing_partner(model: GroupModel, t_min: float = 2.0**-6,
                        t_max: float = 2.0**6, per_octave: int = 8,
                        support: float = 0.9,
                        residual_threshold: float = 0.02) -> KernelFamily:
    """Compactly supported mass-zero partner for the conjugate-Poisson
    family, normalised so the discrete scale integral reproduces the
    identity on the covered band.

    On R the normaliser comes from the exact Fourier symbols and the
    construction measures its own flatness over the band; if the measured
    deviation exceeds residual_threshold a ConstructionFailureError carries
    it out.  Other models reuse the same radial profile with the mass
    re-zeroed by bump subtraction (and no flatness certificate).
    """
    if not (0 < support <= 1.0):
        raise InvalidInputError("partner support must lie in (0, 1]")
    ts, dlog = log_t_grid(t_min, t_max, per_octave)
    b, b1, b2 = _bump_profile()

    if model.kind == ABELIAN and model.dim == 1:
        # normalise against the scale sum at a reference interior frequency
        u = ts.copy()  # xi = 1
        symbol = _conj_poisson_symbol(u)
        phihat = _partner_profile_fourier(support, u)
        m_ref = float(np.sum(symbol * phihat) * dlog)
        if abs(m_ref) < 1e-12:
            raise ConstructionFailureError("degenerate partner normaliser", abs(m_ref))
        c = 1.0 / m_ref
        # flatness of the reproduced multiplier across the covered band
        xis = np.geomspace(0.25, 16.0, 41)
        ms = np.array([
            float(np.sum(_conj_poisson_symbol(ts * xi)
                         * _partner_profile_fourier(support, ts * xi)) * dlog)
            for xi in xis
        ]) * c
        flatness = float(np.max(np.abs(ms - 1.0)))
        if flatness > residual_threshold:
            raise ConstructionFailureError(
                "partner misses the reproducing tolerance", flatness)

        def fn(pts):
            x = np.asarray(pts, dtype=float)[..., 0]
            return c * b2(x / support) / support**2

        def rad(r):
            return c * b2(np.asarray(r, dtype=float) / support) / support**2

        def prim(x):
            return c * b1(np.asarray(x, dtype=float) / support) / support

        fam = KernelFamily(model, "partner", 0.0,
                           PointKernel(model, fn, radial=rad, support_radius=support,
                                       primitive=prim))
        fam.meta["flatness"] = flatness
        fam.meta["normalizer"] = c
        fam.meta["t_grid"] = (t_min, t_max, per_octave)
        return fam

    # generic models: same radial profile, mass removed by bump subtraction
    ref = reproducing_partner(_abelian1(), t_min, t_max, per_octave, support,
                              residual_threshold)
    c = ref.meta["normalizer"]
    w = np.linspace(0.0, support, 4001)
    prof_main = c * b2(w / support) / support**2
    prof_bump = b(w / support)
    mom_main = np.trapezoid(prof_main * w ** (model.nu - 1), w)
    mom_bump = np.trapezoid(prof_bump * w ** (model.nu - 1), w)
    lam = mom_main / mom_bump

    def rad(r):
        r = np.asarray(r, dtype=float)
        return c * b2(r / support) / support**2 - lam * b(r / support)

    def fng(pts):
        return rad(hom_norm(model, pts))

    fam = KernelFamily(model, "partner", 0.0,
                       PointKernel(model, fng, radial=rad, support_radius=support))
    fam.meta["normalizer"] = c
    fam.meta["t_grid"] = (t_min, t_max, per_octave)
    return fam


def _abelian1() -> GroupModel:
    from .groups import abelian

    return abelian(1)


# ---------------------------------------------------------------------------
# Poisson gradient tensor

def poisson_gradient_components(model: GroupModel) -> list[KernelFamily]:
    """Component kernels of the full Poisson gradient at t=1.

    Horizontal derivatives first, then the scale derivative (which equals
    the conjugate-Poisson kernel).  All components have mass zero and each
    scale family is the family of normalised dilates of its t=1 kernel.
    """
    comps: list[KernelFamily] = []
    nu = model.nu
    if model.kind == ABELIAN:
        n = model.dim
        c = _poisson_const(n)
        for j in range(n):
            def fn(pts, j=j):
                pts = np.asarray(pts, dtype=float)
                r2 = np.sum(pts * pts, axis=-1)
                return -c * (n + 1) * pts[..., j] * (1.0 + r2) ** (-(n + 3) / 2.0)

            prim = None
            if n == 1:
                prim = lambda x: c * (1.0 + np.asarray(x) ** 2) ** (-(n + 1) / 2.0)
            comps.append(KernelFamily(model, f"poisson_dx{j}", 0.0,
                                      PointKernel(model, fn, primitive=prim)))
    elif model.kind == HEISENBERG1:
        c = _heis_normalizer("poisson", lambda r: (1.0 + r**2) ** (-(nu + 1) / 2.0))

        def _horiz(pts, which):
            pts = np.asarray(pts, dtype=float)
            x, y, z = pts[..., 0], pts[..., 1], pts[..., 2]
            rho = hom_norm(model, pts)
            dP = -(nu + 1) * c * rho * (1.0 + rho**2) ** (-(nu + 3) / 2.0)
            with np.errstate(divide="ignore", invalid="ignore"):
                if which == 0:
                    grad_rho = (x * (x * x + y * y) - 4.0 * y * z) / rho**3
                else:
                    grad_rho = (y * (x * x + y * y) + 4.0 * x * z) / rho**3
            out = dP * grad_rho
            return np.where(rho > 0, out, 0.0)

        for j in (0, 1):
            comps.append(KernelFamily(
                model, f"poisson_dx{j}", 0.0,
                PointKernel(model, lambda pts, j=j: _horiz(pts, j))))
    else:
        raise UnsupportedModelError(model.kind)
    comps.append(conj_poisson_family(model))
    return comps


def poisson_gradient_magnitude(model: GroupModel, pts: np.ndarray, t: float) -> np.ndarray:
    """|full gradient of p_t| (horizontal components plus scale derivative).

    The normalised t-dilate of a t=1 derivative is t times the true
    derivative at scale t, hence the division.
    """
    comps = poisson_gradient_components(model)
    sq = np.zeros(np.atleast_2d(pts).shape[0])
    for fam in comps:
        v = fam.eval(np.atleast_2d(pts), t) / t
        sq += v * v
    return np.sqrt(sq)


def heat_gradient_magnitude(model: GroupModel, pts: np.ndarray, t: float) -> np.ndarray:
    """|full gradient of h_t|, used for the envelope reports."""
    pts = np.atleast_2d(np.asarray(pts, dtype=float))
    rho = hom_norm(model, pts)
    if model.kind == ABELIAN:
        n = model.dim
        c = (4.0 * math.pi * t) ** (-n / 2.0)
        h = c * np.exp(-0.25 * rho**2 / t)
        grad_sp = h * 0.5 * rho / t
        dt = h * (-0.5 * n / t + 0.25 * rho**2 / t**2)
        return np.sqrt(grad_sp**2 + dt**2)
    cst = _heis_normalizer("heat", lambda r: np.exp(-0.25 * r**2))
    h = cst * t ** (-model.nu / 2.0) * np.exp(-0.25 * rho**2 / t)
    x, y = pts[..., 0], pts[..., 1]
    with np.errstate(divide="ignore", invalid="ignore"):
        horiz_rho = np.where(rho > 0, np.sqrt(x * x + y * y) / rho, 0.0)
    grad_sp = h * 0.5 * rho / t * horiz_rho
    dt = h * (-0.5 * model.nu / t + 0.25 * rho**2 / t**2)
    return np.sqrt(grad_sp**2 + dt**2)


# ---------------------------------------------------------------------------
# products

@dataclass
class ProductKernel:
    """Tensor product of one kernel family per factor."""

    left: KernelFamily
    right: KernelFamily

    @property
    def mass(self) -> float:
        return self.left.mass * self.right.mass

    def at(self, t1: float, t2: float) -> tuple[PointKernel, PointKernel]:
        return self.left.at(t1), self.right.at(t2)


def grad_poisson_tensor(model1: GroupModel, model2: GroupModel,
                        g1: np.ndarray, g2: np.ndarray,
                        t1: float, t2: float) -> np.ndarray:
    """All tensor components of the product Poisson gradient at (g, t).

    Entry (a, b) is component a of factor 1 times component b of factor 2,
    with the scale-derivative component last on each axis.
    """
    if t1 <= 0 or t2 <= 0:
        raise InvalidInputError("tensor scales must be positive")
    c1 = poisson_gradient_components(model1)
    c2 = poisson_gradient_components(model2)
    v1 = np.array([fam.eval(np.atleast_2d(g1), t1)[0] / t1 for fam in c1])
    v2 = np.array([fam.eval(np.atleast_2d(g2), t2)[0] / t2 for fam in c2])
    return np.outer(v1, v2)
