"""Stratified group models: group law, dilations, homogeneous norm, balls.

Two instances are provided: the abelian group R^n and the first Heisenberg
group in exponential coordinates (x, y, z).  Haar measure coincides with
Lebesgue measure in these coordinates, so every grid cell carries measure
equal to the product of its spacings.

All operations are pure and vectorised: a "point" is an array whose last
axis has length ``model.dim``, and every function broadcasts over leading
axes.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .errors import InvalidInputError

ABELIAN = "abelian"
HEISENBERG1 = "heisenberg1"


@dataclass(frozen=True)
class GroupModel:
    """A stratified group instance.

    Attributes
    ----------
    kind : str
        ``"abelian"`` or ``"heisenberg1"``.
    dim : int
        Topological dimension (length of a coordinate vector).
    nu : int
        Homogeneous dimension: n for R^n, 4 for the Heisenberg group.
    epsilon : float
        Molecule smoothness parameter in (0, 1], fixed once per model.
    """

    kind: str
    dim: int
    nu: int
    epsilon: float = 1.0
    # per-coordinate dilation weights, e.g. (1, 1, 2) on heisenberg1
    weights: tuple = field(default=(), compare=False)

    def __post_init__(self):
        if not (0.0 < self.epsilon <= 1.0):
            raise InvalidInputError(f"epsilon must lie in (0,1], got {self.epsilon}")

    @property
    def name(self) -> str:
        if self.kind == ABELIAN:
            return f"abelian{self.dim}"
        return self.kind

    def identity(self) -> np.ndarray:
        return np.zeros(self.dim)


def abelian(n: int) -> GroupModel:
    """The abelian group R^n with isotropic dilations."""
    if n < 1:
        raise InvalidInputError(f"abelian dimension must be >= 1, got {n}")
    return GroupModel(ABELIAN, n, n, weights=(1,) * n)


def heisenberg1() -> GroupModel:
    """The first Heisenberg group, coordinates (x, y, z), nu = 4."""
    return GroupModel(HEISENBERG1, 3, 4, weights=(1, 1, 2))


def model_from_name(name: str) -> GroupModel:
    if name == HEISENBERG1:
        return heisenberg1()
    if name.startswith(ABELIAN):
        return abelian(int(name[len(ABELIAN):]))
    raise InvalidInputError(f"unknown group model {name!r}")


def _check_points(model: GroupModel, *points: np.ndarray) -> list[np.ndarray]:
    out = []
    for p in points:
        p = np.asarray(p, dtype=float)
        if p.shape[-1:] != (model.dim,):
            raise InvalidInputError(
                f"point has last axis {p.shape[-1:]}, model {model.name} needs {model.dim}"
            )
        out.append(p)
    return out


def multiply(model: GroupModel, g: np.ndarray, h: np.ndarray) -> np.ndarray:
    """Group product g*h in exponential coordinates."""
    g, h = _check_points(model, g, h)
    if model.kind == ABELIAN:
        return g + h
    out = g + h
    twist = 0.5 * (g[..., 0] * h[..., 1] - g[..., 1] * h[..., 0])
    out = np.array(out, copy=True)
    out[..., 2] += twist
    return out


def invert(model: GroupModel, g: np.ndarray) -> np.ndarray:
    """Group inverse; negation on both supported models (step <= 2)."""
    (g,) = _check_points(model, g)
    return -g


def dilate(model: GroupModel, t: float, g: np.ndarray) -> np.ndarray:
    """Automorphic dilation: coordinate j scales by t**weights[j]."""
    if t <= 0:
        raise InvalidInputError(f"dilation parameter must be positive, got {t}")
    (g,) = _check_points(model, g)
    w = np.array(model.weights, dtype=float)
    return g * (float(t) ** w)


def hom_norm(model: GroupModel, g: np.ndarray) -> np.ndarray:
    """Homogeneous norm: Euclidean on R^n, Koranyi-Cygan gauge on heisenberg1.

    The gauge ((x^2+y^2)^2 + 16 z^2)^(1/4) is an exact metric for the group
    law used here, not merely a quasi-norm.
    """
    (g,) = _check_points(model, g)
    if model.kind == ABELIAN:
        return np.linalg.norm(g, axis=-1)
    xy2 = g[..., 0] ** 2 + g[..., 1] ** 2
    return (xy2**2 + 16.0 * g[..., 2] ** 2) ** 0.25


def distance(model: GroupModel, g: np.ndarray, h: np.ndarray) -> np.ndarray:
    """Left-invariant distance rho(g^{-1} h)."""
    return hom_norm(model, multiply(model, invert(model, g), h))


_UNIT_BALL_CACHE: dict[tuple, float] = {}


def unit_ball_volume(model: GroupModel, quad_cells: int = 400) -> float:
    """Haar measure of the unit ball B(o, 1).

    Closed form for the abelian models (the spec's own examples assert the
    exact values); midpoint quadrature over the bounding box for the
    Heisenberg gauge ball.
    """
    key = (model.kind, model.dim, quad_cells)
    if key in _UNIT_BALL_CACHE:
        return _UNIT_BALL_CACHE[key]
    if model.kind == ABELIAN:
        n = model.dim
        vol = math.pi ** (n / 2.0) / math.gamma(n / 2.0 + 1.0)
    else:
        # gauge ball: |x|,|y| <= 1 and |z| <= 1/4
        nxy, nz = quad_cells, quad_cells
        x = (np.arange(nxy) + 0.5) / nxy * 2.0 - 1.0
        z = (np.arange(nz) + 0.5) / nz * 0.5 - 0.25
        hx = 2.0 / nxy
        hz = 0.5 / nz
        X, Y = np.meshgrid(x, x, indexing="ij")
        xy2 = X**2 + Y**2
        # count cells with (xy2)^2 + 16 z^2 < 1, vectorised over z slabs
        inside = (xy2[..., None] ** 2 + 16.0 * z[None, None, :] ** 2) < 1.0
        vol = inside.sum() * hx * hx * hz
    _UNIT_BALL_CACHE[key] = float(vol)
    return float(vol)


def ball_volume(model: GroupModel, r: float) -> float:
    """|B(g, r)| = r**nu * |B(o, 1)| (center-independent)."""
    if r <= 0:
        raise InvalidInputError(f"ball radius must be positive, got {r}")
    return unit_ball_volume(model) * float(r) ** model.nu


def ball_volume_mc(model: GroupModel, r: float, n_samples: int = 200_000,
                   seed: int = 0) -> float:
    """Monte-Carlo oracle for |B(o, r)|; independent of the quadrature path."""
    if r <= 0:
        raise InvalidInputError(f"ball radius must be positive, got {r}")
    rng = np.random.default_rng(seed)
    if model.kind == ABELIAN:
        lo, hi = -r, r
        pts = rng.uniform(lo, hi, size=(n_samples, model.dim))
        box = (hi - lo) ** model.dim
    else:
        pts = np.column_stack([
            rng.uniform(-r, r, n_samples),
            rng.uniform(-r, r, n_samples),
            rng.uniform(-r**2 / 4.0, r**2 / 4.0, n_samples),
        ])
        box = (2.0 * r) ** 2 * (r**2 / 2.0)
    frac = np.mean(hom_norm(model, pts) < r)
    return float(frac * box)


def estimate_doubling_constant(model: GroupModel, points: np.ndarray,
                               n_trials: int = 32, seed: int = 0) -> int:
    """Empirical geometric doubling constant on a finite sample set.

    For random (x, r) pairs, greedily covers the samples in B(x, 2r) with
    balls of radius r centred at samples and records the worst count.
    """
    (points,) = _check_points(model, points)
    rng = np.random.default_rng(seed)
    n = len(points)
    worst = 1
    for _ in range(n_trials):
        x = points[rng.integers(n)]
        d = distance(model, x, points)
        pos = d[d > 0]
        if pos.size == 0:
            continue
        r = float(rng.uniform(0.25, 1.0)) * float(pos.max()) / 2.0
        idx = np.flatnonzero(d < 2.0 * r)
        if idx.size == 0:
            continue
        sub = points[idx]
        uncovered = np.ones(len(sub), dtype=bool)
        count = 0
        while uncovered.any():
            i = int(np.flatnonzero(uncovered)[0])
            dd = distance(model, sub[i], sub)
            uncovered &= ~(dd < r)
            count += 1
        worst = max(worst, count)
    return worst
