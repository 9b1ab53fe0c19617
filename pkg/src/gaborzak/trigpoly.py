"""Trigonometric polynomials on the m-torus.

A polynomial is a finite term list {(frequency, coefficient)} evaluated as

    p(z) = sum_k  c_k * exp(2 pi i <freq_k, z>),

with integer frequency vectors.  The lattice part of a time-frequency
configuration with coefficients c produces the polynomial

    p(t, w) = sum_k c_k e^{-2 pi i <y_k, t>} e^{-2 pi i <w, x_k>},

i.e. the term for the point (x_k, y_k) carries frequency (-y_k, -x_k) in the
(t, w) coordinate ordering.
"""

from __future__ import annotations

import json
import math
from typing import Iterable, NamedTuple, Sequence

import numpy as np

from .lattice import lattice_contains
from .numerics import TorusPoint, stable_sum

__all__ = [
    "TrigPolynomial",
    "from_lattice_config",
    "min_modulus",
    "MinModulusResult",
    "haar_average",
    "log_modulus",
    "load_polynomial",
    "save_polynomial",
]

TWO_PI = 2.0 * math.pi


class TrigPolynomial:
    """Immutable finite Fourier series with integer frequencies.

    Terms are kept sorted by frequency for deterministic iteration; exact-zero
    coefficients are dropped (an empty term list is the zero polynomial).
    """

    __slots__ = ("dimension", "terms", "_freq_arr", "_coeff_arr")

    def __init__(self, dimension: int, terms: Iterable[tuple[Sequence[int], complex]]):
        if dimension < 1:
            raise ValueError("torus dimension must be >= 1")
        merged: dict[tuple[int, ...], complex] = {}
        for freq, coeff in terms:
            key = tuple(int(f) for f in freq)
            if len(key) != dimension:
                raise ValueError(f"frequency {key} has wrong length")
            if any(f != q for f, q in zip(key, freq)):
                raise ValueError(f"non-integer frequency {tuple(freq)}")
            merged[key] = merged.get(key, 0j) + complex(coeff)
        clean = {k: v for k, v in sorted(merged.items()) if v != 0}
        object.__setattr__(self, "dimension", int(dimension))
        object.__setattr__(self, "terms", tuple(clean.items()))
        freq_arr = (
            np.array([k for k in clean], dtype=float)
            if clean
            else np.zeros((0, dimension))
        )
        coeff_arr = np.array(list(clean.values()), dtype=complex)
        object.__setattr__(self, "_freq_arr", freq_arr)
        object.__setattr__(self, "_coeff_arr", coeff_arr)

    def __setattr__(self, *a):  # immutability guard
        raise AttributeError("TrigPolynomial is immutable")

    def __repr__(self) -> str:
        return f"TrigPolynomial(dim={self.dimension}, nterms={len(self.terms)})"

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, TrigPolynomial)
            and self.dimension == other.dimension
            and self.terms == other.terms
        )

    def __hash__(self):
        return hash((self.dimension, self.terms))

    # -- evaluation ---------------------------------------------------------

    def eval(self, z) -> complex:
        """Value at a single torus point (TorusPoint or coordinate sequence)."""
        coords = z.coords if isinstance(z, TorusPoint) else tuple(z)
        if len(coords) != self.dimension:
            raise ValueError(
                f"point has dimension {len(coords)}, polynomial {self.dimension}"
            )
        vals = [
            coeff * np.exp(2j * math.pi * math.fsum(f * c for f, c in zip(freq, coords)))
            for freq, coeff in self.terms
        ]
        return stable_sum(vals)

    def eval_points(self, pts: np.ndarray) -> np.ndarray:
        """Vectorized values at an (n, m) array of points; fixed term order."""
        pts = np.asarray(pts, dtype=float)
        if pts.ndim == 1:
            pts = pts[None, :]
        out = np.zeros(pts.shape[0], dtype=complex)
        for k in range(len(self._coeff_arr)):
            phase = pts @ self._freq_arr[k]
            out += self._coeff_arr[k] * np.exp(2j * math.pi * phase)
        return out

    def eval_grid_2d(self, resolution: int) -> np.ndarray:
        """(resolution x resolution) values on the grid (i/R, j/R); m must be 2."""
        if self.dimension != 2:
            raise ValueError("grid evaluation requires a 2-torus polynomial")
        ax = np.arange(resolution) / resolution
        out = np.zeros((resolution, resolution), dtype=complex)
        for (f0, f1), coeff in self.terms:
            col = np.exp(2j * math.pi * f0 * ax)
            row = np.exp(2j * math.pi * f1 * ax)
            out += coeff * np.outer(col, row)
        return out

    def lipschitz_bound(self) -> float:
        """Global bound on |p(z) - p(z')| / |z - z'|_inf:  2 pi sum |c| |freq|_1."""
        return TWO_PI * sum(
            abs(coeff) * sum(abs(f) for f in freq) for freq, coeff in self.terms
        )

    def lipschitz_along(self, direction: Sequence[float]) -> float:
        """Lipschitz constant of s -> p(z + s*direction)."""
        return TWO_PI * sum(
            abs(coeff) * abs(math.fsum(f * d for f, d in zip(freq, direction)))
            for freq, coeff in self.terms
        )


def from_lattice_config(cfg, coefficients) -> TrigPolynomial:
    """Build p(t, w) from the integer lattice part of a configuration.

    ``coefficients`` is either a plain sequence aligned with the non-target
    points in configuration order, or an object with ``c`` and
    ``target_index`` attributes.  Colliding frequencies merge by coefficient
    addition; a non-integer lattice point is rejected.
    """
    if hasattr(coefficients, "c") and hasattr(coefficients, "target_index"):
        target = coefficients.target_index
        coeffs = list(coefficients.c)
        lattice_pts = [pt for i, pt in enumerate(cfg.points) if i != target]
    else:
        coeffs = list(coefficients)
        lattice_pts = [
            pt for pt, is_lat in zip(cfg.points, cfg.lattice_mask) if is_lat
        ]
    if len(coeffs) != len(lattice_pts):
        raise ValueError(
            f"{len(coeffs)} coefficients for {len(lattice_pts)} lattice points"
        )
    d = cfg.dimension
    terms = []
    for pt, coeff in zip(lattice_pts, coeffs):
        freq = []
        for coord in list(pt.y) + list(pt.x):
            if not (coord.is_rational and coord.fraction.denominator == 1):
                raise ValueError(f"non-integer lattice coordinate {coord!r}")
            freq.append(-int(coord.fraction))
        terms.append((tuple(freq), coeff))
    return TrigPolynomial(2 * d, terms)


class MinModulusResult(NamedTuple):
    minimum: float
    argmin: TorusPoint
    lower_bound: float
    lipschitz: float


def min_modulus(p: TrigPolynomial, resolution: int) -> MinModulusResult:
    """Grid minimum of |p| with one local coordinate-descent refinement pass.

    ``lower_bound`` is the certified bound  min_grid - L * (grid step)  with L
    the global Lipschitz constant; finer grids can never undercut it.
    """
    if resolution < 16:
        raise ValueError("resolution must be >= 16")
    m = p.dimension
    if not p.terms:
        argmin = TorusPoint((0.0,) * m)
        return MinModulusResult(0.0, argmin, 0.0, 0.0)
    h = 1.0 / resolution
    if m == 2:
        mods = np.abs(p.eval_grid_2d(resolution))
        flat_idx = int(np.argmin(mods))
        i, j = divmod(flat_idx, resolution)
        best = np.array([i * h, j * h])
        best_val = float(mods[i, j])
    else:
        ax = np.arange(resolution) / resolution
        grids = np.meshgrid(*([ax] * m), indexing="ij")
        pts = np.stack([g.ravel() for g in grids], axis=-1)
        mods = np.abs(p.eval_points(pts))
        flat_idx = int(np.argmin(mods))
        best = pts[flat_idx].copy()
        best_val = float(mods[flat_idx])
    grid_min = best_val
    # coordinate descent within the best cell, never stepping below h/64
    step = h / 2.0
    while step >= h / 64.0:
        for axis in range(m):
            for sign in (1.0, -1.0):
                cand = best.copy()
                cand[axis] = (cand[axis] + sign * step) % 1.0
                val = float(abs(p.eval_points(cand[None, :])[0]))
                if val < best_val:
                    best_val = val
                    best = cand
        step /= 2.0
    lip = p.lipschitz_bound()
    return MinModulusResult(
        minimum=best_val,
        argmin=TorusPoint(tuple(float(x % 1.0) for x in best)),
        lower_bound=grid_min - lip * h,
        lipschitz=lip,
    )


def haar_average(p: TrigPolynomial, hperp_basis: Sequence[Sequence[int]]) -> TrigPolynomial:
    """Exact Haar convolution over the subgroup annihilated by ``hperp_basis``:
    keeps precisely the terms whose frequency lies in the integer span of the
    basis (decided by exact integer linear algebra)."""
    basis = []
    for row in hperp_basis:
        row = list(row)
        if any(int(x) != x for x in row):
            raise ValueError("annihilator basis must be integral")
        if len(row) != p.dimension:
            raise ValueError("annihilator basis has wrong dimension")
        basis.append([int(x) for x in row])
    kept = [
        (freq, coeff)
        for freq, coeff in p.terms
        if lattice_contains(basis, list(freq))
    ]
    return TrigPolynomial(p.dimension, kept)


def log_modulus(p: TrigPolynomial, z, floor: float) -> float:
    """ln max(|p(z)|, floor); callers choosing a tiny floor handle the
    near-singular magnitudes themselves."""
    if floor <= 0:
        raise ValueError("floor must be positive")
    return math.log(max(abs(p.eval(z)), floor))


def save_polynomial(p: TrigPolynomial, path: str) -> None:
    data = {
        "dimension": p.dimension,
        "terms": [
            {"freq": list(freq), "re": coeff.real, "im": coeff.imag}
            for freq, coeff in p.terms
        ],
    }
    with open(path, "w") as fh:
        json.dump(data, fh, indent=2, sort_keys=True)
        fh.write("\n")


def load_polynomial(path: str) -> TrigPolynomial:
    with open(path) as fh:
        data = json.load(fh)
    if not isinstance(data, dict) or "dimension" not in data or "terms" not in data:
        raise ValueError("polynomial file needs 'dimension' and 'terms'")
    terms = [
        (tuple(t["freq"]), complex(t.get("re", 0.0), t.get("im", 0.0)))
        for t in data["terms"]
    ]
    return TrigPolynomial(int(data["dimension"]), terms)
