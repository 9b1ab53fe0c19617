"""Truncated Zak transform on torus grids.

    Zf(t, w) = sum_{kappa in Z^d} e^{-2 pi i <w, kappa>} f(t + kappa)

computed by direct lattice sums truncated at |kappa|_inf <= K, with K chosen
so a decay-bound tail estimate is below target.  Off-grid values are always
fresh truncated sums, never interpolation: the downstream cocycle machinery
shifts by irrational amounts, and interpolation error would contaminate it.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field

import numpy as np

from .errors import NumericalFailure, TruncationError
from .numerics import TorusPoint
from .windows import Window, decay_bound

__all__ = [
    "ZakGrid",
    "ZeroSet",
    "zak_transform",
    "zak_point",
    "quasi_periodicity_residual",
    "functional_equation_residual",
    "locate_zero_set",
]

_DECAY_ORDERS = (4, 8, 12, 16, 20, 24)
GRID_BUDGET_DEFAULT = 2**24


def _kappa_tuples(K: int, d: int) -> list[tuple[int, ...]]:
    return sorted(itertools.product(range(-K, K + 1), repeat=d))


def _tail_sum(constant: float, order: int, K: int, d: int) -> float:
    """Upper bound on the dropped mass sum_{|kappa|_inf > K} sup_t |f(t+kappa)|
    using |f(u)| <= C (1+|u|_inf)^{-order} and |t+kappa|_inf >= |kappa|_inf - 1
    for t in the unit cube."""
    if constant == 0.0:
        return 0.0
    if order <= d:
        return math.inf
    total = 0.0
    s = K + 1
    while True:
        shell = (2 * s + 1) ** d - (2 * s - 1) ** d
        term = constant * shell * float(s) ** (-order)
        total += term
        if term < 1e-3 * max(total, 1e-300) and s > K + 8:
            # geometric-like decay: bound the rest by a crude doubling factor
            total += term
            break
        if s > K + 100000:
            return math.inf
        s += 1
    return total


def _best_tail(window: Window, K: int, d: int) -> float:
    best = math.inf
    for order in _DECAY_ORDERS:
        try:
            db = decay_bound(window, order)
        except Exception:
            continue
        best = min(best, _tail_sum(db.constant, order, K, d))
    return best


def _choose_truncation(window: Window, d: int, target: float) -> tuple[int, float]:
    for K in range(1, 61):
        tail = _best_tail(window, K, d)
        if tail < target:
            return K, tail
    raise TruncationError(
        "no truncation radius up to 60 meets the tail target "
        f"{target:g} for this window",
        suggested_k=61,
    )


def _lattice_sums(window: Window, tpts: np.ndarray, opts: np.ndarray, K: int) -> np.ndarray:
    """Fresh truncated Zak sums at arbitrary real arguments.

    tpts, opts: (n, d) arrays; the kappa loop runs in fixed lexicographic
    order so results are bitwise reproducible regardless of threading."""
    n, d = tpts.shape
    out = np.zeros(n, dtype=complex)
    for kappa in _kappa_tuples(K, d):
        f = np.asarray(window.eval_many(tpts + np.array(kappa, dtype=float)))
        phase = np.zeros(n)
        for axis in range(d):
            if kappa[axis] != 0:
                phase = phase + opts[:, axis] * kappa[axis]
        out = out + f * np.exp(-2j * np.pi * phase)
    return out


@dataclass(frozen=True)
class ZakGrid:
    """Zf sampled at (t, w) = (i/M, j/M); values has shape (M,)*2d."""

    dimension: int
    resolution: int
    truncation: int
    tail_bound: float
    values: np.ndarray = field(repr=False)
    window: Window = field(repr=False)

    @property
    def axis(self) -> np.ndarray:
        return np.arange(self.resolution) / self.resolution

    def grid_mean_square(self) -> float:
        """(1/M^{2d}) sum |Zf|^2: the grid-scale L^2([0,1)^{2d}) mass, equal
        to ||f||_2^2 in the exact (unitary) limit."""
        return float(np.mean(np.abs(self.values) ** 2))

    def max_abs(self) -> float:
        return float(np.max(np.abs(self.values)))

    def point_value(self, t, omega) -> complex:
        """Fresh truncated sum at real (possibly unreduced) arguments."""
        return zak_point(self.window, t, omega, self.truncation)


@dataclass(frozen=True)
class ZeroSet:
    points: tuple[TorusPoint, ...]
    threshold: float


def zak_transform(
    window: Window,
    resolution: int,
    truncation: int | None = None,
    tail_target: float = 1e-10,
    grid_budget: int = GRID_BUDGET_DEFAULT,
) -> ZakGrid:
    """Fill the (M,)*2d grid of truncated Zak values.

    With truncation=None, K is the smallest radius whose decay-bound tail is
    below tail_target; an explicit K that misses the target raises
    TruncationError carrying a sufficient radius.
    """
    M = resolution
    d = window.dimension
    if M < 4:
        raise ValueError("resolution must be >= 4")
    if M ** (2 * d) > grid_budget:
        raise ValueError(
            f"grid of {M ** (2 * d)} values exceeds the budget {grid_budget}"
        )
    if truncation is None:
        K, tail = _choose_truncation(window, d, tail_target)
    else:
        K = int(truncation)
        if K < 1:
            raise ValueError("truncation must be >= 1")
        tail = _best_tail(window, K, d)
        if not tail < tail_target:
            KK, _ = _choose_truncation(window, d, tail_target)
            raise TruncationError(
                f"truncation K={K} gives tail bound {tail:.3e} >= "
                f"target {tail_target:g}",
                suggested_k=KK,
            )
    axis = np.arange(M) / M
    tgrids = np.meshgrid(*([axis] * d), indexing="ij")
    t_flat = np.stack([g.ravel() for g in tgrids], axis=-1)
    o_flat = t_flat  # identical gridding on the frequency axes
    nt = t_flat.shape[0]
    vals = np.zeros((nt, nt), dtype=complex)
    for kappa in _kappa_tuples(K, d):
        f = np.asarray(window.eval_many(t_flat + np.array(kappa, dtype=float)))
        phase = np.zeros(nt)
        for axis_i in range(d):
            if kappa[axis_i] != 0:
                phase = phase + o_flat[:, axis_i] * kappa[axis_i]
        vals += f[:, None] * np.exp(-2j * np.pi * phase)[None, :]
    if not np.all(np.isfinite(vals)):
        raise NumericalFailure("non-finite Zak values on the grid")
    return ZakGrid(
        dimension=d,
        resolution=M,
        truncation=K,
        tail_bound=tail,
        values=vals.reshape((M,) * (2 * d)),
        window=window,
    )


def zak_point(window: Window, t, omega, truncation: int) -> complex:
    """One fresh truncated sum; arguments may lie outside [0,1) (the series
    converges for all real arguments, with the truncation radius widened by
    the integer part of the shift)."""
    t = np.atleast_1d(np.asarray(t, dtype=float))
    omega = np.atleast_1d(np.asarray(omega, dtype=float))
    margin = int(np.ceil(np.max(np.abs(t)))) if t.size else 0
    K = truncation + max(0, margin)
    return complex(_lattice_sums(window, t[None, :], omega[None, :], K)[0])


def quasi_periodicity_residual(Z: ZakGrid) -> float:
    """max over the grid and over unit shifts e_l of
    |Zf(t+e_l, w) - e^{2 pi i w_l} Zf(t, w)| and |Zf(t, w+e_l) - Zf(t, w)|,
    with shifted values recomputed as fresh sums."""
    d, M = Z.dimension, Z.resolution
    axis = np.arange(M) / M
    grids = np.meshgrid(*([axis] * (2 * d)), indexing="ij")
    flat = np.stack([g.ravel() for g in grids], axis=-1)
    tpts, opts = flat[:, :d], flat[:, d:]
    base = Z.values.ravel()
    worst = 0.0
    for axis_i in range(d):
        shift = np.zeros(d)
        shift[axis_i] = 1.0
        t_shift = _lattice_sums(Z.window, tpts + shift, opts, Z.truncation + 1)
        expected = np.exp(2j * np.pi * opts[:, axis_i]) * base
        worst = max(worst, float(np.max(np.abs(t_shift - expected))))
        o_shift = _lattice_sums(Z.window, tpts, opts + shift, Z.truncation)
        worst = max(worst, float(np.max(np.abs(o_shift - base))))
    return worst


def functional_equation_residual(Z: ZakGrid, p, alpha, beta) -> float:
    """Grid L^2 norm (root mean square over the (M,)*2d grid) of

        p(t,w) Zf(t,w) - e^{-2 pi i <t,beta>} Zf(t-alpha, w+beta)

    with the shifted factor evaluated by fresh truncated sums at the real
    (unreduced) arguments t - alpha, w + beta."""
    d, M = Z.dimension, Z.resolution
    if p.dimension != 2 * d:
        raise ValueError("polynomial dimension must be 2d")
    a = np.array([c.float() for c in alpha], dtype=float)
    b = np.array([c.float() for c in beta], dtype=float)
    if a.shape != (d,) or b.shape != (d,):
        raise ValueError("alpha and beta must each have length d")
    axis = np.arange(M) / M
    grids = np.meshgrid(*([axis] * (2 * d)), indexing="ij")
    flat = np.stack([g.ravel() for g in grids], axis=-1)
    tpts, opts = flat[:, :d], flat[:, d:]
    lhs = p.eval_points(flat) * Z.values.ravel()
    margin = int(np.ceil(np.max(np.abs(a)))) + 1 if d else 1
    shifted = _lattice_sums(Z.window, tpts - a, opts + b, Z.truncation + margin)
    mod_phase = np.exp(-2j * np.pi * (tpts @ b))
    diff = lhs - mod_phase * shifted
    return float(np.sqrt(np.mean(np.abs(diff) ** 2)))


def locate_zero_set(Z: ZakGrid, threshold: float | None = None) -> ZeroSet:
    """Grid points where |Zf| falls under the threshold (default
    1e-3 * max |Zf|); row-major grid order."""
    if threshold is None:
        threshold = 1e-3 * Z.max_abs()
        if threshold == 0.0:  # identically-zero grid: every point qualifies
            threshold = np.finfo(float).tiny
    if threshold <= 0:
        raise ValueError("threshold must be positive")
    M = Z.resolution
    mask = np.abs(Z.values) < threshold
    pts = []
    for idx in np.argwhere(mask):
        pts.append(TorusPoint(tuple(float(i) / M for i in idx)))
    return ZeroSet(points=tuple(pts), threshold=float(threshold))
