"""Orbits of the torus translation z -> z + gamma.

Classifies the orbit closure (finite / dense / infinite-non-dense), computes
the annihilator lattice H-perp = {r in Z^m : <r, gamma> in Z}, parametrizes
the closure subgroup H through the Smith normal form of the relation matrix,
and provides equispaced Haar sampling on H.

Relations supported entirely on coordinates declared rational are computed by
exact integer arithmetic (unbounded).  Relations involving declared-irrational
coordinates come from a bounded numerical search and are advisory; declared
tags stay authoritative, and a numerically-rational "irrational" coordinate is
reported as an ambiguity rather than silently reclassified.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

import numpy as np

from .errors import AmbiguousClassification, NumericalFailure
from .lattice import hnf_basis, kernel_of_form, smith_normal_form
from .numerics import Coordinate, TorusPoint, parse_coordinate, reduce_mod1

__all__ = [
    "Gamma",
    "OrbitClass",
    "SubgroupH",
    "classify",
    "subgroup_closure",
    "haar_sample_points",
    "orbit_iterate",
    "orbit_points",
    "coset_min_modulus",
    "FINITE",
    "DENSE",
    "INFINITE_NON_DENSE",
]

FINITE = "Finite"
DENSE = "Dense"
INFINITE_NON_DENSE = "InfiniteNonDense"


@dataclass(frozen=True)
class Gamma:
    """Translation vector on T^m with exact per-coordinate arithmetic."""

    coords: tuple[Coordinate, ...]

    def __post_init__(self):
        if not self.coords:
            raise ValueError("gamma needs at least one coordinate")

    @classmethod
    def from_config(cls, cfg) -> "Gamma":
        """gamma = (-alpha, beta) from the unique off-lattice point of cfg."""
        off = [pt for pt, is_lat in zip(cfg.points, cfg.lattice_mask) if not is_lat]
        if len(off) != 1:
            raise ValueError(
                f"configuration has {len(off)} off-lattice points, need exactly 1"
            )
        alpha, beta = off[0].x, off[0].y
        return cls(tuple(-a for a in alpha) + tuple(beta))

    @classmethod
    def from_tokens(cls, text: str) -> "Gamma":
        return cls(tuple(parse_coordinate(tok) for tok in text.split(",")))

    @property
    def dimension(self) -> int:
        return len(self.coords)

    def longdoubles(self) -> np.ndarray:
        return np.array([c.longdouble() for c in self.coords], dtype=np.longdouble)

    def floats(self) -> np.ndarray:
        return np.array([c.float() for c in self.coords], dtype=float)

    @property
    def all_rational(self) -> bool:
        return all(c.is_rational for c in self.coords)


@dataclass(frozen=True)
class OrbitClass:
    kind: str  # Finite | Dense | InfiniteNonDense
    relations: tuple[tuple[int, ...], ...]  # HNF basis of found relations
    order: int | None
    search_bound: int
    tolerance: float


@dataclass(frozen=True)
class SubgroupH:
    """Closure subgroup H of the orbit, described exactly.

    z lies in H iff <r, z> is an integer for every annihilator basis row.  The
    identity component is spanned by the connected-direction integer vectors;
    there are component_count torsion cosets.
    """

    dimension: int
    annihilator_basis: tuple[tuple[int, ...], ...]
    connected_directions: tuple[tuple[int, ...], ...]
    component_count: int
    torsion_representatives: tuple[TorusPoint, ...]

    @property
    def haar_dimension(self) -> int:
        return len(self.connected_directions)


def _exact_rational_relations(gamma: Gamma) -> list[list[int]]:
    """Basis of relations supported on the rational coordinates (exact)."""
    m = gamma.dimension
    rat_idx = [i for i, c in enumerate(gamma.coords) if c.is_rational]
    if not rat_idx:
        return []
    fracs = [gamma.coords[i].fraction for i in rat_idx]
    q_lcm = math.lcm(*(f.denominator for f in fracs))
    form = [int(f * q_lcm) for f in fracs] + [q_lcm]
    rows = []
    for vec in kernel_of_form(form):
        full = [0] * m
        for j, i in enumerate(rat_idx):
            full[i] = vec[j]
        if any(full):
            rows.append(full)
    return [list(r) for r in hnf_basis(rows)]


def _half_combinations(indices, values, bound):
    """All integer combinations over the index block: returns (frac, coeffs)."""
    coeff_ranges = [np.arange(-bound, bound + 1, dtype=np.int64) for _ in indices]
    grids = np.meshgrid(*coeff_ranges, indexing="ij") if indices else []
    if not indices:
        return np.zeros(1, dtype=np.longdouble), np.zeros((1, 0), dtype=np.int64)
    coeffs = np.stack([g.ravel() for g in grids], axis=-1)
    total = np.zeros(coeffs.shape[0], dtype=np.longdouble)
    for j, i in enumerate(indices):
        total = total + coeffs[:, j].astype(np.longdouble) * values[i]
    return np.mod(total, np.longdouble(1.0)), coeffs


def _numeric_relation_search(gamma: Gamma, bound: int, tol: float):
    """Meet-in-the-middle search for r with |<r,gamma> - k| < tol and at least
    one nonzero coefficient on an irrational coordinate."""
    m = gamma.dimension
    vals = gamma.longdoubles()
    irr = [not c.is_rational for c in gamma.coords]
    if m > 4:
        return _pslq_relation_search(gamma, tol)
    half = list(range((m + 1) // 2))
    rest = list(range((m + 1) // 2, m))
    frac_a, coef_a = _half_combinations(half, vals, bound)
    frac_b, coef_b = _half_combinations(rest, vals, bound)
    order = np.argsort(frac_a, kind="stable")
    sorted_a = frac_a[order]
    hits: set[tuple[int, ...]] = set()
    tol_ld = np.longdouble(tol)
    for bi in range(frac_b.shape[0]):
        target = np.mod(-frac_b[bi], np.longdouble(1.0))
        lo, hi = target - tol_ld, target + tol_ld
        # wraparound-aware window scan in the sorted fractional parts
        segments = []
        if lo < 0:
            segments.append((lo + 1, np.longdouble(1.0)))
            lo = np.longdouble(0.0)
        if hi > 1:
            segments.append((np.longdouble(0.0), hi - 1))
            hi = np.longdouble(1.0)
        segments.append((lo, hi))
        for seg_lo, seg_hi in segments:
            i0 = int(np.searchsorted(sorted_a, seg_lo, side="left"))
            i1 = int(np.searchsorted(sorted_a, seg_hi, side="right"))
            for ai in order[i0:i1]:
                r = [0] * m
                for j, i in enumerate(half):
                    r[i] = int(coef_a[ai, j])
                for j, i in enumerate(rest):
                    r[i] = int(coef_b[bi, j])
                if not any(r):
                    continue
                if not any(r[i] != 0 and irr[i] for i in range(m)):
                    continue  # purely-rational support handled exactly elsewhere
                value = np.longdouble(0.0)
                for i in range(m):
                    value += np.longdouble(r[i]) * vals[i]
                dist = float(abs(value - np.rint(value)))
                if dist >= tol:
                    continue
                for k in range(m):
                    if r[k] != 0:
                        if r[k] < 0:
                            r = [-x for x in r]
                        break
                hits.add(tuple(r))
                if len(hits) > 10000:
                    return sorted(hits)
    return sorted(hits)


def _pslq_relation_search(gamma: Gamma, tol: float):
    """Advisory integer-relation detection for m > 4 via PSLQ on
    (gamma_1, ..., gamma_m, 1)."""
    import mpmath

    with mpmath.workdps(60):
        vec = [mpmath.mpf(repr(float(c.longdouble()))) for c in gamma.coords]
        rel = mpmath.pslq(vec + [mpmath.mpf(1)], tol=mpmath.mpf(tol), maxcoeff=10**6)
    if rel is None:
        return []
    r = [int(x) for x in rel[:-1]]
    if not any(r):
        return []
    irr = [not c.is_rational for c in gamma.coords]
    if not any(ri != 0 and ir for ri, ir in zip(r, irr)):
        return []
    for x in r:
        if x != 0:
            if x < 0:
                r = [-y for y in r]
            break
    return [tuple(r)]


def classify(gamma: Gamma, search_bound: int = 50, tolerance: float = 1e-9) -> OrbitClass:
    """Orbit-closure trichotomy for the translation by gamma.

    Finite iff every coordinate is declared rational (exact; order is the lcm
    of denominators).  Otherwise a relation search decides between Dense (no
    integer vector r, offset k with |<r,gamma> - k| < tolerance up to the
    bound) and InfiniteNonDense.  A declared-irrational coordinate that alone
    carries a numerical relation (i.e. sits within tolerance of a rational
    with denominator <= bound) raises AmbiguousClassification instead.
    """
    if search_bound < 1:
        raise ValueError("search bound must be >= 1")
    if not (0.0 < tolerance <= 1e-6):
        raise ValueError("tolerance must lie in (0, 1e-6]")
    m = gamma.dimension
    if gamma.all_rational:
        order = math.lcm(*(c.fraction.denominator for c in gamma.coords))
        basis = _exact_rational_relations(gamma)
        return OrbitClass(
            kind=FINITE,
            relations=tuple(tuple(r) for r in basis),
            order=order,
            search_bound=search_bound,
            tolerance=tolerance,
        )
    exact = _exact_rational_relations(gamma)
    numeric = _numeric_relation_search(gamma, search_bound, tolerance)
    irr = [not c.is_rational for c in gamma.coords]
    for r in numeric:
        support_irr = [i for i in range(m) if r[i] != 0 and irr[i]]
        if len(support_irr) == 1 and all(
            r[i] == 0 or not irr[i] or i == support_irr[0] for i in range(m)
        ):
            raise AmbiguousClassification(
                "declared-irrational coordinate "
                f"{support_irr[0]} satisfies the integer relation {tuple(r)} "
                f"within tolerance {tolerance}; declaration and numerics disagree",
                coordinate_index=support_irr[0],
            )
    all_rel = [list(r) for r in exact] + [list(r) for r in numeric]
    basis = hnf_basis(all_rel) if all_rel else []
    if not basis:
        return OrbitClass(
            kind=DENSE,
            relations=(),
            order=None,
            search_bound=search_bound,
            tolerance=tolerance,
        )
    return OrbitClass(
        kind=INFINITE_NON_DENSE,
        relations=tuple(tuple(r) for r in basis),
        order=None,
        search_bound=search_bound,
        tolerance=tolerance,
    )


def _relation_residual(gamma: Gamma, row: Sequence[int]) -> float:
    rational_part = Fraction(0)
    irrational = np.longdouble(0.0)
    has_irr = False
    for ri, c in zip(row, gamma.coords):
        if ri == 0:
            continue
        if c.is_rational:
            rational_part += ri * c.fraction
        else:
            has_irr = True
            irrational += np.longdouble(ri) * c.longdouble()
    if not has_irr:
        frac = rational_part - Fraction(math.floor(rational_part))
        return float(min(frac, 1 - frac))
    total = irrational + np.longdouble(
        rational_part.numerator
    ) / np.longdouble(rational_part.denominator)
    return float(abs(total - np.rint(total)))


def subgroup_closure(gamma: Gamma, cls: OrbitClass) -> SubgroupH:
    """Closure subgroup H from the classification's relation basis.

    Smith form U B V = diag(d) of the relation matrix B turns membership
    B z in Z^k into d_i y_i in Z for y = V^{-1} z: the last m-k columns of V
    span the identity component's tangent lattice and the torsion cosets are
    V (j_1/d_1, ..., j_k/d_k, 0, ...) mod 1.
    """
    m = gamma.dimension
    basis = [list(r) for r in cls.relations]
    # HNF reduction takes integer combinations of the found relations, which
    # can amplify advisory residuals; anything past 1e-6 is inconsistent.
    for row in basis:
        resid = _relation_residual(gamma, row)
        if resid >= 1e-6:
            raise NumericalFailure(
                f"relation {tuple(row)} has residual {resid:.3e}; "
                "relation set is numerically inconsistent"
            )
    if not basis:
        ident = tuple(
            tuple(1 if i == j else 0 for i in range(m)) for j in range(m)
        )
        return SubgroupH(
            dimension=m,
            annihilator_basis=(),
            connected_directions=ident,
            component_count=1,
            torsion_representatives=(TorusPoint((0.0,) * m),),
        )
    _, dvec, vmat = smith_normal_form(basis)
    k = len(basis)
    if len(dvec) < k or any(d == 0 for d in dvec[:k]):
        raise NumericalFailure("relation basis is rank-deficient")
    dvec = [abs(d) for d in dvec[:k]]
    tangent = tuple(
        tuple(vmat[i][j] for i in range(m)) for j in range(k, m)
    )
    component_count = 1
    for d in dvec:
        component_count *= d
    if component_count > 10**6:
        raise ValueError(
            f"component count {component_count} too large to materialize"
        )
    reps = []
    for combo in itertools.product(*(range(d) for d in dvec)):
        coords = []
        for i in range(m):
            val = Fraction(0)
            for j, (jj, dj) in enumerate(zip(combo, dvec)):
                val += Fraction(vmat[i][j] * jj, dj)
            val -= math.floor(val)
            coords.append(float(val))
        reps.append(reduce_mod1(np.array(coords)))
    return SubgroupH(
        dimension=m,
        annihilator_basis=tuple(tuple(r) for r in basis),
        connected_directions=tangent,
        component_count=component_count,
        torsion_representatives=tuple(reps),
    )


def haar_sample_points(H: SubgroupH, points_per_dimension: int) -> list[TorusPoint]:
    """Equispaced product grid on H: every torsion coset carries the grid
    { sum_i (l_i/N) b_i } over the connected-direction basis vectors b_i."""
    if points_per_dimension < 2:
        raise ValueError("points-per-dimension must be >= 2")
    n = points_per_dimension
    t_dim = H.haar_dimension
    m = H.dimension
    dirs = [np.array(b, dtype=float) for b in H.connected_directions]
    out = []
    for rep in H.torsion_representatives:
        base = rep.array()
        if t_dim == 0:
            out.append(reduce_mod1(base))
            continue
        for combo in itertools.product(range(n), repeat=t_dim):
            z = base.copy()
            for li, b in zip(combo, dirs):
                z = z + (li / n) * b
            out.append(reduce_mod1(z))
    return out


def orbit_iterate(z0: TorusPoint, gamma: Gamma, n: int) -> TorusPoint:
    """z0 + n*gamma mod 1, computed from n*gamma in one step (exact rational
    arithmetic per rational coordinate, extended precision otherwise)."""
    if n < 0:
        raise ValueError("n must be >= 0")
    if len(z0) != gamma.dimension:
        raise ValueError("dimension mismatch between point and gamma")
    coords = []
    for z, c in zip(z0.coords, gamma.coords):
        if c.is_rational:
            f = c.fraction
            step = Fraction(n * f.numerator % f.denominator, f.denominator)
            coords.append((z + float(step)) % 1.0)
        else:
            inc = np.longdouble(n) * c.longdouble()
            coords.append(float((np.longdouble(z) + inc) % np.longdouble(1.0)))
    return reduce_mod1(np.array(coords))


def orbit_points(z0: TorusPoint, gamma: Gamma, count: int) -> np.ndarray:
    """(count, m) float array of z0 + j*gamma mod 1 for j = 0..count-1."""
    if count < 1:
        raise ValueError("count must be >= 1")
    m = gamma.dimension
    if len(z0) != m:
        raise ValueError("dimension mismatch between point and gamma")
    out = np.empty((count, m), dtype=float)
    j = np.arange(count, dtype=np.int64)
    for i, c in enumerate(gamma.coords):
        if c.is_rational:
            f = c.fraction
            residues = (j * (f.numerator % f.denominator)) % f.denominator
            vals = (z0[i] + residues / f.denominator) % 1.0
        else:
            acc = np.mod(
                j.astype(np.longdouble) * c.longdouble() + np.longdouble(z0[i]),
                np.longdouble(1.0),
            )
            vals = acc.astype(float)
        vals[vals >= 1.0] -= 1.0
        out[:, i] = vals
    return out


def coset_min_modulus(
    p, lam: TorusPoint, H: SubgroupH, points_per_dimension: int = 64
) -> float:
    """min |p| over the coset lam + H, sampled on the equispaced Haar grid;
    membership in the transversal set U is coset_min_modulus > delta."""
    samples = haar_sample_points(H, points_per_dimension)
    pts = np.array([s.array() for s in samples]) + lam.array()
    return float(np.min(np.abs(p.eval_points(np.mod(pts, 1.0)))))
