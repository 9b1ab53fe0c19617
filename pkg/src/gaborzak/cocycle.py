"""Multiplicative and phase cocycles along torus translation orbits.

The modulus cocycle F(z+gamma) = q(z) F(z) with q = |p| is propagated by
accumulating ln q along the orbit.  Its log-growth functional

    Theta(lambda) = integral over H of ln q(lambda + h) dm_H(h)

is computed two ways: a Birkhoff average along the orbit and a Haar-grid
quadrature on the closure subgroup H (they agree by unique ergodicity).

The phase side implements the measurable branch theta of a nonzero complex
value (four-case arctangent ladder), the n-step phase recursion

    theta_n = theta_0 + sum_{j<n} phi(t-j a, w+j b) + n<t,b> - n(n-1)/2 <a,b>

(everything mod 1), synthetic phase fields built from the one-step recursion,
the normalized sequence zeta_n = exp(2 pi i theta_n / n), and the two cluster
set descriptions whose forced equality drives the rigidity argument.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .errors import NumericalFailure, PhaseUndefined
from .numerics import Coordinate, QuadratureSpec, TorusPoint, reduce_mod1
from .orbit import Gamma, SubgroupH, haar_sample_points, orbit_points
from .trigpoly import TrigPolynomial

__all__ = [
    "CocycleTrajectory",
    "ThetaEstimate",
    "PhaseBranch",
    "ClusterSet",
    "propagate",
    "theta_birkhoff",
    "theta_haar",
    "case3_verdict",
    "balanced_fraction",
    "phase_branch",
    "phase_cocycle_iterate",
    "SyntheticPhaseField",
    "normalized_phase_sequence",
    "phase_mean_along_orbit",
    "cluster_set_c1",
    "cluster_set_c2",
    "cluster_sets_match",
    "rigidity_scan",
]

_REFINE_DEPTH_CAP = 40
# total split budget per quadrature call: isolated zeros need only a few
# hundred splits, while a zero set of positive measure would double the
# frontier at every depth; exhausting the budget routes the unresolved
# volume into the at-cap tally instead of hanging
_REFINE_CELL_BUDGET = 50_000


@dataclass(frozen=True)
class CocycleTrajectory:
    base: TorusPoint
    gamma: Gamma
    logF: np.ndarray  # length n_max+1, logF[n] = ln F(base + n gamma)
    skipped: tuple[tuple[int, str], ...]
    comparable: np.ndarray  # comparable[n] False once a gap occurred before n

    @property
    def zero_orbit(self) -> bool:
        return bool(np.all(np.isneginf(self.logF)))


@dataclass(frozen=True)
class ThetaEstimate:
    value: float
    method: str  # birkhoff | haar-quadrature
    samples: int  # orbit length n, or points per tangent direction
    skipped_fraction: float

    @property
    def reliable(self) -> bool:
        return self.skipped_fraction < 0.01


@dataclass(frozen=True)
class PhaseBranch:
    theta: float  # in [0, 1)
    case_tag: str  # re-positive | re-negative | im-positive | im-negative


@dataclass(frozen=True)
class ClusterSet:
    kind: str  # finite-roots | full-circle
    points: tuple[complex, ...]
    generator_angle: float  # angle of e^{-pi i <a,b>} in turns, mod 1


def propagate(
    F0: float,
    base: TorusPoint,
    gamma: Gamma,
    q_source: TrigPolynomial,
    n_max: int,
    skip_threshold: float = 1e-8,
) -> CocycleTrajectory:
    """Accumulate logF[n] = ln F0 + sum_{j<n} ln |p(base + j gamma)|.

    Steps where |p| falls under the threshold contribute nothing and are
    recorded; all later values carry a non-comparable flag.  F0 = 0 encodes a
    zero of F: the whole forward orbit stays at log-value -inf.
    """
    if n_max < 1:
        raise ValueError("n-max must be >= 1")
    if skip_threshold <= 0:
        raise ValueError("skip threshold must be positive")
    if F0 < 0:
        raise ValueError("F0 must be >= 0")
    pts = orbit_points(base, gamma, n_max)
    q = np.abs(q_source.eval_points(pts))
    good = q >= skip_threshold
    contrib = np.where(good, np.log(np.where(good, q, 1.0)), 0.0)
    log_f0 = math.log(F0) if F0 > 0 else -math.inf
    logF = np.empty(n_max + 1)
    logF[0] = log_f0
    logF[1:] = log_f0 + np.cumsum(contrib)
    skipped = tuple(
        (int(j), f"|p| = {q[j]:.3e} below skip threshold")
        for j in np.nonzero(~good)[0]
    )
    comparable = np.ones(n_max + 1, dtype=bool)
    if skipped:
        comparable[skipped[0][0] + 1 :] = False
    return CocycleTrajectory(
        base=base,
        gamma=gamma,
        logF=logF,
        skipped=skipped,
        comparable=comparable,
    )


def theta_birkhoff(
    p: TrigPolynomial,
    lam: TorusPoint,
    gamma: Gamma,
    n: int,
    delta: float = 1e-8,
) -> ThetaEstimate:
    """(1/n) sum_{j<n} ln |p(lambda + j gamma)| over the non-skipped steps."""
    if n < 1000:
        raise ValueError("Birkhoff averaging needs n >= 1000")
    pts = orbit_points(lam, gamma, n)
    q = np.abs(p.eval_points(pts))
    good = q >= delta
    total = math.fsum(np.log(q[good]))
    return ThetaEstimate(
        value=total / n,
        method="birkhoff",
        samples=n,
        skipped_fraction=1.0 - float(np.count_nonzero(good)) / n,
    )


def _refine_cell(p, base_pt, dirs, center, halfwidth, lips, delta, depth, stats):
    """Recursive dyadic refinement of one tangent-coordinate cell.

    Returns the cell's contribution vol * mean-estimate of ln|p| using the
    center value, splitting while a zero of p may hide inside the cell
    (|p(center)| within the cell's Lipschitz radius of 0)."""
    z = base_pt + center @ dirs
    val = float(abs(p.eval_points(np.mod(z, 1.0)[None, :])[0]))
    radius = 2.0 * float(np.dot(lips, halfwidth))
    vol = float(np.prod(2.0 * halfwidth))
    exhausted = depth >= _REFINE_DEPTH_CAP or stats["splits"] >= _REFINE_CELL_BUDGET
    if val > radius or exhausted:
        if exhausted and val <= radius:
            stats["at_cap_volume"] += vol
        if val < delta:
            stats["clamped_volume"] += vol
            return vol * math.log(delta)
        return vol * math.log(val)
    stats["splits"] += 1
    axis = int(np.argmax(lips * halfwidth))
    hw = halfwidth.copy()
    hw[axis] *= 0.5
    lo = center.copy()
    lo[axis] -= hw[axis]
    hi = center.copy()
    hi[axis] += hw[axis]
    return _refine_cell(
        p, base_pt, dirs, lo, hw, lips, delta, depth + 1, stats
    ) + _refine_cell(p, base_pt, dirs, hi, hw, lips, delta, depth + 1, stats)


def theta_haar(
    p: TrigPolynomial,
    lam: TorusPoint,
    H: SubgroupH,
    quad: QuadratureSpec,
    delta: float = 1e-8,
) -> ThetaEstimate:
    """Haar quadrature of ln max(|p|, delta) over the coset lambda + H.

    The composite-midpoint scheme averages over the equispaced Haar grid and,
    when refinement is enabled, recursively subdivides cells whose center
    value is within the cell's Lipschitz radius of zero.  Gauss-Legendre runs
    a plain weighted product rule along the tangent directions.
    """
    n = quad.points_per_axis
    m = H.dimension
    if p.dimension != m or len(lam) != m:
        raise ValueError("dimension mismatch")
    t_dim = H.haar_dimension
    dirs = np.array(H.connected_directions, dtype=float).reshape(t_dim, m)
    reps = [lam.array() + r.array() for r in H.torsion_representatives]
    n_reps = len(reps)
    lips = np.array(
        [p.lipschitz_along(H.connected_directions[j]) for j in range(t_dim)]
    )
    contributions: list[float] = []
    stats = {"clamped_volume": 0.0, "at_cap_volume": 0.0, "splits": 0}

    if t_dim == 0:
        for base_pt in reps:
            val = float(abs(p.eval_points(np.mod(base_pt, 1.0)[None, :])[0]))
            if val < delta:
                stats["clamped_volume"] += 1.0
                contributions.append(math.log(delta))
            else:
                contributions.append(math.log(val))
        value = math.fsum(contributions) / n_reps
        return ThetaEstimate(
            value=value,
            method="haar-quadrature",
            samples=n,
            skipped_fraction=stats["clamped_volume"] / n_reps,
        )

    if quad.scheme == "gauss-legendre":
        x, w = np.polynomial.legendre.leggauss(n)
        nodes1 = 0.5 * (x + 1.0)
        w1 = 0.5 * w
        grids = np.meshgrid(*([nodes1] * t_dim), indexing="ij")
        ygrid = np.stack([g.ravel() for g in grids], axis=-1)
        wgrids = np.meshgrid(*([w1] * t_dim), indexing="ij")
        wts = np.ones(ygrid.shape[0])
        for g in wgrids:
            wts = wts * g.ravel()
        for base_pt in reps:
            zpts = np.mod(base_pt[None, :] + ygrid @ dirs, 1.0)
            vals = np.abs(p.eval_points(zpts))
            clamped = vals < delta
            stats["clamped_volume"] += float(np.sum(wts[clamped]))
            logs = np.log(np.maximum(vals, delta))
            contributions.append(math.fsum(wts * logs))
        value = math.fsum(contributions) / n_reps
        return ThetaEstimate(
            value=value,
            method="haar-quadrature",
            samples=n,
            skipped_fraction=stats["clamped_volume"] / n_reps,
        )

    # composite midpoint on the equispaced Haar grid: node l/N is the
    # midpoint of a cell of halfwidth 1/(2N) in each tangent coordinate
    offsets = np.arange(n) / n
    grids = np.meshgrid(*([offsets] * t_dim), indexing="ij")
    ygrid = np.stack([g.ravel() for g in grids], axis=-1)
    hw0 = np.full(t_dim, 0.5 / n)
    cell_vol = float(np.prod(2.0 * hw0))
    radius0 = 2.0 * float(np.dot(lips, hw0))
    for base_pt in reps:
        zpts = np.mod(base_pt[None, :] + ygrid @ dirs, 1.0)
        vals = np.abs(p.eval_points(zpts))
        plain = vals > radius0
        if not quad.refine_near_singularity:
            clamped = ~(vals >= delta)
            stats["clamped_volume"] += cell_vol * float(np.sum(clamped))
            logs = np.log(np.maximum(vals, delta))
            contributions.append(cell_vol * math.fsum(logs))
            continue
        total_plain = cell_vol * math.fsum(
            np.log(np.maximum(vals[plain], delta))
        )
        stats["clamped_volume"] += cell_vol * float(
            np.sum(vals[plain] < delta)
        )
        refined = [
            _refine_cell(
                p, base_pt, dirs, ygrid[i].copy(), hw0.copy(), lips, delta, 0, stats
            )
            for i in np.nonzero(~plain)[0]
        ]
        contributions.append(total_plain + math.fsum(refined))
    if stats["at_cap_volume"] > 1e-2:
        raise NumericalFailure(
            "Haar quadrature failed to converge: refinement budget exhausted "
            f"with volume fraction {stats['at_cap_volume']:.3e} unresolved"
        )
    value = math.fsum(contributions) / n_reps
    return ThetaEstimate(
        value=value,
        method="haar-quadrature",
        samples=n,
        skipped_fraction=stats["clamped_volume"] / n_reps,
    )


def case3_verdict(theta: ThetaEstimate, tolerance: float = 1e-3) -> str:
    """growth (Theta > 0), decay (Theta < 0), or balanced (|Theta| small).

    Growth contradicts boundedness of a continuous F on the torus; decay
    contradicts recurrence of the orbit; balanced is the regime the modulus
    arguments cannot settle.
    """
    if tolerance <= 0:
        raise ValueError("tolerance must be positive")
    if not theta.reliable:
        raise ValueError(
            f"estimate skipped {theta.skipped_fraction:.1%} of its mass; "
            "refusing a verdict on an unreliable estimate"
        )
    if theta.value > tolerance:
        return "growth"
    if theta.value < -tolerance:
        return "decay"
    return "balanced"


def balanced_fraction(
    p: TrigPolynomial,
    H: SubgroupH,
    quad: QuadratureSpec,
    resolution: int = 16,
    tolerance: float = 1e-6,
    delta: float = 1e-8,
) -> float:
    """Measure fraction of base points with |Theta| <= tolerance on a coarse
    grid.  Grid scale cannot distinguish measure-zero from positive-measure
    vanishing; this reports the fraction without adjudicating."""
    m = H.dimension
    axis = np.arange(resolution) / resolution
    grids = np.meshgrid(*([axis] * m), indexing="ij")
    flat = np.stack([g.ravel() for g in grids], axis=-1)
    hits = 0
    for row in flat:
        est = theta_haar(p, reduce_mod1(row), H, quad, delta)
        if abs(est.value) <= tolerance:
            hits += 1
    return hits / flat.shape[0]


def phase_branch(value: complex) -> PhaseBranch:
    """Measurable phase branch of a nonzero complex number.

    Four-case ladder (radians): Re > 0 -> arctan(Im/Re); Re < 0 -> the same
    plus pi; Re = 0 -> pi/2 or 3 pi/2 by the sign of Im.  The result is
    divided by 2 pi and reduced into [0, 1) (the first case is negative for
    Im < 0); different branches differ by integers only.
    """
    value = complex(value)
    re, im = value.real, value.imag
    if re > 0.0:
        rad = math.atan(im / re)
        tag = "re-positive"
    elif re < 0.0:
        rad = math.atan(im / re) + math.pi
        tag = "re-negative"
    elif im > 0.0:
        rad = 0.5 * math.pi
        tag = "im-positive"
    elif im < 0.0:
        rad = 1.5 * math.pi
        tag = "im-negative"
    else:
        raise ValueError("phase of zero is undefined")
    theta = (rad / (2.0 * math.pi)) % 1.0
    if theta >= 1.0:
        # float modulo of a tiny negative angle rounds up to the excluded
        # endpoint; 0 and 1 are the same branch value
        theta = 0.0
    return PhaseBranch(theta=theta, case_tag=tag)


def _inner_coordinates(a: tuple[Coordinate, ...], b: tuple[Coordinate, ...]):
    """<a, b> split into exact rational and long-double irrational parts."""
    rat = Fraction(0)
    irr = np.longdouble(0.0)
    for ca, cb in zip(a, b):
        if ca.is_rational and cb.is_rational:
            rat += ca.fraction * cb.fraction
        else:
            irr += ca.longdouble() * cb.longdouble()
    return rat, irr


def _orbit_step_point(base: TorusPoint, alpha, beta, j: int):
    """Unreduced (t - j alpha, w + j beta) in long double, plus d."""
    d = len(alpha)
    t = np.array([np.longdouble(base[i]) for i in range(d)])
    w = np.array([np.longdouble(base[d + i]) for i in range(d)])
    a = np.array([c.longdouble() for c in alpha])
    b = np.array([c.longdouble() for c in beta])
    return t - np.longdouble(j) * a, w + np.longdouble(j) * b


def phase_cocycle_iterate(
    theta0: float,
    phi_source: TrigPolynomial,
    base: TorusPoint,
    alpha: tuple[Coordinate, ...],
    beta: tuple[Coordinate, ...],
    n: int,
    delta: float = 1e-8,
) -> float:
    """Right-hand side of the n-step phase relation, mod 1:

        theta0 + sum_{j<n} phi(t-j a, w+j b) + n <t,b> - n(n-1)/2 <a,b>.

    phi comes from the measurable branch of p along the orbit (p is periodic,
    so reduced arguments suffice there); the <t,b> term uses the base point's
    representative coordinates, exactly as the one-step relation telescopes.
    """
    d = len(alpha)
    if len(beta) != d or phi_source.dimension != 2 * d or len(base) != 2 * d:
        raise ValueError("dimension mismatch")
    if n < 0:
        raise ValueError("n must be >= 0")
    phi_sum = np.longdouble(0.0)
    for j in range(n):
        t_j, w_j = _orbit_step_point(base, alpha, beta, j)
        z = np.mod(np.concatenate([t_j, w_j]), np.longdouble(1.0)).astype(float)
        val = phi_source.eval(z)
        if abs(val) < delta:
            raise PhaseUndefined(
                f"|p| = {abs(val):.3e} below {delta:g} at orbit step {j}",
                step=j,
            )
        phi_sum += np.longdouble(phase_branch(val).theta)
    t0 = np.array([np.longdouble(base[i]) for i in range(d)])
    b_ld = np.array([c.longdouble() for c in beta])
    tb = np.dot(t0, b_ld)
    ab_rat, ab_irr = _inner_coordinates(alpha, beta)
    half = Fraction(n * (n - 1), 2)
    rational_part = -half * ab_rat
    rational_part -= math.floor(rational_part)
    total = (
        np.longdouble(theta0)
        + phi_sum
        + np.longdouble(n) * tb
        - np.longdouble(n * (n - 1)) / np.longdouble(2.0) * ab_irr
        + np.longdouble(rational_part.numerator)
        / np.longdouble(rational_part.denominator)
    )
    return float(np.mod(total, np.longdouble(1.0)))


class SyntheticPhaseField:
    """Phase field on one orbit, built from the one-step recursion

        theta_{j+1} = theta_j + phi(z_j) + <t - j alpha, beta>

    (a real lift; globally consistent phase fields need not exist, so this
    constructs one synthetically from any seed value).  phi is the
    measurable branch of the supplied polynomial, which must stay nonzero
    along the orbit.
    """

    def __init__(
        self,
        phi_source: TrigPolynomial,
        base: TorusPoint,
        alpha: tuple[Coordinate, ...],
        beta: tuple[Coordinate, ...],
        theta0: float = 0.0,
        delta: float = 1e-8,
    ):
        d = len(alpha)
        if len(beta) != d or phi_source.dimension != 2 * d or len(base) != 2 * d:
            raise ValueError("dimension mismatch")
        self.phi_source = phi_source
        self.base = base
        self.alpha = tuple(alpha)
        self.beta = tuple(beta)
        self.delta = delta
        self._lifts = [np.longdouble(theta0)]

    def _extend(self, n: int) -> None:
        while len(self._lifts) <= n:
            j = len(self._lifts) - 1
            t_j, w_j = _orbit_step_point(self.base, self.alpha, self.beta, j)
            z = np.mod(np.concatenate([t_j, w_j]), np.longdouble(1.0)).astype(float)
            val = self.phi_source.eval(z)
            if abs(val) < self.delta:
                raise PhaseUndefined(
                    f"|p| = {abs(val):.3e} below {self.delta:g} at orbit step {j}",
                    step=j,
                )
            phi = np.longdouble(phase_branch(val).theta)
            b_ld = np.array([c.longdouble() for c in self.beta])
            tb = np.dot(t_j, b_ld)
            self._lifts.append(self._lifts[-1] + phi + tb)

    def phase_lift(self, n: int) -> float:
        """Real-valued lift of theta at orbit step n."""
        if n < 0:
            raise ValueError("n must be >= 0")
        self._extend(n)
        return float(self._lifts[n])

    def phase_at_step(self, n: int) -> float:
        return self.phase_lift(n) % 1.0

    def point_at_step(self, n: int) -> TorusPoint:
        t_n, w_n = _orbit_step_point(self.base, self.alpha, self.beta, n)
        z = np.mod(np.concatenate([t_n, w_n]), np.longdouble(1.0)).astype(float)
        return reduce_mod1(z)


def normalized_phase_sequence(
    field,
    base: TorusPoint,
    alpha: tuple[Coordinate, ...],
    beta: tuple[Coordinate, ...],
    n_list,
    delta: float = 1e-8,
) -> list[complex]:
    """zeta_n = exp(2 pi i theta(t - n alpha, w + n beta) / n) for n in n_list.

    Synthetic fields supply their own real lift.  For a Zak grid the phase at
    the unreduced argument is the measurable branch at the reduced point plus
    the quasi-periodicity correction <integer part of t - n alpha,
    fractional part of w + n beta>.
    """
    d = len(alpha)
    out = []
    for n in n_list:
        if n < 1:
            raise ValueError("n values must be >= 1")
        if isinstance(field, SyntheticPhaseField):
            theta_n = field.phase_lift(n)
        else:
            t_n, w_n = _orbit_step_point(base, alpha, beta, n)
            t_red = np.mod(t_n, np.longdouble(1.0))
            w_red = np.mod(w_n, np.longdouble(1.0))
            iota = (t_n - t_red).astype(float)
            val = field.point_value(t_red.astype(float), w_red.astype(float))
            if abs(val) < delta:
                raise PhaseUndefined(
                    f"|Zf| = {abs(val):.3e} below {delta:g} at n = {n}", step=n
                )
            theta_n = phase_branch(val).theta + float(
                np.dot(iota, w_red.astype(np.longdouble))
            )
        out.append(complex(np.exp(2j * np.pi * theta_n / n)))
    return out


def phase_mean_along_orbit(
    phi_source: TrigPolynomial,
    base: TorusPoint,
    alpha: tuple[Coordinate, ...],
    beta: tuple[Coordinate, ...],
    n: int,
    delta: float = 1e-8,
) -> tuple[float, int]:
    """Birkhoff average of phi along the orbit with stepwise unwrapping.

    Approximates I(t,w) = integral of phi over H.  A global continuous branch
    need not exist on the coset, so the average uses a lift that changes by
    less than half a turn per step; the returned winding count is the total
    number of integer corrections applied (a diagnostic: large winding means
    the branch average is trustworthy only mod 1).
    """
    if n < 1:
        raise ValueError("n must be >= 1")
    values = []
    winding = 0
    prev = None
    for j in range(n):
        t_j, w_j = _orbit_step_point(base, alpha, beta, j)
        z = np.mod(np.concatenate([t_j, w_j]), np.longdouble(1.0)).astype(float)
        val = phi_source.eval(z)
        if abs(val) < delta:
            raise PhaseUndefined(
                f"|p| = {abs(val):.3e} below {delta:g} at orbit step {j}", step=j
            )
        raw = phase_branch(val).theta
        if prev is None:
            lift = raw
        else:
            k = round(prev - raw)
            if abs(raw + k - prev) > 0.5:
                k += 1 if raw + k < prev else -1
            if k != 0:
                winding += abs(k)
            lift = raw + k
        values.append(lift)
        prev = lift
    return math.fsum(values) / n, winding


def cluster_set_c1(inner_product_alpha_beta: Coordinate) -> ClusterSet:
    """Closure of {e^{-pi i (n-1) <a,b>} : n in N}: the cyclic group generated
    by e^{-pi i <a,b>} when <a,b> is rational (2q/gcd(p,2q) points), the whole
    circle otherwise."""
    ab = inner_product_alpha_beta
    if ab.is_rational:
        fr = ab.fraction
        pnum, q = fr.numerator, fr.denominator
        gen_angle = Fraction(-pnum, 2 * q)
        order = (2 * q) // math.gcd(pnum, 2 * q) if pnum != 0 else 1
        pts = []
        for k in range(order):
            ang = (k * gen_angle) % 1
            pts.append(complex(np.exp(2j * np.pi * float(ang))))
        return ClusterSet(
            kind="finite-roots",
            points=tuple(pts),
            generator_angle=float(gen_angle % 1),
        )
    gen = float(np.mod(-ab.longdouble() / np.longdouble(2.0), np.longdouble(1.0)))
    return ClusterSet(kind="full-circle", points=(), generator_angle=gen)


def cluster_set_c2(
    alpha: tuple[Coordinate, ...],
    beta: tuple[Coordinate, ...],
    omega: TorusPoint,
    n_max: int,
    tolerance: float = 1e-10,
) -> list[complex]:
    """Sample {e^{-2 pi i <alpha, [omega + n beta]>} : 1 <= n <= n_max} with
    duplicates collapsed at the tolerance; integer beta freezes the
    fractional part, collapsing everything to e^{-2 pi i <alpha, [omega]>}."""
    if n_max < 1:
        raise ValueError("n-max must be >= 1")
    d = len(alpha)
    if len(beta) != d or len(omega) != d:
        raise ValueError("dimension mismatch")
    a_ld = np.array([c.longdouble() for c in alpha])
    inners = np.zeros(n_max, dtype=np.longdouble)
    nvals = np.arange(1, n_max + 1, dtype=np.longdouble)
    for i in range(d):
        c = beta[i]
        if c.is_rational:
            f = c.fraction
            resid = (
                np.arange(1, n_max + 1, dtype=np.int64) * (f.numerator % f.denominator)
            ) % f.denominator
            frac = np.mod(
                np.longdouble(omega[i]) + resid.astype(np.longdouble) / f.denominator,
                np.longdouble(1.0),
            )
        else:
            frac = np.mod(
                np.longdouble(omega[i]) + nvals * c.longdouble(), np.longdouble(1.0)
            )
        inners += a_ld[i] * frac
    vals = np.exp(-2j * np.pi * inners.astype(float))
    # tolerance-collapse: cluster along sorted order, represent each cluster
    # by its earliest n
    order = np.argsort(np.angle(vals), kind="stable")
    kept_idx: list[int] = []
    cluster_rep = None
    for idx in order:
        v = vals[idx]
        if cluster_rep is None or abs(v - cluster_rep) > tolerance:
            kept_idx.append(int(idx))
            cluster_rep = v
        else:
            if idx < kept_idx[-1]:
                kept_idx[-1] = int(idx)
    # wraparound: first and last clusters on the angle circle may coincide
    if len(kept_idx) > 1 and abs(vals[kept_idx[0]] - vals[kept_idx[-1]]) <= tolerance:
        kept_idx[0] = min(kept_idx[0], kept_idx[-1])
        kept_idx.pop()
    kept_idx.sort()
    return [complex(vals[i]) for i in kept_idx]


def cluster_sets_match(
    c1: ClusterSet,
    c2_points,
    tolerance: float = 1e-8,
) -> bool:
    """Existential comparison of the two cluster-set descriptions.

    The first description is known only up to a unimodular prefactor (the
    base-point constants are not materialized); the match succeeds when some
    rotation carries the first set onto the sampled second one.  A
    full-circle first set is compatible with anything; a finite one requires
    the sample to realize exactly its rotated points.
    """
    pts2 = [complex(v) for v in c2_points]
    if c1.kind == "full-circle":
        return True
    if not pts2:
        return False
    base = c1.points[0]
    for anchor in pts2:
        rho = anchor / base
        rotated = [rho * v for v in c1.points]
        if all(
            any(abs(r - v) <= tolerance for v in pts2) for r in rotated
        ) and all(
            any(abs(r - v) <= tolerance for r in rotated) for v in pts2
        ):
            return True
    return False


def rigidity_scan(
    p: TrigPolynomial,
    alpha: tuple[Coordinate, ...],
    beta: tuple[Coordinate, ...],
    lattice_shifts,
) -> list[tuple[tuple[int, ...], float]]:
    """Defect dist(<l, beta>, Z) for each integer shift l.

    All defects vanishing is the rigidity conclusion beta in Z^d; any nonzero
    defect certifies that the phase constraint fails for this (alpha, beta),
    so no dependence of the assumed shape can exist.
    """
    d = len(beta)
    if len(alpha) != d or p.dimension != 2 * d:
        raise ValueError("dimension mismatch")
    out = []
    for shift in lattice_shifts:
        shift = tuple(int(s) for s in shift)
        if len(shift) != d:
            raise ValueError(f"shift {shift} has wrong length")
        if not any(shift):
            raise ValueError("shifts must be nonzero")
        rat = Fraction(0)
        irr = np.longdouble(0.0)
        exact = True
        for s, c in zip(shift, beta):
            if s == 0:
                continue
            if c.is_rational:
                rat += s * c.fraction
            else:
                exact = False
                irr += np.longdouble(s) * c.longdouble()
        if exact:
            frac = rat - math.floor(rat)
            defect = float(min(frac, 1 - frac))
        else:
            total = irr + np.longdouble(rat.numerator) / np.longdouble(rat.denominator)
            defect = float(abs(total - np.rint(total)))
        out.append((shift, defect))
    return out
