"""Exact/float coordinate arithmetic, torus reduction, deterministic summation,
and one-dimensional quadrature.

Coordinates are either exact rationals (stored as ``fractions.Fraction`` in
lowest terms) or tagged irrationals (a float64 value plus an optional label
such as ``"sqrt2"``).  Known labels expand to extended-precision
(``np.longdouble``) constants so that long orbit sums keep more headroom than
float64 would allow.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Iterable, Sequence

import numpy as np

from .errors import NumericalFailure

__all__ = [
    "Coordinate",
    "TorusPoint",
    "QuadratureSpec",
    "reduce_mod1",
    "frac_int_split",
    "stable_sum",
    "integrate_1d",
    "mod1_dist",
    "parse_coordinate",
    "coordinate_from_json",
    "coordinate_to_json",
]

# Extended-precision expansions for the labels the CLI accepts.  Strings are
# parsed by numpy at longdouble precision (64-bit mantissa on x86).
_LABEL_LONGDOUBLE: dict[str, np.longdouble] = {
    "sqrt2": np.sqrt(np.longdouble(2)),
    "sqrt3": np.sqrt(np.longdouble(3)),
    "sqrt5": np.sqrt(np.longdouble(5)),
    "pi": np.longdouble("3.14159265358979323846264338328"),
    "e": np.longdouble("2.71828182845904523536028747135"),
}


class Coordinate:
    """An exact rational or a tagged irrational real number.

    Rational coordinates support exact arithmetic (orbit periods, annihilator
    lattices); irrational ones carry a float plus an optional label.  Equality
    is *exact*: a rational never equals an irrational, even if their float
    values coincide.
    """

    __slots__ = ("_frac", "_value", "label")

    def __init__(self, _frac: Fraction | None, _value: float, label: str | None):
        self._frac = _frac
        self._value = _value
        self.label = label

    @classmethod
    def rational(cls, numerator: int, denominator: int = 1) -> "Coordinate":
        frac = Fraction(numerator, denominator)
        return cls(frac, float(frac), None)

    @classmethod
    def from_fraction(cls, frac: Fraction) -> "Coordinate":
        return cls(Fraction(frac), float(frac), None)

    @classmethod
    def irrational(cls, value: float, label: str | None = None) -> "Coordinate":
        if not math.isfinite(value):
            raise ValueError("irrational coordinate must carry a finite value")
        base = label.lstrip("-") if label else None
        if base in _LABEL_LONGDOUBLE:
            canon = float(_LABEL_LONGDOUBLE[base])
            if label.startswith("-"):
                canon = -canon
            if abs(value - canon) > 1e-6:
                raise ValueError(
                    f"value {value} does not match label {label!r} ({canon})"
                )
            value = canon
        return cls(None, float(value), label)

    @property
    def is_rational(self) -> bool:
        return self._frac is not None

    @property
    def fraction(self) -> Fraction:
        if self._frac is None:
            raise ValueError("coordinate is not rational")
        return self._frac

    def float(self) -> float:
        return self._value

    def longdouble(self) -> np.longdouble:
        if self._frac is not None:
            return np.longdouble(self._frac.numerator) / np.longdouble(
                self._frac.denominator
            )
        base = self.label.lstrip("-") if self.label else None
        if base in _LABEL_LONGDOUBLE:
            ld = _LABEL_LONGDOUBLE[base]
            return -ld if self.label.startswith("-") else ld
        return np.longdouble(self._value)

    def __neg__(self) -> "Coordinate":
        if self._frac is not None:
            return Coordinate.from_fraction(-self._frac)
        if self.label is None:
            return Coordinate.irrational(-self._value, None)
        neg = self.label[1:] if self.label.startswith("-") else "-" + self.label
        return Coordinate(None, -self._value, neg)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Coordinate):
            return NotImplemented
        if self.is_rational != other.is_rational:
            return False
        if self.is_rational:
            return self._frac == other._frac
        return self._value == other._value and self.label == other.label

    def __hash__(self) -> int:
        if self.is_rational:
            return hash(("rat", self._frac))
        return hash(("irr", self._value, self.label))

    def __repr__(self) -> str:
        if self.is_rational:
            return f"Coordinate({self._frac})"
        tag = f", label={self.label!r}" if self.label else ""
        return f"Coordinate({self._value}{tag})"


def parse_coordinate(token: str) -> Coordinate:
    """Parse a command-line coordinate token.

    Grammar: an integer (``3``, ``-2``), a rational ``p/q``, a known label
    (``sqrt2``, ``sqrt3``, ``sqrt5``, ``pi``, ``e``, optionally ``-``-prefixed)
    or an explicitly irrational float ``irr:1.234``.  Bare floats are rejected
    so exactness is always declared.
    """
    token = token.strip()
    if not token:
        raise ValueError("empty coordinate token")
    base = token.lstrip("-")
    if base in _LABEL_LONGDOUBLE:
        value = float(_LABEL_LONGDOUBLE[base])
        if token.startswith("-"):
            return Coordinate.irrational(-value, token)
        return Coordinate.irrational(value, token)
    if token.startswith("irr:"):
        return Coordinate.irrational(float(token[4:]), None)
    if "/" in token:
        num, den = token.split("/", 1)
        return Coordinate.rational(int(num), int(den))
    try:
        return Coordinate.rational(int(token))
    except ValueError:
        raise ValueError(
            f"coordinate token {token!r} not understood: use an integer, p/q, "
            "a label (sqrt2, sqrt3, sqrt5, pi, e), or irr:FLOAT"
        ) from None


def coordinate_from_json(obj) -> Coordinate:
    """Decode a coordinate from the JSON configuration grammar:
    an integer, a string ``"p/q"``, or ``{"value": float, "label": str}``."""
    if isinstance(obj, bool):
        raise ValueError(f"invalid coordinate {obj!r}")
    if isinstance(obj, int):
        return Coordinate.rational(obj)
    if isinstance(obj, str):
        return parse_coordinate(obj)
    if isinstance(obj, dict) and "value" in obj:
        return Coordinate.irrational(float(obj["value"]), obj.get("label"))
    raise ValueError(f"invalid coordinate {obj!r}")


def coordinate_to_json(c: Coordinate):
    if c.is_rational:
        f = c.fraction
        if f.denominator == 1:
            return int(f.numerator)
        return f"{f.numerator}/{f.denominator}"
    out = {"value": c.float()}
    if c.label is not None:
        out["label"] = c.label
    return out


@dataclass(frozen=True)
class TorusPoint:
    """A point of [0,1)^m stored as float64 coordinates."""

    coords: tuple[float, ...]

    def __post_init__(self):
        for c in self.coords:
            if not (0.0 <= c < 1.0):
                raise ValueError(f"torus coordinate {c} outside [0,1)")

    def __len__(self) -> int:
        return len(self.coords)

    def __getitem__(self, i: int) -> float:
        return self.coords[i]

    def array(self) -> np.ndarray:
        return np.asarray(self.coords, dtype=float)


@dataclass(frozen=True)
class QuadratureSpec:
    """Which 1-D quadrature rule to use and at what base resolution."""

    scheme: str = "composite-midpoint"
    points_per_axis: int = 256
    refine_near_singularity: bool = False

    def __post_init__(self):
        if self.scheme not in ("composite-midpoint", "gauss-legendre"):
            raise ValueError(f"unknown quadrature scheme {self.scheme!r}")
        if self.points_per_axis < 2:
            raise ValueError("points-per-axis must be at least 2")


def reduce_mod1(v: Sequence[float] | np.ndarray) -> TorusPoint:
    """Reduce a real vector into the fundamental domain [0,1)^m (floor-based,
    so negative inputs land in [0,1) too)."""
    arr = np.asarray(v, dtype=float)
    if arr.ndim != 1:
        raise ValueError("expected a flat coordinate vector")
    if not np.all(np.isfinite(arr)):
        raise ValueError("non-finite coordinate in torus reduction")
    red = arr - np.floor(arr)
    # floats just below an integer can round up to exactly 1.0
    red[red >= 1.0] -= 1.0
    return TorusPoint(tuple(float(x) for x in red))


def frac_int_split(v: float) -> tuple[float, int]:
    """Split v into (fractional part in [0,1), integer part) with
    frac + int == v up to rounding."""
    if not math.isfinite(v):
        raise ValueError("non-finite input to frac_int_split")
    ip = math.floor(v)
    frac = v - ip
    if frac >= 1.0:
        frac -= 1.0
        ip += 1
    return frac, ip


def mod1_dist(x: float) -> float:
    """Distance from x to the nearest integer."""
    f = x - math.floor(x)
    return min(f, 1.0 - f)


def stable_sum(terms: Iterable[complex]) -> complex:
    """Compensated left-to-right summation; bit-reproducible for a fixed
    input order.  Real and imaginary parts are accumulated with exactly
    rounded partial sums."""
    res = []
    ims = []
    for t in terms:
        c = complex(t)
        res.append(c.real)
        ims.append(c.imag)
    return complex(math.fsum(res), math.fsum(ims))


def _gauss_legendre_01(n: int) -> tuple[np.ndarray, np.ndarray]:
    nodes, weights = np.polynomial.legendre.leggauss(n)
    return 0.5 * (nodes + 1.0), 0.5 * weights


def _adaptive_cell(
    f: Callable[[float], float],
    lo: float,
    hi: float,
    depth: int,
    max_depth: int,
    tol: float,
) -> float:
    h = hi - lo
    mid = 0.5 * (lo + hi)
    v = f(mid)
    coarse = h * v
    vl = f(lo + 0.25 * h)
    vr = f(lo + 0.75 * h)
    fine = 0.5 * h * (vl + vr)
    finite = math.isfinite(coarse) and math.isfinite(fine)
    if finite and (abs(fine - coarse) <= tol * max(1.0, abs(fine)) or depth >= max_depth):
        return fine
    if depth >= max_depth:
        raise NumericalFailure(
            f"quadrature cell [{lo}, {hi}] failed to converge "
            f"(non-finite or oscillatory integrand near x={mid})"
        )
    return _adaptive_cell(f, lo, mid, depth + 1, max_depth, tol) + _adaptive_cell(
        f, mid, hi, depth + 1, max_depth, tol
    )


def integrate_1d(f: Callable[[float], float], spec: QuadratureSpec) -> float:
    """Quadrature of f over [0,1].

    ``composite-midpoint`` uses N equal cells (spectrally accurate for smooth
    periodic integrands); with ``refine_near_singularity`` each cell is
    bisected adaptively, which handles integrable log singularities.
    ``gauss-legendre`` is a single n-point panel, exact for polynomials of
    degree <= 2n-1.  A NaN at a node with refinement disabled raises
    NumericalFailure naming the node.
    """
    n = spec.points_per_axis
    if spec.scheme == "gauss-legendre":
        nodes, weights = _gauss_legendre_01(n)
        vals = []
        for x, wgt in zip(nodes, weights):
            v = f(float(x))
            if not math.isfinite(v):
                raise NumericalFailure(f"integrand non-finite at node x={float(x)}")
            vals.append(wgt * v)
        return math.fsum(vals)

    h = 1.0 / n
    if not spec.refine_near_singularity:
        vals = []
        for j in range(n):
            x = (j + 0.5) * h
            v = f(x)
            if not math.isfinite(v):
                raise NumericalFailure(f"integrand non-finite at node x={x}")
            vals.append(v)
        return math.fsum(vals) * h
    pieces = [
        _adaptive_cell(f, j * h, (j + 1) * h, 0, 40, 1e-12) for j in range(n)
    ]
    return math.fsum(pieces)
