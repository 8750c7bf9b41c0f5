"""Piecewise potentials with a declared decomposition into symmetry domains.

A potential is a contiguous list of domains, each carrying a symmetry
transform (inversion through a point, translation by one period, or none),
a cell count, and a profile for its first cell.  The full profile is
generated from the first cell by repeated application of the transform, so
the declared symmetry holds exactly by construction.  An import path for
externally sampled full-domain profiles exists as well; those are checked
by :func:`validate_symmetry` instead of being trusted.

Constant lead potentials extend the profile to the whole real line.
"""

from __future__ import annotations

import enum
import math
from bisect import bisect_right
from dataclasses import dataclass, field
from typing import Callable, Sequence

import numpy as np
from scipy.interpolate import CubicSpline

from .errors import InputError, SymmetryValidationError

_EDGE_FUZZ = 1e-12


class TransformKind(enum.Enum):
    INVERSION = "inversion"
    TRANSLATION = "translation"
    NONE = "none"


@dataclass(frozen=True)
class SymmetryTransform:
    """Linear coordinate map x -> sigma*x + rho restricted to one domain.

    Inversion through alpha: sigma=-1, rho=2*alpha.  Translation by a
    period ``length``: sigma=+1, rho=length.  ``NONE`` carries sigma=0 and
    cannot be applied.
    """

    kind: TransformKind
    alpha: float | None = None
    length: float | None = None

    def __post_init__(self):
        if self.kind is TransformKind.INVERSION:
            if self.alpha is None:
                raise InputError("inversion transform requires an inversion center")
        elif self.kind is TransformKind.TRANSLATION:
            if self.length is None or self.length <= 0:
                raise InputError("translation transform requires a positive period")

    @classmethod
    def inversion(cls, alpha: float) -> "SymmetryTransform":
        return cls(TransformKind.INVERSION, alpha=float(alpha))

    @classmethod
    def translation(cls, length: float) -> "SymmetryTransform":
        return cls(TransformKind.TRANSLATION, length=float(length))

    @classmethod
    def none(cls) -> "SymmetryTransform":
        return cls(TransformKind.NONE)

    @property
    def sigma(self) -> int:
        if self.kind is TransformKind.INVERSION:
            return -1
        if self.kind is TransformKind.TRANSLATION:
            return 1
        return 0

    @property
    def rho(self) -> float:
        if self.kind is TransformKind.INVERSION:
            return 2.0 * self.alpha
        if self.kind is TransformKind.TRANSLATION:
            return self.length
        return 0.0


def transform_point(t: SymmetryTransform, x: float) -> float:
    """Apply the symmetry map once: 2*alpha - x or x + length."""
    if t.kind is TransformKind.NONE:
        raise InputError("no transform declared")
    return t.sigma * x + t.rho


def transform_power(t: SymmetryTransform, x: float, m: int) -> float:
    """Apply the map m times (negative m applies the inverse)."""
    if t.kind is TransformKind.NONE:
        raise InputError("no transform declared")
    if m == 0:
        return x
    sigma, rho = t.sigma, t.rho
    if sigma == 1:
        return x + m * rho
    # involution: odd powers act once, even powers are the identity
    return sigma * x + rho if m % 2 else x


# ---------------------------------------------------------------------------
# First-cell profiles


@dataclass(frozen=True)
class ConstantProfile:
    value: float

    def evaluate(self, x: float, a: float, b: float) -> float:
        return self.value


@dataclass(frozen=True)
class LinearProfile:
    """Linear ramp from ``start`` at the cell's left edge to ``end`` at the right."""

    start: float
    end: float

    def evaluate(self, x: float, a: float, b: float) -> float:
        s = (x - a) / (b - a)
        return self.start + (self.end - self.start) * s


@dataclass(frozen=True)
class CosineProfile:
    """offset + amplitude*cos(2*pi*(x - cell_start)/period + phase)."""

    amplitude: float
    period: float
    phase: float = 0.0
    offset: float = 0.0

    def __post_init__(self):
        if self.period <= 0:
            raise InputError("cosine profile requires period > 0")

    def evaluate(self, x: float, a: float, b: float) -> float:
        return self.offset + self.amplitude * math.cos(
            2.0 * math.pi * (x - a) / self.period + self.phase)


@dataclass(frozen=True)
class GaussianProfile:
    """height * exp(-(x - center)^2 / (2 width^2)), center in absolute coordinates."""

    height: float
    center: float
    width: float

    def __post_init__(self):
        if self.width <= 0:
            raise InputError("gaussian profile requires width > 0")

    def evaluate(self, x: float, a: float, b: float) -> float:
        u = (x - self.center) / self.width
        return self.height * math.exp(-0.5 * u * u)


@dataclass(frozen=True)
class SamplesProfile:
    """Cubic interpolation (clamped ends) through (position, value) samples."""

    positions: tuple[float, ...]
    values: tuple[float, ...]
    _spline: CubicSpline = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        xs = np.asarray(self.positions, dtype=float)
        vs = np.asarray(self.values, dtype=float)
        if xs.ndim != 1 or xs.shape != vs.shape or xs.size < 2:
            raise InputError("samples profile needs matching 1-d position/value tables")
        if np.any(np.diff(xs) <= 0):
            raise InputError("sample positions must be strictly increasing")
        if not (np.all(np.isfinite(xs)) and np.all(np.isfinite(vs))):
            raise InputError("sample table contains non-finite entries")
        object.__setattr__(self, "_spline",
                           CubicSpline(xs, vs, bc_type="clamped"))

    def covers(self, a: float, b: float) -> bool:
        fuzz = _EDGE_FUZZ * max(1.0, abs(a), abs(b))
        return self.positions[0] <= a + fuzz and self.positions[-1] >= b - fuzz

    def evaluate(self, x: float, a: float, b: float) -> float:
        return float(self._spline(x))


CellProfile = (ConstantProfile | LinearProfile | CosineProfile
               | GaussianProfile | SamplesProfile)


# ---------------------------------------------------------------------------
# Domains and the assembled potential


@dataclass(frozen=True)
class DomainSpec:
    """One domain: bounds, symmetry transform, cell count and first-cell profile.

    ``full_profile`` is the import path: a callable evaluated directly at x
    for the whole domain, with the declared symmetry checked rather than
    generated.  Exactly one of ``first_cell_profile`` / ``full_profile``
    must be set.
    """

    bounds: tuple[float, float]
    transform: SymmetryTransform
    cell_count: int
    first_cell_profile: CellProfile | None = None
    full_profile: Callable[[float], float] | None = None

    def __post_init__(self):
        a, b = self.bounds
        if not (math.isfinite(a) and math.isfinite(b) and b > a):
            raise InputError(f"domain bounds must be a finite increasing interval, got {self.bounds}")
        if (self.first_cell_profile is None) == (self.full_profile is None):
            raise InputError("exactly one of first_cell_profile/full_profile required")
        kind = self.transform.kind
        if kind is TransformKind.INVERSION:
            if self.cell_count != 2:
                raise InputError("inversion domains have exactly 2 cells")
            mid = 0.5 * (a + b)
            if abs(self.transform.alpha - mid) > 1e-9 * max(1.0, abs(b - a)):
                raise InputError("inversion center must be the domain midpoint")
            object.__setattr__(self, "transform", SymmetryTransform.inversion(mid))
        elif kind is TransformKind.TRANSLATION:
            if self.cell_count < 2:
                raise InputError("translation domains need at least 2 cells")
            period = (b - a) / self.cell_count
            if abs(self.transform.length - period) > 1e-9 * max(1.0, b - a):
                raise InputError("domain length must equal cell_count * period")
            object.__setattr__(self, "transform", SymmetryTransform.translation(period))
        else:
            if self.cell_count != 1:
                raise InputError("unstructured domains have a single cell")
        if isinstance(self.first_cell_profile, SamplesProfile):
            ca, cb = a, a + self.cell_length
            if not self.first_cell_profile.covers(ca, cb):
                raise InputError("sample positions must cover the full first cell")

    # -- convenience constructors ------------------------------------------

    @classmethod
    def inversion(cls, bounds, profile) -> "DomainSpec":
        a, b = bounds
        return cls((float(a), float(b)), SymmetryTransform.inversion(0.5 * (a + b)),
                   2, profile)

    @classmethod
    def translation(cls, bounds, cells: int, profile) -> "DomainSpec":
        a, b = bounds
        return cls((float(a), float(b)),
                   SymmetryTransform.translation((b - a) / cells), cells, profile)

    @classmethod
    def unstructured(cls, bounds, profile) -> "DomainSpec":
        return cls((float(bounds[0]), float(bounds[1])), SymmetryTransform.none(),
                   1, profile)

    # -- geometry ------------------------------------------------------------

    @property
    def cell_length(self) -> float:
        return (self.bounds[1] - self.bounds[0]) / self.cell_count

    def cell_index(self, x: float) -> int:
        """1-based index of the cell containing x (clamped at the edges)."""
        a, _ = self.bounds
        l = int((x - a) / self.cell_length) + 1
        return min(max(l, 1), self.cell_count)

    def fold_to_first_cell(self, x: float) -> tuple[float, int]:
        """Map x to the equivalent first-cell point; returns (y, cell_index)."""
        l = self.cell_index(x)
        if l == 1 or self.transform.kind is TransformKind.NONE:
            return x, l
        y = transform_power(self.transform, x, -(l - 1))
        a = self.bounds[0]
        y = min(max(y, a), a + self.cell_length)
        return y, l

    def profile_value(self, x: float) -> float:
        if self.full_profile is not None:
            return float(self.full_profile(x))
        y, _ = self.fold_to_first_cell(x)
        a = self.bounds[0]
        return self.first_cell_profile.evaluate(y, a, a + self.cell_length)


def cell_bounds(d: DomainSpec, l: int) -> tuple[float, float]:
    """Bounds of the l-th cell (1-based) of a domain."""
    if not 1 <= l <= d.cell_count:
        raise InputError(f"cell index {l} out of range 1..{d.cell_count}")
    a = d.bounds[0]
    c = d.cell_length
    return (a + (l - 1) * c, a + l * c)


@dataclass(frozen=True)
class PotentialSpec:
    """Full piecewise potential: ordered contiguous domains plus constant leads."""

    domains: tuple[DomainSpec, ...]
    lead_left: float = 0.0
    lead_right: float = 0.0

    def __post_init__(self):
        if not self.domains:
            raise InputError("potential needs at least one domain")
        object.__setattr__(self, "domains", tuple(self.domains))
        prev = None
        for d in self.domains:
            if prev is not None:
                gap = abs(d.bounds[0] - prev.bounds[1])
                if gap > 1e-9 * max(1.0, abs(prev.bounds[1])):
                    raise InputError("domains must be contiguous and ordered")
            prev = d

    @property
    def x_edges(self) -> tuple[float, ...]:
        return tuple([self.domains[0].bounds[0]] + [d.bounds[1] for d in self.domains])

    @property
    def x_left(self) -> float:
        return self.domains[0].bounds[0]

    @property
    def x_right(self) -> float:
        return self.domains[-1].bounds[1]

    def domain_index_at(self, x: float) -> int:
        """1-based domain index for x inside [x_left, x_right]."""
        edges = self.x_edges
        i = bisect_right(edges, x) - 1
        return min(max(i, 0), len(self.domains) - 1) + 1

    def __call__(self, x: float) -> float:
        return evaluate_potential(self, x)


def evaluate_potential(p: PotentialSpec, x: float) -> float:
    """V(x) anywhere on the real line (lead values outside the domains)."""
    if x < p.x_left:
        return p.lead_left
    if x > p.x_right:
        return p.lead_right
    d = p.domains[p.domain_index_at(x) - 1]
    return d.profile_value(x)


@dataclass(frozen=True)
class SymmetryReport:
    max_abs_deviation: float
    passed: bool


def validate_symmetry(p: PotentialSpec, d: DomainSpec, n_samples: int = 256,
                      tol: float = 1e-9) -> SymmetryReport:
    """Check |V(F(x)) - V(x)| over the domain's transform-applicable region.

    Translation transforms are only applicable on all cells but the last;
    inversion applies on the whole domain.  Domains without a transform
    pass vacuously.
    """
    if n_samples < 2:
        raise InputError("n_samples must be at least 2")
    if d.transform.kind is TransformKind.NONE:
        return SymmetryReport(0.0, True)
    a, b = d.bounds
    if d.transform.kind is TransformKind.TRANSLATION:
        b = b - d.transform.length
    xs = np.linspace(a, b, n_samples)
    dev = 0.0
    for x in xs:
        xbar = transform_point(d.transform, float(x))
        dev = max(dev, abs(evaluate_potential(p, xbar) - evaluate_potential(p, float(x))))
    return SymmetryReport(dev, dev <= tol)


def import_sampled_domain(bounds, transform: SymmetryTransform, cell_count: int,
                          positions: Sequence[float], values: Sequence[float],
                          n_check: int = 256, tol: float = 1e-9) -> DomainSpec:
    """Build a domain from full-domain samples, rejecting broken symmetry.

    The sample table must cover the whole domain.  The declared transform is
    validated against the interpolant; deviations above ``tol`` raise
    :class:`SymmetryValidationError` so modeling defects never reach the
    solver.
    """
    prof = SamplesProfile(tuple(float(v) for v in positions),
                          tuple(float(v) for v in values))
    a, b = float(bounds[0]), float(bounds[1])
    if not prof.covers(a, b):
        raise InputError("sample positions must cover the full domain")
    d = DomainSpec((a, b), transform, cell_count, None,
                   full_profile=lambda x: prof.evaluate(x, a, b))
    probe = PotentialSpec((d,), lead_left=0.0, lead_right=0.0)
    report = validate_symmetry(probe, d, n_samples=n_check, tol=tol)
    if not report.passed:
        raise SymmetryValidationError(
            f"declared {transform.kind.value} symmetry violated: "
            f"max deviation {report.max_abs_deviation:.3e} exceeds {tol:.3e}")
    return d
