"""Single-cell integration of the stationary wave equation.

The second-order equation -psi''/2 + V psi = E psi is integrated as a
first-order complex system for two independent solutions at once, using an
adaptive high-order Runge-Kutta stepper with dense output.  The resulting
:class:`CellBasis` can be evaluated (value and derivative) anywhere in its
cell, which is all the downstream symmetry machinery ever needs.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable

import numpy as np
from scipy.integrate import solve_ivp

from .errors import DegenerateBasisError, InputError
from .potential import PotentialSpec, evaluate_potential

DEFAULT_TOL = 1e-10


@dataclass(frozen=True)
class StateVector:
    """Wave amplitude and derivative at one position."""

    value: complex
    derivative: complex
    position: float

    def __post_init__(self):
        if not (np.isfinite(self.value) and np.isfinite(self.derivative)
                and np.isfinite(self.position)):
            raise InputError("state vector has non-finite components")


def _as_callable(p) -> Callable[[float], float]:
    if isinstance(p, PotentialSpec):
        return lambda x: evaluate_potential(p, x)
    if callable(p):
        return p
    raise InputError("potential must be a PotentialSpec or a callable")


@dataclass(frozen=True)
class CellBasis:
    """Two independent solutions over one cell, with dense output.

    The components phi1, phi2 start from ``init1``/``init2`` at the left
    endpoint.  The default unit initial conditions (1,0), (0,1) give a unit
    Wronskian, which keeps the invariant-matrix construction well scaled.
    """

    interval: tuple[float, float]
    energy: float
    init1: StateVector
    init2: StateVector
    tol: float
    _dense: object
    nfev: int
    n_steps: int

    @property
    def x_left(self) -> float:
        return self.interval[0]

    @property
    def x_right(self) -> float:
        return self.interval[1]

    def _clamp(self, x: float) -> float:
        a, b = self.interval
        fuzz = 1e-12 * max(1.0, abs(a), abs(b))
        if x < a - fuzz or x > b + fuzz:
            raise InputError(f"evaluation point {x} outside cell interval [{a}, {b}]")
        return min(max(x, a), b)


def integrate_cell(p, E: float, interval: tuple[float, float],
                   init1: StateVector | None = None,
                   init2: StateVector | None = None,
                   tol: float = DEFAULT_TOL) -> CellBasis:
    """Integrate two basis solutions across ``interval`` from the left edge.

    ``p`` may be a :class:`PotentialSpec` or any callable V(x).  Initial
    conditions default to (1,0) and (0,1).  The pair must be linearly
    independent; a singular initial pair is rejected because every later
    construction divides by the Wronskian.
    """
    a, b = float(interval[0]), float(interval[1])
    if not b > a:
        raise InputError("cell interval must be increasing")
    if init1 is None:
        init1 = StateVector(1.0 + 0j, 0.0 + 0j, a)
    if init2 is None:
        init2 = StateVector(0.0 + 0j, 1.0 + 0j, a)
    for init in (init1, init2):
        if abs(init.position - a) > 1e-9 * max(1.0, abs(a)):
            raise InputError("initial conditions must sit at the interval's left endpoint")
    det = init1.value * init2.derivative - init2.value * init1.derivative
    scale = max(abs(init1.value), abs(init1.derivative),
                abs(init2.value), abs(init2.derivative))
    if abs(det) <= 1e-12 * max(1.0, scale * scale):
        raise DegenerateBasisError("integrator", "initial conditions",
                                   "linearly dependent initial conditions")

    V = _as_callable(p)
    two_e = 2.0 * E

    def rhs(x, y):
        f = 2.0 * V(x) - two_e
        return (y[1], f * y[0], y[3], f * y[2])

    y0 = np.array([init1.value, init1.derivative,
                   init2.value, init2.derivative], dtype=complex)
    sol = solve_ivp(rhs, (a, b), y0, method="DOP853", rtol=tol, atol=tol,
                    dense_output=True)
    if not sol.success:
        raise DegenerateBasisError("integrator", "cell integration", sol.message)
    return CellBasis((a, b), float(E), init1, init2, tol, sol.sol,
                     int(sol.nfev), len(sol.t) - 1)


def eval_basis(b: CellBasis, x: float) -> tuple[StateVector, StateVector]:
    """Dense-output values and derivatives of both components at x."""
    xc = b._clamp(float(x))
    y = b._dense(xc)
    return (StateVector(complex(y[0]), complex(y[1]), xc),
            StateVector(complex(y[2]), complex(y[3]), xc))


def wronskian(b: CellBasis, x: float) -> complex:
    """phi1*phi2' - phi2*phi1' at x (constant along the cell)."""
    s1, s2 = eval_basis(b, x)
    return s1.value * s2.derivative - s2.value * s1.derivative
