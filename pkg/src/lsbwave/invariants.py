"""Symmetry-induced two-point currents and the invariant mapping matrix.

For a potential symmetric under x -> xbar = sigma*x + rho within a domain,
the mixed bilinears

    q[m,n]  = (sigma*phi_m(x)*phi_n'(xbar) - phi_m'(x)*phi_n(xbar)) / 2i

are constant throughout the domain for any pair of solutions at the same
energy.  Packed into a 2x2 matrix they map the basis vector between
symmetry-related points: phi(xbar) = Q phi(x), with det Q = sigma.  This
module computes those currents, assembles Q, and provides the domainwise
constancy check used by the verification suite.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import DegenerateBasisError, InputError, NumericalError
from .integrator import DEFAULT_TOL, StateVector, eval_basis, integrate_cell
from .potential import (DomainSpec, PotentialSpec, TransformKind,
                        transform_point)

# Imaginary parts of trace and discriminant are provably zero for bases
# similarity-equivalent to a real one; anything above noise is a bug.
_IMAG_NOISE = 1e-9


@dataclass(frozen=True)
class MixedCurrents:
    """The two mixed two-point currents plus the one-point currents."""

    q: complex
    q_tilde: complex
    j_m: float
    j_n: float
    sigma: int


def _point_current(s: StateVector) -> float:
    # (psi* psi' - psi*' psi)/2i  ==  Im(psi* psi')
    return float(np.imag(np.conjugate(s.value) * s.derivative))


def two_point_currents(m_at_x: StateVector, n_at_xbar: StateVector,
                       sigma: int) -> MixedCurrents:
    """Mixed currents of solution m at x and solution n at the image point."""
    if sigma not in (-1, 1):
        raise InputError("sigma must be +1 or -1")
    half_i = 1.0 / 2.0j
    q = half_i * (sigma * m_at_x.value * n_at_xbar.derivative
                  - m_at_x.derivative * n_at_xbar.value)
    q_tilde = half_i * (sigma * np.conjugate(m_at_x.value) * n_at_xbar.derivative
                        - np.conjugate(m_at_x.derivative) * n_at_xbar.value)
    return MixedCurrents(complex(q), complex(q_tilde),
                         _point_current(m_at_x), _point_current(n_at_xbar), sigma)


def check_relation(c: MixedCurrents) -> float:
    """Residual of the constraint |q~|^2 - |q|^2 = j_m * j_n.

    Valid for Hermitian (real-potential) problems only; for complex
    potentials the constraint has no established analogue here.
    """
    return abs(abs(c.q_tilde) ** 2 - abs(c.q) ** 2 - c.j_m * c.j_n)


@dataclass(frozen=True)
class QMatrix:
    """Basis mapping matrix between symmetry-related points.

    ``trace`` and ``delta`` (= (tr/2)^2 - sigma) are stored as reals after
    truncating numerically negligible imaginary parts.
    """

    entries: np.ndarray
    sigma: int
    trace: float
    delta: float
    wronskian: complex

    @property
    def det(self) -> complex:
        e = self.entries
        return e[0, 0] * e[1, 1] - e[0, 1] * e[1, 0]


def _realify(z: complex, what: str) -> float:
    if abs(z.imag) > _IMAG_NOISE * max(1.0, abs(z)):
        raise NumericalError("invariants", what,
                             f"imaginary part {z.imag:.3e} exceeds noise threshold")
    return float(z.real)


def q_matrix(basis_at_x: tuple[StateVector, StateVector],
             basis_at_xbar: tuple[StateVector, StateVector],
             sigma: int) -> QMatrix:
    """Assemble Q from the four mixed currents of a basis pair.

    ``basis_at_x`` supplies the Wronskian; it must be nonsingular since the
    mapping matrix carries a 1/w factor.
    """
    s1, s2 = basis_at_x
    w = s1.value * s2.derivative - s2.value * s1.derivative
    scale = max(abs(s1.value), abs(s1.derivative), abs(s2.value), abs(s2.derivative))
    if abs(w) <= 1e-12 * max(1.0, scale * scale):
        raise DegenerateBasisError("invariants", "wronskian", "basis degenerate")

    def q(m: StateVector, n: StateVector) -> complex:
        return two_point_currents(m, n, sigma).q

    t1, t2 = basis_at_xbar
    q11 = q(s1, t1)
    q12 = q(s1, t2)
    q21 = q(s2, t1)
    q22 = q(s2, t2)
    entries = (2.0j / w) * np.array([[-q21, q11], [-q22, q12]], dtype=complex)
    tr = _realify(entries[0, 0] + entries[1, 1], "trace")
    delta = (0.5 * tr) ** 2 - sigma
    return QMatrix(entries, sigma, tr, float(delta), complex(w))


def map_basis(Q: QMatrix, phi_at_x: tuple[StateVector, StateVector]) -> tuple[complex, complex]:
    """Map basis values from x to the symmetry-related point: Q @ phi(x)."""
    v = Q.entries @ np.array([phi_at_x[0].value, phi_at_x[1].value])
    return (complex(v[0]), complex(v[1]))


def map_basis_state(Q: QMatrix, phi_at_x: tuple[StateVector, StateVector],
                    xbar: float) -> tuple[StateVector, StateVector]:
    """Full state mapping: values via Q, derivatives via sigma*Q (chain rule)."""
    vals = Q.entries @ np.array([phi_at_x[0].value, phi_at_x[1].value])
    ders = Q.sigma * (Q.entries @ np.array([phi_at_x[0].derivative,
                                            phi_at_x[1].derivative]))
    return (StateVector(complex(vals[0]), complex(ders[0]), xbar),
            StateVector(complex(vals[1]), complex(ders[1]), xbar))


def _complex_diameter(values: np.ndarray) -> float:
    d = np.abs(values[:, None] - values[None, :])
    return float(d.max())


def check_invariance(p: PotentialSpec, d: DomainSpec, E: float,
                     n_pairs: int = 100, tol: float = DEFAULT_TOL) -> float:
    """Spread of each mixed current over symmetry-related pairs in a domain.

    The basis is integrated across the full domain (this is a verification
    diagnostic, not the production path) and q[m,n](x, xbar) is sampled at
    ``n_pairs`` points; the result is the largest diameter over the four
    (m, n) combinations.  For a truly symmetric domain it sits at the
    integration-noise level.
    """
    if d.transform.kind is TransformKind.NONE:
        raise InputError("domain declares no symmetry to check")
    a, b = d.bounds
    basis = integrate_cell(p, E, (a, b), tol=tol)
    if d.transform.kind is TransformKind.TRANSLATION:
        hi = b - d.transform.length
    else:
        hi = b
    span = hi - a
    xs = a + span * (np.arange(n_pairs) + 0.5) / n_pairs
    sigma = d.transform.sigma
    samples = np.empty((4, n_pairs), dtype=complex)
    for k, x in enumerate(xs):
        xbar = transform_point(d.transform, float(x))
        s = eval_basis(basis, float(x))
        t = eval_basis(basis, xbar)
        for idx, (m, n) in enumerate(((0, 0), (0, 1), (1, 0), (1, 1))):
            samples[idx, k] = two_point_currents(s[m], t[n], sigma).q
    return max(_complex_diameter(samples[i]) for i in range(4))
