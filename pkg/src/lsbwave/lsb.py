"""Local symmetry basis: diagonalizing the mapping matrix per domain.

The two eigenvalues z+- of the mapping matrix Q classify how solutions
replicate from cell to cell: +-1 for inversion (even/odd pairs), a unimodular
conjugate pair exp(+-i k L) inside allowed bands of a periodic domain, a
real reciprocal pair exp(+-kappa L) inside gaps, and a double root when the
discriminant vanishes.  Rows of the change-of-basis matrix S are left
eigenvectors of Q; in the resulting basis chi = S phi the mapping is
diagonal, so propagation across l cells is just multiplication by z**(l-1).

The double-root case may leave Q non-diagonalizable; we then keep the full
matrix and propagate by explicit matrix powers instead of forcing a basis
that does not exist.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass

import numpy as np

from .errors import InputError, NumericalError, ScaleOverflowError
from .integrator import (DEFAULT_TOL, CellBasis, StateVector, eval_basis,
                         integrate_cell)
from .invariants import QMatrix, q_matrix
from .potential import (DomainSpec, PotentialSpec, TransformKind, cell_bounds,
                        transform_power)

PARITY = "parity"
PROPAGATING = "propagating"
EVANESCENT = "evanescent"
DEGENERATE = "degenerate"


@dataclass(frozen=True)
class LSBTransform:
    """Eigen-decomposition of a domain's mapping matrix.

    ``bloch_k`` / ``kappa`` are per-length rates (phase or decay divided by
    the cell length used to build Q).  For the degenerate double root the
    full matrix is retained in ``q_full`` and ``degenerate_z`` records the
    repeated eigenvalue (+1 or -1).
    """

    s: np.ndarray
    z_plus: complex
    z_minus: complex
    classification: str
    delta: float
    sigma: int
    bloch_k: float | None = None
    kappa: float | None = None
    degenerate_z: float | None = None
    q_full: np.ndarray | None = None

    @property
    def q_chi(self) -> np.ndarray:
        """Mapping matrix in the chi basis: diagonal except in the degenerate case."""
        if self.classification == DEGENERATE:
            return self.q_full
        return np.diag([self.z_plus, self.z_minus])


def default_degeneracy_tol(Q: QMatrix) -> float:
    return 1e-10 * max(1.0, (0.5 * Q.trace) ** 2)


def diagonalize_q(Q: QMatrix, tol_deg: float | None = None,
                  cell_length: float = 1.0) -> LSBTransform:
    """Eigenvalues, classification and row-eigenvector matrix S for Q.

    Deterministic labeling: z+ is the root with positive imaginary part
    (propagating), with modulus above one (evanescent), or +1 (inversion).
    Rows of S are rescaled so their largest-modulus entry is 1; observables
    downstream are invariant under that scaling.
    """
    if tol_deg is None:
        tol_deg = default_degeneracy_tol(Q)
    det = Q.det
    if abs(det - Q.sigma) > 1e-6 * max(1.0, abs(Q.trace)):
        raise NumericalError("lsb", "det Q",
                             f"determinant {det:.6e} inconsistent with sigma={Q.sigma}")

    half_tr = 0.5 * Q.trace
    delta = Q.delta

    if Q.sigma == 1 and abs(delta) <= tol_deg:
        z = 1.0 if half_tr >= 0 else -1.0
        return LSBTransform(np.eye(2, dtype=complex), complex(z), complex(z),
                            DEGENERATE, delta, Q.sigma, degenerate_z=z,
                            q_full=Q.entries.copy())

    if Q.sigma == -1:
        classification = PARITY
        z_plus = complex(half_tr + math.sqrt(delta))
        bloch_k = kappa = None
    elif delta < 0.0:
        classification = PROPAGATING
        z_plus = complex(half_tr, math.sqrt(-delta))
        bloch_k = math.atan2(math.sqrt(-delta), half_tr) / cell_length
        kappa = None
    else:
        classification = EVANESCENT
        root = math.sqrt(delta)
        z_plus = complex(half_tr + root if half_tr >= 0 else half_tr - root)
        bloch_k = None
        kappa = math.log(abs(z_plus)) / cell_length
    z_minus = Q.trace - z_plus

    a, b = Q.entries[0, 0], Q.entries[0, 1]
    c, d = Q.entries[1, 0], Q.entries[1, 1]
    off_scale = max(abs(b), abs(c))
    if off_scale <= 1e-14 * max(1.0, abs(a), abs(d)):
        # Q already diagonal; identity rows, swapped if needed so that the
        # first row tracks z_plus.
        s = np.eye(2, dtype=complex)
        if abs(a - z_plus) > abs(d - z_plus):
            s = s[::-1].copy()
    else:
        def left_row(z: complex) -> np.ndarray:
            if abs(b) >= abs(c):
                row = np.array([z - d, b], dtype=complex)
            else:
                row = np.array([c, z - a], dtype=complex)
            return row / row[np.argmax(np.abs(row))]

        s = np.vstack([left_row(z_plus), left_row(z_minus)])
    return LSBTransform(s, z_plus, z_minus, classification, delta, Q.sigma,
                        bloch_k=bloch_k, kappa=kappa)


@dataclass(frozen=True)
class DomainLSB:
    """Symmetry-adapted first-cell basis of one domain.

    chi = S phi lives on the first cell; eigenvalue powers extend it across
    the rest of the domain.  Domains without symmetry keep chi = phi and no
    transform.
    """

    domain: DomainSpec
    phi: CellBasis
    transform: LSBTransform | None
    q: QMatrix | None

    @property
    def s(self) -> np.ndarray:
        if self.transform is None:
            return np.eye(2, dtype=complex)
        return self.transform.s

    @property
    def cell_count(self) -> int:
        return self.domain.cell_count

    def chi_at(self, x: float) -> tuple[StateVector, StateVector]:
        """chi values/derivatives at a first-cell point."""
        p1, p2 = eval_basis(self.phi, x)
        s = self.s
        vals = s @ np.array([p1.value, p2.value])
        ders = s @ np.array([p1.derivative, p2.derivative])
        return (StateVector(complex(vals[0]), complex(ders[0]), p1.position),
                StateVector(complex(vals[1]), complex(ders[1]), p1.position))

    def rescaled(self, s_plus: complex, s_minus: complex) -> "DomainLSB":
        """Rescale the chi rows; the mapping eigenvalues are unaffected."""
        if s_plus == 0 or s_minus == 0:
            raise InputError("row scales must be nonzero")
        if self.transform is None:
            raise InputError("unstructured domain has no symmetry basis to rescale")
        if self.transform.classification == DEGENERATE:
            raise InputError("degenerate domain keeps its full mapping matrix; "
                             "row rescaling undefined")
        t = self.transform
        new_t = LSBTransform(np.diag([s_plus, s_minus]) @ t.s, t.z_plus, t.z_minus,
                             t.classification, t.delta, t.sigma,
                             bloch_k=t.bloch_k, kappa=t.kappa)
        return DomainLSB(self.domain, self.phi, new_t, self.q)


def build_domain_lsb(p: PotentialSpec, d: DomainSpec, E: float,
                     tol: float = DEFAULT_TOL,
                     domain_index: int | None = None) -> DomainLSB:
    """Integrate the first cell, build Q at its convenient points, diagonalize.

    For translation domains Q is evaluated at the first cell's endpoints;
    for inversion domains at the one-sided limits of the inversion center
    (both supplied by the left cell's terminal values).  Unstructured
    domains return chi = phi with no transform.
    """
    first = cell_bounds(d, 1)
    phi = integrate_cell(p, E, first, tol=tol)
    if d.transform.kind is TransformKind.NONE:
        return DomainLSB(d, phi, None, None)
    if d.transform.kind is TransformKind.TRANSLATION:
        at_x = eval_basis(phi, first[0])
        at_xbar = eval_basis(phi, first[1])
    else:
        alpha = d.transform.alpha
        at_x = eval_basis(phi, alpha)
        at_xbar = at_x
    try:
        Q = q_matrix(at_x, at_xbar, d.transform.sigma)
        transform = diagonalize_q(Q, cell_length=d.cell_length)
    except NumericalError as err:
        if err.domain_index is None and domain_index is not None:
            raise type(err)(err.module, err.quantity,
                            err.args[0].split(": ", 2)[-1],
                            domain_index=domain_index) from err
        raise
    return DomainLSB(d, phi, transform, Q)


def _scalar_power(z: complex, m: int, what: str,
                  domain_index: int | None) -> complex:
    if m == 0:
        return 1.0 + 0j
    try:
        out = z ** m
    except OverflowError:
        out = complex(math.inf)
    if not (np.isfinite(out.real) and np.isfinite(out.imag)):
        raise ScaleOverflowError("lsb", what,
                                 f"|z|^{m} exceeds floating-point range "
                                 f"(z = {z:.6g})", domain_index=domain_index)
    return out


def propagation_matrix(lsb: DomainLSB, l: int,
                       domain_index: int | None = None) -> np.ndarray:
    """Mapping-matrix power carrying chi from cell 1 to cell l."""
    if not 1 <= l <= lsb.cell_count:
        raise InputError(f"cell index {l} out of range 1..{lsb.cell_count}")
    if lsb.transform is None or l == 1:
        return np.eye(2, dtype=complex)
    t = lsb.transform
    if t.classification == DEGENERATE:
        return np.linalg.matrix_power(t.q_full, l - 1)
    zp = _scalar_power(t.z_plus, l - 1, "z_plus power", domain_index)
    zm = _scalar_power(t.z_minus, l - 1, "z_minus power", domain_index)
    return np.diag([zp, zm])


def propagate_chi(lsb: DomainLSB, l: int, x: float) -> tuple[StateVector, StateVector]:
    """chi in cell l: eigenvalue powers applied to the back-transformed
    first-cell profile; derivatives pick the sign of the chain rule."""
    if not 1 <= l <= lsb.cell_count:
        raise InputError(f"cell index {l} out of range 1..{lsb.cell_count}")
    lo, hi = cell_bounds(lsb.domain, l)
    fuzz = 1e-9 * max(1.0, abs(lo), abs(hi))
    if x < lo - fuzz or x > hi + fuzz:
        raise InputError(f"point {x} not inside cell {l} = [{lo}, {hi}]")
    if l == 1:
        return lsb.chi_at(x)
    y = transform_power(lsb.domain.transform, x, -(l - 1))
    a0 = lsb.domain.bounds[0]
    y = min(max(y, a0), a0 + lsb.domain.cell_length)
    c1, c2 = lsb.chi_at(y)
    P = propagation_matrix(lsb, l)
    sign = lsb.domain.transform.sigma ** (l - 1)
    vals = P @ np.array([c1.value, c2.value])
    ders = sign * (P @ np.array([c1.derivative, c2.derivative]))
    return (StateVector(complex(vals[0]), complex(ders[0]), x),
            StateVector(complex(vals[1]), complex(ders[1]), x))
