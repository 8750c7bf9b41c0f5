"""Exception hierarchy shared across the solver pipeline.

Two failure families matter to callers (and to the CLI exit codes):
``InputError`` for malformed or physically inadmissible requests, and
``NumericalError`` for breakdowns detected while computing.  Numerical
failures always name the module, the domain index (when one applies) and
the quantity that broke, so a batch run can be diagnosed from the message
alone.
"""

from __future__ import annotations


class LsbwaveError(Exception):
    """Base class for all package errors."""


class InputError(LsbwaveError):
    """Bad configuration, schema violation, or inadmissible request."""


class NumericalError(LsbwaveError):
    """A computation failed; message names module, domain and quantity."""

    def __init__(self, module: str, quantity: str, detail: str,
                 domain_index: int | None = None):
        self.module = module
        self.quantity = quantity
        self.detail = detail
        self.domain_index = domain_index
        where = f"{module}" if domain_index is None else f"{module}: domain {domain_index}"
        super().__init__(f"{where}: {quantity}: {detail}")


class SymmetryValidationError(InputError):
    """A declared domain symmetry does not hold on the supplied profile."""


class ClosedChannelError(InputError):
    """Scattering requested at an energy below a lead potential."""


class DegenerateBasisError(NumericalError):
    """Basis pair became (numerically) linearly dependent."""


class ZeroCurrentError(NumericalError):
    """Single-state amplitude mapping requested where the current vanishes."""


class ScaleOverflowError(NumericalError):
    """Eigenvalue power exceeds floating-point range (long evanescent domain)."""
