"""Numerical laboratory for weighted composition operators on Hardy and
weighted Bergman spaces of the unit disk.

The package realizes operators f -> weight * (f o symbol), with linear
fractional symbols, as truncated matrices in the normalized monomial basis,
and builds structural probes (self-commutators, quasinormality defects,
adjoint factorizations, kernel tests) and spectral diagnostics on top.  The
`scenarios` module bundles reproducible experiments; the `wcolab` command
line exposes classification, blocks, probes, spectra, and scenarios.
"""

from .errors import (
    BranchError,
    ConstraintError,
    DegenerateMapError,
    InputError,
    NotParabolicError,
    NotSelfMapError,
    OrderPolicyError,
    PoleAtOriginError,
    UnboundedWeightError,
    UnknownScenarioError,
    WcolabError,
)

__version__ = "0.1.0"

__all__ = [
    "BranchError",
    "ConstraintError",
    "DegenerateMapError",
    "InputError",
    "NotParabolicError",
    "NotSelfMapError",
    "OrderPolicyError",
    "PoleAtOriginError",
    "UnboundedWeightError",
    "UnknownScenarioError",
    "WcolabError",
    "__version__",
]
