"""Hardy and weighted Bergman spaces of the unit disk.

A space is determined by the squared norms of the monomials z^n.  The Hardy
space has ||z^n||^2 = 1; the Bergman space with radial weight parameter
alpha > -1 satisfies the ratio recurrence

    ||z^(n+1)||^2 / ||z^n||^2 = (n + 1) / (n + alpha + 2),  ||z^0||^2 = 1.

Both families share reproducing kernels of binomial type
K_w(z) = (1 - conj(w) z)^(-gamma) with kernel exponent gamma = 1 for Hardy
and gamma = alpha + 2 for Bergman, and ||K_w||^2 = (1 - |w|^2)^(-gamma).
"""

from __future__ import annotations

import functools
from dataclasses import dataclass

import numpy as np

from .errors import InputError
from .series import AnalyticExpr, Poly, Power

HARDY = "hardy"
BERGMAN = "bergman"


@dataclass(frozen=True)
class SpaceSpec:
    kind: str
    alpha: float = 0.0

    def __post_init__(self) -> None:
        if self.kind not in (HARDY, BERGMAN):
            raise InputError(f"unknown space kind {self.kind!r}")
        object.__setattr__(self, "alpha", float(self.alpha))
        if self.kind == HARDY and self.alpha != 0.0:
            raise InputError("the Hardy space takes no weight parameter")
        if self.kind == BERGMAN and self.alpha <= -1.0:
            raise InputError("Bergman weight parameter must satisfy alpha > -1")

    @property
    def gamma(self) -> float:
        """Kernel exponent: K_w(z) = (1 - conj(w) z)^(-gamma)."""
        return 1.0 if self.kind == HARDY else self.alpha + 2.0

    def basis_norm_sq(self, n: int) -> float:
        """Squared norm of the monomial z^n."""
        if n < 0:
            raise InputError("monomial degree must be nonnegative")
        return float(self.basis_norms_sq(n)[n])

    def basis_norms_sq(self, order: int) -> np.ndarray:
        """Read-only array of ||z^n||^2 for n = 0..order."""
        if order < 0:
            raise InputError("order must be nonnegative")
        return _norms_sq_cached(self.kind, self.alpha, int(order))

    def label(self) -> str:
        if self.kind == HARDY:
            return "hardy"
        return f"bergman:{self.alpha:g}"

    def to_json(self) -> dict:
        if self.kind == HARDY:
            return {"kind": HARDY}
        return {"kind": BERGMAN, "alpha": self.alpha}

    @staticmethod
    def from_json(obj: dict) -> "SpaceSpec":
        if not isinstance(obj, dict) or "kind" not in obj:
            raise InputError("space JSON must be an object with a 'kind' key")
        kind = obj["kind"]
        if kind == HARDY:
            return hardy()
        if kind == BERGMAN:
            return bergman(float(obj.get("alpha", 0.0)))
        raise InputError(f"unknown space kind {kind!r}")

    @staticmethod
    def parse(text: str) -> "SpaceSpec":
        """Parse 'hardy', 'bergman', or 'bergman:<alpha>'."""
        text = text.strip().lower()
        if text == HARDY:
            return hardy()
        if text == BERGMAN:
            return bergman(0.0)
        if text.startswith(BERGMAN + ":"):
            try:
                return bergman(float(text.split(":", 1)[1]))
            except ValueError as exc:
                raise InputError(f"bad Bergman weight parameter: {exc}")
        raise InputError(f"cannot parse space {text!r}; use hardy or bergman:<alpha>")


def hardy() -> SpaceSpec:
    return SpaceSpec(HARDY)


def bergman(alpha: float = 0.0) -> SpaceSpec:
    return SpaceSpec(BERGMAN, alpha)


@functools.lru_cache(maxsize=256)
def _norms_sq_cached(kind: str, alpha: float, order: int) -> np.ndarray:
    if kind == HARDY:
        out = np.ones(order + 1)
    else:
        n = np.arange(order, dtype=np.float64)
        ratios = (n + 1.0) / (n + alpha + 2.0)
        out = np.concatenate(([1.0], np.cumprod(ratios)))
    out.flags.writeable = False
    return out


def kernel_expr(space: SpaceSpec, w: complex) -> AnalyticExpr:
    """Reproducing kernel K_w as an analytic expression; requires |w| < 1."""
    w = complex(w)
    if abs(w) >= 1.0:
        raise InputError("kernel point must lie in the open unit disk")
    return Power(Poly((1.0, -w.conjugate())), -space.gamma)


def kernel_norm_sq(space: SpaceSpec, w: complex) -> float:
    """Exact squared norm ||K_w||^2 = (1 - |w|^2)^(-gamma)."""
    w = complex(w)
    if abs(w) >= 1.0:
        raise InputError("kernel point must lie in the open unit disk")
    return float((1.0 - abs(w) ** 2) ** (-space.gamma))
