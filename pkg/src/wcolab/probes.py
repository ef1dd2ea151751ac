"""Structural probes: self-commutators, normality-class defects, adjoint
factorization witnesses, and the reproducing-kernel hyponormality test.

All probes work on order-N compressions computed from a larger internal
order M.  Sign conventions: the self-commutator block is (compression of
A*A) - (compression of AA*), so a hyponormal operator gives a positive
semidefinite block up to truncation, and a negative eigenvalue beyond the
tail bound certifies non-hyponormality (compressions of PSD operators are
PSD).  Nonnegativity, by contrast, is evidence only, never a proof.

The kernel test uses the adjoint identity A* K_w = conj(weight(w)) K_symbol(w):
chi(w) = ||A K_w||^2 - ||A* K_w||^2 is nonnegative whenever ||A* f|| <= ||A f||
holds for every f, so chi(w) < 0 beyond tolerance is another certificate of
non-hyponormality, one that needs no matrix truncation at all.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import InputError, OrderPolicyError
from .opmat import (
    OperatorSpec,
    OperatorWord,
    TruncatedBlock,
    adjoint_block,
    build_block,
    default_internal_order,
    gram_blocks,
    is_boundary_touching,
    operator_norm_estimate,
    word_block,
)
from .series import (
    PowerSeries,
    PrecomposeMoebius,
    Product,
    evaluate,
    series_norm,
    tail_diagnostics,
    taylor,
)
from .space import SpaceSpec, kernel_expr, kernel_norm_sq

#: Extra eigenvalue slack for solver rounding on order-one matrices.
ROUNDING_SLACK = 1e-12

#: Default starting series order for the kernel test, doubled on slow decay.
KERNEL_PROBE_ORDER = 512
KERNEL_PROBE_MAX_ORDER = 2048

#: Default w-grid: 8 radii by 16 angles.
KERNEL_GRID_RADII = 8
KERNEL_GRID_ANGLES = 16


def _spectral_norm(x: np.ndarray) -> float:
    return float(np.linalg.norm(x, 2))


def self_commutator(
    op: OperatorSpec, space: SpaceSpec, N: int, M: int | None = None
) -> tuple[np.ndarray, float]:
    """Hermitian block of A*A - AA* at order N, plus a crude tail bound."""
    pair = gram_blocks(op, space, N, M)
    h = pair.g1 - pair.g2
    h = 0.5 * (h + h.conj().T)
    return h, pair.tail_bound


@dataclass(frozen=True)
class HyponormalityEvidence:
    min_eig: float
    tail_bound: float
    certificate: bool  # True when min_eig is negative beyond bound + slack
    N: int
    M: int

    def to_json(self) -> dict:
        return {
            "min_eig": self.min_eig,
            "tail_bound": self.tail_bound,
            "certificate": self.certificate,
            "N": self.N,
            "M": self.M,
        }


def hyponormality_probe(
    op: OperatorSpec, space: SpaceSpec, N: int, M: int | None = None
) -> HyponormalityEvidence:
    """Minimum eigenvalue of the self-commutator block.

    A value below -(tail_bound + slack) certifies non-hyponormality; a
    nonnegative value is consistent with hyponormality but proves nothing.
    """
    if M is None:
        M = default_internal_order(N, [op])
    h, bound = self_commutator(op, space, N, M)
    eigs = np.linalg.eigvalsh(h)
    min_eig = float(eigs[0])
    slack = ROUNDING_SLACK * max(1.0, _spectral_norm(h))
    bound_eff = bound if math.isfinite(bound) else 0.0
    cert = min_eig < -(bound_eff + slack) and math.isfinite(bound)
    return HyponormalityEvidence(min_eig, bound, cert, N, M)


def quasinormality_defect(
    op: OperatorSpec, space: SpaceSpec, N: int, M: int | None = None
) -> float:
    """Norm of the order-N compression of A(A*A) - (A*A)A.

    Computed on a square block of order M >= 2N + 16 before compressing, so
    the commutator sees the operator well beyond the reported window.
    """
    if M is None:
        M = max(default_internal_order(N, [op]), 2 * N + 16)
    if M < 2 * N + 16:
        raise OrderPolicyError(
            f"quasinormality working order M={M} violates M >= 2N + 16 with N={N}"
        )
    s = build_block(op, space, M, M).entries
    g = s.conj().T @ s
    d = s @ g - g @ s
    return _spectral_norm(d[: N + 1, : N + 1])


def normality_defect(
    op: OperatorSpec, space: SpaceSpec, N: int, M: int | None = None
) -> float:
    """Norm of the self-commutator block."""
    h, _ = self_commutator(op, space, N, M)
    return _spectral_norm(h)


def selfadjoint_defect(op: OperatorSpec, space: SpaceSpec, N: int) -> float:
    """Norm of S - S* on the order-N square block (entries are exact)."""
    s = build_block(op, space, N, N).entries
    return _spectral_norm(s - s.conj().T)


def unitary_defect(
    op: OperatorSpec, space: SpaceSpec, N: int, M: int | None = None
) -> float:
    """max(||A*A - I||, ||AA* - I||) on order-N compressions."""
    pair = gram_blocks(op, space, N, M)
    eye = np.eye(N + 1)
    return max(_spectral_norm(pair.g1 - eye), _spectral_norm(pair.g2 - eye))


@dataclass(frozen=True)
class DefectReport:
    """One-stop summary of the normality-class defects of an operator."""

    min_eig_selfcomm: float
    norm_selfcomm: float
    quasinormal_defect: float
    selfadjoint_defect: float
    unitary_defect: float
    N: int
    M: int
    tail_bound: float
    flags: tuple[str, ...]

    def to_json(self) -> dict:
        return {
            "min_eig_selfcomm": self.min_eig_selfcomm,
            "norm_selfcomm": self.norm_selfcomm,
            "quasinormal_defect": self.quasinormal_defect,
            "selfadjoint_defect": self.selfadjoint_defect,
            "unitary_defect": self.unitary_defect,
            "N": self.N,
            "M": self.M,
            "tail_bound": self.tail_bound,
            "flags": list(self.flags),
        }


def defect_report(
    op: OperatorSpec, space: SpaceSpec, N: int, M: int | None = None
) -> DefectReport:
    if M is None:
        M = max(default_internal_order(N, [op]), 2 * N + 16)
    pair = gram_blocks(op, space, N, M)
    h = 0.5 * ((pair.g1 - pair.g2) + (pair.g1 - pair.g2).conj().T)
    eigs = np.linalg.eigvalsh(h)
    min_eig = float(eigs[0])
    eye = np.eye(N + 1)
    flags = []
    if is_boundary_touching(op):
        flags.append("boundary-touching-symbol")
    if math.isfinite(pair.tail_bound) and abs(min_eig) <= pair.tail_bound:
        flags.append("min-eig-within-tail-bound")
    if not math.isfinite(pair.tail_bound):
        flags.append("tail-bound-unavailable")
    return DefectReport(
        min_eig_selfcomm=min_eig,
        norm_selfcomm=_spectral_norm(h),
        quasinormal_defect=quasinormality_defect(op, space, N, max(M, 2 * N + 16)),
        selfadjoint_defect=selfadjoint_defect(op, space, N),
        unitary_defect=max(_spectral_norm(pair.g1 - eye), _spectral_norm(pair.g2 - eye)),
        N=N,
        M=M,
        tail_bound=pair.tail_bound,
        flags=tuple(flags),
    )


@dataclass(frozen=True)
class DouglasWitness:
    """Range-inclusion witness: a word C with A* ~ C A and ||C|| <= 1 shows
    ran(A*) is contained in ran(A), the operator-theoretic footprint of
    hyponormality."""

    norm_estimate: float
    residual: float
    N: int
    M: int

    def to_json(self) -> dict:
        return {
            "norm_estimate": self.norm_estimate,
            "residual": self.residual,
            "N": self.N,
            "M": self.M,
        }


def douglas_witness(
    contraction: OperatorWord,
    op: OperatorSpec,
    space: SpaceSpec,
    N: int,
    M: int | None = None,
) -> DouglasWitness:
    """Check ||C|| <= 1 and A* = C A at order N for a candidate word C."""
    from .opmat import plain  # local to avoid polluting the module surface

    word = tuple(contraction)
    if M is None:
        M = default_internal_order(N, [w.op for w in word] + [op])
    cblk = word_block(word, space, N, M)
    ca = word_block(word + (plain(op),), space, N, M)
    target = adjoint_block(build_block(op, space, N, N))
    residual = _spectral_norm(ca.entries - target.entries)
    return DouglasWitness(operator_norm_estimate(cblk), residual, N, M)


@dataclass(frozen=True)
class KernelProbePoint:
    w: complex
    chi: float
    order: int
    slow_decay: bool

    def to_json(self) -> dict:
        return {
            "w": [self.w.real, self.w.imag],
            "chi": self.chi,
            "order": self.order,
            "slow_decay": self.slow_decay,
        }


def default_kernel_grid() -> list[complex]:
    """8 radii from 0.1 to 0.95 times 16 equally spaced angles."""
    radii = np.linspace(0.1, 0.95, KERNEL_GRID_RADII)
    angles = 2.0 * np.pi * np.arange(KERNEL_GRID_ANGLES) / KERNEL_GRID_ANGLES
    return [complex(r * np.cos(t), r * np.sin(t)) for r in radii for t in angles]


def kernel_condition_probe(
    op: OperatorSpec,
    space: SpaceSpec,
    w_grid: list[complex] | None = None,
    order: int = KERNEL_PROBE_ORDER,
) -> list[KernelProbePoint]:
    """Evaluate chi(w) = ||A K_w||^2 - ||A* K_w||^2 over a grid of kernel points.

    The first term is a series norm of weight * (K_w o symbol) (truncated,
    hence a slight undercount); the second is exact from the reproducing
    identity A* K_w = conj(weight(w)) K_symbol(w).  chi(w) < 0 beyond
    tolerance certifies non-hyponormality.  The series order doubles, up to a
    cap, while the truncation shows slow decay.
    """
    if w_grid is None:
        w_grid = default_kernel_grid()
    out = []
    for w in w_grid:
        w = complex(w)
        if abs(w) >= 1.0:
            raise InputError("kernel grid points must lie in the open unit disk")
        if op.symbol is None:
            composed = kernel_expr(space, w)
            image = w
        else:
            composed = PrecomposeMoebius(kernel_expr(space, w), op.symbol)
            image = op.symbol.apply(w)
        expr = Product((op.weight, composed))
        m = int(order)
        while True:
            s = taylor(expr, m)
            td = tail_diagnostics(s)
            if not td.slow_decay or m >= KERNEL_PROBE_MAX_ORDER:
                break
            m *= 2
        lhs = series_norm(s, space) ** 2
        wval = evaluate(op.weight, w)
        rhs = abs(wval) ** 2 * kernel_norm_sq(space, image)
        out.append(KernelProbePoint(w, float(lhs - rhs), m, td.slow_decay))
    return out
