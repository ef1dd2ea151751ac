"""Truncated matrices of weighted composition operators.

An operator is a pair (weight, symbol): f -> weight * (f o symbol), with
symbol = None meaning multiplication alone (analytic Toeplitz) and weight = 1
meaning pure composition.  Matrices act on the normalized monomial basis
e_n = z^n / ||z^n||, so the (i, j) entry of the tall block is

    <A e_j, e_i> = c_i(weight * symbol^j) * ||z^i|| / ||z^j||,

the i-th Taylor coefficient of the analytic image of e_j, rescaled.  These
entries are exact up to rounding: truncation only ever discards rows.

Operator words (products of operators and adjoints) are evaluated on a larger
square block of order M and compressed to order N at the end; the policy
M >= 2N is enforced, and the default working order is max(8N, 160), doubled
when any symbol's image circle touches the unit circle.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import (
    InputError,
    NotSelfMapError,
    OrderPolicyError,
    UnboundedWeightError,
)
from .mobius import MoebiusMap
from .series import (
    AnalyticExpr,
    Exp,
    Poly,
    Power,
    PowerSeries,
    PrecomposeMoebius,
    Product,
    Rational,
    Scale,
    Sum,
    constant,
    evaluate,
    expr_from_json,
    expr_to_json,
    moebius_powers,
    tail_diagnostics,
    taylor,
)
from .space import SpaceSpec

_EXPR_TYPES = (Poly, Rational, Power, Exp, Sum, Product, Scale, PrecomposeMoebius)

#: Number of sample points and radius for the weight boundedness spot check.
WEIGHT_GRID_POINTS = 512
WEIGHT_GRID_RADIUS = 0.999
WEIGHT_BOUND_CAP = 1e12

#: Distance from the unit circle below which a symbol counts as touching it.
BOUNDARY_TOUCH_TOL = 1e-8

#: Baseline internal working order for operator words: max(8N, this floor).
MIN_INTERNAL_ORDER = 160

_SELF_MAP_TOL = 1e-9


@dataclass(frozen=True)
class OperatorSpec:
    """Weighted composition operator f -> weight * (f o symbol).

    symbol None means no composition (analytic Toeplitz operator).  The
    weight is spot-checked for boundedness on a circle of radius just under
    one; a sample above the cap (or a pole on the grid) is rejected, which
    catches honest mistakes but is not a boundedness proof.
    """

    weight: AnalyticExpr
    symbol: MoebiusMap | None = None

    def __post_init__(self) -> None:
        if not isinstance(self.weight, _EXPR_TYPES):
            raise InputError("weight must be an analytic expression")
        if self.symbol is not None:
            if not isinstance(self.symbol, MoebiusMap):
                raise InputError("symbol must be a linear fractional map or None")
            if not self.symbol.is_self_map(_SELF_MAP_TOL):
                raise NotSelfMapError("symbol must map the unit disk into itself")
        _check_weight_bounded(self.weight)

    def to_json(self) -> dict:
        return {
            "weight": expr_to_json(self.weight),
            "symbol": None if self.symbol is None else self.symbol.to_json(),
        }

    @staticmethod
    def from_json(obj: dict) -> "OperatorSpec":
        if not isinstance(obj, dict) or "weight" not in obj:
            raise InputError("operator JSON must be an object with a 'weight' key")
        weight = expr_from_json(obj["weight"])
        symbol = obj.get("symbol")
        return OperatorSpec(
            weight, None if symbol is None else MoebiusMap.from_json(symbol)
        )

    def describe(self) -> str:
        if self.symbol is None:
            return "toeplitz"
        if isinstance(self.weight, Poly) and self.weight.coeffs == (1 + 0j,):
            return "composition"
        return "weighted-composition"


def _check_weight_bounded(weight: AnalyticExpr) -> None:
    zs = WEIGHT_GRID_RADIUS * np.exp(
        2j * np.pi * np.arange(WEIGHT_GRID_POINTS) / WEIGHT_GRID_POINTS
    )
    worst = 0.0
    for z in zs:
        try:
            v = evaluate(weight, complex(z))
        except InputError as exc:
            raise UnboundedWeightError(f"weight has a pole near the unit circle: {exc}")
        except OverflowError:
            raise UnboundedWeightError(
                f"weight overflows near the unit circle (cap {WEIGHT_BOUND_CAP:g})"
            )
        av = abs(v)
        if not np.isfinite(av) or av > WEIGHT_BOUND_CAP:
            raise UnboundedWeightError(
                f"weight exceeds {WEIGHT_BOUND_CAP:g} on the sample circle"
            )
        worst = max(worst, av)


def composition(symbol: MoebiusMap) -> OperatorSpec:
    return OperatorSpec(constant(1.0), symbol)


def toeplitz(weight: AnalyticExpr) -> OperatorSpec:
    return OperatorSpec(weight, None)


def weighted(weight: AnalyticExpr, symbol: MoebiusMap) -> OperatorSpec:
    return OperatorSpec(weight, symbol)


def is_boundary_touching(op: OperatorSpec, tol: float = BOUNDARY_TOUCH_TOL) -> bool:
    """True when the symbol's image circle comes within tol of the unit circle."""
    if op.symbol is None:
        return False
    circle = op.symbol.image_circle()
    if circle is None:
        return True
    center, radius = circle
    return abs(center) + radius >= 1.0 - tol


def default_internal_order(N: int, ops: tuple[OperatorSpec, ...] | list) -> int:
    """Working order max(8N, 160), doubled for boundary-touching symbols."""
    M = max(8 * N, MIN_INTERNAL_ORDER)
    if any(is_boundary_touching(op) for op in ops):
        M *= 2
    return M


@dataclass(frozen=True, eq=False)
class TruncatedBlock:
    """Matrix of <A e_j, e_i> for i <= row_order, j <= col_order."""

    entries: np.ndarray
    space: SpaceSpec
    row_order: int
    col_order: int
    tail_flag: bool
    tail_estimate: float

    def __post_init__(self) -> None:
        arr = np.ascontiguousarray(np.asarray(self.entries, dtype=np.complex128))
        if arr.shape != (self.row_order + 1, self.col_order + 1):
            raise InputError("block shape does not match the declared orders")
        object.__setattr__(self, "entries", arr)

    def entry(self, i: int, j: int) -> complex:
        return complex(self.entries[i, j])

    def square(self) -> np.ndarray:
        """Leading square part, order min(row_order, col_order)."""
        k = min(self.row_order, self.col_order) + 1
        return self.entries[:k, :k]


def _column_tails(entries: np.ndarray) -> tuple[bool, float]:
    """Slow-decay flag and max crude tail bound over the columns."""
    rows = entries.shape[0]
    if rows < 17:
        return False, float("nan")
    slow = False
    worst = 0.0
    for j in range(entries.shape[1]):
        td = tail_diagnostics(PowerSeries(entries[:, j]))
        slow = slow or td.slow_decay
        worst = max(worst, td.bound)
    return slow, worst


def build_block(
    op: OperatorSpec, space: SpaceSpec, N: int, M: int | None = None
) -> TruncatedBlock:
    """Tall block with columns j = 0..N and rows i = 0..M (default M = N).

    Column j holds the Taylor coefficients of weight * symbol^j rescaled by
    the basis norms; entries are exact up to rounding.
    """
    if N < 0:
        raise InputError("column order must be nonnegative")
    if M is None:
        M = N
    if M < N:
        raise OrderPolicyError("row order must be at least the column order")
    bsq = space.basis_norms_sq(max(M, N))
    b = np.sqrt(bsq)
    psi = taylor(op.weight, M).coeffs
    entries = np.zeros((M + 1, N + 1), dtype=np.complex128)
    if op.symbol is None:
        for j in range(N + 1):
            entries[j:, j] = psi[: M + 1 - j]
    else:
        pows = moebius_powers(op.symbol, N, M)
        for j in range(N + 1):
            entries[:, j] = np.convolve(psi, pows[j].coeffs)[: M + 1]
    entries *= b[: M + 1][:, None]
    entries /= b[: N + 1][None, :]
    slow, worst = _column_tails(entries)
    flag = is_boundary_touching(op) or slow
    return TruncatedBlock(entries, space, M, N, flag, worst)


def adjoint_block(block: TruncatedBlock) -> TruncatedBlock:
    """Conjugate transpose; exact because P A* P = (P A P)* for compressions."""
    return TruncatedBlock(
        block.entries.conj().T,
        block.space,
        block.col_order,
        block.row_order,
        block.tail_flag,
        block.tail_estimate,
    )


def wide_block(
    op: OperatorSpec, space: SpaceSpec, N: int, M: int
) -> TruncatedBlock:
    """Block with rows i = 0..N and columns j = 0..M, built in O(N M) series
    work by powering the symbol at coefficient order N only."""
    if N < 0 or M < 0:
        raise InputError("orders must be nonnegative")
    bsq = space.basis_norms_sq(max(M, N))
    b = np.sqrt(bsq)
    psi = taylor(op.weight, N).coeffs
    entries = np.zeros((N + 1, M + 1), dtype=np.complex128)
    if op.symbol is None:
        for j in range(min(N, M) + 1):
            entries[j:, j] = psi[: N + 1 - j]
    else:
        base = taylor(
            Rational(Poly((op.symbol.b, op.symbol.a)), Poly((op.symbol.d, op.symbol.c))),
            N,
        ).coeffs
        cur = np.zeros(N + 1, dtype=np.complex128)
        cur[0] = 1.0
        for j in range(M + 1):
            entries[:, j] = np.convolve(psi, cur)[: N + 1]
            cur = np.convolve(cur, base)[: N + 1]
    entries *= b[: N + 1][:, None]
    entries /= b[: M + 1][None, :]
    return TruncatedBlock(entries, space, N, M, is_boundary_touching(op), float("nan"))


@dataclass(frozen=True)
class WordLetter:
    op: OperatorSpec
    adjoint: bool = False


OperatorWord = tuple[WordLetter, ...]


def plain(op: OperatorSpec) -> WordLetter:
    return WordLetter(op, False)


def adjoint_letter(op: OperatorSpec) -> WordLetter:
    return WordLetter(op, True)


def word_block(
    word: OperatorWord, space: SpaceSpec, N: int, M: int | None = None
) -> TruncatedBlock:
    """Compression to order N of a product of operator letters.

    Every letter is realized as a square block of order M (left to right in
    operator order: word[0] applied last), multiplied out at order M, and
    compressed at the very end.  Requires M >= 2N.
    """
    word = tuple(word)
    if not word:
        raise InputError("operator word must have at least one letter")
    if N < 0:
        raise InputError("compression order must be nonnegative")
    if M is None:
        M = default_internal_order(N, [w.op for w in word])
    if M < 2 * N:
        raise OrderPolicyError(f"word working order M={M} violates M >= 2N with N={N}")
    letters = []
    flags = []
    tails = []
    norms = []
    for w in word:
        blk = build_block(w.op, space, M, M)
        mat = blk.entries.conj().T if w.adjoint else blk.entries
        letters.append(mat)
        flags.append(blk.tail_flag)
        tails.append(0.0 if np.isnan(blk.tail_estimate) else blk.tail_estimate)
        norms.append(float(np.linalg.norm(mat, 2)))
    prod = letters[-1]
    for mat in reversed(letters[:-1]):
        prod = mat @ prod
    est = 0.0
    for k in range(len(letters)):
        other = 1.0
        for l, nl in enumerate(norms):
            if l != k:
                other *= nl
        est += tails[k] * other
    return TruncatedBlock(
        np.ascontiguousarray(prod[: N + 1, : N + 1]),
        space,
        N,
        N,
        any(flags),
        est,
    )


@dataclass(frozen=True, eq=False)
class GramPair:
    """G1 ~ compression of A*A, G2 ~ compression of AA*, with a crude bound
    on the truncation error of either."""

    g1: np.ndarray
    g2: np.ndarray
    tail_bound: float


def gram_blocks(
    op: OperatorSpec, space: SpaceSpec, N: int, M: int | None = None
) -> GramPair:
    """Order-N compressions of A*A (via a tall block) and AA* (via a wide
    block powered at coefficient order N).  Requires M >= 2N."""
    if M is None:
        M = default_internal_order(N, [op])
    if M < 2 * N:
        raise OrderPolicyError(f"gram working order M={M} violates M >= 2N with N={N}")
    tall = build_block(op, space, N, M)
    g1 = tall.entries.conj().T @ tall.entries
    g1 = 0.5 * (g1 + g1.conj().T)
    bound1 = 0.0
    if not np.isnan(tall.tail_estimate):
        for j in range(N + 1):
            td = tail_diagnostics(PowerSeries(tall.entries[:, j]))
            if np.isfinite(td.bound):
                bound1 += td.bound ** 2
            else:
                bound1 = float("inf")
                break
    wide = wide_block(op, space, N, M)
    g2 = wide.entries @ wide.entries.conj().T
    g2 = 0.5 * (g2 + g2.conj().T)
    colnorms = np.linalg.norm(wide.entries, axis=0)
    bound2 = _wide_tail_bound(colnorms)
    return GramPair(g1, g2, bound1 + bound2)


def _wide_tail_bound(colnorms: np.ndarray) -> float:
    """Crude bound on sum of squared column norms beyond the last column,
    from the decay rate of the final columns."""
    last = float(colnorms[-1])
    if last == 0.0:
        return 0.0
    k = min(8, len(colnorms) - 1)
    if k == 0:
        return float("inf")
    prev = float(colnorms[-1 - k])
    if prev <= 0.0 or last >= prev:
        return float("inf")
    r = (last / prev) ** (1.0 / k)
    r2 = r * r
    return last * last * r2 / (1.0 - r2)


def operator_norm_estimate(block: TruncatedBlock) -> float:
    """Largest singular value of the leading square part."""
    return float(np.linalg.norm(block.square(), 2))


def cowen_auxiliary_weights(
    symbol: MoebiusMap, gamma: float
) -> tuple[AnalyticExpr, AnalyticExpr]:
    """Auxiliary Toeplitz weights for the adjoint factorization.

    For phi = (az+b)/(cz+d) these are g = (-conj(b) z + conj(d))^(-gamma) and
    h = (cz + d)^gamma.  The representative is rescaled so d is a positive
    real, keeping both constant terms off the branch cut for any gamma; the
    factorization is invariant under that rescaling.
    """
    if abs(symbol.d) <= abs(symbol.c):
        raise NotSelfMapError("symbol must map the unit disk into itself")
    k = symbol.d.conjugate() / abs(symbol.d)
    a, b, c, d = symbol.a * k, symbol.b * k, symbol.c * k, symbol.d * k
    g = Power(Poly((d.conjugate(), -b.conjugate())), -float(gamma))
    h = Power(Poly((d, c)), float(gamma))
    return g, h


def cowen_adjoint_word(symbol: MoebiusMap, space: SpaceSpec) -> OperatorWord:
    """Word T_g C_sigma T_h* realizing the adjoint of C_symbol.

    sigma is the Krein adjoint map of the symbol (again a self-map), and g, h
    are the auxiliary weights for the space's kernel exponent.  The first and
    last letters are triangular, so compressions of this word are exact.
    """
    if not symbol.is_self_map(_SELF_MAP_TOL):
        raise NotSelfMapError("adjoint factorization requires a self-map")
    g, h = cowen_auxiliary_weights(symbol, space.gamma)
    sigma = symbol.krein_adjoint()
    return (plain(toeplitz(g)), plain(composition(sigma)), adjoint_letter(toeplitz(h)))


# -- export -------------------------------------------------------------------


def block_to_csv(block: TruncatedBlock) -> str:
    """Dense CSV with interleaved re/im columns per matrix column."""
    cols = []
    for j in range(block.col_order + 1):
        cols.append(f"re_{j}")
        cols.append(f"im_{j}")
    lines = [",".join(["i"] + cols)]
    for i in range(block.row_order + 1):
        row = [str(i)]
        for j in range(block.col_order + 1):
            v = block.entries[i, j]
            row.append("%.17g" % v.real)
            row.append("%.17g" % v.imag)
        lines.append(",".join(row))
    return "\n".join(lines) + "\n"


def block_header(block: TruncatedBlock) -> dict:
    return {
        "space": block.space.to_json(),
        "row_order": block.row_order,
        "col_order": block.col_order,
        "tail_flag": block.tail_flag,
        "tail_estimate": None
        if np.isnan(block.tail_estimate)
        else block.tail_estimate,
    }
