"""Formal power series engine over a small analytic-expression AST.

Expressions are built from polynomials, rational functions, principal-branch
powers, exponentials, sums, products, scalar multiples, and precomposition
with a linear fractional map.  `taylor` turns an expression into coefficients
to a requested order using classical recurrences:

  * rational functions by long division,
  * products by Cauchy convolution,
  * Exp by the derivative recurrence e' = s' e,
  * Power by the Euler recurrence (b p' = gamma b' p),
  * precomposition by eliminating the map first: a linear fractional
    substitution turns polynomial and rational leaves into new rational
    leaves and pushes through every other node, so no numerical composition
    is ever performed.

All constant-term constraints (nonzero denominators and power bases, branch
position) are checked at construction time.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from typing import Union

import numpy as np

from .errors import BranchError, InputError, PoleAtOriginError
from .mobius import MoebiusMap

_ZERO_REL = 1e-14

#: Half-power ratio above which a truncation is flagged as slowly decaying.
SLOW_DECAY_RATIO = 0.95


def _as_coeff_tuple(coeffs) -> tuple[complex, ...]:
    out = tuple(complex(c) for c in coeffs)
    return out if out else (0j,)


@dataclass(frozen=True)
class Poly:
    """Polynomial sum(coeffs[k] * z**k)."""

    coeffs: tuple[complex, ...]

    def __post_init__(self) -> None:
        object.__setattr__(self, "coeffs", _as_coeff_tuple(self.coeffs))

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1


@dataclass(frozen=True)
class Rational:
    """Quotient num/den of polynomials; den must not vanish at 0."""

    num: Poly
    den: Poly

    def __post_init__(self) -> None:
        num = self.num if isinstance(self.num, Poly) else Poly(self.num)
        den = self.den if isinstance(self.den, Poly) else Poly(self.den)
        object.__setattr__(self, "num", num)
        object.__setattr__(self, "den", den)
        scale = max(abs(c) for c in den.coeffs)
        if scale == 0.0 or abs(den.coeffs[0]) <= _ZERO_REL * scale:
            raise InputError("rational denominator vanishes at the expansion point 0")


@dataclass(frozen=True)
class Power:
    """Principal-branch power base**exponent with real exponent.

    The base must not vanish at 0.  For a non-integer exponent the constant
    term must stay off the closed negative real axis, where the principal
    branch is discontinuous.
    """

    base: "AnalyticExpr"
    exponent: float

    def __post_init__(self) -> None:
        exp = self.exponent
        if isinstance(exp, complex):
            if abs(exp.imag) > 0.0:
                raise InputError("power exponent must be real")
            exp = exp.real
        object.__setattr__(self, "exponent", float(exp))
        b0 = evaluate(self.base, 0.0)
        if abs(b0) == 0.0:
            raise InputError("power base vanishes at the expansion point 0")
        if not float(self.exponent).is_integer():
            if b0.real < 0.0 and abs(b0.imag) <= _ZERO_REL * abs(b0):
                raise BranchError(
                    "non-integer power of a base whose constant term lies on the branch cut"
                )


@dataclass(frozen=True)
class Exp:
    arg: "AnalyticExpr"


@dataclass(frozen=True)
class Sum:
    terms: tuple["AnalyticExpr", ...]

    def __post_init__(self) -> None:
        terms = tuple(self.terms)
        if not terms:
            raise InputError("sum needs at least one term")
        object.__setattr__(self, "terms", terms)


@dataclass(frozen=True)
class Product:
    factors: tuple["AnalyticExpr", ...]

    def __post_init__(self) -> None:
        factors = tuple(self.factors)
        if not factors:
            raise InputError("product needs at least one factor")
        object.__setattr__(self, "factors", factors)


@dataclass(frozen=True)
class Scale:
    factor: complex
    inner: "AnalyticExpr"

    def __post_init__(self) -> None:
        object.__setattr__(self, "factor", complex(self.factor))


@dataclass(frozen=True)
class PrecomposeMoebius:
    """The composition inner(map(z)); the map must be finite at 0."""

    inner: "AnalyticExpr"
    map: MoebiusMap

    def __post_init__(self) -> None:
        if abs(self.map.d) <= _ZERO_REL * self.map.coeff_scale():
            raise PoleAtOriginError("linear fractional map has its pole at 0")


AnalyticExpr = Union[Poly, Rational, Power, Exp, Sum, Product, Scale, PrecomposeMoebius]


def constant(value: complex) -> Poly:
    return Poly((complex(value),))


def monomial(n: int, coeff: complex = 1.0) -> Poly:
    if n < 0:
        raise InputError("monomial degree must be nonnegative")
    return Poly((0j,) * n + (complex(coeff),))


# -- numeric evaluation ----------------------------------------------------


def evaluate(e: AnalyticExpr, z: complex) -> complex:
    """Evaluate the expression at a single finite point.

    Powers with non-integer exponent use the principal branch pointwise, so
    away from the expansion point this may differ from the analytic
    continuation of the series by a branch jump; series work never relies on
    pointwise values except at 0.
    """
    z = complex(z)
    if isinstance(e, Poly):
        acc = 0j
        for c in reversed(e.coeffs):
            acc = acc * z + c
        return acc
    if isinstance(e, Rational):
        den = evaluate(e.den, z)
        if abs(den) == 0.0:
            raise InputError("evaluation at a pole of a rational expression")
        return evaluate(e.num, z) / den
    if isinstance(e, Power):
        b = evaluate(e.base, z)
        if float(e.exponent).is_integer():
            n = int(e.exponent)
            if n < 0 and abs(b) == 0.0:
                raise InputError("negative power of zero")
            return b ** n
        if abs(b) == 0.0:
            raise InputError("fractional power of zero")
        return cmath.exp(e.exponent * cmath.log(b))
    if isinstance(e, Exp):
        return cmath.exp(evaluate(e.arg, z))
    if isinstance(e, Sum):
        return sum(evaluate(t, z) for t in e.terms)
    if isinstance(e, Product):
        acc = 1 + 0j
        for f in e.factors:
            acc *= evaluate(f, z)
        return acc
    if isinstance(e, Scale):
        return e.factor * evaluate(e.inner, z)
    if isinstance(e, PrecomposeMoebius):
        return evaluate(e.inner, e.map.apply(z))
    raise InputError(f"unknown expression node {type(e).__name__}")


# -- power series ----------------------------------------------------------


@dataclass(frozen=True, eq=False)
class PowerSeries:
    """Truncated Taylor coefficients c_0 .. c_order at the origin."""

    coeffs: np.ndarray

    def __post_init__(self) -> None:
        arr = np.ascontiguousarray(np.asarray(self.coeffs, dtype=np.complex128))
        if arr.ndim != 1 or arr.size == 0:
            raise InputError("power series coefficients must be a nonempty 1-d array")
        object.__setattr__(self, "coeffs", arr)

    @property
    def order(self) -> int:
        return len(self.coeffs) - 1


def taylor(e: AnalyticExpr, order: int) -> PowerSeries:
    """Taylor coefficients of the expression at 0, through z**order."""
    if order < 0:
        raise InputError("taylor order must be nonnegative")
    return PowerSeries(_taylor(e, int(order)))


def _taylor(e: AnalyticExpr, M: int) -> np.ndarray:
    if isinstance(e, Poly):
        out = np.zeros(M + 1, dtype=np.complex128)
        take = min(M + 1, len(e.coeffs))
        out[:take] = e.coeffs[:take]
        return out
    if isinstance(e, Rational):
        return _divide(_taylor(e.num, M), np.asarray(e.den.coeffs, dtype=np.complex128), M)
    if isinstance(e, Power):
        return _power_series(_taylor(e.base, M), e.exponent, M)
    if isinstance(e, Exp):
        return _exp_series(_taylor(e.arg, M), M)
    if isinstance(e, Sum):
        out = np.zeros(M + 1, dtype=np.complex128)
        for t in e.terms:
            out += _taylor(t, M)
        return out
    if isinstance(e, Product):
        acc = None
        for f in e.factors:
            part = _taylor(f, M)
            acc = part if acc is None else np.convolve(acc, part)[: M + 1]
        return acc
    if isinstance(e, Scale):
        return e.factor * _taylor(e.inner, M)
    if isinstance(e, PrecomposeMoebius):
        return _taylor(eliminate_precompose(e), M)
    raise InputError(f"unknown expression node {type(e).__name__}")


def _divide(num: np.ndarray, den: np.ndarray, M: int) -> np.ndarray:
    """Long division num/den to order M; den[0] is known nonzero."""
    d0 = den[0]
    k = len(den) - 1
    out = np.zeros(M + 1, dtype=np.complex128)
    out[0] = num[0] / d0
    if k == 0:
        out[1:] = num[1:] / d0
        return out
    drev = den[1:][::-1]  # den[k], ..., den[1]
    for n in range(1, M + 1):
        lo = max(0, n - k)
        acc = num[n] - np.dot(drev[k - (n - lo):], out[lo:n])
        out[n] = acc / d0
    return out


def _exp_series(s: np.ndarray, M: int) -> np.ndarray:
    out = np.zeros(M + 1, dtype=np.complex128)
    out[0] = cmath.exp(s[0])
    w = np.arange(M + 1) * s  # w[k] = k * s_k
    for n in range(1, M + 1):
        out[n] = np.dot(w[1 : n + 1], out[n - 1 :: -1][:n]) / n
    return out


def _power_series(b: np.ndarray, gamma: float, M: int) -> np.ndarray:
    b0 = b[0]
    if abs(b0) == 0.0:
        raise InputError("power base vanishes at the expansion point 0")
    out = np.zeros(M + 1, dtype=np.complex128)
    if float(gamma).is_integer():
        out[0] = b0 ** int(gamma)
    else:
        if b0.real < 0.0 and abs(b0.imag) <= _ZERO_REL * abs(b0):
            raise BranchError(
                "non-integer power of a base whose constant term lies on the branch cut"
            )
        out[0] = cmath.exp(gamma * cmath.log(b0))
    g1 = gamma + 1.0
    for n in range(1, M + 1):
        coef = g1 * np.arange(1, n + 1) - n
        out[n] = np.dot(coef * b[1 : n + 1], out[n - 1 :: -1][:n]) / (n * b0)
    return out


# -- precomposition elimination ---------------------------------------------


def eliminate_precompose(e: AnalyticExpr) -> AnalyticExpr:
    """Equivalent expression with every PrecomposeMoebius node removed.

    A linear fractional substitution z -> (az+b)/(cz+d) sends a polynomial of
    degree D to sum(p_k P^k Q^(D-k)) / Q^D with P = b + a z, Q = d + c z, and
    a rational function to a quotient of two such sums; all other nodes
    commute with substitution.
    """
    if isinstance(e, PrecomposeMoebius):
        return _push_moebius(eliminate_precompose(e.inner), e.map)
    if isinstance(e, (Poly, Rational)):
        return e
    if isinstance(e, Power):
        return Power(eliminate_precompose(e.base), e.exponent)
    if isinstance(e, Exp):
        return Exp(eliminate_precompose(e.arg))
    if isinstance(e, Sum):
        return Sum(tuple(eliminate_precompose(t) for t in e.terms))
    if isinstance(e, Product):
        return Product(tuple(eliminate_precompose(f) for f in e.factors))
    if isinstance(e, Scale):
        return Scale(e.factor, eliminate_precompose(e.inner))
    raise InputError(f"unknown expression node {type(e).__name__}")


def _lf_numden(m: MoebiusMap) -> tuple[np.ndarray, np.ndarray]:
    return (
        np.array([m.b, m.a], dtype=np.complex128),
        np.array([m.d, m.c], dtype=np.complex128),
    )


def _substitute_poly(coeffs: tuple[complex, ...], m: MoebiusMap, D: int) -> np.ndarray:
    """Coefficients of sum(coeffs[k] P^k Q^(D-k)) for P = b+az, Q = d+cz."""
    P, Q = _lf_numden(m)
    Ppow = [np.array([1.0 + 0j])]
    Qpow = [np.array([1.0 + 0j])]
    for _ in range(D):
        Ppow.append(np.convolve(Ppow[-1], P))
        Qpow.append(np.convolve(Qpow[-1], Q))
    out = np.zeros(D + 1, dtype=np.complex128)
    for k, ck in enumerate(coeffs):
        if k > D:
            break
        term = np.convolve(Ppow[k], Qpow[D - k]) * ck
        out[: len(term)] += term
    return out


def _push_moebius(e: AnalyticExpr, m: MoebiusMap) -> AnalyticExpr:
    if abs(m.d) <= _ZERO_REL * m.coeff_scale():
        raise PoleAtOriginError("linear fractional map has its pole at 0")
    if isinstance(e, Poly):
        D = e.degree
        if D == 0:
            return e
        P, Q = _lf_numden(m)
        num = _substitute_poly(e.coeffs, m, D)
        den = Q
        for _ in range(D - 1):
            den = np.convolve(den, Q)
        return Rational(Poly(tuple(num)), Poly(tuple(den)))
    if isinstance(e, Rational):
        D = max(e.num.degree, e.den.degree)
        if D == 0:
            return e
        num = _substitute_poly(e.num.coeffs, m, D)
        den = _substitute_poly(e.den.coeffs, m, D)
        return Rational(Poly(tuple(num)), Poly(tuple(den)))
    if isinstance(e, Power):
        return Power(_push_moebius(e.base, m), e.exponent)
    if isinstance(e, Exp):
        return Exp(_push_moebius(e.arg, m))
    if isinstance(e, Sum):
        return Sum(tuple(_push_moebius(t, m) for t in e.terms))
    if isinstance(e, Product):
        return Product(tuple(_push_moebius(f, m) for f in e.factors))
    if isinstance(e, Scale):
        return Scale(e.factor, _push_moebius(e.inner, m))
    raise InputError(f"unknown expression node {type(e).__name__}")


# -- symbol powers -----------------------------------------------------------


def moebius_powers(m: MoebiusMap, count: int, order: int) -> list[PowerSeries]:
    """Taylor coefficients of m(z)**j for j = 0..count, each to `order`.

    Successive powers come from one long division followed by repeated
    truncated convolution.
    """
    if count < 0 or order < 0:
        raise InputError("power count and order must be nonnegative")
    if abs(m.d) <= _ZERO_REL * m.coeff_scale():
        raise PoleAtOriginError("linear fractional map has its pole at 0")
    P, Q = _lf_numden(m)
    numf = np.zeros(order + 1, dtype=np.complex128)
    numf[: len(P)] = P[: order + 1]
    base = _divide(numf, Q, order)
    out = [np.zeros(order + 1, dtype=np.complex128)]
    out[0][0] = 1.0
    for _ in range(count):
        out.append(np.convolve(out[-1], base)[: order + 1])
    return [PowerSeries(c) for c in out]


# -- norms and tail diagnostics ----------------------------------------------


def series_norm(s: PowerSeries, space) -> float:
    """Norm sqrt(sum |c_n|^2 ||z^n||^2) of the truncation in the given space."""
    weights = space.basis_norms_sq(s.order)
    return float(math.sqrt(float(np.sum(np.abs(s.coeffs) ** 2 * weights))))


@dataclass(frozen=True)
class TailDiagnostics:
    ratio: float  # per-coefficient geometric decay estimate from the two halves
    bound: float  # crude bound on the l2 mass beyond the truncation
    slow_decay: bool


def tail_diagnostics(s: PowerSeries) -> TailDiagnostics:
    c = s.coeffs
    M = len(c) - 1
    if M < 16:
        raise InputError("tail diagnostics need order at least 16")
    h = (M + 1) // 2
    front = float(np.linalg.norm(c[:h]))
    tail = float(np.linalg.norm(c[h:]))
    if tail == 0.0:
        ratio = 0.0
    elif front == 0.0:
        ratio = 1.0
    else:
        ratio = (tail / front) ** (1.0 / (M + 1 - h))
    a = float(np.max(np.abs(c[-8:])))
    if 0.0 < ratio < 1.0:
        bound = a * ratio / math.sqrt(1.0 - ratio * ratio)
    elif ratio == 0.0:
        bound = 0.0
    else:
        bound = math.inf
    return TailDiagnostics(ratio, bound, ratio > SLOW_DECAY_RATIO)


def tail_ratio(s: PowerSeries) -> float:
    return tail_diagnostics(s).ratio


# -- serialization ------------------------------------------------------------


def _cpx_json(z: complex) -> list[float]:
    return [z.real, z.imag]


def _cpx_from(obj) -> complex:
    try:
        return complex(obj[0], obj[1])
    except (TypeError, IndexError) as exc:
        raise InputError(f"complex values must be [re, im] pairs: {exc}")


def expr_to_json(e: AnalyticExpr) -> dict:
    if isinstance(e, Poly):
        return {"type": "poly", "coeffs": [_cpx_json(c) for c in e.coeffs]}
    if isinstance(e, Rational):
        return {"type": "rational", "num": expr_to_json(e.num), "den": expr_to_json(e.den)}
    if isinstance(e, Power):
        return {"type": "power", "base": expr_to_json(e.base), "exponent": e.exponent}
    if isinstance(e, Exp):
        return {"type": "exp", "arg": expr_to_json(e.arg)}
    if isinstance(e, Sum):
        return {"type": "sum", "terms": [expr_to_json(t) for t in e.terms]}
    if isinstance(e, Product):
        return {"type": "product", "factors": [expr_to_json(f) for f in e.factors]}
    if isinstance(e, Scale):
        return {"type": "scale", "factor": _cpx_json(e.factor), "inner": expr_to_json(e.inner)}
    if isinstance(e, PrecomposeMoebius):
        return {"type": "precompose", "inner": expr_to_json(e.inner), "map": e.map.to_json()}
    raise InputError(f"unknown expression node {type(e).__name__}")


def expr_from_json(obj: dict) -> AnalyticExpr:
    if not isinstance(obj, dict) or "type" not in obj:
        raise InputError("expression JSON must be an object with a 'type' key")
    kind = obj["type"]
    try:
        if kind == "poly":
            return Poly(tuple(_cpx_from(c) for c in obj["coeffs"]))
        if kind == "rational":
            num = expr_from_json(obj["num"])
            den = expr_from_json(obj["den"])
            if not isinstance(num, Poly) or not isinstance(den, Poly):
                raise InputError("rational num/den must be polynomials")
            return Rational(num, den)
        if kind == "power":
            return Power(expr_from_json(obj["base"]), float(obj["exponent"]))
        if kind == "exp":
            return Exp(expr_from_json(obj["arg"]))
        if kind == "sum":
            return Sum(tuple(expr_from_json(t) for t in obj["terms"]))
        if kind == "product":
            return Product(tuple(expr_from_json(f) for f in obj["factors"]))
        if kind == "scale":
            return Scale(_cpx_from(obj["factor"]), expr_from_json(obj["inner"]))
        if kind == "precompose":
            return PrecomposeMoebius(expr_from_json(obj["inner"]), MoebiusMap.from_json(obj["map"]))
    except KeyError as exc:
        raise InputError(f"expression JSON missing key {exc}")
    raise InputError(f"unknown expression type {kind!r}")


def series_to_csv(s: PowerSeries) -> str:
    lines = ["index,re,im"]
    for n, c in enumerate(s.coeffs):
        lines.append("%d,%.17g,%.17g" % (n, c.real, c.imag))
    return "\n".join(lines) + "\n"


def series_from_csv(text: str) -> PowerSeries:
    rows = [ln for ln in text.strip().splitlines() if ln]
    if not rows or rows[0].split(",")[0] != "index":
        raise InputError("series CSV must start with an index,re,im header")
    vals = []
    for ln in rows[1:]:
        parts = ln.split(",")
        if len(parts) != 3:
            raise InputError(f"bad series CSV row: {ln!r}")
        vals.append(complex(float(parts[1]), float(parts[2])))
    if not vals:
        raise InputError("series CSV has no data rows")
    return PowerSeries(np.array(vals, dtype=np.complex128))
