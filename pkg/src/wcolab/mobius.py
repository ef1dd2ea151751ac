"""Linear fractional self-maps of the unit disk.

Maps are stored as unnormalized coefficient quadruples (a, b, c, d) for
z -> (a*z + b)/(c*z + d); equality is projective, so every operation must be
invariant under rescaling all four coefficients.  Arithmetic is carried out
on the extended plane with an explicit INFINITY value, which keeps affine
maps honest about their fixed point at infinity.

The classification routine sorts a self-map into one of eight dynamical
classes driven by its Denjoy-Wolff point: location (interior or boundary),
derivative there, and whether the map is a disk automorphism.  Maps within
tolerance of a dividing line are resolved toward the parabolic side and
flagged as borderline rather than rejected.
"""

from __future__ import annotations

import cmath
import enum
import math
from dataclasses import dataclass, field

from .errors import (
    DegenerateMapError,
    InputError,
    NotParabolicError,
    NotSelfMapError,
)

DEFAULT_TOL = 1e-10

# Relative threshold below which a coefficient counts as exactly zero.
_ZERO_REL = 1e-14

#: Canonical point at infinity on the extended plane.
INFINITY = complex(math.inf, 0.0)


def is_infinity(z: complex) -> bool:
    """True for the extended-plane point at infinity (any non-finite value)."""
    return not (math.isfinite(z.real) and math.isfinite(z.imag))


def _as_complex(z) -> complex:
    return complex(z)


@dataclass(frozen=True)
class MoebiusMap:
    """The map z -> (a*z + b)/(c*z + d), coefficients stored unnormalized."""

    a: complex
    b: complex
    c: complex
    d: complex

    def __post_init__(self) -> None:
        for name in ("a", "b", "c", "d"):
            object.__setattr__(self, name, _as_complex(getattr(self, name)))
        s = self.coeff_scale()
        if s == 0.0 or not math.isfinite(s):
            raise DegenerateMapError("coefficients must be finite and not all zero")
        if abs(self.determinant()) <= _ZERO_REL * s * s:
            raise DegenerateMapError(
                f"determinant vanishes for coefficients ({self.a}, {self.b}, {self.c}, {self.d})"
            )

    # -- basic algebra ---------------------------------------------------

    def coeff_scale(self) -> float:
        return max(abs(self.a), abs(self.b), abs(self.c), abs(self.d))

    def determinant(self) -> complex:
        return self.a * self.d - self.b * self.c

    def __call__(self, z: complex) -> complex:
        return self.apply(z)

    def apply(self, z: complex) -> complex:
        """Evaluate on the extended plane: poles go to INFINITY, INFINITY to a/c."""
        if is_infinity(z):
            if self._c_is_zero():
                return INFINITY
            return self.a / self.c
        z = _as_complex(z)
        den = self.c * z + self.d
        if abs(den) <= _ZERO_REL * self.coeff_scale() * max(1.0, abs(z)):
            return INFINITY
        return (self.a * z + self.b) / den

    def compose(self, other: "MoebiusMap") -> "MoebiusMap":
        """Return self o other (apply `other` first)."""
        return MoebiusMap(
            self.a * other.a + self.b * other.c,
            self.a * other.b + self.b * other.d,
            self.c * other.a + self.d * other.c,
            self.c * other.b + self.d * other.d,
        )

    def inverse(self) -> "MoebiusMap":
        return MoebiusMap(self.d, -self.b, -self.c, self.a)

    def iterate(self, n: int) -> "MoebiusMap":
        """n-fold composition with itself, n >= 1, by repeated squaring."""
        if n < 1:
            raise InputError("iterate requires n >= 1")
        result = None
        base = self.normalized()
        while n:
            if n & 1:
                result = base if result is None else result.compose(base)
                result = result.normalized()
            base = base.compose(base).normalized()
            n >>= 1
        return result

    def normalized(self) -> "MoebiusMap":
        """Same map with coefficient scale 1 (projective representative)."""
        s = self.coeff_scale()
        return MoebiusMap(self.a / s, self.b / s, self.c / s, self.d / s)

    def derivative_at(self, z: complex) -> complex:
        """Derivative at a finite non-pole point; at INFINITY, the chart
        derivative of w -> 1/m(1/w) at 0, which is d/a when c = 0."""
        if is_infinity(z):
            if not self._c_is_zero():
                raise InputError("derivative at infinity requires an affine map")
            return self.d / self.a
        den = self.c * z + self.d
        if abs(den) <= _ZERO_REL * self.coeff_scale() * max(1.0, abs(z)):
            raise InputError("derivative requested at a pole")
        return self.determinant() / (den * den)

    def _c_is_zero(self) -> bool:
        return abs(self.c) <= _ZERO_REL * self.coeff_scale()

    # -- geometry of the image circle ------------------------------------

    def image_circle(self) -> tuple[complex, float] | None:
        """Center and radius of m(unit circle), or None when it is a line.

        The image is a line exactly when |c| = |d| (the pole lies on the
        unit circle).
        """
        nc = abs(self.c) ** 2
        nd = abs(self.d) ** 2
        denom = nd - nc
        if abs(denom) <= _ZERO_REL * self.coeff_scale() ** 2:
            return None
        center = (self.b * self.d.conjugate() - self.a * self.c.conjugate()) / denom
        radius = abs(self.determinant()) / abs(denom)
        return center, radius

    def is_self_map(self, tol: float = DEFAULT_TOL) -> bool:
        """True when m(D) is contained in the closed unit disk D.

        Requires the pole strictly outside the closed disk (|d| > |c|), so
        that m(D) is the inside of the image circle, and then containment
        |center| + radius <= 1 + tol.
        """
        circle = self.image_circle()
        if circle is None:
            return False
        if abs(self.d) <= abs(self.c):
            # pole inside the disk: the image of D is the circle's outside
            return False
        center, radius = circle
        return abs(center) + radius <= 1.0 + tol

    def is_automorphism(self, tol: float = DEFAULT_TOL) -> bool:
        """True when m maps the unit disk onto itself."""
        if not self.is_self_map(tol):
            return False
        center, radius = self.image_circle()
        return abs(center) <= tol and abs(radius - 1.0) <= tol

    def is_identity(self, tol: float = DEFAULT_TOL) -> bool:
        return projective_distance(self, identity()) <= tol

    # -- fixed points and Denjoy-Wolff data -------------------------------

    def fixed_points(self, tol: float = DEFAULT_TOL) -> "FixedPointData":
        """Fixed points with multiplicity on the extended plane.

        Identity maps are rejected.  A non-identity map has total
        multiplicity two; a discriminant within tol of zero (relative to the
        coefficient scale squared) is resolved as a double point.
        """
        if self.is_identity(tol):
            raise InputError("every point is fixed: the map is the identity")
        m = self.normalized()
        if m._c_is_zero():
            # affine: a*z + b = d*z has the root b/(d-a), plus infinity
            if abs(m.d - m.a) <= _ZERO_REL:
                # translation in the affine chart: infinity is a double point
                pt = FixedPoint(INFINITY, 2, 1.0 + 0.0j)
                return FixedPointData((pt,), borderline=False)
            root = m.b / (m.d - m.a)
            finite = FixedPoint(root, 1, m.derivative_at(root))
            inf = FixedPoint(INFINITY, 1, m.d / m.a)
            return FixedPointData((finite, inf), borderline=False)
        # c != 0: roots of c z^2 + (d - a) z - b = 0
        A, B, C = m.c, m.d - m.a, -m.b
        disc = B * B - 4.0 * A * C
        if abs(disc) <= tol:
            root = -B / (2.0 * A)
            pt = FixedPoint(root, 2, m.derivative_at(root))
            return FixedPointData((pt,), borderline=0.0 < abs(disc))
        sq = cmath.sqrt(disc)
        if (B.conjugate() * sq).real < 0.0:
            sq = -sq
        q = -(B + sq) / 2.0
        r1 = q / A
        r2 = C / q if abs(q) > 0.0 else r1
        pts = sorted((r1, r2), key=lambda w: (round(abs(w), 12), w.real, w.imag))
        data = tuple(FixedPoint(p, 1, m.derivative_at(p)) for p in pts)
        return FixedPointData(data, borderline=abs(disc) <= 10.0 * tol)

    def denjoy_wolff(self, tol: float = DEFAULT_TOL) -> "DWPoint":
        """Attracting fixed point in the closed disk, with its derivative.

        Defined for self-maps that are neither the identity nor an elliptic
        automorphism; those two are rejected.
        """
        if not self.is_self_map(tol):
            raise NotSelfMapError("Denjoy-Wolff point requires a self-map of the disk")
        if self.is_identity(tol):
            raise InputError("the identity has no distinguished fixed point")
        fps = self.fixed_points(tol)
        finite = [p for p in fps.points if not is_infinity(p.location)]
        if self.is_automorphism(tol) and any(
            abs(p.location) < 1.0 - tol for p in finite
        ):
            raise InputError("an elliptic automorphism has no attracting fixed point")
        candidates = [p for p in finite if abs(p.location) <= 1.0 + tol]
        if not candidates:
            raise NotSelfMapError("no fixed point in the closed disk")
        best = min(candidates, key=lambda p: abs(p.derivative))
        if abs(best.derivative) > 1.0 + max(tol, 1e-9):
            raise NotSelfMapError("candidate fixed point is repelling")
        loc = best.location
        deriv = best.derivative
        boundary = abs(abs(loc) - 1.0) <= tol
        if boundary:
            # angular derivative of a self-map at its boundary Denjoy-Wolff
            # point is a positive real; discard rounding in the imaginary part
            loc = loc / abs(loc)
            deriv = complex(deriv.real, 0.0) if abs(deriv.imag) <= 1e-9 else deriv
        return DWPoint(loc, deriv, boundary)

    # -- normal forms ------------------------------------------------------

    def krein_adjoint(self) -> "MoebiusMap":
        """The companion map z -> (conj(a) z - conj(c)) / (-conj(b) z + conj(d)).

        For a self-map this is again a self-map, and the construction is an
        involution.
        """
        return MoebiusMap(
            self.a.conjugate(),
            -self.c.conjugate(),
            -self.b.conjugate(),
            self.d.conjugate(),
        )

    # -- serialization -----------------------------------------------------

    def to_json(self) -> dict:
        return {
            "a": [self.a.real, self.a.imag],
            "b": [self.b.real, self.b.imag],
            "c": [self.c.real, self.c.imag],
            "d": [self.d.real, self.d.imag],
        }

    @staticmethod
    def from_json(obj: dict) -> "MoebiusMap":
        try:
            vals = {k: complex(obj[k][0], obj[k][1]) for k in ("a", "b", "c", "d")}
        except (KeyError, TypeError, IndexError) as exc:
            raise InputError(f"map JSON needs keys a,b,c,d as [re, im] pairs: {exc}")
        return MoebiusMap(**vals)


@dataclass(frozen=True)
class FixedPoint:
    location: complex  # finite point or INFINITY
    multiplicity: int
    derivative: complex


@dataclass(frozen=True)
class FixedPointData:
    points: tuple[FixedPoint, ...]
    borderline: bool  # discriminant was within tolerance of zero but not exactly


@dataclass(frozen=True)
class DWPoint:
    location: complex
    derivative: complex
    boundary: bool


class MapClass(enum.Enum):
    IDENTITY = "identity"
    ELLIPTIC_AUTOMORPHISM = "elliptic-automorphism"
    HYPERBOLIC_AUTOMORPHISM = "hyperbolic-automorphism"
    PARABOLIC_AUTOMORPHISM = "parabolic-automorphism"
    PARABOLIC_NON_AUTOMORPHISM = "parabolic-non-automorphism"
    HYPERBOLIC_TYPE = "hyperbolic-type-non-automorphism"
    INTERIOR_NO_BOUNDARY_FIXED = "interior-dw-no-boundary-fixed-point"
    INTERIOR_WITH_BOUNDARY_FIXED = "interior-dw-with-boundary-fixed-point"


#: Classes whose Denjoy-Wolff point lies on the unit circle.
BOUNDARY_CLASSES = frozenset(
    {
        MapClass.HYPERBOLIC_AUTOMORPHISM,
        MapClass.PARABOLIC_AUTOMORPHISM,
        MapClass.PARABOLIC_NON_AUTOMORPHISM,
        MapClass.HYPERBOLIC_TYPE,
    }
)

#: Classes on which a translation number is defined.
PARABOLIC_CLASSES = frozenset(
    {MapClass.PARABOLIC_AUTOMORPHISM, MapClass.PARABOLIC_NON_AUTOMORPHISM}
)


@dataclass(frozen=True)
class Classification:
    map_class: MapClass
    borderline: bool
    notes: tuple[str, ...]
    fixed_points: FixedPointData | None
    dw: DWPoint | None
    translation: complex | None

    def to_json(self) -> dict:
        def cpx(z):
            if z is None:
                return None
            if is_infinity(z):
                return "infinity"
            return [z.real, z.imag]

        fps = None
        if self.fixed_points is not None:
            fps = [
                {
                    "location": cpx(p.location),
                    "multiplicity": p.multiplicity,
                    "derivative": cpx(p.derivative),
                }
                for p in self.fixed_points.points
            ]
        dw = None
        if self.dw is not None:
            dw = {
                "location": cpx(self.dw.location),
                "derivative": cpx(self.dw.derivative),
                "boundary": self.dw.boundary,
            }
        return {
            "class": self.map_class.value,
            "borderline": self.borderline,
            "notes": list(self.notes),
            "fixed_points": fps,
            "denjoy_wolff": dw,
            "translation": cpx(self.translation),
        }


def identity() -> MoebiusMap:
    return MoebiusMap(1.0, 0.0, 0.0, 1.0)


def rotation(lam: complex) -> MoebiusMap:
    """The rotation-dilation z -> lam * z for 0 < |lam|."""
    lam = _as_complex(lam)
    if abs(lam) == 0.0:
        raise InputError("rotation factor must be nonzero")
    return MoebiusMap(lam, 0.0, 0.0, 1.0)


def disk_automorphism(point: complex, lam: complex = 1.0) -> MoebiusMap:
    """The automorphism z -> lam * (point - z)/(1 - conj(point) z), |point| < 1."""
    point = _as_complex(point)
    if abs(point) >= 1.0:
        raise InputError("automorphism parameter must lie in the open disk")
    lam = _as_complex(lam)
    return MoebiusMap(-lam, lam * point, -point.conjugate(), 1.0)


def projective_distance(m1: MoebiusMap, m2: MoebiusMap) -> float:
    """Sine of the angle between coefficient vectors; 0 iff the maps agree.

    Computed from the wedge product, which stays accurate near zero where
    sqrt(1 - cos^2) would lose all precision to cancellation.
    """
    v1 = (m1.a, m1.b, m1.c, m1.d)
    v2 = (m2.a, m2.b, m2.c, m2.d)
    n1 = math.sqrt(sum(abs(x) ** 2 for x in v1))
    n2 = math.sqrt(sum(abs(x) ** 2 for x in v2))
    wedge = 0.0
    for i in range(4):
        for j in range(i + 1, 4):
            wedge += abs(v1[i] * v2[j] - v1[j] * v2[i]) ** 2
    return min(1.0, math.sqrt(wedge) / (n1 * n2))


def projectively_equal(m1: MoebiusMap, m2: MoebiusMap, tol: float = DEFAULT_TOL) -> bool:
    return projective_distance(m1, m2) <= tol


def parabolic_from(zeta: complex, t: complex) -> MoebiusMap:
    """Parabolic self-map with boundary fixed point zeta and translation number t.

    Conjugating by the Cayley-type chart tau(z) = (1 + conj(zeta) z)/(1 - conj(zeta) z)
    sends the map to w -> w + t on the right half-plane; Re t >= 0 is required
    (Re t = 0 gives the automorphism case), t = 0 is rejected as the identity.
    """
    zeta = _as_complex(zeta)
    t = _as_complex(t)
    if abs(abs(zeta) - 1.0) > 1e-9:
        raise InputError("fixed point must lie on the unit circle")
    zeta = zeta / abs(zeta)
    if abs(t) == 0.0:
        raise InputError("translation number must be nonzero")
    if t.real < -1e-13 * abs(t):
        raise InputError("translation number must have Re t >= 0")
    if t.real < 0.0:
        t = complex(0.0, t.imag)
    return MoebiusMap(2.0 - t, t * zeta, -t * zeta.conjugate(), 2.0 + t)


def translation_number(
    m: MoebiusMap, zeta: complex | None = None, tol: float = DEFAULT_TOL
) -> complex:
    """Translation number t of a parabolic self-map.

    In the half-plane chart at the double fixed point zeta the map acts as
    w -> w + t; concretely t = tau(m(0)) - 1 with tau as in parabolic_from.
    Re t >= 0 always; Re t == 0 exactly for automorphisms.
    """
    if not m.is_self_map(tol):
        raise NotSelfMapError("translation number requires a self-map")
    fps = m.fixed_points(tol)
    double = [p for p in fps.points if p.multiplicity == 2 and not is_infinity(p.location)]
    if not double:
        raise NotParabolicError("map has no double fixed point in the plane")
    point = double[0].location
    if abs(abs(point) - 1.0) > 1e-6:
        raise NotParabolicError("double fixed point is not on the unit circle")
    point = point / abs(point)
    if zeta is not None:
        zeta = _as_complex(zeta)
        if abs(point - zeta / abs(zeta)) > 1e-6:
            raise NotParabolicError("map does not fix the requested boundary point")
        point = zeta / abs(zeta)
    w = m.apply(0.0)
    t = (1.0 + point.conjugate() * w) / (1.0 - point.conjugate() * w) - 1.0
    if t.real < 0.0 and abs(t.real) <= 1e-12 * max(1.0, abs(t)):
        t = complex(0.0, t.imag)
    return t


def classify(m: MoebiusMap, tol: float = DEFAULT_TOL) -> Classification:
    """Sort a self-map into its dynamical class.

    Near a dividing line (discriminant, derivative, or boundary distance
    within tol) the result is resolved toward the parabolic side and the
    `borderline` flag is set.
    """
    if not m.is_self_map(tol):
        raise NotSelfMapError("classification requires a self-map of the disk")
    if m.is_identity(tol):
        return Classification(MapClass.IDENTITY, False, (), None, None, None)

    fps = m.fixed_points(tol)
    notes: list[str] = []
    borderline = fps.borderline
    if borderline:
        notes.append("fixed-point discriminant within tolerance of zero")
    auto = m.is_automorphism(tol)

    if auto:
        finite = [p for p in fps.points if not is_infinity(p.location)]
        interior = [p for p in finite if abs(p.location) < 1.0 - tol]
        if interior:
            if any(1.0 - abs(p.location) <= 10.0 * tol for p in interior):
                borderline = True
                notes.append("interior fixed point close to the unit circle")
            return Classification(
                MapClass.ELLIPTIC_AUTOMORPHISM, borderline, tuple(notes), fps, None, None
            )
        if len(fps.points) == 1 and fps.points[0].multiplicity == 2:
            dw = m.denjoy_wolff(tol)
            t = translation_number(m, dw.location, tol)
            return Classification(
                MapClass.PARABOLIC_AUTOMORPHISM, borderline, tuple(notes), fps, dw, t
            )
        dw = m.denjoy_wolff(tol)
        return Classification(
            MapClass.HYPERBOLIC_AUTOMORPHISM, borderline, tuple(notes), fps, dw, None
        )

    dw = m.denjoy_wolff(tol)
    if dw.boundary:
        deriv = dw.derivative.real
        if abs(deriv - 1.0) <= tol:
            if deriv != 1.0:
                borderline = True
                notes.append("boundary derivative within tolerance of one")
            t = translation_number(m, dw.location, tol)
            return Classification(
                MapClass.PARABOLIC_NON_AUTOMORPHISM, borderline, tuple(notes), fps, dw, t
            )
        return Classification(
            MapClass.HYPERBOLIC_TYPE, borderline, tuple(notes), fps, dw, None
        )

    others = [
        p
        for p in fps.points
        if not is_infinity(p.location) and abs(p.location - dw.location) > tol
    ]
    has_boundary = any(abs(abs(p.location) - 1.0) <= tol for p in others)
    near = [p for p in others if tol < abs(abs(p.location) - 1.0) <= 10.0 * tol]
    if near:
        borderline = True
        notes.append("second fixed point close to the unit circle")
    cls = (
        MapClass.INTERIOR_WITH_BOUNDARY_FIXED
        if has_boundary
        else MapClass.INTERIOR_NO_BOUNDARY_FIXED
    )
    return Classification(cls, borderline, tuple(notes), fps, dw, None)
