"""The explicit trigonal construction: G(t, x), the model of X, and the correspondence.

From a trigonal map g = N/D and the curve's polynomial F this builds
  G(t, x) = N(x) - t D(x) = x^3 + g2(t) x^2 + g1(t) x + g0(t),
  f0 + f1 x + f2 x^2 = F(x) mod G(t, x),
the 13-term product polynomial s(t) (the norm of F down the fibration, which
is alpha times a perfect square), the delta-polynomials of the plane model,
and the correspondence data rho = (d4 b22^2 + d2 b22 + d0) / d1 with a sign
selecting the two sheets (the negated sheet induces the negated isogeny).

The construction is rational over F_q exactly when alpha = lc(s) is a square;
otherwise delta1 (and with it rho and the correspondence) lives over F_{q^2}
and the object is flagged non-rational but still fully inspectable.
"""

from __future__ import annotations

from dataclasses import dataclass

from .curves import HCurve
from .errors import SquareRootObstruction
from .fields import embed, make_extension
from .polyring import BiPoly, Poly, exact_square_root, reduce_mod_cubic
from .trigmaps import TrigonalMap

X_VARS = ("b00", "b01", "b02", "b11", "b12", "b22")

# the six rank-1 relations among the b_ij = b_i b_j
X_QUADRICS = (
    (("b01", "b01"), ("b00", "b11")),
    (("b01", "b02"), ("b00", "b12")),
    (("b02", "b02"), ("b00", "b22")),
    (("b02", "b11"), ("b01", "b12")),
    (("b02", "b12"), ("b01", "b22")),
    (("b12", "b12"), ("b11", "b22")),
)


@dataclass(frozen=True)
class TrigonalFibration:
    field: object
    curve: HCurve
    gmap: TrigonalMap
    g0: Poly
    g1: Poly
    g2: Poly
    G: BiPoly
    f0: Poly
    f1: Poly
    f2: Poly
    s: Poly
    alpha: object
    r: Poly  # monic, s = alpha * r^2
    u_locus: Poly  # (f1^2 - 4 f2 f0) * (negated discriminant of G in x)

    def ramified_at(self, t0, field=None) -> bool:
        """Whether the 6-point fiber of the composed degree-6 map degenerates at t0.

        Three causes: the cubic G(t0, x) has a repeated root, the quadratic
        F mod G has one (the stored u_locus product), or the fiber contains a
        Weierstrass pair — which happens exactly at the roots of s, since
        s(t0) is the product of F over the fiber's x-coordinates.
        """
        f = self.field if field is None else field
        if field is None or field is self.field:
            return self.u_locus.eval(t0) == f.zero or self.s.eval(t0) == f.zero
        ul = self.u_locus.map_coeffs(lambda c: embed(c, self.field, f), f)
        sl = self.s.map_coeffs(lambda c: embed(c, self.field, f), f)
        return ul.eval(t0) == f.zero or sl.eval(t0) == f.zero


def _discriminant_cubic_neg(g0: Poly, g1: Poly, g2: Poly) -> Poly:
    """4 g2^3 g0 - g2^2 g1^2 - 18 g2 g1 g0 + 4 g1^3 + 27 g0^2 (minus the discriminant)."""
    f = g0.field
    four = Poly.const(f, f.from_int(4))
    return (
        four * g2 * g2 * g2 * g0
        - g2 * g2 * g1 * g1
        - Poly.const(f, f.from_int(18)) * g2 * g1 * g0
        + four * g1 * g1 * g1
        + Poly.const(f, f.from_int(27)) * g0 * g0
    )


def _s_polynomial(f0, f1, f2, g0, g1, g2) -> Poly:
    F = f0.field
    c = lambda n: Poly.const(F, F.from_int(n))
    return (
        f0 * f0 * f0
        - f0 * f0 * f1 * g2
        - c(2) * f0 * f0 * f2 * g1
        + f0 * f0 * f2 * g2 * g2
        + f0 * f1 * f1 * g1
        + c(3) * f0 * f1 * f2 * g0
        - f0 * f1 * f2 * g1 * g2
        - c(2) * f0 * f2 * f2 * g0 * g2
        + f0 * f2 * f2 * g1 * g1
        - f1 * f1 * f1 * g0
        + f1 * f1 * f2 * g0 * g2
        - f1 * f2 * f2 * g0 * g1
        + f2 * f2 * f2 * g0 * g0
    )


def build_fibration(g: TrigonalMap, H: HCurve) -> TrigonalFibration:
    """Assemble the fibration data for the trigonal map g over the curve H.

    H may be a quadratic twist of the curve g was built for (the pairing
    structure only depends on F up to scalars); its F is what gets reduced.
    """
    f = g.field
    assert H.field is f
    one = Poly.one(f)
    t = Poly.x(f)
    g2 = -t
    g1 = Poly.const(f, g.n1) - t.scale(g.d1)
    g0 = Poly.const(f, g.n0) - t.scale(g.d0)
    G = BiPoly(f, (g0, g1, g2, one))
    f0, f1, f2 = reduce_mod_cubic(H.F, G)
    s = _s_polynomial(f0, f1, f2, g0, g1, g2)
    if s.is_zero:
        raise SquareRootObstruction("s(t) vanishes identically")
    root = exact_square_root(s)
    if root is None:
        raise SquareRootObstruction("s(t) is not lc(s) times a perfect square")
    alpha, r = root
    four = Poly.const(f, f.from_int(4))
    u_locus = (f1 * f1 - four * f2 * f0) * _discriminant_cubic_neg(g0, g1, g2)
    return TrigonalFibration(
        field=f, curve=H, gmap=g, g0=g0, g1=g1, g2=g2, G=G,
        f0=f0, f1=f1, f2=f2, s=s, alpha=alpha, r=r, u_locus=u_locus,
    )


def isogeny_is_rational(fib: TrigonalFibration) -> bool:
    """Prop.-6 style criterion: the leading coefficient of s is a square."""
    return fib.field.is_square(fib.alpha)


@dataclass(frozen=True)
class CurveXModel:
    """X|_U in A^1 x A^6: three linear-in-b_ij equations plus the six quadrics."""

    fib: TrigonalFibration
    rows: tuple  # three (coeff dict var -> Poly, const Poly) pairs

    def linear_values(self, field, t0, b):
        """The residuals of c0, c1, c2 at a candidate point."""
        base = self.fib.field
        out = []
        for coeffs, const in self.rows:
            acc = embed_poly(const, base, field).eval(t0)
            for var, pol in coeffs.items():
                acc = field.add(acc, field.mul(embed_poly(pol, base, field).eval(t0), b[var]))
            out.append(acc)
        return out

    def quadric_values(self, field, b):
        out = []
        for (m1, m2), (m3, m4) in X_QUADRICS:
            out.append(field.sub(field.mul(b[m1], b[m2]), field.mul(b[m3], b[m4])))
        return out

    def contains(self, field, t0, b) -> bool:
        z = field.zero
        return all(v == z for v in self.linear_values(field, t0, b)) and all(
            v == z for v in self.quadric_values(field, b)
        )


def embed_poly(poly: Poly, src, dst) -> Poly:
    if src is dst:
        return poly
    return poly.map_coeffs(lambda c: embed(c, src, dst), dst)


def build_X(fib: TrigonalFibration) -> CurveXModel:
    """The three linear-in-b_ij equations of X|_U (plus the fixed quadrics)."""
    f = fib.field
    one = Poly.one(f)
    two = Poly.const(f, f.from_int(2))
    g0, g1, g2 = fib.g0, fib.g1, fib.g2
    c0 = ({"b22": g2 * g0, "b12": -(two * g0), "b00": one}, -fib.f0)
    c1 = ({"b22": g2 * g1 - g0, "b12": -(two * g1), "b01": two}, -fib.f1)
    c2 = ({"b22": g2 * g2 - g1, "b12": -(two * g2), "b02": two, "b11": one}, -fib.f2)
    return CurveXModel(fib, (c0, c1, c2))


@dataclass(frozen=True)
class PlaneQuarticModel:
    """delta-polynomials of the singular plane model (d4 b^2 + d2 b + d0)^2 = d1^2 b."""

    delta0: Poly
    delta1: Poly  # over delta1_field (F_q, or F_{q^2} when not rational)
    delta2: Poly
    delta4: Poly
    delta1_field: object
    rational: bool


def build_plane_model(fib: TrigonalFibration) -> PlaneQuarticModel:
    f = fib.field
    c = lambda n: Poly.const(f, f.from_int(n))
    g0, g1, g2 = fib.g0, fib.g1, fib.g2
    f0, f1, f2 = fib.f0, fib.f1, fib.f2
    delta4 = (
        -(c(27) * g0 * g0)
        + c(18) * g0 * g1 * g2
        - c(4) * g0 * g2 * g2 * g2
        - c(4) * g1 * g1 * g1
        + g1 * g1 * g2 * g2
    )
    delta2 = (
        c(12) * f0 * g1
        - c(4) * f0 * g2 * g2
        - c(18) * f1 * g0
        + c(2) * f1 * g1 * g2
        + c(12) * f2 * g0 * g2
        - c(4) * f2 * g1 * g1
    )
    delta0 = f1 * f1 - c(4) * f0 * f2
    rational = f.is_square(fib.alpha)
    if rational:
        root_alpha = f.sqrt(fib.alpha)
        delta1 = fib.r.scale(f.mul(f.from_int(8), root_alpha))
        d1f = f
    else:
        d1f = make_extension(f.p, 2)
        alpha2 = embed(fib.alpha, f, d1f)
        root_alpha = d1f.sqrt(alpha2)
        assert root_alpha is not None
        r2 = embed_poly(fib.r, f, d1f)
        delta1 = r2.scale(d1f.mul(d1f.from_int(8), root_alpha))
    return PlaneQuarticModel(delta0, delta1, delta2, delta4, d1f, rational)


@dataclass(frozen=True)
class CorrespondenceR:
    """The correspondence (G(t,x), y -/+ (b02 + b12 x + b22 x^2)/rho) between H and X."""

    fib: TrigonalFibration
    X: CurveXModel
    plane: PlaneQuarticModel
    sign: int  # +1 for R, -1 for R'

    def rho(self, field, t0, b22):
        """The square root of b22 on X|_U at a point with fiber coordinate t0."""
        f0 = self.fib.field
        pl = self.plane
        d4 = embed_poly(pl.delta4, f0, field).eval(t0)
        d2 = embed_poly(pl.delta2, f0, field).eval(t0)
        d0 = embed_poly(pl.delta0, f0, field).eval(t0)
        d1 = embed_poly(pl.delta1, pl.delta1_field, field).eval(t0)
        num = field.add(field.add(field.mul(d4, field.sqr(b22)), field.mul(d2, b22)), d0)
        val = field.div(num, d1)
        return val if self.sign > 0 else field.neg(val)


def build_correspondence(fib: TrigonalFibration, sign: int = +1) -> CorrespondenceR:
    assert sign in (+1, -1)
    return CorrespondenceR(fib, build_X(fib), build_plane_model(fib), sign)
