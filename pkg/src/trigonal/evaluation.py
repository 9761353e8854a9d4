"""Evaluating the isogeny on divisor classes, and the reverse composition.

phi pushes a class through the correspondence: a good point P of H maps to
t = N(x(P))/D(x(P)), and of the (at most four) fiber points of X over t
exactly the two satisfying y(P) * rho(Q) = b02 + b12 x(P) + b22 x(P)^2 lie
under P on the correspondence.  The reverse composition pulls an X-point Q
back to the Mumford triple (G(t(Q), x), (b02 + b12 x + b22 x^2) / rho(Q))
on H and reduces with Cantor arithmetic.  reverse(phi(.)) acts as
multiplication by +/-2 with a consensus sign per construction, which is the
functional certificate used throughout verification.

Classes are always re-represented as a difference of two good degree-3
effective divisors before evaluation (support must avoid Weierstrass points,
zeros of D(x), infinity, and ramified fibers), by adding random auxiliary
classes until both sides are clean.
"""

from __future__ import annotations

import hashlib
import math
import random
from dataclasses import dataclass

from .construction import CorrespondenceR, CurveXModel, embed_poly
from .curves import DivisorClass, OddModel, cantor_add, cantor_mul, random_class_on
from .errors import BadSupport, ModelMismatch, RamifiedFiber, TooLarge
from .fields import QuotientField, embed, make_extension, project
from .polyring import Poly, factorize, roots

_COUNT_GUARD = 1 << 30


@dataclass(frozen=True)
class XPoint:
    """A point of X|_U: fiber coordinate t and the six b_ij, over some F_{q^k}."""

    field: object
    t: object
    b: tuple  # (b00, b01, b02, b11, b12, b22)

    def bmap(self):
        return dict(zip(("b00", "b01", "b02", "b11", "b12", "b22"), self.b))

    def key(self):
        f = self.field
        return (f.k, f.encode(self.t), tuple(f.encode(x) for x in self.b))


@dataclass(frozen=True)
class XDivisor:
    """Formal integer combination of X-points (possibly over extensions)."""

    entries: tuple  # ((XPoint, weight), ...)

    @property
    def degree(self):
        return sum(w for _, w in self.entries)

    @property
    def is_empty(self):
        return not self.entries


def _etale_square_roots(F: Poly, Gt: Poly, field):
    """All b in field[x]/(Gt) with b^2 = F, as (b0, b1, b2) pairs modulo +/-.

    One square root per irreducible factor, all sign combinations, glued by
    CRT; empty when some factor sees a non-residue.
    """
    _, factors = factorize(Gt)
    parts = []
    for h, m in factors:
        assert m == 1
        if h.degree == 1:
            x0 = field.neg(h[0])
            rt = field.sqrt(F.eval(x0))
            if rt is None:
                return []
            parts.append((h, Poly.const(field, rt)))
        else:
            Q = QuotientField(field, h.c)
            val = F % h
            vt = tuple(val[i] for i in range(h.degree))
            rt = Q.sqrt(vt)
            if rt is None:
                return []
            parts.append((h, Poly(field, rt)))
    from .polyring import xgcd

    crt = []
    for h, _ in parts:
        m_i = Gt // h
        g, s, _ = xgcd(m_i, h)
        assert g.degree == 0 and g.c[0] == field.one
        crt.append((m_i * s) % Gt)
    out = []
    seen = set()
    nparts = len(parts)
    for mask in range(2 ** (nparts - 1)):  # first sign fixed: b ~ -b
        b = Poly.zero(field)
        for i, ((h, rt), u) in enumerate(zip(parts, crt)):
            sgn = 1 if i == 0 or not (mask >> (i - 1)) & 1 else -1
            term = (rt if sgn > 0 else -rt) * u
            b = (b + term) % Gt
        b0, b1, b2 = b[0], b[1], b[2]
        bn = (field.neg(b0), field.neg(b1), field.neg(b2))
        rep = min((b0, b1, b2), bn, key=lambda v: tuple(field.encode(x) for x in v))
        k = tuple(field.encode(x) for x in rep)
        if k not in seen:
            seen.add(k)
            out.append(rep)
    return out


def fiber_points(X: CurveXModel, t0, field) -> list:
    """All field-rational points of X over the unramified fiber coordinate t0.

    A rational point is a Frobenius-stable pair of complementary triples: its
    interpolation b is either fixed (b in the etale algebra field[x]/(G),
    b^2 = F) or negated by Frobenius.  Writing an anti-fixed b as sqrt(nu) * u
    for a fixed non-residue nu reduces the second kind to rational solutions
    of u^2 = F/nu with coordinates b_ij = nu * u_i u_j; a character-parity
    argument shows this branch is empty whenever the construction is
    isogeny-rational (lc(s) a square), but it does populate fibers on the
    non-rational side.
    """
    fib = X.fib
    base = fib.field
    if fib.ramified_at(t0, field):
        raise RamifiedFiber("t0 lies under a degenerate fiber")
    Gt = Poly(field, [embed_poly(c, base, field).eval(t0) for c in fib.G.cx])
    F = embed_poly(fib.curve.F, base, field)
    nu = field.nonresidue()
    out = []
    for scale, FF in ((field.one, F), (nu, F.scale(field.inv(nu)))):
        for b0, b1, b2 in _etale_square_roots(FF, Gt, field):
            coords = tuple(
                field.mul(scale, field.mul(x, y))
                for x, y in ((b0, b0), (b0, b1), (b0, b2), (b1, b1), (b1, b2), (b2, b2))
            )
            pt = XPoint(field, t0, coords)
            assert X.contains(field, t0, pt.bmap()), "fiber point misses the model"
            out.append(pt)
    out.sort(key=lambda p: p.key())
    return out


def _class_rng(D: DivisorClass, R: CorrespondenceR) -> random.Random:
    h = hashlib.sha256(
        repr((D.a.encode(), D.b.encode(), R.sign, R.fib.s.encode())).encode()
    ).digest()
    return random.Random(int.from_bytes(h, "big"))


_MAX_EXT_DEGREE = 24


def _effective_points(D: DivisorClass):
    """Split the effective part of a reduced class into points over extensions.

    Returns [(field, x, y)] on the odd model, or None if the support is not
    usable: degree < 3, repeated x-coordinates, or points over extensions so
    large that the fiber field would overflow the degree guard (the shuffle
    then looks for a representative with smaller splitting fields).
    """
    model = D.model
    f = model.field
    if D.a.degree != 3:
        return None
    from .polyring import is_squarefree

    if not is_squarefree(D.a):
        return None
    out = []
    _, factors = factorize(D.a)
    for h, _ in factors:
        if 2 * f.k * h.degree > _MAX_EXT_DEGREE:
            return None
        K = make_extension(f.p, f.k * h.degree) if h.degree > 1 else f
        if h.degree == 1:
            xs = [f.neg(h[0])]
            bK = D.b
        else:
            hK = embed_poly(h, f, K)
            xs = roots(hK)
            bK = embed_poly(D.b, f, K)
        for x0 in xs:
            out.append((K, x0, bK.eval(x0)))
    return out


def _good_curve_points(D: DivisorClass, R: CorrespondenceR):
    """Points of the effective part carried onto the construction's curve.

    Applies odd-model -> source and the trigonal map's pre-transform, then
    checks the full bad-support list; None means try another representative.
    """
    model = D.model
    g = R.fib.gmap
    pts = _effective_points(D)
    if pts is None:
        return None
    out = []
    for K, x0, y0 in pts:
        mk = model if K is model.field else model.base_change(K)
        u, v, w = mk.to_source((x0, K.one, y0))
        if v == K.zero:
            return None
        pre = g.pre_transform if K is g.field else g.pre_transform.base_change(K)
        u, v, w = pre.apply_uvw((u, v, w))
        if v == K.zero:
            return None
        vi = K.inv(v)
        x1 = K.mul(u, vi)
        y1 = K.mul(w, K.pow(vi, 4))
        if y1 == K.zero:
            return None  # Weierstrass support
        DK = embed_poly(g.D, g.field, K)
        NK = embed_poly(g.N, g.field, K)
        if DK.eval(x1) == K.zero:
            return None  # maps to t = infinity
        t0 = K.div(NK.eval(x1), DK.eval(x1))
        if R.fib.ramified_at(t0, K):
            return None
        out.append((K, x1, y1, t0))
    return out


def _phi_point(R: CorrespondenceR, K, x1, y1, t0):
    """The two correspondence points above a good curve point, over F_{q^(2j)}."""
    K2 = make_extension(K.p, 2 * K.k)
    t2 = embed(t0, K, K2)
    x2 = embed(x1, K, K2)
    y2 = embed(y1, K, K2)
    pts = fiber_points(R.X, t2, K2)
    picked = []
    for q in pts:
        b = q.bmap()
        rho = R.rho(K2, t2, b["b22"])
        lhs = K2.mul(y2, rho)
        rhs = K2.add(b["b02"], K2.add(K2.mul(b["b12"], x2), K2.mul(b["b22"], K2.sqr(x2))))
        if lhs == rhs:
            picked.append(q)
    if len(picked) != 2:
        raise BadSupport(f"expected 2 matching fiber points, found {len(picked)}")
    return picked


def phi_on_class(D: DivisorClass, R: CorrespondenceR, rng=None, attempts=None) -> XDivisor:
    """The image divisor phi(D) on X, as a degree-0 formal sum of X-points."""
    g = R.fib.gmap
    if D.model.source != g.source_curve and D.model.source != R.fib.curve:
        raise ModelMismatch("divisor class does not live on the construction's curve")
    if rng is None:
        rng = _class_rng(D, R)
    if attempts is None:
        # over large base extensions only fully-split supports are usable,
        # so give the shuffle proportionally more tries
        attempts = max(16, 16 * D.model.field.k)
    for _ in range(attempts):
        E = random_class_on(D.model, rng)
        Dp = cantor_add(D, E)
        plus = _good_curve_points(Dp, R)
        minus = _good_curve_points(E, R)
        if plus is None or minus is None:
            continue
        try:
            entries = []
            for K, x1, y1, t0 in plus:
                for q in _phi_point(R, K, x1, y1, t0):
                    entries.append((q, 1))
            for K, x1, y1, t0 in minus:
                for q in _phi_point(R, K, x1, y1, t0):
                    entries.append((q, -1))
        except BadSupport:
            continue
        return XDivisor(tuple(entries))
    raise BadSupport("no good representative found after shuffling")


def _mumford_transform(a: Poly, b: Poly, matrix, w_scale, field, target_F: Poly):
    """Transport a Mumford pair through x -> (alpha x + beta)/(gamma x + delta).

    The point map is (x, y) -> (m(x), w_scale * y / (gamma x + delta)^4).
    Raises BadSupport if the divisor meets the pole (degree would drop).
    """
    al, be, ga, de = matrix
    f = field
    n = a.degree
    det = f.sub(f.mul(al, de), f.mul(be, ga))
    # target a: substitute the adjugate into the degree-n homogenization of a
    from .polyring import BinaryForm

    aform = BinaryForm.from_affine(a, n)
    a2form = aform.substituted(de, f.neg(be), f.neg(ga), al)
    a2 = a2form.affine()
    if a2.degree != n:
        raise BadSupport("support meets the pole of the coordinate change")
    a2, _ = a2.monic()
    # numerator of b((delta x' - beta)/(-gamma x' + alpha)) at padding degree n-1
    bpad = BinaryForm(f, n - 1, [b[i] for i in range(n)])
    num = bpad.substituted(de, f.neg(be), f.neg(ga), al).affine()
    lin = Poly(f, [al, f.neg(ga)])  # alpha - gamma x'
    b2 = num
    for _ in range(5 - n):
        b2 = b2 * lin
    b2 = b2.scale(f.mul(w_scale, f.inv(f.pow(det, 4)))) % a2
    assert ((b2 * b2 - target_F) % a2).is_zero, "transported pair misses the target curve"
    return a2, b2


def _triple_class(R: CorrespondenceR, q: XPoint, odd_big: OddModel):
    """The class [(pi_H preimage triple of q) - 3 inf] on the big-field odd model."""
    fib = R.fib
    K = q.field
    big = odd_big.field
    t0 = embed(q.t, K, big)
    b = {k: embed(v, K, big) for k, v in q.bmap().items()}
    aq = Poly(big, [embed_poly(c, fib.field, big).eval(t0) for c in fib.G.cx])
    rho = R.rho(big, t0, b["b22"])
    bq = Poly(big, [b["b02"], b["b12"], b["b22"]]).scale(big.inv(rho))
    bq = bq % aq
    g = fib.gmap
    # carry the triple from the construction curve back to the source curve
    if not g.pre_transform.is_identity:
        pre = g.pre_transform.base_change(big) if big is not g.field else g.pre_transform
        inv = pre.inverse()
        FH = embed_poly(g.source_curve.F, g.field, big)
        aq, bq = _mumford_transform(aq, bq, inv.m, big.one, big, FH)
    # and onto the odd model
    tau = odd_big.tau
    if not tau.is_identity:
        w_scale = big.pow(tau.det, 4)
        aq, bq = _mumford_transform(aq, bq, tau.m, w_scale, big, odd_big.F)
    return DivisorClass(odd_big, aq, bq)


def reverse_on_xdivisor(DX: XDivisor, R: CorrespondenceR, model: OddModel | None = None) -> DivisorClass:
    """(pi_H)_* (pi_X)^* of an X-divisor, Cantor-reduced on the source odd model."""
    g = R.fib.gmap
    if model is None:
        model = OddModel.from_curve(g.source_curve)
    base = model.field
    if DX.is_empty:
        return DivisorClass.identity(model)
    degs = {e.field.k for e, _ in DX.entries}
    J = math.lcm(base.k, *degs)
    big = make_extension(base.p, J)
    odd_big = model.base_change(big) if big is not base else model
    total = DivisorClass.identity(odd_big)
    for q, w in DX.entries:
        cls = _triple_class(R, q, odd_big)
        total = cantor_add(total, cantor_mul(cls, w))
    if big is base:
        return total
    # the result of a Galois-stable divisor is rational: coerce down
    a_c = [project(c, big, base) for c in total.a.c]
    b_c = [project(c, big, base) for c in total.b.c]
    if any(c is None for c in a_c) or any(c is None for c in b_c):
        raise BadSupport("reverse image is not rational over the base field")
    return DivisorClass(model, Poly(base, a_c), Poly(base, b_c))


def roundtrip(D: DivisorClass, R: CorrespondenceR, rng=None, attempts=8) -> str:
    """Compare reverse(phi(D)) against [2]D and [-2]D: '+2', '-2', or 'mismatch'."""
    if rng is None:
        rng = _class_rng(D, R)
    model = D.model
    twice = cantor_mul(D, 2)
    last = None
    for _ in range(attempts):
        try:
            DX = phi_on_class(D, R, rng)
            E = reverse_on_xdivisor(DX, R, model)
        except BadSupport as exc:
            last = exc
            continue
        if E == twice:
            return "+2"
        if E == -twice:
            return "-2"
        return "mismatch"
    raise BadSupport(f"round trip found no good representative: {last}")


def consensus_sign(classes, R: CorrespondenceR, rng=None) -> str:
    """The shared round-trip sign over a batch of classes ('mixed' on failure)."""
    signs = set()
    for D in classes:
        out = roundtrip(D, R, rng)
        if out == "mismatch":
            return "mixed"
        if D.is_identity or cantor_add(D, D).is_identity:
            continue  # 2-torsion cannot distinguish the sign
        signs.add(out)
    if not signs:
        return "+2"
    if len(signs) > 1:
        return "mixed"
    return signs.pop()


def count_X_open(fib, X: CurveXModel, k: int) -> int:
    """Number of F_{q^k}-points of X over unramified fiber coordinates."""
    p = fib.field.p
    if p**k > _COUNT_GUARD:
        raise TooLarge(f"{p}^{k} exceeds the enumeration guard")
    field = make_extension(p, k)
    n = 0
    for t0 in field.elements():
        if fib.ramified_at(t0, field):
            continue
        n += len(fiber_points(X, t0, field))
    return n


def fiber_partition_oracle(fib, t0, field) -> int:
    """Independent fiber size: Galois-stable triple-pairs among the 6 preimages.

    Splits G(t0, x) and the y-values over an explicit extension, forms the four
    unordered pairs {A, iota(A)} of complementary point triples, and counts the
    ones fixed by the q^k-power Frobenius.  Must equal len(fiber_points).
    """
    base = fib.field
    if fib.ramified_at(t0, field):
        raise RamifiedFiber("oracle needs an unramified fiber")
    Gt = Poly(field, [embed_poly(c, base, field).eval(t0) for c in fib.G.cx])
    _, factors = factorize(Gt)
    e = math.lcm(*(h.degree for h, _ in factors))
    M = make_extension(base.p, field.k * e * 2)
    GM = embed_poly(Gt, field, M)
    xs = roots(GM)
    assert len(xs) == 3
    FM = embed_poly(fib.curve.F, base, M)
    pts = []
    for x in xs:
        y = M.sqrt(FM.eval(x))
        assert y is not None and y != M.zero
        pts.append((x, y))

    def enc_pt(x, y):
        return (M.encode(x), M.encode(y))

    def frob_triple(tri):
        return frozenset(enc_pt(M.frobenius_power(xv, field.k), M.frobenius_power(yv, field.k)) for xv, yv in tri)

    count = 0
    for signs in ((1, 1, 1), (1, 1, -1), (1, -1, 1), (1, -1, -1)):
        A = [(x, y if s > 0 else M.neg(y)) for (x, y), s in zip(pts, signs)]
        iA = [(x, M.neg(y)) for x, y in A]
        keyA = frozenset(enc_pt(*pt) for pt in A)
        keyiA = frozenset(enc_pt(*pt) for pt in iA)
        # decode back to elements for the Frobenius image
        sA = frob_triple(A)
        if sA in (keyA, keyiA):
            count += 1
    return count
