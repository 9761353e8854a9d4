"""Rational tractable subgroups: Galois-stable pairings of the 8 Weierstrass points.

A tractable subgroup is stored as its four coprime quadratic factors of F~,
each over the smallest extension containing its coefficients and normalized
to a canonical scaling, so subgroups compare as plain value objects.

Enumeration never factors over the full splitting field: each Frobenius orbit
of Weierstrass points is an F_q-irreducible factor, an even orbit self-pairs
by factoring over the half-degree extension, and two equal-size orbits
cross-pair at m offsets over the degree-m extension.  Extensions of degree
above 4 only ever appear in subgroup_elements, which materializes divisor
classes over the splitting field.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

from .curves import HCurve, OddModel, cantor_add, two_torsion_from_pair
from .errors import NotAPartitionOf8, TooLarge
from .fields import embed, make_extension
from .polyring import BinaryForm, Poly, roots

# s(T) for each factor-degree pattern of F~ with any Galois-stable pairing.
PATTERN_COUNTS = {
    (8,): 1,
    (6, 2): 1,
    (6, 1, 1): 1,
    (4, 2, 1, 1): 1,
    (4, 2, 2): 3,
    (4, 1, 1, 1, 1): 3,
    (3, 3, 2): 3,
    (3, 3, 1, 1): 3,
    (4, 4): 5,
    (2, 2, 2, 1, 1): 7,
    (2, 2, 1, 1, 1, 1): 9,
    (2, 1, 1, 1, 1, 1, 1): 15,
    (2, 2, 2, 2): 25,
    (1, 1, 1, 1, 1, 1, 1, 1): 105,
}


def count_for_pattern(pattern) -> int:
    """Number of rational tractable subgroups for a factor-degree pattern of F~."""
    t = tuple(sorted(pattern, reverse=True))
    if sum(t) != 8 or any(d < 1 for d in t):
        raise NotAPartitionOf8(f"{pattern!r} is not a partition of 8")
    return PATTERN_COUNTS.get(t, 0)


def normalize_quadratic(form: BinaryForm) -> BinaryForm:
    """Scale a binary quadratic canonically: monic in u, else unit uv coefficient."""
    f = form.field
    c0, c1, c2 = form.c
    if c2 != f.zero:
        return form.scale(f.inv(c2))
    if c1 != f.zero:
        return form.scale(f.inv(c1))
    return form.scale(f.inv(c0))


@dataclass(frozen=True)
class TractableSubgroup:
    """Four coprime quadratic factors of F~ whose pairing is Galois-stable."""

    quads: tuple  # 4 normalized BinaryForms, canonically sorted
    rational: bool = True

    @classmethod
    def from_quads(cls, quads, rational=True):
        qs = [normalize_quadratic(q) for q in quads]
        qs.sort(key=lambda q: (q.field.k, q.encode()))
        return cls(tuple(qs), rational)

    def key(self):
        return tuple((q.field.k, q.encode()) for q in self.quads)

    def key_in(self, big_field):
        """Canonical frozenset of the quadratics carried into a common field."""
        out = []
        for q in self.quads:
            qe = q.map_coeffs(lambda x: embed(x, q.field, big_field), big_field)
            out.append(normalize_quadratic(qe).encode())
        return frozenset(out)

    def field_degrees(self):
        return tuple(q.field.k for q in self.quads)

    def __repr__(self):
        return f"TractableSubgroup({[q.encode() for q in self.quads]})"


def _orbits_of(H: HCurve):
    """Frobenius orbits of Weierstrass points as irreducible factors (None = the v factor)."""
    _, factors = H.form.factor()
    orbits = []
    for g, m in factors:
        assert m == 1
        if g.affine().degree == 0:  # the factor v
            orbits.append((1, None))
        else:
            orbits.append((g.affine().degree, g.affine().monic()[0]))
    return orbits


def pattern_of(H: HCurve):
    return tuple(sorted((d for d, _ in _orbits_of(H)), reverse=True))


def _matchings(orbits):
    """All pairings of orbits: even orbits may self-pair, equal sizes cross at m offsets."""
    if not orbits:
        yield []
        return
    o = orbits[0]
    rest = orbits[1:]
    if o[0] % 2 == 0:
        for m in _matchings(rest):
            yield [("self", o)] + m
    for idx, o2 in enumerate(rest):
        if o2[0] == o[0]:
            rem = rest[:idx] + rest[idx + 1 :]
            for j in range(o[0]):
                for m in _matchings(rem):
                    yield [("cross", o, o2, j)] + m


def _quad_from_pair(field, r1, r2) -> BinaryForm:
    """The quadratic form with roots r1, r2 in P^1 (None = (1:0))."""
    f = field
    if r1 is None and r2 is None:
        raise ValueError("degenerate pair at infinity")
    if r1 is None or r2 is None:
        r = r2 if r1 is None else r1
        return BinaryForm(f, 2, (f.neg(r), f.one, f.zero))  # v*(u - r*v)
    return BinaryForm(f, 2, (f.mul(r1, r2), f.neg(f.add(r1, r2)), f.one))


class _Materializer:
    """Caches per-orbit factorizations and root lists used by the matchings.

    Canonical mode puts quadratics over the deterministic extension contexts
    (needed for serialization and cross-run comparison).  Fast mode represents
    them inside F_p[x]/(h) for the orbit's own factor h: the antipodal
    quadratic is Y^2 - (theta + theta^sigma) Y + theta theta^sigma with sigma
    the p^(m/2)-power Frobenius, which costs a few modular compositions
    instead of a factorization over F_{p^(m/2)}.  Either representation spans
    the same rational row space downstream.
    """

    def __init__(self, H: HCurve, fast: bool = False):
        self.H = H
        self.p = H.field.p
        self.fast = fast
        self._self_cache = {}
        self._root_cache = {}
        self._alg_cache = {}

    def _algebra(self, poly: Poly):
        """F_p[x]/(poly) as an extension context with the orbit's own modulus."""
        key = poly.encode()
        A = self._alg_cache.get(key)
        if A is None:
            from .fields import ExtField

            A = ExtField(self.H.field, tuple(poly.c))
            self._alg_cache[key] = A
        return A

    def self_quads(self, orbit):
        m, poly = orbit
        key = (m, poly.encode() if poly else None)
        got = self._self_cache.get(key)
        if got is None:
            if m == 2:
                got = [BinaryForm(self.H.field, 2, (poly[0], poly[1], self.H.field.one))]
            elif self.fast:
                A = self._algebra(poly)
                theta = (0, 1) + (0,) * (m - 2)
                pi = A.frobenius_power(theta, m // 2)
                tau1 = A.add(theta, pi)
                tau0 = A.mul(theta, pi)
                base = BinaryForm(A, 2, (tau0, A.neg(tau1), A.one))
                got = [base]
                for i in range(1, m // 2):
                    got.append(
                        BinaryForm(A, 2, tuple(A.frobenius_power(c, i) for c in base.c))
                    )
            else:
                K = make_extension(self.p, m // 2)
                pk, _ = poly.map_coeffs(lambda c: K.from_int(c), K).monic()
                from .polyring import _equal_degree, _poly_rng

                facs = _equal_degree(pk, 2, _poly_rng(pk))
                assert all(g.degree == 2 for g in facs)
                facs.sort(key=lambda g: g.sort_key())
                got = [BinaryForm(K, 2, (g[0], g[1], K.one)) for g in facs]
            self._self_cache[key] = got
        return got

    def ordered_roots(self, orbit, m, field):
        """Roots of the orbit in the given field, Frobenius-ordered from the least."""
        size, poly = orbit
        key = (size, poly.encode() if poly else None, id(field))
        got = self._root_cache.get(key)
        if got is None:
            if poly is None:
                got = [None]
            elif self.fast and getattr(field, "modulus", None) == tuple(poly.c):
                # the orbit's own algebra: its roots are theta and conjugates
                theta = (0, 1) + (0,) * (size - 2)
                got = [theta]
                for _ in range(size - 1):
                    got.append(field.frobenius_power(got[-1], 1))
            else:
                pk = poly.map_coeffs(lambda c: field.from_int(c), field)
                rs = roots(pk)
                assert len(rs) == size
                r = min(rs, key=field.encode)
                got = [r]
                for _ in range(size - 1):
                    got.append(field.frobenius_power(got[-1], 1))
            self._root_cache[key] = got
        return got

    def cross_quads(self, o1, o2, j):
        m = o1[0]
        f = self.H.field
        if m == 1:
            r1 = None if o1[1] is None else f.neg(o1[1][0])
            r2 = None if o2[1] is None else f.neg(o2[1][0])
            return [_quad_from_pair(f, r1, r2)]
        K = self._algebra(o1[1]) if self.fast else make_extension(self.p, m)
        rs1 = self.ordered_roots(o1, m, K)
        rs2 = self.ordered_roots(o2, m, K)
        return [_quad_from_pair(K, rs1[i], rs2[(i + j) % m]) for i in range(m)]


def enumerate_tractable(H: HCurve, fast: bool = False):
    """All F_q-rational tractable subgroups of Jac(H)[2] (canonically sorted).

    With fast=True, quadratics over extensions are represented in quotient
    algebras by the orbit's own irreducible factor instead of the canonical
    contexts: same subgroups and same downstream linear algebra, no
    extension-field factorizations (used on the survey hot path).
    """
    orbits = _orbits_of(H)
    if sum(1 for d, _ in orbits if d % 2) % 2:
        return []
    orbits.sort(key=lambda o: (-o[0], o[1].encode() if o[1] else ()))
    mat = _Materializer(H, fast)
    out = []
    for matching in _matchings(orbits):
        quads = []
        for item in matching:
            if item[0] == "self":
                quads.extend(mat.self_quads(item[1]))
            else:
                _, o1, o2, j = item
                quads.extend(mat.cross_quads(o1, o2, j))
        assert len(quads) == 4
        out.append(TractableSubgroup.from_quads(quads))
    out.sort(key=lambda s: s.key())
    return out


def _pairings(items):
    """All partitions of items into unordered pairs."""
    if not items:
        yield []
        return
    first = items[0]
    for i in range(1, len(items)):
        pair = (first, items[i])
        rest = items[1:i] + items[i + 1 :]
        for more in _pairings(rest):
            yield [pair] + more


def splitting_degree(H: HCurve) -> int:
    return math.lcm(*(d for d, _ in _orbits_of(H)))


def brute_force_tractable(H: HCurve):
    """Oracle: test all 105 pair-partitions of the Weierstrass points for stability."""
    L = splitting_degree(H)
    if L > 15:
        raise TooLarge(f"splitting field degree {L} > 15")
    E = make_extension(H.field.p, L)
    pts = []
    if H.form.v_multiplicity:
        pts.append(None)
    FE = H.F.map_coeffs(lambda c: E.from_int(c) if E.k > 1 else c, E)
    pts.extend(roots(FE))
    assert len(pts) == 8, "curve must have 8 distinct Weierstrass points"

    def frob_pt(r):
        return None if r is None else E.frobenius_power(r, 1)

    out = []
    for pairing in _pairings(pts):
        quads = [_quad_from_pair(E, r1, r2) for r1, r2 in pairing]
        keyset = frozenset(normalize_quadratic(q).encode() for q in quads)
        conj = [
            _quad_from_pair(E, frob_pt(r1), frob_pt(r2)) for r1, r2 in pairing
        ]
        conjset = frozenset(normalize_quadratic(q).encode() for q in conj)
        if keyset == conjset:
            out.append(TractableSubgroup.from_quads(quads))
    out.sort(key=lambda s: s.key())
    return out


def subgroup_elements(S: TractableSubgroup, H: HCurve):
    """The 8 classes of the subgroup, as divisor classes over the splitting field."""
    L = splitting_degree(H)
    E = make_extension(H.field.p, L)
    model = OddModel.from_curve(H, E)
    gens = [two_torsion_from_pair(model, q) for q in S.quads]
    elems = {}

    def put(D):
        elems[(D.a.c, D.b.c)] = D

    from .curves import DivisorClass

    put(DivisorClass.identity(model))
    for g in gens:
        put(g)
    put(cantor_add(gens[0], gens[1]))
    put(cantor_add(gens[0], gens[2]))
    put(cantor_add(gens[0], gens[3]))
    assert len(elems) == 8, "subgroup is not (Z/2Z)^3"
    total = gens[0]
    for g in gens[1:]:
        total = cantor_add(total, g)
    assert total.is_identity, "four generators must multiply to the identity"
    return list(elems.values())


# --- Expectation of success over random curves ------------------------------


@dataclass(frozen=True)
class ExpectationResult:
    value: Fraction
    decimal4: str

    def __str__(self):
        return f"{self.value} ~ {self.decimal4}"


def _partitions(n: int, largest=None):
    if n == 0:
        yield ()
        return
    if largest is None:
        largest = n
    for k in range(min(n, largest), 0, -1):
        for rest in _partitions(n - k, k):
            yield (k,) + rest


def partition_weight(t) -> Fraction:
    """Asymptotic probability 1 / prod(nu! * n^nu) of factor pattern t."""
    w = Fraction(1)
    for n in set(t):
        nu = t.count(n)
        w /= Fraction(math.factorial(nu) * n**nu)
    return w


def expectation(success_prob=Fraction(1, 4)) -> ExpectationResult:
    """Exact expected fraction of curves admitting a rational isogeny.

    Sums (1 - (1 - p)^{s(T)}) * weight(T) over all 22 partitions T of 8,
    where s(T) is the tractable-subgroup count of the pattern.
    """
    p = Fraction(success_prob)
    if not 0 <= p <= 1:
        raise ValueError("success probability must lie in [0, 1]")
    total = Fraction(0)
    for t in _partitions(8):
        s = PATTERN_COUNTS.get(t, 0)
        if s:
            total += (1 - (1 - p) ** s) * partition_weight(t)
    scaled = round(total * 10**4)
    return ExpectationResult(total, f"{scaled // 10**4}.{scaled % 10**4:04d}")
