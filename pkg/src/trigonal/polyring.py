"""Univariate polynomials over finite-field contexts, plus degree-8 binary forms.

A Poly stores a trimmed ascending coefficient tuple together with its field
context (any context from fields.py, duck-typed).  Factorization follows the
classic squarefree / distinct-degree / equal-degree pipeline; the randomized
equal-degree splitting draws from an rng seeded by the SHA-256 of the input's
canonical encoding, so results are bit-stable across runs and call orders,
and the returned factor list is canonically sorted on top of that.
"""

from __future__ import annotations

import hashlib
import random

from .errors import NotMonicCubic, ZeroPolynomial


class Poly:
    """Immutable univariate polynomial over a field context."""

    __slots__ = ("field", "c")

    def __init__(self, field, coeffs, trim=True):
        if trim:
            coeffs = list(coeffs)
            z = field.zero
            while coeffs and coeffs[-1] == z:
                coeffs.pop()
        self.field = field
        self.c = tuple(coeffs)

    @classmethod
    def zero(cls, field):
        return cls(field, (), trim=False)

    @classmethod
    def one(cls, field):
        return cls(field, (field.one,), trim=False)

    @classmethod
    def const(cls, field, a):
        return cls(field, (a,))

    @classmethod
    def x(cls, field):
        return cls(field, (field.zero, field.one), trim=False)

    @classmethod
    def from_ints(cls, field, ints):
        return cls(field, [field.from_int(n) for n in ints])

    @property
    def degree(self):
        return len(self.c) - 1

    @property
    def is_zero(self):
        return not self.c

    @property
    def lc(self):
        if not self.c:
            raise ZeroPolynomial("zero polynomial has no leading coefficient")
        return self.c[-1]

    def __getitem__(self, i):
        return self.c[i] if 0 <= i < len(self.c) else self.field.zero

    def __eq__(self, other):
        return isinstance(other, Poly) and self.field is other.field and self.c == other.c

    def __hash__(self):
        return hash((id(self.field), self.c))

    def encode(self):
        f = self.field
        return tuple(f.encode(x) for x in self.c)

    def sort_key(self):
        return (len(self.c), self.encode())

    def __repr__(self):
        f = self.field
        if not self.c:
            return "0"
        parts = []
        for i in range(len(self.c) - 1, -1, -1):
            ci = self.c[i]
            if ci == f.zero:
                continue
            cs = str(f.encode(ci)) if f.k == 1 else str(list(ci))
            if i == 0:
                parts.append(cs)
            elif i == 1:
                parts.append(f"{cs}*x" if cs != "1" else "x")
            else:
                parts.append(f"{cs}*x^{i}" if cs != "1" else f"x^{i}")
        return " + ".join(parts)

    # -- ring operations ----------------------------------------------------

    def __add__(self, other):
        f = self.field
        a, b = self.c, other.c
        if len(a) < len(b):
            a, b = b, a
        out = list(a)
        if f.k == 1:
            p = f.p
            for i, bi in enumerate(b):
                out[i] = (out[i] + bi) % p
        else:
            for i, bi in enumerate(b):
                out[i] = f.add(out[i], bi)
        return Poly(f, out)

    def __neg__(self):
        f = self.field
        return Poly(f, [f.neg(x) for x in self.c], trim=False)

    def __sub__(self, other):
        return self + (-other)

    def __mul__(self, other):
        f = self.field
        a, b = self.c, other.c
        if not a or not b:
            return Poly.zero(f)
        if f.k == 1:
            p = f.p
            out = [0] * (len(a) + len(b) - 1)
            for i, ai in enumerate(a):
                if ai:
                    for j, bj in enumerate(b):
                        out[i + j] += ai * bj
            return Poly(f, [x % p for x in out])
        out = [f.zero] * (len(a) + len(b) - 1)
        for i, ai in enumerate(a):
            if ai != f.zero:
                for j, bj in enumerate(b):
                    out[i + j] = f.add(out[i + j], f.mul(ai, bj))
        return Poly(f, out)

    def scale(self, c):
        f = self.field
        if c == f.zero:
            return Poly.zero(f)
        return Poly(f, [f.mul(x, c) for x in self.c], trim=False)

    def shifted(self, n):
        """Multiply by x^n."""
        if not self.c:
            return self
        return Poly(self.field, (self.field.zero,) * n + self.c, trim=False)

    def divmod(self, other):
        f = self.field
        if other.is_zero:
            raise ZeroDivisionError("division by zero polynomial")
        if f.k == 1:
            p = f.p
            b = other.c
            binv = pow(b[-1], -1, p)
            r = list(self.c)
            n = len(b)
            q = [0] * max(0, len(r) - n + 1)
            while len(r) >= n:
                if r[-1] == 0:
                    r.pop()
                    continue
                qc = r[-1] * binv % p
                d = len(r) - n
                q[d] = qc
                for i in range(n):
                    r[d + i] = (r[d + i] - qc * b[i]) % p
                while r and r[-1] == 0:
                    r.pop()
            return Poly(f, q), Poly(f, r)
        b = other.c
        binv = f.inv(b[-1])
        r = list(self.c)
        n = len(b)
        q = [f.zero] * max(0, len(r) - n + 1)
        while len(r) >= n:
            if r[-1] == f.zero:
                r.pop()
                continue
            qc = f.mul(r[-1], binv)
            d = len(r) - n
            q[d] = qc
            for i in range(n):
                r[d + i] = f.sub(r[d + i], f.mul(qc, b[i]))
            while r and r[-1] == f.zero:
                r.pop()
        return Poly(f, q), Poly(f, r)

    def __mod__(self, other):
        return self.divmod(other)[1]

    def __floordiv__(self, other):
        return self.divmod(other)[0]

    def monic(self):
        """(monic polynomial, leading coefficient)."""
        c = self.lc
        if c == self.field.one:
            return self, c
        return self.scale(self.field.inv(c)), c

    def eval(self, x):
        f = self.field
        if f.k == 1:
            p = f.p
            y = 0
            for ci in reversed(self.c):
                y = (y * x + ci) % p
            return y
        y = f.zero
        for ci in reversed(self.c):
            y = f.add(f.mul(y, x), ci)
        return y

    def derivative(self):
        f = self.field
        if f.k == 1:
            p = f.p
            return Poly(f, [i * ci % p for i, ci in enumerate(self.c)][1:])
        out = []
        for i in range(1, len(self.c)):
            out.append(f.mul(self.c[i], f.from_int(i)))
        return Poly(f, out)

    def pow_mod(self, n: int, modulus: "Poly"):
        r = Poly.one(self.field)
        b = self % modulus
        while n:
            if n & 1:
                r = (r * b) % modulus
            b = (b * b) % modulus
            n >>= 1
        return r

    def compose_mod(self, g: "Poly", modulus: "Poly") -> "Poly":
        """self(g) mod modulus."""
        f = self.field
        r = Poly.zero(f)
        for c in reversed(self.c):
            r = (r * g) % modulus
            if c != f.zero:
                r = r + Poly.const(f, c)
        return r

    def map_coeffs(self, fn, new_field):
        return Poly(new_field, [fn(x) for x in self.c])


def gcd(a: Poly, b: Poly) -> Poly:
    while not b.is_zero:
        a, b = b, a % b
    if a.is_zero:
        return a
    return a.monic()[0]


def xgcd(a: Poly, b: Poly):
    """(g, s, t) with g monic, s*a + t*b = g."""
    f = a.field
    r0, r1 = a, b
    s0, s1 = Poly.one(f), Poly.zero(f)
    t0, t1 = Poly.zero(f), Poly.one(f)
    while not r1.is_zero:
        q, r = r0.divmod(r1)
        r0, r1 = r1, r
        s0, s1 = s1, s0 - q * s1
        t0, t1 = t1, t0 - q * t1
    if r0.is_zero:
        return r0, s0, t0
    c = f.inv(r0.lc)
    return r0.scale(c), s0.scale(c), t0.scale(c)


def is_squarefree(poly: Poly) -> bool:
    if poly.is_zero:
        raise ZeroPolynomial("squarefreeness of the zero polynomial")
    if poly.degree == 0:
        return True
    return gcd(poly, poly.derivative()).degree == 0


def _pth_root(poly: Poly) -> Poly:
    """Inverse of x -> x^p on polynomials of the form g(x^p)."""
    f = poly.field
    p = f.p
    out = []
    for i in range(0, len(poly.c), p):
        out.append(f.frobenius_power(poly.c[i], f.k - 1) if f.k > 1 else poly.c[i])
    return Poly(f, out)


def squarefree_decomposition(poly: Poly):
    """[(monic squarefree, multiplicity)] with poly = lc * prod g^m (Yun, char p)."""
    f = poly.field
    p = f.p
    poly = poly.monic()[0]
    if poly.degree < 1:
        return []
    out = []
    d = poly.derivative()
    if d.is_zero:
        for g, m in squarefree_decomposition(_pth_root(poly)):
            out.append((g, m * p))
        return out
    c = gcd(poly, d)
    w = poly // c
    i = 1
    while w.degree > 0:
        y = gcd(w, c)
        z = w // y
        if z.degree > 0:
            out.append((z, i))
        w = y
        c = c // y
        i += 1
    if c.degree > 0:
        for g, m in squarefree_decomposition(_pth_root(c)):
            out.append((g, m * p))
    return out


def _poly_rng(poly: Poly) -> random.Random:
    h = hashlib.sha256(repr((poly.field.p, poly.field.k, poly.encode())).encode()).digest()
    return random.Random(int.from_bytes(h, "big"))


def _random_poly(field, degree, rng):
    return Poly(field, [field.random(rng) for _ in range(degree)] + [field.one], trim=False)


def _distinct_degree(poly: Poly):
    """[(product of irreducibles of degree d, d)] for monic squarefree input."""
    f = poly.field
    q = f.order
    out = []
    h = Poly.x(f)
    x = Poly.x(f)
    d = 0
    while poly.degree > 2 * (d + 1) - 1 and poly.degree > 0:
        d += 1
        h = h.pow_mod(q, poly)
        g = gcd(h - x, poly)
        if g.degree > 0:
            out.append((g, d))
            poly = poly // g
            h = h % poly
    if poly.degree > 0:
        out.append((poly, poly.degree))
    return out


def _equal_degree(poly: Poly, d: int, rng) -> list:
    """Cantor-Zassenhaus split of a monic squarefree product of degree-d irreducibles."""
    f = poly.field
    if poly.degree == d:
        return [poly]
    e = (f.order**d - 1) // 2
    while True:
        h = _random_poly(f, rng.randrange(1, poly.degree), rng)
        g = gcd(h, poly)
        if 0 < g.degree < poly.degree:
            break
        t = h.pow_mod(e, poly) - Poly.one(f)
        g = gcd(t, poly)
        if 0 < g.degree < poly.degree:
            break
    return _equal_degree(g, d, rng) + _equal_degree(poly // g, d, rng)


def factorize(poly: Poly, rng=None):
    """(leading coefficient, [(monic irreducible, multiplicity)]) sorted canonically."""
    if poly.is_zero:
        raise ZeroPolynomial("cannot factor the zero polynomial")
    lc = poly.lc
    if rng is None:
        rng = _poly_rng(poly)
    factors = []
    for part, mult in squarefree_decomposition(poly):
        for prod, d in _distinct_degree(part):
            for irr in _equal_degree(prod, d, rng):
                factors.append((irr, mult))
    factors.sort(key=lambda fm: fm[0].sort_key())
    return lc, factors


def is_irreducible(poly: Poly) -> bool:
    if poly.is_zero:
        raise ZeroPolynomial("irreducibility of the zero polynomial")
    if poly.degree == 0:
        return False
    _, factors = factorize(poly)
    return len(factors) == 1 and factors[0][1] == 1 and factors[0][0].degree == poly.degree


def roots(poly: Poly, rng=None) -> list:
    """Distinct roots of poly in its own field."""
    f = poly.field
    if poly.is_zero:
        raise ZeroPolynomial("roots of the zero polynomial")
    if rng is None:
        rng = _poly_rng(poly)
    sf = poly.monic()[0]
    g = gcd(sf, sf.derivative())
    if g.degree > 0:
        sf = sf // g
    x = Poly.x(f)
    xq = x.pow_mod(f.order, sf)
    lin = gcd(xq - x, sf)
    if lin.degree == 0:
        return []
    out = [f.neg(h.c[0]) for h in _equal_degree(lin, 1, rng)]
    out.sort(key=f.encode)
    return out


def exact_square_root(s: Poly):
    """(alpha, r) with s = alpha * r^2, r monic, or None if s/lc(s) is not a square."""
    if s.is_zero:
        raise ZeroPolynomial("square root of the zero polynomial")
    f = s.field
    alpha = s.lc
    if s.degree % 2:
        return None
    g = s.scale(f.inv(alpha))
    m = s.degree // 2
    half = f.inv(f.from_int(2))
    r = [f.zero] * m + [f.one]
    for j in range(1, m + 1):
        # coefficient of x^(2m-j) in r^2: 2*r_{m-j} + sum over strictly-inner pairs
        acc = f.zero
        for i in range(m - j + 1, m):
            i2 = 2 * m - j - i
            if i2 < i:
                break
            prod = f.mul(r[i], r[i2])
            acc = f.add(acc, prod if i2 == i else f.add(prod, prod))
        r[m - j] = f.mul(f.sub(g[2 * m - j], acc), half)
    rp = Poly(f, r, trim=False)
    if rp * rp == g:
        return alpha, rp
    return None


# --- G(t, x): cubic-in-x with polynomial-in-t coefficients ------------------


class BiPoly:
    """Polynomial in x whose coefficients are Polys in t (ascending in x)."""

    __slots__ = ("field", "cx")

    def __init__(self, field, coeffs_x):
        self.field = field
        self.cx = tuple(coeffs_x)

    @property
    def deg_x(self):
        return len(self.cx) - 1

    def eval_t(self, t0, target_field=None, embed_fn=None) -> Poly:
        """Specialize t -> t0, giving a Poly in x (optionally over an extension)."""
        if target_field is None:
            return Poly(self.field, [c.eval(t0) for c in self.cx])
        return Poly(target_field, [embed_fn(c).eval(t0) for c in self.cx])

    def eval(self, t0, x0):
        f = self.field
        y = f.zero
        for c in reversed(self.cx):
            y = f.add(f.mul(y, x0), c.eval(t0))
        return y


def reduce_mod_cubic(F: Poly, G: BiPoly):
    """(f0, f1, f2) in F_q[t] with f0 + f1*x + f2*x^2 congruent to F(x) mod G(t,x)."""
    if G.deg_x != 3 or G.cx[3] != Poly.one(G.field):
        raise NotMonicCubic("G must be monic of degree 3 in x")
    f = G.field
    cs = [Poly.const(f, c) for c in F.c]
    for i in range(len(cs) - 1, 2, -1):
        ci = cs[i]
        if not ci.is_zero:
            for j in range(3):
                cs[i - 3 + j] = cs[i - 3 + j] - ci * G.cx[j]
            cs[i] = Poly.zero(f)
    while len(cs) < 3:
        cs.append(Poly.zero(f))
    return cs[0], cs[1], cs[2]


# --- binary forms of fixed degree -------------------------------------------


class BinaryForm:
    """Homogeneous form in (u, v): coeffs[i] multiplies u^i v^(d-i)."""

    __slots__ = ("field", "d", "c")

    def __init__(self, field, d, coeffs):
        coeffs = tuple(coeffs)
        assert len(coeffs) == d + 1
        self.field = field
        self.d = d
        self.c = coeffs

    @classmethod
    def from_affine(cls, poly: Poly, d: int):
        """Homogenize: v^d * poly(u/v)."""
        if poly.degree > d:
            raise ValueError("affine degree exceeds form degree")
        f = poly.field
        return cls(f, d, [poly[i] for i in range(d + 1)])

    @classmethod
    def from_ints(cls, field, d, ints):
        return cls(field, d, [field.from_int(n) for n in ints])

    def affine(self) -> Poly:
        """poly(x) = form(x, 1)."""
        return Poly(self.field, self.c)

    @property
    def is_zero(self):
        z = self.field.zero
        return all(x == z for x in self.c)

    @property
    def v_multiplicity(self) -> int:
        """Multiplicity of the linear factor v, i.e. d - deg(affine part)."""
        if self.is_zero:
            raise ZeroPolynomial("zero form")
        return self.d - self.affine().degree

    def eval(self, u, v):
        f = self.field
        y = f.zero
        up = f.one
        vps = [f.one]
        for _ in range(self.d):
            vps.append(f.mul(vps[-1], v))
        for i, ci in enumerate(self.c):
            if ci != f.zero:
                y = f.add(y, f.mul(ci, f.mul(up, vps[self.d - i])))
            up = f.mul(up, u)
        return y

    def eval_point(self, pt):
        """Evaluate at a point of P^1 given as x (field element) or None for (1:0)."""
        if pt is None:
            return self.c[self.d]
        return self.affine().eval(pt)

    def scale(self, c):
        f = self.field
        return BinaryForm(f, self.d, [f.mul(x, c) for x in self.c])

    def __eq__(self, other):
        return (
            isinstance(other, BinaryForm)
            and self.field is other.field
            and self.d == other.d
            and self.c == other.c
        )

    def __hash__(self):
        return hash((id(self.field), self.d, self.c))

    def encode(self):
        f = self.field
        return tuple(f.encode(x) for x in self.c)

    def __repr__(self):
        return f"BinaryForm({self.encode()})"

    def substituted(self, a, b, c, d):
        """The form (u, v) -> self(a*u + b*v, c*u + d*v)."""
        f = self.field

        def convolve(x, y):
            out = [f.zero] * (len(x) + len(y) - 1)
            for i, xi in enumerate(x):
                if xi != f.zero:
                    for j, yj in enumerate(y):
                        out[i + j] = f.add(out[i + j], f.mul(xi, yj))
            return out

        # powers of the two linear forms, as coefficient lists ascending in u
        lin1 = [b, a]  # a*u + b*v
        lin2 = [d, c]  # c*u + d*v
        pow1 = [[f.one]]
        pow2 = [[f.one]]
        for _ in range(self.d):
            pow1.append(convolve(pow1[-1], lin1))
            pow2.append(convolve(pow2[-1], lin2))
        out = [f.zero] * (self.d + 1)
        for i, ci in enumerate(self.c):
            if ci != f.zero:
                term = convolve(pow1[i], pow2[self.d - i])
                for j, tj in enumerate(term):
                    out[j] = f.add(out[j], f.mul(ci, tj))
        return BinaryForm(f, self.d, out)

    def is_squarefree(self) -> bool:
        if self.is_zero:
            raise ZeroPolynomial("zero form")
        return self.v_multiplicity <= 1 and is_squarefree(self.affine())

    def map_coeffs(self, fn, new_field):
        return BinaryForm(new_field, self.d, [fn(x) for x in self.c])

    def factor(self):
        """(scalar, [(irreducible BinaryForm normalized, multiplicity)]).

        The affine part is factored with the univariate routine; the factor v
        (coeffs (1, 0, ..., 0) of degree 1) carries the v-multiplicity.
        """
        f = self.field
        aff = self.affine()
        out = []
        vm = self.v_multiplicity
        if vm:
            out.append((BinaryForm(f, 1, (f.one, f.zero)), vm))
        if aff.degree >= 1:
            lc, factors = factorize(aff)
            for g, m in factors:
                out.append((BinaryForm.from_affine(g, g.degree), m))
        else:
            lc = aff.c[0] if aff.c else f.one
        return lc, out
