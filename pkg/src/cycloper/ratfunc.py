"""Univariate rational functions over an exact field, used both for the
transcendental-parameter layers and for functions of the global coordinate t.

Polynomials are dense coefficient tuples (ascending, no trailing zeros, the
empty tuple is 0).  A RatFunc is a reduced num/den pair with monic
denominator, so equality and hashing are canonical.
"""

from __future__ import annotations

from fractions import Fraction

from .errors import IrreducibleDenominator, MonodromyObstruction
from .scalars import CycNum, CyclotomicField

INFINITY = "inf"  # marker for the point at infinity


# ---------------------------------------------------------------------------
# raw polynomial helpers, parameterised by the coefficient field facade K
# (K needs .zero, .one, .coerce, and elements with exact dunders)
# ---------------------------------------------------------------------------

def ptrim(cs):
    cs = list(cs)
    while cs and not cs[-1]:
        cs.pop()
    return tuple(cs)


def pdeg(cs):
    return len(cs) - 1


def padd(K, a, b):
    n = max(len(a), len(b))
    za = list(a) + [K.zero] * (n - len(a))
    zb = list(b) + [K.zero] * (n - len(b))
    return ptrim(x + y for x, y in zip(za, zb))


def pneg(a):
    return tuple(-x for x in a)


def psub(K, a, b):
    return padd(K, a, pneg(b))


def pscale(a, c):
    if not c:
        return ()
    return ptrim(x * c for x in a)


def pmul(K, a, b):
    if not a or not b:
        return ()
    out = [K.zero] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                if y:
                    out[i + j] = out[i + j] + x * y
    return ptrim(out)


def ppow(K, a, n):
    out = (K.one,)
    base = a
    while n:
        if n & 1:
            out = pmul(K, out, base)
        base = pmul(K, base, base)
        n >>= 1
    return out


def pdivmod(K, a, b):
    if not b:
        raise ZeroDivisionError("polynomial division by zero")
    a = list(a)
    lb = b[-1]
    inv_lb = K.one / lb
    q = [K.zero] * max(0, len(a) - len(b) + 1)
    for i in range(len(q) - 1, -1, -1):
        c = a[i + len(b) - 1] * inv_lb
        q[i] = c
        if c:
            for j, bc in enumerate(b):
                a[i + j] = a[i + j] - c * bc
    return ptrim(q), ptrim(a)


def pmonic(K, a):
    if not a:
        return a
    lc = a[-1]
    if lc == K.one:
        return a
    return pscale(a, K.one / lc)


def pgcd(K, a, b):
    a, b = ptrim(a), ptrim(b)
    while b:
        a, b = b, pdivmod(K, a, b)[1]
    return pmonic(K, a)


def pxgcd(K, a, b):
    """(g, s, t) with s*a + t*b = g, g monic."""
    r0, r1 = ptrim(a), ptrim(b)
    s0, s1 = (K.one,), ()
    t0, t1 = (), (K.one,)
    while r1:
        q, r = pdivmod(K, r0, r1)
        r0, r1 = r1, r
        s0, s1 = s1, psub(K, s0, pmul(K, q, s1))
        t0, t1 = t1, psub(K, t0, pmul(K, q, t1))
    if not r0:
        return (), s0, t0
    lc = r0[-1]
    inv = K.one / lc
    return pscale(r0, inv), pscale(s0, inv), pscale(t0, inv)


def pderiv_(K, a):
    out = []
    for i, c in enumerate(a):
        if i:
            out.append(c * i)
    return ptrim(out)


def peval(K, a, x):
    out = K.zero
    for c in reversed(a):
        out = out * x + c
    return out


def pshift(K, a, p):
    """Coefficients of a(x + p)."""
    out = ()
    for c in reversed(a):
        out = padd(K, pmul(K, out, (p, K.one)), (c,))
    return out


def pcompose_power(K, a, q):
    """a(x^q)."""
    if not a:
        return ()
    out = [K.zero] * ((len(a) - 1) * q + 1)
    for i, c in enumerate(a):
        out[i * q] = c
    return ptrim(out)


def pscale_var(K, a, c):
    """a(c*x)."""
    out = []
    pw = K.one
    for coeff in a:
        out.append(coeff * pw)
        pw = pw * c
    return ptrim(out)


def pseries_inv(K, a, n):
    """Inverse of the power series a (a[0] != 0) modulo x^n."""
    inv0 = K.one / a[0]
    out = [inv0] + [K.zero] * (n - 1)
    for k in range(1, n):
        acc = K.zero
        for j in range(1, min(k, len(a) - 1) + 1):
            acc = acc + a[j] * out[k - j]
        out[k] = -inv0 * acc
    return tuple(out)


def squarefree_decomposition(K, f):
    """Yun's algorithm: returns ([(P_i, i)], lc) with f = lc * prod P_i^i,
    the P_i monic, squarefree, pairwise coprime."""
    f = ptrim(f)
    if not f:
        raise ZeroDivisionError("squarefree decomposition of 0")
    lc = f[-1]
    f = pmonic(K, f)
    if len(f) == 1:
        return [], lc
    fp = pderiv_(K, f)
    a = pgcd(K, f, fp)
    if pdeg(a) == 0:
        return [(f, 1)], lc
    b = pdivmod(K, f, a)[0]
    c = pdivmod(K, fp, a)[0]
    d = psub(K, c, pderiv_(K, b))
    out = []
    i = 1
    while pdeg(b) > 0:
        ai = pgcd(K, b, d)
        if pdeg(ai) > 0:
            out.append((ai, i))
        b = pdivmod(K, b, ai)[0]
        c = pdivmod(K, d, ai)[0]
        d = psub(K, c, pderiv_(K, b))
        i += 1
    return out, lc


# ---------------------------------------------------------------------------
# the function field and its elements
# ---------------------------------------------------------------------------

class FunctionField:
    """Field K(var) of rational functions over a coefficient field K."""

    _cache = {}

    def __init__(self, var: str, coeff):
        self.var = var
        self.coeff = coeff
        self.zero = RatFunc(self, (), (coeff.one,), reduce=False)
        self.one = RatFunc(self, (coeff.one,), (coeff.one,), reduce=False)
        self.gen = RatFunc(self, (coeff.zero, coeff.one), (coeff.one,), reduce=False)
        self.points = []  # registered candidate pole locations (elements of K)
        self._gcd_cache = {}

    def cached_gcd(self, a, b):
        if len(a) == 1 or len(b) == 1:
            return (self.coeff.one,) if (a and b) else pmonic(self.coeff, a or b)
        key = (a, b)
        hit = self._gcd_cache.get(key)
        if hit is None:
            hit = pgcd(self.coeff, a, b)
            if len(self._gcd_cache) > 40000:
                self._gcd_cache.clear()
            self._gcd_cache[key] = hit
        return hit

    @classmethod
    def get(cls, var, coeff):
        key = (var, id(coeff))
        if key not in cls._cache:
            cls._cache[key] = cls(var, coeff)
        return cls._cache[key]

    def __repr__(self):
        return f"FunctionField({self.var!r}, {self.coeff!r})"

    # -- facade -------------------------------------------------------------
    def coerce(self, x):
        if isinstance(x, RatFunc):
            if x.field is self:
                return x
            if x.field.var == self.var:
                num = tuple(self.coeff.coerce(c) for c in x.num)
                den = tuple(self.coeff.coerce(c) for c in x.den)
                return RatFunc(self, num, den)
            # constant from a lower layer of this chain, or a constant of a
            # foreign chain
            try:
                return self.constant(self.coeff.coerce(x))
            except TypeError:
                if x.is_constant():
                    return self.coerce(x.constant_value())
                raise
        if isinstance(x, (int, Fraction, CycNum)):
            return self.constant(self.coeff.coerce(x))
        raise TypeError(f"cannot coerce {x!r} into {self!r}")

    def constant(self, c):
        if not c:
            return self.zero
        return RatFunc(self, (c,), (self.coeff.one,), reduce=False)

    def from_coeffs(self, num, den=None):
        num = tuple(self.coeff.coerce(c) for c in num)
        den = (self.coeff.one,) if den is None else tuple(self.coeff.coerce(c) for c in den)
        return RatFunc(self, num, den)

    def is_zero(self, x):
        return not x

    def contains(self, x):
        return isinstance(x, RatFunc) and x.field is self

    def register_points(self, pts):
        for p in pts:
            p = self.coeff.coerce(p)
            if all(p != q for q in self.points):
                self.points.append(p)

    # -- helpers ------------------------------------------------------------
    def chain_fields(self):
        """The tower below (and including) this field, outermost first."""
        out = [self]
        f = self.coeff
        while isinstance(f, FunctionField):
            out.append(f)
            f = f.coeff
        out.append(f)  # the CyclotomicField at the bottom
        return out

    def bottom(self) -> CyclotomicField:
        f = self.coeff
        while isinstance(f, FunctionField):
            f = f.coeff
        return f

    def candidate_points(self, extra=()):
        """Root candidates for denominators: registered points, 0, +-1,
        +-parameter generators, extras, all closed under zeta-multiplication."""
        K = self.coeff
        base = [K.zero, K.one, -K.one]
        for p in self.points:
            base.append(p)
            base.append(-p)
        for p in extra:
            p = K.coerce(p)
            base.append(p)
            base.append(-p)
        f = K
        while isinstance(f, FunctionField):
            g = K.coerce(f.gen)
            base.append(g)
            base.append(-g)
            f = f.coeff
        bottomfield = f
        out = []
        zetas = [bottomfield.zeta_power(k) for k in range(bottomfield.order)]
        for b in base:
            for zk in zetas:
                c = b * K.coerce(zk)
                if all(c != q for q in out):
                    out.append(c)
        return out

    def rational_root_candidates(self, poly):
        """Rational-root-theorem candidates for a poly whose coefficients are
        all rational (as elements of the tower); empty list otherwise."""
        rats = []
        for c in poly:
            r = as_rational(c)
            if r is None:
                return []
            rats.append(r)
        if not rats or not rats[0]:
            return []
        from math import gcd

        den_lcm = 1
        for r in rats:
            den_lcm = den_lcm * r.denominator // gcd(den_lcm, r.denominator)
        ints = [int(r * den_lcm) for r in rats]
        a0, an = abs(ints[0]), abs(ints[-1])

        def divisors(n):
            out = []
            d = 1
            while d * d <= n:
                if n % d == 0:
                    out.append(d)
                    out.append(n // d)
                d += 1
            return sorted(set(out))

        cands = []
        for p in divisors(a0):
            for q in divisors(an):
                for s in (1, -1):
                    cands.append(Fraction(s * p, q))
        K = self.coeff
        return [K.coerce(c) for c in sorted(set(cands))]


def as_rational(x):
    """Fraction value of x if x is a rational constant of the tower, else None."""
    if isinstance(x, (int, Fraction)):
        return Fraction(x)
    if isinstance(x, CycNum):
        return x.as_fraction() if x.is_rational() else None
    if isinstance(x, RatFunc):
        if not x.is_constant():
            return None
        return as_rational(x.constant_value())
    return None


class RatFunc:
    """Element of K(var): reduced fraction of dense polynomials."""

    __slots__ = ("field", "num", "den", "_hash")

    def __init__(self, field, num, den, reduce=True):
        K = field.coeff
        num, den = ptrim(num), ptrim(den)
        if not den:
            raise ZeroDivisionError("zero denominator")
        if reduce and num:
            g = field.cached_gcd(num, den)
            if pdeg(g) > 0:
                num = pdivmod(K, num, g)[0]
                den = pdivmod(K, den, g)[0]
            lc = den[-1]
            if lc != K.one:
                inv = K.one / lc
                num = pscale(num, inv)
                den = pscale(den, inv)
        elif reduce:
            den = (K.one,)
        self.field = field
        self.num = num
        self.den = den
        self._hash = None

    # -- coercion glue -------------------------------------------------------
    def _coerce(self, other):
        if isinstance(other, RatFunc) and other.field is self.field:
            return other
        try:
            return self.field.coerce(other)
        except TypeError:
            return None

    def _pair(self, other):
        """Coerce self and other into a common field (either direction);
        needed because Python skips reflected dunders for same-type
        operands."""
        o = self._coerce(other)
        if o is not None:
            return self, o
        if isinstance(other, RatFunc):
            try:
                return other.field.coerce(self), other
            except TypeError:
                return None, None
        return None, None

    def __bool__(self):
        return bool(self.num)

    def __hash__(self):
        if self._hash is None:
            self._hash = hash(("RatFunc", self.field.var, self.num, self.den))
        return self._hash

    def __eq__(self, other):
        a, o = self._pair(other)
        if o is None:
            return NotImplemented
        return a.num == o.num and a.den == o.den

    def __ne__(self, other):
        r = self.__eq__(other)
        return NotImplemented if r is NotImplemented else not r

    # -- arithmetic -----------------------------------------------------------
    def __add__(self, other):
        a, o = self._pair(other)
        if o is None:
            return NotImplemented
        F = a.field
        K = F.coeff
        if not a.num:
            return o
        if not o.num:
            return a
        if a.den == o.den:
            return RatFunc(F, padd(K, a.num, o.num), a.den)
        # classical reduced addition: with g = gcd(d1, d2) only the part
        # t = n1 d2/g + n2 d1/g can share a factor with g
        g = F.cached_gcd(a.den, o.den)
        if pdeg(g) == 0:
            num = padd(K, pmul(K, a.num, o.den), pmul(K, o.num, a.den))
            return RatFunc(F, num, pmul(K, a.den, o.den), reduce=False) if num else F.zero
        d1g = pdivmod(K, a.den, g)[0]
        d2g = pdivmod(K, o.den, g)[0]
        tnum = padd(K, pmul(K, a.num, d2g), pmul(K, o.num, d1g))
        if not tnum:
            return F.zero
        h = F.cached_gcd(tnum, g)
        if pdeg(h) > 0:
            tnum = pdivmod(K, tnum, h)[0]
            den = pmul(K, pmul(K, d1g, d2g), pdivmod(K, g, h)[0])
        else:
            den = pmul(K, pmul(K, d1g, d2g), g)
        lc = den[-1]
        if lc != K.one:
            inv = K.one / lc
            tnum = pscale(tnum, inv)
            den = pscale(den, inv)
        return RatFunc(F, tnum, den, reduce=False)

    __radd__ = __add__

    def __neg__(self):
        return RatFunc(self.field, pneg(self.num), self.den, reduce=False)

    def __sub__(self, other):
        a, o = self._pair(other)
        if o is None:
            return NotImplemented
        return a + (-o)

    def __rsub__(self, other):
        a, o = self._pair(other)
        if o is None:
            return NotImplemented
        return o + (-a)

    def __mul__(self, other):
        a, o = self._pair(other)
        if o is None:
            return NotImplemented
        F = a.field
        K = F.coeff
        if not a.num or not o.num:
            return F.zero
        # cross-cancel: products of reduced fractions reduce via the two
        # cross gcds only
        n1, d1, n2, d2 = a.num, a.den, o.num, o.den
        g1 = F.cached_gcd(n1, d2)
        if pdeg(g1) > 0:
            n1 = pdivmod(K, n1, g1)[0]
            d2 = pdivmod(K, d2, g1)[0]
        g2 = F.cached_gcd(n2, d1)
        if pdeg(g2) > 0:
            n2 = pdivmod(K, n2, g2)[0]
            d1 = pdivmod(K, d1, g2)[0]
        num = pmul(K, n1, n2)
        den = pmul(K, d1, d2)
        lc = den[-1]
        if lc != K.one:
            inv = K.one / lc
            num = pscale(num, inv)
            den = pscale(den, inv)
        return RatFunc(F, num, den, reduce=False)

    __rmul__ = __mul__

    def inverse(self):
        if not self.num:
            raise ZeroDivisionError("inverse of zero rational function")
        K = self.field.coeff
        num, den = self.den, self.num
        lc = den[-1]
        if lc != K.one:
            inv = K.one / lc
            num = pscale(num, inv)
            den = pscale(den, inv)
        return RatFunc(self.field, num, den, reduce=False)

    def __truediv__(self, other):
        a, o = self._pair(other)
        if o is None:
            return NotImplemented
        return a * o.inverse()

    def __rtruediv__(self, other):
        a, o = self._pair(other)
        if o is None:
            return NotImplemented
        return o * a.inverse()

    def __pow__(self, n):
        if n < 0:
            return self.inverse() ** (-n)
        K = self.field.coeff
        return RatFunc(self.field, ppow(K, self.num, n), ppow(K, self.den, n), reduce=False)

    # -- structure -------------------------------------------------------------
    def is_constant(self):
        return len(self.num) <= 1 and len(self.den) == 1

    def constant_value(self):
        if not self.is_constant():
            raise ValueError(f"{self} is not constant")
        K = self.field.coeff
        return self.num[0] / self.den[0] if self.num else K.zero

    def is_polynomial(self):
        return len(self.den) == 1 and self.den[0] == self.field.coeff.one

    def as_poly(self):
        if not self.is_polynomial():
            raise ValueError(f"{self} is not polynomial")
        return self.num

    def degree(self):
        """deg num - deg den (degree at infinity)."""
        return pdeg(self.num) - pdeg(self.den)

    def derivative(self):
        F = self.field
        K = F.coeff
        if len(self.den) == 1:
            return RatFunc(F, pscale(pderiv_(K, self.num), K.one / self.den[0]), (K.one,), reduce=False)
        # (n/d)' = (n' u - n v) / (d u) with d = g u, d' = g v, g = gcd(d, d')
        dp = pderiv_(K, self.den)
        g = F.cached_gcd(self.den, dp)
        if pdeg(g) > 0:
            u = pdivmod(K, self.den, g)[0]
            v = pdivmod(K, dp, g)[0]
        else:
            u, v = self.den, dp
        num = psub(K, pmul(K, pderiv_(K, self.num), u), pmul(K, self.num, v))
        return RatFunc(F, num, pmul(K, self.den, u))

    def eval_at(self, p):
        K = self.field.coeff
        p = K.coerce(p)
        dv = peval(K, self.den, p)
        if not dv:
            raise ZeroDivisionError(f"pole of {self} at {p}")
        return peval(K, self.num, p) / dv

    def valuation_at(self, p):
        """Order of vanishing at p (negative at a pole); None for the zero fn."""
        if not self.num:
            return None
        K = self.field.coeff
        p = K.coerce(p)
        lin = (-p, K.one)

        def mult(poly):
            m = 0
            while True:
                q, r = pdivmod(K, poly, lin)
                if r:
                    return m, poly
                poly = q
                m += 1

        mn, _ = mult(self.num)
        md, _ = mult(self.den)
        return mn - md

    def valuation_at_infinity(self):
        if not self.num:
            return None
        return pdeg(self.den) - pdeg(self.num)

    def is_regular_at(self, p):
        if not self.num:
            return True
        if p == INFINITY:
            return self.valuation_at_infinity() >= 0
        v = self.valuation_at(p)
        return v >= 0

    def eval_at_infinity(self):
        v = self.valuation_at_infinity()
        if v is None:
            return self.field.coeff.zero
        if v < 0:
            raise ZeroDivisionError(f"pole of {self} at infinity")
        if v > 0:
            return self.field.coeff.zero
        return self.num[-1] / self.den[-1]

    # -- substitutions ----------------------------------------------------------
    def subs_scale(self, c):
        """f(c * var)."""
        K = self.field.coeff
        c = K.coerce(c)
        return RatFunc(self.field, pscale_var(K, self.num, c), pscale_var(K, self.den, c))

    def subs_shift(self, a):
        """f(var + a)."""
        K = self.field.coeff
        a = K.coerce(a)
        return RatFunc(self.field, pshift(K, self.num, a), pshift(K, self.den, a))

    def subs_power(self, q, target_field=None):
        """f(u^q) in the field of target_field (default: same field)."""
        tf = target_field or self.field
        K = tf.coeff
        num = tuple(K.coerce(c) for c in self.num)
        den = tuple(K.coerce(c) for c in self.den)
        return RatFunc(tf, pcompose_power(K, num, q), pcompose_power(K, den, q))

    def descend_power(self, q, target_field=None):
        """Inverse of subs_power: rewrite f(u) as g(t) with t = u^q.
        Requires every exponent of num and den to be divisible by q (after
        clearing a common monomial factor)."""
        tf = target_field or self.field
        K = self.field.coeff

        def take(poly):
            if not poly:
                return ()
            if any(c and (i % q) for i, c in enumerate(poly)):
                return None
            return tuple(poly[i] for i in range(0, len(poly), q))

        shift = 0
        num, den = self.num, self.den
        # allow a common u^s factor with s deciding divisibility jointly
        vn = next((i for i, c in enumerate(num) if c), None)
        vd = next((i for i, c in enumerate(den) if c), None)
        if vn is not None and vd is not None:
            s = min(vn, vd)
            num, den = num[s:], den[s:]
        n2, d2 = take(num), take(den)
        if n2 is None or d2 is None:
            raise ValueError(f"{self} does not descend along u -> u^{q}")
        Kt = tf.coeff
        n2 = tuple(Kt.coerce(c) for c in n2)
        d2 = tuple(Kt.coerce(c) for c in d2)
        return RatFunc(tf, n2, d2)

    # -- local data ---------------------------------------------------------------
    def series_at(self, p, n):
        """First n Taylor coefficients at a regular point p."""
        K = self.field.coeff
        p = K.coerce(p)
        num = pshift(K, self.num, p)
        den = pshift(K, self.den, p)
        v = next((i for i, c in enumerate(den) if c), None)
        vn = next((i for i, c in enumerate(num) if c), len(num))
        if v is None:
            raise ZeroDivisionError("zero denominator")
        if vn < v:
            raise ZeroDivisionError(f"pole of {self} at {p}")
        num, den = num[v:] if num else (), den[v:]
        inv = pseries_inv(K, den, n) if den else ()
        prod = pmul(K, num, inv)
        out = list(prod[:n]) + [K.zero] * max(0, n - len(prod))
        return tuple(out[:n])

    def principal_part_at(self, p):
        """Coefficients (c_1, ..., c_k) of (x-p)^-1, ..., (x-p)^-k."""
        K = self.field.coeff
        p = K.coerce(p)
        num = pshift(K, self.num, p)
        den = pshift(K, self.den, p)
        k = next((i for i, c in enumerate(den) if c), None)
        if k is None:
            raise ZeroDivisionError("zero denominator")
        if k == 0 or not num:
            return ()
        den = den[k:]
        inv = pseries_inv(K, den, k)
        prod = pmul(K, num, inv)
        coeffs = list(prod[:k]) + [K.zero] * max(0, k - len(prod))
        # coefficient of (x-p)^(j-k) is coeffs[j]; c_m multiplies (x-p)^(-m)
        return tuple(coeffs[k - m] if k - m < len(coeffs) else K.zero for m in range(1, k + 1))

    def residue_at(self, p):
        """Residue of f dx at p (p may be INFINITY)."""
        K = self.field.coeff
        if p == INFINITY:
            # res_inf f dx = -res_0 of f(1/s)/s^2 ds
            n, d = self.num, self.den
            rn = tuple(reversed(n)) if n else ()
            rd = tuple(reversed(d))
            # f(1/s) = s^(deg d - deg n) * rn(s)/rd(s)
            shift = pdeg(d) - pdeg(n) if n else 0
            if not n:
                return K.zero
            num, den = rn, rd
            e = shift - 2  # extra s-exponent of f(1/s)/s^2
            if e > 0:
                num = pmul(K, num, (K.zero,) * e + (K.one,))
            elif e < 0:
                den = pmul(K, den, (K.zero,) * (-e) + (K.one,))
            g = RatFunc(self.field, num, den)
            pp = g.principal_part_at(K.zero)
            return -(pp[0] if pp else K.zero)
        pp = self.principal_part_at(p)
        return pp[0] if pp else K.zero

    # -- rendering ------------------------------------------------------------------
    def __str__(self):
        n = poly_str(self.field.coeff, self.num, self.field.var)
        if self.is_polynomial():
            return n
        d = poly_str(self.field.coeff, self.den, self.field.var)
        nn = n if (len(self.num) <= 1 or _single_term(self.num)) else f"({n})"
        return f"{nn} / ({d})"

    def __repr__(self):
        return f"RatFunc({self})"


def _single_term(poly):
    return sum(1 for c in poly if c) <= 1


def coeff_str(K, c):
    """Render a coefficient, parenthesised when composite."""
    s = str(c)
    if any(op in s for op in (" + ", " - ", " / ")):
        return f"({s})"
    if s.startswith("-"):
        return f"({s})"
    return s


def poly_str(K, coeffs, var):
    if not coeffs:
        return "0"
    terms = []
    for i in range(len(coeffs) - 1, -1, -1):
        c = coeffs[i]
        if not c:
            continue
        if i == 0:
            mon = None
        elif i == 1:
            mon = var
        else:
            mon = f"{var}^{i}"
        one = K.one
        if mon is None:
            body = coeff_str(K, c)
        elif c == one:
            body = mon
        elif c == -one:
            body = f"-{mon}"
        else:
            body = f"{coeff_str(K, c)}*{mon}"
        terms.append(body)
    out = terms[0]
    for t in terms[1:]:
        if t.startswith("-") and not t.startswith("(-"):
            out += f" - {t[1:]}"
        else:
            out += f" + {t}"
    return out


# ---------------------------------------------------------------------------
# roots, partial fractions, antiderivatives
# ---------------------------------------------------------------------------

def linear_split(field: FunctionField, poly, extra=()):
    """Split off the linear factors of poly whose roots lie in the working
    field, using the configured candidate set.  Returns (roots, leftover)
    where roots is a list of (root, multiplicity) and leftover has no root
    among the candidates."""
    K = field.coeff
    poly = ptrim(poly)
    roots = []
    cands = field.candidate_points(extra)
    rational = field.rational_root_candidates(poly)
    bottom = field.bottom()
    for r in rational:
        for k in range(bottom.order):
            c = r * K.coerce(bottom.zeta_power(k))
            if all(c != q for q in cands):
                cands.append(c)
    for c in cands:
        if pdeg(poly) < 1:
            break
        m = 0
        while pdeg(poly) >= 1:
            q, rem = pdivmod(K, poly, (-c, K.one))
            if rem:
                break
            poly = q
            m += 1
        if m:
            roots.append((c, m))
    return roots, pmonic(K, poly)


class PrincipalPartDecomp:
    """polynomial_part + sum over poles p of sum_m c_m (x-p)^(-m)."""

    def __init__(self, field, polynomial_part, pole_parts):
        self.field = field
        self.polynomial_part = polynomial_part  # coefficient tuple
        self.pole_parts = pole_parts  # list of (pole, (c_1, ..., c_k))

    def reassemble(self) -> RatFunc:
        F = self.field
        K = F.coeff
        out = RatFunc(F, self.polynomial_part, (K.one,))
        for p, cs in self.pole_parts:
            lin = RatFunc(F, (-p, K.one), (K.one,))
            for m, c in enumerate(cs, start=1):
                if c:
                    out = out + RatFunc(F, (c,), (K.one,)) / lin ** m
        return out

    def __repr__(self):
        return f"PrincipalPartDecomp(poly={self.polynomial_part}, poles={self.pole_parts})"


def partial_fractions(f: RatFunc, extra_points=()) -> PrincipalPartDecomp:
    """Exact principal-part decomposition.  The denominator must split over
    the working field extended by the configured pole set, else
    IrreducibleDenominator is raised."""
    F = f.field
    K = F.coeff
    poly_part, rem = pdivmod(K, f.num, f.den)
    roots, leftover = linear_split(F, f.den, extra_points)
    if pdeg(leftover) > 0:
        raise IrreducibleDenominator(poly_str(K, leftover, F.var))
    parts = []
    for p, m in roots:
        g = RatFunc(F, rem, f.den)
        pp = g.principal_part_at(p)
        if any(pp):
            parts.append((p, pp))
    return PrincipalPartDecomp(F, poly_part, parts)


def poles_of(f: RatFunc, extra_points=()):
    """Finite poles of f as a list of (point, order); raises
    IrreducibleDenominator when a denominator factor cannot be resolved."""
    F = f.field
    roots, leftover = linear_split(F, f.den, extra_points)
    if pdeg(leftover) > 0:
        raise IrreducibleDenominator(poly_str(F.coeff, leftover, F.var))
    out = []
    for p, m in roots:
        v = f.valuation_at(p)
        if v < 0:
            out.append((p, -v))
    return out


def _coprime_split(K, num, dens):
    """num / prod(dens) = poly + sum_i num_i/dens_i with the dens pairwise
    coprime.  Returns (poly_part, [num_i])."""
    if len(dens) == 1:
        q, r = pdivmod(K, num, dens[0])
        return q, [r]
    d0 = dens[0]
    rest = (K.one,)
    for d in dens[1:]:
        rest = pmul(K, rest, d)
    g, s, t = pxgcd(K, d0, rest)
    assert pdeg(g) == 0 and g, "factors are not coprime"
    # 1 = s*d0 + t*rest  =>  num/(d0*rest) = num*t/d0 + num*s/rest
    n0 = pmul(K, num, t)
    q0, r0 = pdivmod(K, n0, d0)
    nr = pmul(K, num, s)
    poly, rems = _coprime_split(K, nr, dens[1:])
    total_poly = padd(K, q0, poly)
    return total_poly, [r0] + rems


def hermite_reduce(F: FunctionField, num, den):
    """Hermite reduction of the proper fraction num/den.

    Returns (rational_part: RatFunc, log_parts: list of (numer, squarefree
    monic denom)) with num/den = rational_part' + sum numer/denom and every
    denom squarefree.  No root finding involved."""
    K = F.coeff
    sqf, lc = squarefree_decomposition(K, den)
    num = pscale(num, K.one / lc)
    dens = [ppow(K, P, i) for P, i in sqf]
    poly, nums = _coprime_split(K, num, dens)
    assert not poly, "input fraction was not proper"
    rational = F.zero
    logs = []
    for (P, i), A in zip(sqf, nums):
        k = i
        while k >= 2:
            # 1 = u*P + v*P'
            g, u, v = pxgcd(K, P, pderiv_(K, P))
            assert pdeg(g) == 0 and g
            Av = pmul(K, A, v)
            # A/P^k = (A*u)/P^(k-1) + Av*P'/P^k
            # int Av*P'/P^k = Av/((1-k)P^(k-1)) - int Av'/((1-k)P^(k-1))
            c = Fraction(1, 1 - k)
            rational = rational + RatFunc(F, pscale(Av, K.coerce(c)), ppow(K, P, k - 1))
            A = psub(K, pmul(K, A, u), pscale(pderiv_(K, Av), K.coerce(c)))
            k -= 1
        # reduce A mod P, fold the quotient away: the quotient integrates into
        # the other terms only through exactness; here deg A may exceed deg P,
        # so split A = q*P + r and absorb q as a polynomial integrand
        q, r = pdivmod(K, A, P)
        if q:
            ints = [K.coerce(Fraction(1, j + 1)) * c for j, c in enumerate(q)]
            rational = rational + RatFunc(F, (K.zero,) + tuple(ints), (K.one,))
        if r:
            logs.append((r, P))
    return rational, logs


def rational_antiderivative(f: RatFunc, extra_points=()):
    """An exact antiderivative F with F' = f, when one exists in the field;
    otherwise the MonodromyObstruction value listing the poles (with nonzero
    residues) that obstruct it."""
    F = f.field
    K = F.coeff
    poly, rem = pdivmod(K, f.num, f.den)
    out = F.zero
    if poly:
        ints = [K.coerce(Fraction(1, i + 1)) * c for i, c in enumerate(poly)]
        out = out + RatFunc(F, (K.zero,) + tuple(ints), (K.one,))
    if rem:
        rational, logs = hermite_reduce(F, rem, f.den)
        out = out + rational
        if logs:
            # combine log integrands and report residues
            residues = []
            unresolved = []
            total = F.zero
            for numer, denom in logs:
                total = total + RatFunc(F, numer, denom)
            if total:
                roots, leftover = linear_split(F, total.den, extra_points)
                for p, m in roots:
                    r = total.residue_at(p)
                    if r:
                        residues.append((p, r))
                if pdeg(leftover) > 0:
                    unresolved.append(poly_str(K, leftover, F.var))
                return MonodromyObstruction(residues, unresolved)
    return out


def substitute_power(f: RatFunc, q: int, target_field=None) -> RatFunc:
    """f(u^q), the q-sheeted-cover pullback of the bare function (the caller
    owns the q u^(q-1) du Jacobian for differentials)."""
    if q < 1:
        raise ValueError("q must be >= 1")
    return f.subs_power(q, target_field)
