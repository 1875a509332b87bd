"""Exact scalar arithmetic.

The ground field is Q(zeta_T), realised as Q[x]/Phi_T(x) in the power basis.
Transcendental parameters (z, a, b, ...) are adjoined one at a time as
univariate rational-function layers over the previous field, and the global
coordinate t is one more such layer (see ratfunc.RatFunc).  Every element is
immutable and hashable; equality is canonical-representation equality.
"""

from __future__ import annotations

import itertools
from fractions import Fraction
from functools import lru_cache


def euler_phi(n: int) -> int:
    count = 0
    for k in range(1, n + 1):
        a, b = k, n
        while b:
            a, b = b, a % b
        if a == 1:
            count += 1
    return count


@lru_cache(maxsize=None)
def cyclotomic_polynomial(n: int) -> tuple:
    """Coefficients (ascending) of Phi_n over Q, computed by the recursive
    exact division of x^n - 1 by the Phi_d with d | n, d < n."""
    num = [Fraction(-1)] + [Fraction(0)] * (n - 1) + [Fraction(1)]
    for d in range(1, n):
        if n % d:
            continue
        phi_d = list(cyclotomic_polynomial(d))
        # exact polynomial division num //= phi_d
        out = [Fraction(0)] * (len(num) - len(phi_d) + 1)
        rem = list(num)
        for i in range(len(out) - 1, -1, -1):
            c = rem[i + len(phi_d) - 1] / phi_d[-1]
            out[i] = c
            if c:
                for j, pc in enumerate(phi_d):
                    rem[i + j] -= c * pc
        assert not any(rem[: len(phi_d) - 1]) or all(x == 0 for x in rem)
        num = out
    return tuple(num)


class CycNum:
    """Element of Q(zeta_T): coefficient vector in the power basis
    1, zeta, ..., zeta^(phi(T)-1), always reduced mod Phi_T."""

    __slots__ = ("field", "coeffs", "_hash")

    def __init__(self, field, coeffs):
        self.field = field
        self.coeffs = coeffs  # tuple of Fraction, length phi(T)
        self._hash = None

    # -- helpers -----------------------------------------------------------
    def _coerce(self, other):
        if isinstance(other, CycNum):
            if other.field is self.field or other.field.order == self.field.order:
                return other
            return None
        if isinstance(other, (int, Fraction)):
            return self.field.coerce(other)
        return None

    def __bool__(self):
        return any(self.coeffs)

    def __hash__(self):
        if self._hash is None:
            self._hash = hash(("CycNum", self.field.order, self.coeffs))
        return self._hash

    def __eq__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return self.coeffs == o.coeffs

    def __ne__(self, other):
        r = self.__eq__(other)
        return NotImplemented if r is NotImplemented else not r

    # -- arithmetic --------------------------------------------------------
    def __add__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return CycNum(self.field, tuple(a + b for a, b in zip(self.coeffs, o.coeffs)))

    __radd__ = __add__

    def __neg__(self):
        return CycNum(self.field, tuple(-a for a in self.coeffs))

    def __sub__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return CycNum(self.field, tuple(a - b for a, b in zip(self.coeffs, o.coeffs)))

    def __rsub__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return o - self

    def __mul__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return CycNum(self.field, self.field._mul(self.coeffs, o.coeffs))

    __rmul__ = __mul__

    def inverse(self):
        if not self:
            raise ZeroDivisionError("inverse of zero in Q(zeta)")
        cache = self.field._inv_cache
        hit = cache.get(self.coeffs)
        if hit is None:
            hit = CycNum(self.field, self.field._inv(self.coeffs))
            if len(cache) > 60000:
                cache.clear()
            cache[self.coeffs] = hit
        return hit

    def __truediv__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return self * o.inverse()

    def __rtruediv__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return o * self.inverse()

    def __pow__(self, n):
        if n < 0:
            return self.inverse() ** (-n)
        out = self.field.one
        base = self
        while n:
            if n & 1:
                out = out * base
            base = base * base
            n >>= 1
        return out

    # -- queries -----------------------------------------------------------
    def is_rational(self):
        return not any(self.coeffs[1:])

    def as_fraction(self):
        if not self.is_rational():
            raise ValueError(f"{self} is not rational")
        return self.coeffs[0]

    def conjugate_power(self, k):
        """Image under the Galois map zeta -> zeta^k (k coprime to T)."""
        field = self.field
        out = field.zero
        pw = field.one
        zk = field.zeta ** k
        for c in self.coeffs:
            out = out + CycNum(field, field._scale(pw.coeffs, c))
            pw = pw * zk
        return out

    def __repr__(self):
        return f"CycNum({self})"

    def __str__(self):
        return self.field.to_str(self)


class CyclotomicField:
    """Q(zeta_T).  Use CyclotomicField.get(T) for the cached instance."""

    _cache = {}

    def __init__(self, order: int):
        if order < 1:
            raise ValueError("order must be >= 1")
        self.order = order
        self.degree = euler_phi(order)
        self.modulus = cyclotomic_polynomial(order)
        self._inv_cache = {}
        zero = Fraction(0)
        self._zero_vec = (zero,) * self.degree
        self.zero = CycNum(self, self._zero_vec)
        self.one = CycNum(self, (Fraction(1),) + (zero,) * (self.degree - 1))
        if self.degree > 1:
            zv = [zero] * self.degree
            zv[1] = Fraction(1)
            self.zeta = CycNum(self, tuple(zv))
        else:
            # T in {1, 2}: zeta is rational (1 or -1)
            self.zeta = CycNum(self, (Fraction(1 if order == 1 else -1),))

    @classmethod
    def get(cls, order):
        if order not in cls._cache:
            cls._cache[order] = cls(order)
        return cls._cache[order]

    # -- raw coefficient ops -------------------------------------------------
    def _reduce(self, vec):
        """Reduce a raw coefficient list (any length) mod Phi_T."""
        vec = list(vec)
        mod = self.modulus
        d = self.degree
        for i in range(len(vec) - 1, d - 1, -1):
            c = vec[i]
            if c:
                for j in range(d + 1):
                    vec[i - d + j] -= c * mod[j]
        vec = vec[:d] + [Fraction(0)] * (d - len(vec))
        return tuple(vec[:d])

    def _mul(self, a, b):
        d = self.degree
        if d == 1:
            return (a[0] * b[0],)
        if d == 2:
            # reduce a1 b1 x^2 against x^2 = -m1 x - m0
            k = a[1] * b[1]
            m0, m1 = self.modulus[0], self.modulus[1]
            return (a[0] * b[0] - m0 * k, a[0] * b[1] + a[1] * b[0] - m1 * k)
        n = len(a)
        out = [Fraction(0)] * (2 * n - 1)
        for i, x in enumerate(a):
            if x:
                for j, y in enumerate(b):
                    if y:
                        out[i + j] += x * y
        return self._reduce(out)

    def _scale(self, a, c):
        return tuple(x * c for x in a)

    def _inv(self, a):
        """Extended Euclid in Q[x] against Phi_T."""
        if self.degree == 1:
            return (1 / a[0],)
        def trim(p):
            while p and not p[-1]:
                p.pop()
            return p

        def divmod_(p, q):
            p = list(p)
            out = [Fraction(0)] * max(0, len(p) - len(q) + 1)
            for i in range(len(out) - 1, -1, -1):
                c = p[i + len(q) - 1] / q[-1]
                out[i] = c
                if c:
                    for j, qc in enumerate(q):
                        p[i + j] -= c * qc
            return out, trim(p)

        r0, r1 = list(self.modulus), trim(list(a))
        s0, s1 = [], [Fraction(1)]
        while r1:
            q, r = divmod_(r0, r1)
            r0, r1 = r1, r
            # s_new = s0 - q*s1
            prod = [Fraction(0)] * (len(q) + len(s1) - 1) if q and s1 else []
            for i, x in enumerate(q):
                if x:
                    for j, y in enumerate(s1):
                        prod[i + j] += x * y
            new = [Fraction(0)] * max(len(s0), len(prod))
            for i, x in enumerate(s0):
                new[i] += x
            for i, x in enumerate(prod):
                new[i] -= x
            s0, s1 = s1, trim(new)
        # r0 is the gcd (a nonzero constant since Phi_T is irreducible)
        assert len(r0) == 1, "gcd with Phi_T must be a unit"
        c = r0[0]
        return self._reduce([x / c for x in s0])

    # -- field facade ---------------------------------------------------------
    def coerce(self, x):
        if isinstance(x, CycNum):
            if x.field.order == self.order:
                return x
            if self.order % x.field.order == 0:
                return self.embed(x)
            if x.field.order % self.order == 0:
                return self.restrict(x)
            raise TypeError(f"cannot coerce {x} into Q(zeta_{self.order})")
        if isinstance(x, (int, Fraction)):
            return CycNum(self, (Fraction(x),) + self._zero_vec[1:])
        raise TypeError(f"cannot coerce {x!r} into Q(zeta_{self.order})")

    def restrict(self, x: CycNum):
        """Inverse of embed for elements of Q(zeta_T) that lie in the
        subfield Q(zeta_S), S | T; TypeError when x is not in the image."""
        if x.is_rational():
            return self.coerce(x.as_fraction())
        big = x.field
        k = big.order // self.order
        # columns: images of the power basis of self in big
        cols = []
        pw = big.one
        step = big.zeta ** k
        for _ in range(self.degree):
            cols.append(pw.coeffs)
            pw = pw * step
        from .linalg import QQ, solve_linear

        A = [[cols[j][i] for j in range(self.degree)] for i in range(big.degree)]
        sol = solve_linear(QQ, A, list(x.coeffs))
        if sol is None:
            raise TypeError(f"{x} does not lie in Q(zeta_{self.order})")
        return CycNum(self, tuple(sol))

    def embed(self, x: CycNum):
        """Embed from Q(zeta_S) with S | T via zeta_S = zeta_T^(T/S)."""
        k = self.order // x.field.order
        out = self.zero
        pw = self.one
        step = self.zeta ** k
        for c in x.coeffs:
            if c:
                out = out + CycNum(self, self._scale(pw.coeffs, c))
            pw = pw * step
        return out

    def is_zero(self, x):
        return not x

    def contains(self, x):
        return isinstance(x, CycNum) and x.field.order == self.order

    @property
    def characteristic_descr(self):
        return f"Q(zeta_{self.order})"

    def zeta_power(self, k: int):
        return self.zeta ** (k % self.order)

    def to_str(self, x: CycNum) -> str:
        """Canonical rendering: polynomial in zeta, rational coefficients in
        lowest terms, ascending powers, e.g. '1/2 + 3/4*zeta - zeta^2'."""
        terms = []
        for i, c in enumerate(x.coeffs):
            if not c:
                continue
            if i == 0:
                terms.append((c, ""))
            elif i == 1:
                terms.append((c, "zeta"))
            else:
                terms.append((c, f"zeta^{i}"))
        if not terms:
            return "0"
        parts = []
        for idx, (c, mon) in enumerate(terms):
            sign = "-" if c < 0 else "+"
            mag = -c if c < 0 else c
            if mon and mag == 1:
                body = mon
            elif mon:
                body = f"{mag}*{mon}"
            else:
                body = str(mag)
            if idx == 0:
                parts.append(body if sign == "+" else f"-{body}")
            else:
                parts.append(f" {sign} {body}")
        return "".join(parts)

    def random(self, rng, size=4):
        from fractions import Fraction as F

        return CycNum(
            self,
            tuple(F(rng.randint(-size, size), rng.randint(1, 3)) for _ in range(self.degree)),
        )

    def __repr__(self):
        return f"CyclotomicField({self.order})"


def scalar_reduce(field: CyclotomicField, raw_coeffs) -> CycNum:
    """Canonical residue mod Phi_T of a raw polynomial-in-zeta over Q
    (coefficients ascending, any length)."""
    return CycNum(field, field._reduce([Fraction(c) for c in raw_coeffs]))
