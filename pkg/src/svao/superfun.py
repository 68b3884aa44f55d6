"""Rational superfunctions in points Z_k = (z_k, zeta_k^1..zeta_k^N), localized at z_k - z_l.

A function is numerator / prod (z_k - z_l)^e.  The numerator is a W-flavor
SuperPoly whose lambda_k stands for z_k and theta_k^i for zeta_k^i; the
coordinates always supercommute, the flavor only changes z_{k,l} and D_zeta.
"""
from fractions import Fraction

from .superpoly import K, W, SuperContext, SuperPoly, render_terms


def coord_context(N, n):
    return SuperContext(W, N, n)


class RationalSuperFunction:
    __slots__ = ("flavor", "N", "n", "num", "den")

    def __init__(self, flavor, N, n, num, den=None):
        self.flavor = flavor
        self.N = N
        self.n = n
        self.num = num
        den = {p: e for p, e in (den or {}).items() if e}
        for (k, l), e in den.items():
            if not 0 <= k < l < n or e < 0:
                raise ValueError("denominator must be a positive power of z_k - z_l with k < l")
        self.den = {} if num.is_zero() else den
        self._reduce()

    @property
    def ctx(self):
        return self.num.ctx

    @classmethod
    def const(cls, flavor, N, n, c=1):
        return cls(flavor, N, n, SuperPoly.const(coord_context(N, n), c))

    @classmethod
    def z(cls, flavor, N, n, k):
        return cls(flavor, N, n, SuperPoly.lam(coord_context(N, n), k))

    @classmethod
    def zeta(cls, flavor, N, n, k, i):
        return cls(flavor, N, n, SuperPoly.theta(coord_context(N, n), k, i))

    def _like(self, num, den=None):
        return RationalSuperFunction(self.flavor, self.N, self.n, num, den)

    def _reduce(self):
        # cancel (z_k - z_l) factors that divide the numerator
        for pair in sorted(self.den):
            while self.den.get(pair):
                q = divide_difference(self.num, *pair)
                if q is None:
                    break
                self.num = q
                self.den[pair] -= 1
                if not self.den[pair]:
                    del self.den[pair]

    def _check(self, other):
        if (self.flavor, self.N, self.n) != (other.flavor, other.N, other.n):
            raise ValueError("context mismatch")

    def _lift(self, den):
        """Numerator over the larger denominator den."""
        num = self.num
        for pair, e in den.items():
            extra = e - self.den.get(pair, 0)
            if extra:
                num = num * difference(self.ctx, *pair) ** extra
        return num

    def __add__(self, other):
        self._check(other)
        den = dict(self.den)
        for p, e in other.den.items():
            den[p] = max(den.get(p, 0), e)
        return self._like(self._lift(den) + other._lift(den), den)

    def __neg__(self):
        return self._like(-self.num, self.den)

    def __sub__(self, other):
        return self + (-other)

    def scale(self, c):
        return self._like(self.num.scale(Fraction(c)), self.den)

    def __mul__(self, other):
        if not isinstance(other, RationalSuperFunction):
            return self.scale(other)
        self._check(other)
        den = dict(self.den)
        for p, e in other.den.items():
            den[p] = den.get(p, 0) + e
        return self._like(self.num * other.num, den)

    def __pow__(self, m):
        out = RationalSuperFunction.const(self.flavor, self.N, self.n)
        for _ in range(m):
            out = out * self
        return out

    def equals(self, other):
        self._check(other)
        den = dict(self.den)
        for p, e in other.den.items():
            den[p] = max(den.get(p, 0), e)
        return self._lift(den) == other._lift(den)

    def __eq__(self, other):
        return isinstance(other, RationalSuperFunction) and self.equals(other)

    def is_zero(self):
        return self.num.is_zero()

    def d_z(self, k):
        out = self._like(self.num.partial_lambda(k), self.den)
        for (a, b), e in self.den.items():
            if k in (a, b):
                sign = 1 if k == a else -1
                den = dict(self.den)
                den[(a, b)] = e + 1
                out = out + self._like(self.num.scale(-e * sign), den)
        return out

    def d_zeta(self, k, i):
        return self._like(self.num.partial_theta(k, i), self.den)

    def D_zeta(self, k, i):
        """Flavor's odd derivative: plain d/dzeta in W, d/dzeta + zeta d/dz in K."""
        out = self.d_zeta(k, i)
        if self.flavor == K:
            out = out + RationalSuperFunction.zeta(self.flavor, self.N, self.n, k, i) * self.d_z(k)
        return out

    def translation_defects(self):
        """Images under the translation generators; all zero for invariant functions.

        W: sum_k d/dz_k and sum_k d/dzeta_k^i.  K: sum_k d/dz_k and the
        supersymmetry operators sum_k (d/dzeta_k^i - zeta_k^i d/dz_k).
        """
        zero = RationalSuperFunction.const(self.flavor, self.N, self.n, 0)
        dz = zero
        for k in range(self.n):
            dz = dz + self.d_z(k)
        out = [dz]
        for i in range(1, self.N + 1):
            d = zero
            for k in range(self.n):
                d = d + self.d_zeta(k, i)
                if self.flavor == K:
                    d = d - RationalSuperFunction.zeta(self.flavor, self.N, self.n, k, i) * self.d_z(k)
            out.append(d)
        return out

    def is_translation_invariant(self):
        return all(d.is_zero() for d in self.translation_defects())

    def render(self):
        items = []
        for mono, c in self.num.sorted_terms():
            parts = []
            for k, m in enumerate(mono[0]):
                if m:
                    parts.append("z%d" % (k + 1) if m == 1 else "z%d^%d" % (k + 1, m))
            for k, i in mono[1]:
                parts.append("x%d_%d" % (k + 1, i))
            items.append(("*".join(parts), c))
        num = render_terms(items)
        if not self.den:
            return num
        den = "*".join("(z%d-z%d)^%d" % (k + 1, l + 1, e) for (k, l), e in sorted(self.den.items()))
        return "(%s)/(%s)" % (num, den)

    def __repr__(self):
        return "RationalSuperFunction(%s)" % self.render()


def difference(ctx, k, l):
    return SuperPoly.lam(ctx, k) - SuperPoly.lam(ctx, l)


def divide_difference(p, k, l):
    """Exact quotient p / (z_k - z_l), or None when not divisible."""
    ctx = p.ctx
    # group by power of z_k; coefficients are polynomials without z_k
    by_power = {}
    for (ev, od), c in p.terms.items():
        e = list(ev)
        m = e[k]
        e[k] = 0
        by_power.setdefault(m, {})[(tuple(e), od)] = c
    if not by_power:
        return None
    top = max(by_power)
    coeffs = [SuperPoly(ctx, by_power.get(m, {})) for m in range(top + 1)]
    zl = SuperPoly.lam(ctx, l)
    q = [None] * top
    carry = SuperPoly(ctx)
    for m in range(top, 0, -1):
        carry = coeffs[m] + zl * carry if m < top else coeffs[m]
        q[m - 1] = carry
    rem = coeffs[0] + zl * carry if top else coeffs[0]
    if not rem.is_zero():
        return None
    out = SuperPoly(ctx)
    for m, qm in enumerate(q):
        out = out + qm * SuperPoly.lam(ctx, k, m)
    return out


def inject_difference(flavor, N, n, kind, k, l, i=None):
    """z_{k,l}, its inverse or zeta_{k,l}^i as a function of n points (0-based k < l)."""
    if not 0 <= k < l < n:
        raise ValueError("invalid pair")
    ctx = coord_context(N, n)
    if kind == "zeta":
        return RationalSuperFunction(flavor, N, n, SuperPoly.theta(ctx, k, i) - SuperPoly.theta(ctx, l, i))
    nil = SuperPoly(ctx)
    if flavor == K:
        for j in range(1, N + 1):
            nil = nil + SuperPoly.theta(ctx, k, j) * SuperPoly.theta(ctx, l, j)
    if kind == "z":
        return RationalSuperFunction(flavor, N, n, difference(ctx, k, l) - nil)
    if kind == "zinv":
        # 1/(d - nil) = sum_j nil^j / d^(j+1), finite since nil is nilpotent
        out = RationalSuperFunction(flavor, N, n, SuperPoly(ctx))
        power = SuperPoly.const(ctx)
        j = 0
        while not power.is_zero():
            out = out + RationalSuperFunction(flavor, N, n, power, {(k, l): j + 1})
            power = power * nil
            j += 1
        return out
    raise ValueError("unknown kind %r" % kind)


def apply_diffop(f, word):
    """Apply generators in order; each is ('z', k, l), ('zeta', k, l, i), ('dz', k) or ('dzeta', k, i)."""
    for g in word:
        if g[0] == "z":
            f = inject_difference(f.flavor, f.N, f.n, "z", g[1], g[2]) * f
        elif g[0] == "zeta":
            f = inject_difference(f.flavor, f.N, f.n, "zeta", g[1], g[2], g[3]) * f
        elif g[0] == "dz":
            f = f.d_z(g[1])
        elif g[0] == "dzeta":
            f = f.D_zeta(g[1], g[2])
        else:
            raise ValueError("unknown generator %r" % (g,))
    return f
