"""Polynomial superalgebras in (1|N) supervariables, W and K flavors.

A monomial is a pair (evens, odds): evens[k] is the power of lambda_k and
odds is the sorted tuple of (k, i) pairs standing for theta_k^i.  In the K
flavor theta_k^i theta_k^i = -lambda_k; in the W flavor odd squares vanish.
"""
from bisect import bisect_left
from dataclasses import dataclass
from fractions import Fraction

W = "W"
K = "K"


@dataclass(frozen=True)
class SuperContext:
    flavor: str
    N: int
    nvars: int = 1

    def __post_init__(self):
        if self.flavor not in (W, K):
            raise ValueError("flavor must be W or K")
        if self.N < 0 or self.nvars < 0:
            raise ValueError("N and nvars must be nonnegative")

    def with_vars(self, nvars):
        return SuperContext(self.flavor, self.N, nvars)

    @property
    def full(self):
        return tuple(range(1, self.N + 1))


def insert_odd(seq, x, clifford):
    """Multiply the sorted odd word seq on the right by the generator x.

    Returns (sign, new_seq, squared) where squared tells whether x met its
    twin; in that case the pair is removed and the caller supplies the square.
    sign 0 means the product vanishes.
    """
    pos = bisect_left(seq, x)
    if pos < len(seq) and seq[pos] == x:
        if not clifford:
            return 0, seq, False
        passed = len(seq) - pos - 1
        return (-1 if passed % 2 else 1), seq[:pos] + seq[pos + 1:], True
    passed = len(seq) - pos
    return (-1 if passed % 2 else 1), seq[:pos] + (x,) + seq[pos:], False


def merge_odd(left, right, clifford):
    """Product of two sorted odd words: (sign, word, list of squared generators)."""
    sign = 1
    seq = tuple(left)
    squared = []
    for x in right:
        s, seq, sq = insert_odd(seq, x, clifford)
        if s == 0:
            return 0, (), []
        sign *= s
        if sq:
            squared.append(x)
    return sign, seq, squared


def sigma(I, J):
    """Sign with theta^I theta^J = sigma(I, J) theta^(I u J); 0 on overlap."""
    if set(I) & set(J):
        return 0
    s, _, _ = merge_odd(tuple(sorted(I)), tuple(sorted(J)), False)
    return s


def mono_mul(ctx, a, b):
    """Product of two monomials: (coefficient sign, monomial) or (0, None)."""
    sign, odds, squared = merge_odd(a[1], b[1], ctx.flavor == K)
    if sign == 0:
        return 0, None
    evens = [x + y for x, y in zip(a[0], b[0])]
    for k, _ in squared:
        evens[k] += 1
        sign = -sign
    return sign, (tuple(evens), odds)


def mono_parity(mono):
    return len(mono[1]) % 2


def one_mono(nvars):
    return ((0,) * nvars, ())


def make_mono(ctx, parts):
    """Build a monomial from per-variable (m, I) pairs; I given as any iterable."""
    evens = tuple(m for m, _ in parts)
    odds = tuple(sorted((k, i) for k, (_, I) in enumerate(parts) for i in I))
    if len(set(odds)) != len(odds):
        raise ValueError("repeated odd index in monomial")
    for _, i in odds:
        if not 1 <= i <= ctx.N:
            raise ValueError("odd index out of range")
    return (evens, odds)


def mono_parts(mono):
    """Per-variable (m, I) view of a monomial."""
    parts = [[m, []] for m in mono[0]]
    for k, i in mono[1]:
        parts[k][1].append(i)
    return [(m, tuple(I)) for m, I in parts]


def mono_key(mono):
    parts = mono_parts(mono)
    return tuple((len(I) + m, m, I) for m, I in parts)


class SuperPoly:
    __slots__ = ("ctx", "terms")

    def __init__(self, ctx, terms=None):
        self.ctx = ctx
        self.terms = {}
        if terms:
            for mono, c in terms.items():
                c = Fraction(c)
                if c:
                    self.terms[mono] = c

    @classmethod
    def const(cls, ctx, c=1):
        return cls(ctx, {one_mono(ctx.nvars): c})

    @classmethod
    def lam(cls, ctx, k, power=1):
        evens = [0] * ctx.nvars
        evens[k] = power
        return cls(ctx, {(tuple(evens), ()): 1})

    @classmethod
    def theta(cls, ctx, k, i):
        if not 1 <= i <= ctx.N:
            raise ValueError("odd index out of range")
        return cls(ctx, {((0,) * ctx.nvars, ((k, i),)): 1})

    @classmethod
    def monomial(cls, ctx, parts, c=1):
        return cls(ctx, {make_mono(ctx, parts): c})

    def _check(self, other):
        if not isinstance(other, SuperPoly) or other.ctx != self.ctx:
            raise ValueError("context mismatch")

    def __add__(self, other):
        self._check(other)
        out = dict(self.terms)
        for m, c in other.terms.items():
            out[m] = out.get(m, 0) + c
        return SuperPoly(self.ctx, out)

    def __neg__(self):
        return SuperPoly(self.ctx, {m: -c for m, c in self.terms.items()})

    def __sub__(self, other):
        return self + (-other)

    def scale(self, c):
        return SuperPoly(self.ctx, {m: c * v for m, v in self.terms.items()})

    def __mul__(self, other):
        if not isinstance(other, SuperPoly):
            return self.scale(Fraction(other))
        self._check(other)
        out = {}
        for a, ca in self.terms.items():
            for b, cb in other.terms.items():
                s, m = mono_mul(self.ctx, a, b)
                if s:
                    out[m] = out.get(m, 0) + s * ca * cb
        return SuperPoly(self.ctx, out)

    __rmul__ = scale

    def __pow__(self, n):
        out = SuperPoly.const(self.ctx)
        for _ in range(n):
            out = out * self
        return out

    def __eq__(self, other):
        if isinstance(other, (int, Fraction)):
            other = SuperPoly.const(self.ctx, other)
        return isinstance(other, SuperPoly) and self.ctx == other.ctx and self.terms == other.terms

    def __hash__(self):
        return hash((self.ctx, frozenset(self.terms.items())))

    def is_zero(self):
        return not self.terms

    def parity(self):
        ps = {mono_parity(m) for m in self.terms}
        if len(ps) > 1:
            raise ValueError("inhomogeneous polynomial")
        return ps.pop() if ps else 0

    def coefficient(self, mono):
        return self.terms.get(mono, Fraction(0))

    def degree(self, k=None):
        if not self.terms:
            return -1
        if k is None:
            return max(sum(m[0]) for m in self.terms)
        return max(m[0][k] for m in self.terms)

    def partial_lambda(self, k):
        out = {}
        for (ev, od), c in self.terms.items():
            if ev[k]:
                e = list(ev)
                e[k] -= 1
                out[(tuple(e), od)] = c * ev[k]
        return SuperPoly(self.ctx, out)

    def partial_theta(self, k, i):
        """Left derivative: Koszul sign for every odd factor passed on the way."""
        out = {}
        for (ev, od), c in self.terms.items():
            if (k, i) in od:
                pos = od.index((k, i))
                rest = od[:pos] + od[pos + 1:]
                out[(ev, rest)] = -c if pos % 2 else c
        return SuperPoly(self.ctx, out)

    def sorted_terms(self):
        return sorted(self.terms.items(), key=lambda t: mono_key(t[0]))

    def render(self):
        return render_terms([(render_mono(m), c) for m, c in self.sorted_terms()])

    def __repr__(self):
        return "SuperPoly(%s)" % self.render()

    def permute_vars(self, perm, nvars=None):
        """Rename variable k to perm[k]; odd factors are re-sorted with sign."""
        ctx = self.ctx.with_vars(nvars if nvars is not None else self.ctx.nvars)
        out = {}
        for mono, c in self.terms.items():
            s, m = rename_mono(mono, perm, ctx.nvars)
            out[m] = out.get(m, 0) + s * c
        return SuperPoly(ctx, out)


def rename_mono(mono, perm, nvars):
    evens = [0] * nvars
    for k, m in enumerate(mono[0]):
        if m:
            evens[perm[k]] += m
    word = [(perm[k], i) for k, i in mono[1]]
    sign = 1
    # bubble sort with Koszul sign; words are short
    for a in range(len(word)):
        for b in range(len(word) - 1 - a):
            if word[b] > word[b + 1]:
                word[b], word[b + 1] = word[b + 1], word[b]
                sign = -sign
    if len(set(word)) != len(word):
        raise ValueError("renaming merged two variables")
    return sign, (tuple(evens), tuple(word))


def render_mono(mono):
    parts = []
    for k, (m, I) in enumerate(mono_parts(mono)):
        if m:
            parts.append("l%d" % (k + 1) if m == 1 else "l%d^%d" % (k + 1, m))
        if I:
            parts.append("t%d{%s}" % (k + 1, ",".join(str(i) for i in I)))
    return "*".join(parts)


def render_terms(items):
    """Join (symbol, coefficient) pairs as "3*x - 1/2*y"; empty symbol means 1."""
    out = ""
    for sym, c in items:
        neg = c < 0
        a = -c if neg else c
        if not sym:
            body = str(a)
        elif a == 1:
            body = sym
        else:
            body = "%s*%s" % (a, sym)
        if not out:
            out = ("-" if neg else "") + body
        else:
            out += (" - " if neg else " + ") + body
    return out or "0"


def substitute_affine(p, var, image):
    """Substitute Lambda_var by a signed sum of supervariables (no nabla part).

    image maps variable index -> rational coefficient.  The nabla-valued variant
    lives in hmodule.substitute, since it needs the H action.
    """
    ctx = p.ctx
    lam_img = SuperPoly(ctx)
    for j, c in image.items():
        lam_img = lam_img + SuperPoly.lam(ctx, j).scale(c)

    def theta_img(i):
        out = SuperPoly(ctx)
        for j, c in image.items():
            out = out + SuperPoly.theta(ctx, j, i).scale(c)
        return out

    out = SuperPoly(ctx)
    for mono, c in p.terms.items():
        term = SuperPoly.const(ctx, c)
        for k, (m, I) in enumerate(mono_parts(mono)):
            if k == var:
                term = term * lam_img ** m
                for i in I:
                    term = term * theta_img(i)
            else:
                term = term * SuperPoly.monomial(ctx, [(m, I) if j == k else (0, ()) for j in range(ctx.nvars)])
        out = out + term
    return out
