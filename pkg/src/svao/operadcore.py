"""Superoperads: signed symmetric actions, compositions, the shuffle product and MC checks.

Elements are lazy multilinear maps evaluated on tuples of basis inputs; an
operad instance supplies the basis, parities, composition and the S_n action.
Permutations are 0-based tuples with sigma[i] = sigma(i).
"""
from fractions import Fraction
from itertools import combinations, permutations, product
from math import factorial


def perm_compose(s, t):
    """(s t)(i) = s(t(i))."""
    return tuple(s[t[i]] for i in range(len(t)))


def perm_inverse(s):
    inv = [0] * len(s)
    for i, si in enumerate(s):
        inv[si] = i
    return tuple(inv)


def perm_sign(s):
    sign = 1
    for i in range(len(s)):
        for j in range(i + 1, len(s)):
            if s[i] > s[j]:
                sign = -sign
    return sign


def shuffles(k, l):
    """All (k, l)-shuffles: increasing on the first k and on the last l positions."""
    n = k + l
    out = []
    for first in combinations(range(n), k):
        rest = [x for x in range(n) if x not in first]
        out.append(tuple(first) + tuple(rest))
    return out


def koszul_permute(sigma, items, parity):
    """Apply sigma to a tensor of items: (sign, reordered items) per the Koszul rule."""
    n = len(items)
    sign = 1
    for i in range(n):
        for j in range(i + 1, n):
            if sigma[i] > sigma[j] and parity(items[i]) and parity(items[j]):
                sign = -sign
    inv = perm_inverse(sigma)
    return sign, tuple(items[inv[k]] for k in range(n))


class Vec:
    """Sparse vector over basis indices; the value type of the endomorphism operad."""
    __slots__ = ("terms",)

    def __init__(self, terms=None):
        self.terms = {k: Fraction(c) for k, c in (terms or {}).items() if c}

    def __add__(self, other):
        out = dict(self.terms)
        for k, c in other.terms.items():
            out[k] = out.get(k, 0) + c
        return Vec(out)

    def scale(self, c):
        return Vec({k: v * c for k, v in self.terms.items()})

    def is_zero(self):
        return not self.terms

    def __eq__(self, other):
        return isinstance(other, Vec) and self.terms == other.terms

    def __repr__(self):
        return "Vec(%r)" % self.terms


class OpElement:
    """A lazily evaluated operation of fixed arity and parity."""

    def __init__(self, operad, arity, parity, fn):
        self.operad = operad
        self.arity = arity
        self.parity = parity % 2
        self._fn = fn
        self._memo = {}

    def __call__(self, inputs):
        inputs = tuple(inputs)
        if len(inputs) != self.arity:
            raise ValueError("arity mismatch")
        if inputs not in self._memo:
            self._memo[inputs] = self._fn(inputs)
        return self._memo[inputs]

    def __add__(self, other):
        if other.arity != self.arity:
            raise ValueError("arity mismatch")
        return OpElement(self.operad, self.arity, self.parity, lambda v: self(v) + other(v))

    def __sub__(self, other):
        return self + other.scale(-1)

    def scale(self, c):
        return OpElement(self.operad, self.arity, self.parity, lambda v: self(v).scale(c))

    def act(self, sigma):
        return self.operad.act(self, sigma)

    def compose_i(self, i, g):
        return infinitesimal_compose(self, i, g)

    def nonzero_inputs(self):
        return [v for v in self.operad.inputs(self.arity) if not self(v).is_zero()]

    def is_zero(self):
        return not self.nonzero_inputs()

    def equals(self, other):
        return (self - other).is_zero()


class Operad:
    """Interface: inputs(n), input_parity(x), unit(), compose(f, gs), act(f, sigma), zero_value(n)."""

    def zero(self, arity, parity=0):
        return OpElement(self, arity, parity, lambda v: self.zero_value(arity))


def infinitesimal_compose(f, i, g):
    """f o_i g, with i 1-based, as f o (1 ... g ... 1)."""
    if not 1 <= i <= f.arity:
        raise ValueError("position out of range")
    op = f.operad
    gs = [op.unit()] * f.arity
    gs[i - 1] = g
    return op.compose(f, gs)


def box(f, g):
    """Shuffle-sum product of f in L^n (arity n+1) and g in L^m (arity m+1)."""
    n = f.arity - 1
    m = g.arity - 1
    comp = infinitesimal_compose(f, 1, g)
    terms = [comp.act(perm_inverse(s)) for s in shuffles(m + 1, n)]
    out = terms[0]
    for t in terms[1:]:
        out = out + t
    return OpElement(f.operad, comp.arity, comp.parity, out._fn)


def bracket(f, g):
    sign = -1 if f.parity * g.parity else 1
    return box(f, g) - box(g, f).scale(sign)


def symmetrize(f):
    """Average of f^sigma over S_arity: projection onto the invariants."""
    n = f.arity
    perms = list(permutations(range(n)))
    acted = [f.act(s) for s in perms]

    def fn(v):
        out = acted[0](v)
        for a in acted[1:]:
            out = out + a(v)
        return out.scale(Fraction(1, factorial(n)))
    return OpElement(f.operad, n, f.parity, fn)


def is_symmetric(f):
    return all(f.act(s).equals(f) for s in permutations(range(f.arity)))


def is_mc(x):
    """x in L^1 and x box x = 0."""
    return x.arity == 2 and is_symmetric(x) and box(x, x).is_zero()


class EndOperad(Operad):
    """Multilinear maps on a finite superspace, with an optional stored parity shift."""

    def __init__(self, parities, shift=0):
        self.parities = [int(p) % 2 for p in parities]
        self.shift = shift % 2
        self.dim = len(self.parities)

    def input_parity(self, x):
        return (self.parities[x] + self.shift) % 2

    def inputs(self, arity):
        return list(product(range(self.dim), repeat=arity))

    def zero_value(self, arity):
        return Vec()

    def unit(self):
        return OpElement(self, 1, 0, lambda v: Vec({v[0]: 1}))

    def element(self, arity, parity, table):
        """Element from a dict input tuple -> {basis: coefficient}; missing entries are zero."""
        table = {tuple(k): Vec(v) for k, v in table.items()}
        return OpElement(self, arity, parity, lambda v: table.get(v, Vec()))

    def act(self, f, sigma):
        sigma = tuple(sigma)
        if len(sigma) != f.arity:
            raise ValueError("arity mismatch")

        def fn(v):
            sign, w = koszul_permute(sigma, v, self.input_parity)
            return f(w).scale(sign)
        return OpElement(self, f.arity, f.parity, fn)

    def compose(self, f, gs):
        if len(gs) != f.arity:
            raise ValueError("need one operation per input of f")
        arities = [g.arity for g in gs]
        total = sum(arities)
        parity = (f.parity + sum(g.parity for g in gs)) % 2

        def fn(v):
            blocks = []
            pos = 0
            for a in arities:
                blocks.append(v[pos:pos + a])
                pos += a
            sign = 1
            for j, g in enumerate(gs):
                if g.parity:
                    before = sum(self.input_parity(x) for b in blocks[:j] for x in b)
                    if before % 2:
                        sign = -sign
            outs = [g(b) for g, b in zip(gs, blocks)]
            acc = Vec()
            for choice in product(*[list(o.terms.items()) for o in outs]):
                coef = sign
                for _, c in choice:
                    coef *= c
                acc = acc + f(tuple(k for k, _ in choice)).scale(coef)
            return acc
        return OpElement(self, total, parity, fn)


def lie_to_end(parities, bracket_table):
    """Package a bracket on V as the odd symmetric arity-2 element on the parity-shifted space.

    bracket_table maps (a, b) -> {c: coefficient}.  X(a, b) = (-1)^p(a) [a, b].
    """
    op = EndOperad(parities, shift=1)
    table = {}
    for (a, b), val in bracket_table.items():
        sign = -1 if op.parities[a] else 1
        table[(a, b)] = {c: sign * Fraction(x) for c, x in val.items()}
    return op.element(2, 1, table)


def end_to_lie(x):
    """Inverse of lie_to_end: [a, b] = (-1)^p(a) X(a, b)."""
    op = x.operad
    out = {}
    for a, b in op.inputs(2):
        val = x((a, b))
        if not val.is_zero():
            sign = -1 if op.parities[a] else 1
            out[(a, b)] = {c: sign * v for c, v in val.terms.items()}
    return out


def mc_check_end(x):
    """MC condition for an odd symmetric arity-2 element of the endomorphism operad."""
    return is_mc(x)


def jacobi_oracle(parities, bracket_table):
    """Brute-force super skew-symmetry and super Jacobi on all basis triples."""
    dim = len(parities)

    def br(u, v):
        out = {}
        for a, ca in u.items():
            for b, cb in v.items():
                for c, x in bracket_table.get((a, b), {}).items():
                    out[c] = out.get(c, 0) + ca * cb * Fraction(x)
        return {k: c for k, c in out.items() if c}

    def add(*vs):
        out = {}
        for s, v in vs:
            for k, c in v.items():
                out[k] = out.get(k, 0) + s * c
        return {k: c for k, c in out.items() if c}

    for a in range(dim):
        for b in range(dim):
            sign = -1 if parities[a] * parities[b] else 1
            if add((1, br({a: 1}, {b: 1})), (sign, br({b: 1}, {a: 1}))):
                return False
    for a in range(dim):
        for b in range(dim):
            for c in range(dim):
                ea, eb = {a: 1}, {b: 1}
                ec = {c: 1}
                lhs = br(ea, br(eb, ec))
                s = -1 if parities[a] * parities[b] else 1
                if add((1, lhs), (-1, br(br(ea, eb), ec)), (-s, br(eb, br(ea, ec)))):
                    return False
    return True
