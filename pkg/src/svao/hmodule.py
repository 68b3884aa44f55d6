"""The algebras H_W, H_K, H-supermodules and the spaces V[Lambda_1..Lambda_n].

An H monomial is (t, J): T^t S^J with J a sorted tuple.  Elements of
V[Lambda_1..Lambda_n] are ModPoly objects: maps (poly monomial, module key)
-> Fraction, polynomial part written on the left.
"""
from fractions import Fraction
from functools import lru_cache

from .linalg import rref
from .superpoly import (
    K, W, SuperContext, SuperPoly, merge_odd, mono_key, mono_mul, mono_parity,
    mono_parts, one_mono, rename_mono, render_mono, render_terms,
)

H_ONE = (0, ())


def h_mul(flavor, a, b):
    """Product of H monomials: (sign, monomial) with sign 0 for a vanishing product."""
    sign, word, squared = merge_odd(a[1], b[1], flavor == K)
    if sign == 0:
        return 0, None
    return sign, (a[0] + b[0] + len(squared), word)


def h_parity(h):
    return len(h[1]) % 2


def render_h(h):
    t, J = h
    parts = []
    if t:
        parts.append("T" if t == 1 else "T^%d" % t)
    parts.extend("S%d" % j for j in J)
    return " ".join(parts)


class HPoly:
    """A nabla-polynomial: finite combination of H monomials."""
    __slots__ = ("flavor", "N", "terms")

    def __init__(self, flavor, N, terms=None):
        self.flavor = flavor
        self.N = N
        self.terms = {h: Fraction(c) for h, c in (terms or {}).items() if c}

    def __mul__(self, other):
        out = {}
        for a, ca in self.terms.items():
            for b, cb in other.terms.items():
                s, h = h_mul(self.flavor, a, b)
                if s:
                    out[h] = out.get(h, 0) + s * ca * cb
        return HPoly(self.flavor, self.N, out)

    def __add__(self, other):
        out = dict(self.terms)
        for h, c in other.terms.items():
            out[h] = out.get(h, 0) + c
        return HPoly(self.flavor, self.N, out)

    def __eq__(self, other):
        return isinstance(other, HPoly) and self.terms == other.terms

    def render(self):
        return render_terms([(render_h(h), c) for h, c in sorted(self.terms.items())])


def s_past(j, mono, flavor):
    """Move S^j rightwards past a polynomial monomial.

    Returns (coef, monomial, kept) triples: kept=True means S^j survives on the
    right; kept=False terms come from the K cross relation {S^j, theta_k^j} = 2 lambda_k.
    """
    evens, odds = mono
    out = [((-1) ** len(odds), mono, True)]
    if flavor == K:
        for p, (k, i) in enumerate(odds):
            if i == j:
                ev = list(evens)
                ev[k] += 1
                out.append((2 * (-1) ** p, (tuple(ev), odds[:p] + odds[p + 1:]), False))
    return out


@lru_cache(maxsize=None)
def commute(flavor, h, mono):
    """Rewrite h * mono as a sum of mono' * h'; returns a tuple of (mono', h', coef)."""
    t, J = h
    state = {(mono, ()): 1}
    for j in reversed(J):
        new = {}
        for (m, word), c in state.items():
            for c2, m2, kept in s_past(j, m, flavor):
                key = (m2, (j,) + word if kept else word)
                new[key] = new.get(key, 0) + c * c2
        state = {k: v for k, v in new.items() if v}
    return tuple((m, (t, word), c) for (m, word), c in state.items())


class HModule:
    """Abstract H-supermodule with a hashable, sortable basis of keys."""
    flavor = W
    N = 1

    def parity(self, key):
        raise NotImplementedError

    def act_raw(self, h, key):
        raise NotImplementedError

    def act(self, h, key):
        cache = self.__dict__.setdefault("_act_cache", {})
        ck = (h, key)
        if ck not in cache:
            cache[ck] = {k: Fraction(c) for k, c in self.act_raw(h, key).items() if c}
        return cache[ck]

    def render_key(self, key):
        return str(key)

    def sort_key(self, key):
        return key


class FreeHModule(HModule):
    """Free H-module on named generators; a key is (H monomial, generator index).

    A generator flagged central spans a trivial summand: nabla acts on it by zero.
    """

    def __init__(self, flavor, N, generators, central=()):
        self.flavor = flavor
        self.N = N
        self.generators = [(str(g[0]), int(g[1]) % 2) for g in generators]
        self.names = [n for n, _ in self.generators]
        self.central = frozenset(self.names.index(c) if isinstance(c, str) else c for c in central)

    def gen(self, g):
        if isinstance(g, str):
            g = self.names.index(g)
        return (H_ONE, g)

    def parity(self, key):
        return (h_parity(key[0]) + self.generators[key[1]][1]) % 2

    def act_raw(self, h, key):
        if key[1] in self.central and h != H_ONE:
            return {}
        s, h2 = h_mul(self.flavor, h, key[0])
        return {(h2, key[1]): s} if s else {}

    def render_key(self, key):
        h = render_h(key[0])
        name = self.names[key[1]]
        return name if not h else "%s %s" % (h, name)

    def sort_key(self, key):
        return (key[1], key[0][0] + len(key[0][1]), key[0])

    def input_keys(self):
        """Keys on which structure maps are tabulated: the generators."""
        return [(H_ONE, g) for g in range(len(self.generators))]

    def keys_up_to(self, degree):
        """All basis keys with nabla-degree (T counted once, each S once) at most degree."""
        out = []
        for g in range(len(self.generators)):
            for h in ([H_ONE] if g in self.central else h_monomials(self.N, degree)):
                out.append((h, g))
        return out


def h_monomials(N, degree):
    from itertools import combinations
    out = []
    for size in range(N + 1):
        for J in combinations(range(1, N + 1), size):
            for t in range(degree - size + 1):
                out.append((t, J))
    return sorted(out, key=lambda h: (h[0] + len(h[1]), h))


class FiniteHModule(HModule):
    """Finite-dimensional H-module: key is a basis index, T and S^i given as sparse column maps."""

    def __init__(self, flavor, N, names, parities, T=None, S=None):
        self.flavor = flavor
        self.N = N
        self.names = list(names)
        self.parities = [int(p) % 2 for p in parities]
        self.dim = len(self.names)
        self.T = _clean_map(T or {}, self.dim)
        S = S or {}
        self.S = {i: _clean_map(S.get(i, {}), self.dim) for i in range(1, N + 1)}

    def parity(self, key):
        return self.parities[key]

    def act_raw(self, h, key):
        vec = {key: Fraction(1)}
        t, J = h
        for j in reversed(J):
            vec = apply_map(self.S[j], vec)
        for _ in range(t):
            vec = apply_map(self.T, vec)
        return vec

    def render_key(self, key):
        return self.names[key]

    def keys(self):
        return list(range(self.dim))

    input_keys = keys

    def relation_defects(self):
        """Failures of the H relations and of the parity of T, S on this carrier."""
        bad = []
        for e in range(self.dim):
            for img, par, name in [(self.T, 0, "T")] + [(self.S[i], 1, "S%d" % i) for i in self.S]:
                for f in img.get(e, {}):
                    if (self.parities[f] - self.parities[e] - par) % 2:
                        bad.append(("parity", name, self.names[e]))
            v = {e: Fraction(1)}
            for i in self.S:
                ts = apply_map(self.T, apply_map(self.S[i], v))
                st = apply_map(self.S[i], apply_map(self.T, v))
                if vec_sub(ts, st):
                    bad.append(("TS", "S%d" % i, self.names[e]))
                for j in self.S:
                    if j < i:
                        continue
                    a = vec_add(apply_map(self.S[i], apply_map(self.S[j], v)), apply_map(self.S[j], apply_map(self.S[i], v)))
                    if i == j and self.flavor == K:
                        a = vec_sub(a, vec_scale(apply_map(self.T, v), 2))
                    if a:
                        bad.append(("SS", "S%d S%d" % (i, j), self.names[e]))
        return bad

    def t_nilpotency(self):
        """Smallest k with T^k = 0, or None if T is not nilpotent."""
        vecs = [{e: Fraction(1)} for e in range(self.dim)]
        for k in range(self.dim + 2):
            if all(not v for v in vecs):
                return k
            vecs = [apply_map(self.T, v) for v in vecs]
        return None


def _clean_map(m, dim):
    out = {}
    for j, col in m.items():
        col = {int(i): Fraction(c) for i, c in col.items() if c}
        if col:
            out[int(j)] = col
    return out


def apply_map(m, vec):
    out = {}
    for j, c in vec.items():
        for i, a in m.get(j, {}).items():
            out[i] = out.get(i, 0) + a * c
    return {i: c for i, c in out.items() if c}


def vec_add(a, b):
    out = dict(a)
    for k, c in b.items():
        out[k] = out.get(k, 0) + c
    return {k: c for k, c in out.items() if c}


def vec_scale(a, c):
    return {k: v * c for k, v in a.items() if v * c}


def vec_sub(a, b):
    return vec_add(a, vec_scale(b, -1))


class MixedPoly:
    """Element of K[Lambda] (x) H, normal-ordered with the nabla part on the right."""
    __slots__ = ("ctx", "terms")

    def __init__(self, ctx, terms=None):
        self.ctx = ctx
        self.terms = {k: Fraction(c) for k, c in (terms or {}).items() if c}

    @classmethod
    def const(cls, ctx, c=1):
        return cls(ctx, {(one_mono(ctx.nvars), H_ONE): c})

    @classmethod
    def from_poly(cls, p):
        return cls(p.ctx, {(m, H_ONE): c for m, c in p.terms.items()})

    @classmethod
    def nabla(cls, ctx, h, c=1):
        return cls(ctx, {(one_mono(ctx.nvars), h): c})

    def __add__(self, other):
        out = dict(self.terms)
        for k, c in other.terms.items():
            out[k] = out.get(k, 0) + c
        return MixedPoly(self.ctx, out)

    def scale(self, c):
        return MixedPoly(self.ctx, {k: v * c for k, v in self.terms.items()})

    def __mul__(self, other):
        fl = self.ctx.flavor
        out = {}
        for (p, h), ca in self.terms.items():
            for (q, h2), cb in other.terms.items():
                for q2, h3, c in commute(fl, h, q):
                    s1, m = mono_mul(self.ctx, p, q2)
                    if not s1:
                        continue
                    s2, hh = h_mul(fl, h3, h2)
                    if not s2:
                        continue
                    key = (m, hh)
                    out[key] = out.get(key, 0) + s1 * s2 * c * ca * cb
        return MixedPoly(self.ctx, out)

    def __pow__(self, n):
        out = MixedPoly.const(self.ctx)
        for _ in range(n):
            out = out * self
        return out


def linear_image(ctx, lam, nabla, i=None):
    """lambda (i None) or theta^i image of sum_j lam[j] Lambda_j + nabla * (T | S^i)."""
    out = MixedPoly(ctx)
    for j, c in lam.items():
        if i is None:
            out = out + MixedPoly.from_poly(SuperPoly.lam(ctx, j)).scale(c)
        else:
            out = out + MixedPoly.from_poly(SuperPoly.theta(ctx, j, i)).scale(c)
    if nabla:
        out = out + MixedPoly.nabla(ctx, (1, ()) if i is None else (0, (i,)), nabla)
    return out


class ModPoly:
    """Element of V[Lambda_1..Lambda_n] for an H-module V."""
    __slots__ = ("module", "ctx", "terms")

    def __init__(self, module, nvars, terms=None):
        self.module = module
        self.ctx = SuperContext(module.flavor, module.N, nvars)
        self.terms = {}
        for k, c in (terms or {}).items():
            c = Fraction(c)
            if c:
                self.terms[k] = c

    @property
    def nvars(self):
        return self.ctx.nvars

    @classmethod
    def element(cls, module, vec, nvars=0):
        one = one_mono(nvars)
        return cls(module, nvars, {(one, k): c for k, c in vec.items()})

    @classmethod
    def basis(cls, module, key, nvars=0, c=1):
        return cls(module, nvars, {(one_mono(nvars), key): c})

    def empty(self):
        return ModPoly(self.module, self.nvars)

    def __add__(self, other):
        out = dict(self.terms)
        for k, c in other.terms.items():
            out[k] = out.get(k, 0) + c
        return ModPoly(self.module, self.nvars, out)

    def __neg__(self):
        return self.scale(-1)

    def __sub__(self, other):
        return self + other.scale(-1)

    def scale(self, c):
        return ModPoly(self.module, self.nvars, {k: v * c for k, v in self.terms.items()})

    def __eq__(self, other):
        return isinstance(other, ModPoly) and self.nvars == other.nvars and self.terms == other.terms

    def __hash__(self):
        return hash(frozenset(self.terms.items()))

    def is_zero(self):
        return not self.terms

    def parity(self):
        ps = {self.term_parity(mono, key) for mono, key in self.terms}
        if len(ps) > 1:
            raise ValueError("inhomogeneous element")
        return ps.pop() if ps else 0

    def term_parity(self, mono, key):
        return (mono_parity(mono) + self.module.parity(key)) % 2

    def vector(self):
        """Coefficient vector of a Lambda-free element."""
        out = {}
        for (mono, key), c in self.terms.items():
            if mono != one_mono(self.nvars):
                raise ValueError("element still depends on Lambda")
            out[key] = out.get(key, 0) + c
        return out

    def lmul(self, poly):
        """Left multiplication by a polynomial in the same variables."""
        out = {}
        for pm, pc in poly.terms.items():
            for (mono, key), c in self.terms.items():
                s, m = mono_mul(self.ctx, pm, mono)
                if s:
                    k = (m, key)
                    out[k] = out.get(k, 0) + s * pc * c
        return ModPoly(self.module, self.nvars, out)

    def act(self, h, c=1):
        """Left action of an H monomial, moving it past the polynomial part."""
        out = {}
        fl = self.ctx.flavor
        for (mono, key), coef in self.terms.items():
            for m2, h2, c2 in commute(fl, h, mono):
                for k2, c3 in self.module.act(h2, key).items():
                    k = (m2, k2)
                    out[k] = out.get(k, 0) + c * coef * c2 * c3
        return ModPoly(self.module, self.nvars, out)

    def act_hpoly(self, hp):
        out = self.empty()
        for h, c in hp.terms.items():
            out = out + self.act(h, c)
        return out

    def apply_mixed(self, mixed):
        """Multiply on the left by a mixed element: polynomial times nabla acting on V."""
        out = self.empty()
        for (pm, h), c in mixed.terms.items():
            out = out + self.act(h).lmul(SuperPoly(self.ctx, {pm: c}))
        return out

    def embed(self, nvars, perm=None):
        """View in more variables; variable k goes to perm[k] (default: identity)."""
        perm = perm if perm is not None else list(range(self.nvars))
        out = {}
        for (mono, key), c in self.terms.items():
            s, m = rename_mono(mono, perm, nvars)
            out[(m, key)] = out.get((m, key), 0) + s * c
        return ModPoly(self.module, nvars, out)

    def linear_change(self, images, nvars):
        """Replace Lambda_k by sum_j images[k][j] Lambda_j (no nabla part) in nvars variables."""
        ctx = SuperContext(self.ctx.flavor, self.ctx.N, nvars)
        cache = {}
        out = {}
        for (mono, key), c in self.terms.items():
            if mono not in cache:
                prod = SuperPoly.const(ctx)
                for k, (m, I) in enumerate(mono_parts(mono)):
                    if not (m or I):
                        continue
                    lam = SuperPoly(ctx)
                    for j, a in images[k].items():
                        lam = lam + SuperPoly.lam(ctx, j).scale(a)
                    prod = prod * lam ** m
                    for i in I:
                        th = SuperPoly(ctx)
                        for j, a in images[k].items():
                            th = th + SuperPoly.theta(ctx, j, i).scale(a)
                        prod = prod * th
                cache[mono] = prod
            for m, pc in cache[mono].terms.items():
                out[(m, key)] = out.get((m, key), 0) + c * pc
        return ModPoly(self.module, nvars, out)

    def drop_var(self, k):
        """Remove an unused variable, shifting later ones down."""
        perm = [j if j < k else j - 1 for j in range(self.nvars)]
        out = {}
        for (mono, key), c in self.terms.items():
            if mono[0][k] or any(kk == k for kk, _ in mono[1]):
                raise ValueError("variable still in use")
            ev = mono[0][:k] + mono[0][k + 1:]
            od = tuple((perm[kk], i) for kk, i in mono[1])
            out[((ev, od), key)] = c
        return ModPoly(self.module, self.nvars - 1, out)

    def substitute(self, var, lam, nabla=0):
        """Replace Lambda_var by sum_j lam[j] Lambda_j + nabla * nabla; nabla then acts on V."""
        ctx = self.ctx
        out = {}
        lam_img = linear_image(ctx, lam, nabla)
        th_img = {i: linear_image(ctx, lam, nabla, i) for i in range(1, ctx.N + 1)}
        cache = {}
        for (mono, key), c in self.terms.items():
            if mono not in cache:
                prod = MixedPoly.const(ctx)
                for k, (m, I) in enumerate(mono_parts(mono)):
                    if k == var:
                        prod = prod * lam_img ** m
                        for i in I:
                            prod = prod * th_img[i]
                    elif m or I:
                        ev = [0] * ctx.nvars
                        ev[k] = m
                        prod = prod * MixedPoly(ctx, {((tuple(ev), tuple((k, i) for i in I)), H_ONE): 1})
                cache[mono] = prod
            for (pm, h), pc in cache[mono].terms.items():
                for k2, c2 in self.module.act(h, key).items():
                    kk = (pm, k2)
                    out[kk] = out.get(kk, 0) + c * pc * c2
        return ModPoly(self.module, self.nvars, out)

    def reduce_last(self):
        """Eliminate the last variable via Lambda_n -> -Lambda_1 - ... - Lambda_{n-1} - nabla."""
        n = self.nvars
        lam = {j: -1 for j in range(n - 1)}
        return self.substitute(n - 1, lam, -1).drop_var(n - 1)

    def skew(self, var=0):
        """The substitution Lambda -> -Lambda - nabla in one variable."""
        return self.substitute(var, {var: -1}, -1)

    def partial_lambda(self, k):
        out = {}
        for (mono, key), c in self.terms.items():
            p = SuperPoly(self.ctx, {mono: c}).partial_lambda(k)
            for m, v in p.terms.items():
                out[(m, key)] = out.get((m, key), 0) + v
        return ModPoly(self.module, self.nvars, out)

    def partial_theta(self, k, i):
        out = {}
        for (mono, key), c in self.terms.items():
            p = SuperPoly(self.ctx, {mono: c}).partial_theta(k, i)
            for m, v in p.terms.items():
                out[(m, key)] = out.get((m, key), 0) + v
        return ModPoly(self.module, self.nvars, out)

    def residue(self, k=0):
        """Res_{Lambda_k}(lambda_k^{-1} x); the removed theta_k^[N] passes earlier odd factors."""
        N = self.ctx.N
        out = {}
        for (mono, key), c in self.terms.items():
            m, I = mono_parts(mono)[k]
            if m or len(I) != N:
                continue
            before = sum(1 for kk, _ in mono[1] if kk < k)
            sign = -1 if (before * N) % 2 else 1
            od = tuple(x for x in mono[1] if x[0] != k)
            kk = ((mono[0], od), key)
            out[kk] = out.get(kk, 0) + sign * c
        return ModPoly(self.module, self.nvars, out).drop_var(k)

    def integral(self, k, lower, upper):
        """Definite integral in Lambda_k between even bounds.

        A bound is (lam, t): the linear form sum_j lam[j] lambda_j + t*T.  The
        result keeps the variable slot k (unused) so bounds may refer to others.
        """
        N = self.ctx.N
        ctx = self.ctx
        out = self.empty()
        for (mono, key), c in self.terms.items():
            m, I = mono_parts(mono)[k]
            if len(I) != N:
                continue
            before = sum(1 for kk, _ in mono[1] if kk < k)
            sign = -1 if (before * N) % 2 else 1
            ev = list(mono[0])
            ev[k] = 0
            rest = ModPoly(self.module, self.nvars, {((tuple(ev), tuple(x for x in mono[1] if x[0] != k)), key): c * sign})
            diff = bound_power(ctx, upper, m + 1) + bound_power(ctx, lower, m + 1).scale(-1)
            out = out + rest.apply_mixed(diff.scale(Fraction(1, m + 1)))
        return out

    def exp_nabla_partial(self, max_steps=64):
        """exp(nabla . d/dLambda) on a one-variable element, terminating by degree."""
        total = self
        cur = self
        for n in range(1, max_steps):
            nxt = cur.partial_lambda(0).act((1, ()))
            for i in range(1, self.ctx.N + 1):
                nxt = nxt + cur.partial_theta(0, i).act((0, (i,)))
            cur = nxt.scale(Fraction(1, n))
            if cur.is_zero():
                return total
            total = total + cur
        raise ArithmeticError("exponential series did not terminate")

    def sorted_terms(self):
        mod = self.module
        return sorted(self.terms.items(), key=lambda t: (mono_key(t[0][0]), mod.sort_key(t[0][1])))

    def render(self):
        items = []
        for (mono, key), c in self.sorted_terms():
            pm = render_mono(mono)
            kv = self.module.render_key(key)
            kv = kv if " " not in kv else "(%s)" % kv
            items.append(("%s*%s" % (pm, kv) if pm else kv, c))
        return render_terms(items)

    def __repr__(self):
        return "ModPoly(%s)" % self.render()


def bound_power(ctx, bound, n):
    lam, t = bound
    b = linear_image(ctx, lam, t)
    return b ** n


ZERO = ({}, 0)


def bound(lam=None, t=0):
    return (dict(lam or {}), t)


def mod_nabla(module):
    """Basis of M / nabla M and a projection to its coordinates.

    Free modules: the generator classes.  Finite modules: a complement of the
    image of T and the S^i, chosen by reduced echelon form.
    """
    if isinstance(module, FreeHModule):
        gens = [(H_ONE, g) for g in range(len(module.generators))]

        def project(vec):
            out = {}
            for (h, g), c in vec.items():
                if h == H_ONE:
                    out[g] = out.get(g, 0) + c
            return {g: c for g, c in out.items() if c}
        return gens, project
    dim = module.dim
    rows = []
    for e in range(dim):
        for m in [module.T] + [module.S[i] for i in module.S]:
            col = m.get(e)
            if col:
                rows.append(dict(col))
    red, pivots = rref(rows, dim)
    reps = [e for e in range(dim) if e not in pivots]

    def project(vec):
        v = dict(vec)
        for row, p in zip(red, pivots):
            c = v.get(p)
            if c:
                for j, a in row.items():
                    v[j] = v.get(j, 0) - c * a
        return {reps.index(e): c for e, c in v.items() if c and e in reps}
    return reps, project
