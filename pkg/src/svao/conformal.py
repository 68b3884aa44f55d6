"""SUSY Lie conformal algebras, the conformal operad and its MC correspondence."""
from fractions import Fraction
from itertools import product

from .hmodule import H_ONE, FreeHModule, ModPoly, h_parity
from .operadcore import Operad, OpElement, box, is_symmetric, koszul_permute, perm_inverse
from .report import FAIL, PASS, Check, first_failure
from .superpoly import K, W, SuperContext, SuperPoly, mono_parity

# [a_Lambda S^i b] carries (-1)^{p(a)+Nbar}; without the Nbar twist skew-symmetry breaks on H-multiples
RIGHT_SESQ_NBAR = {W: 1, K: 1}


def h_image(ctx, var, h):
    """h(-Lambda_var): T -> -lambda, S^i -> -theta^i, as a polynomial."""
    t, J = h
    p = SuperPoly.lam(ctx, var, t).scale((-1) ** t)
    for j in J:
        p = p * SuperPoly.theta(ctx, var, j).scale(-1)
    return p


def sign(e):
    return -1 if e % 2 else 1


def pair_in(pairing, ppar, x, y, lam, nabla=0, cache=None):
    """Extend a pairing on basis keys to [x_Gamma y] for x, y in V[Lambda_1..Lambda_n].

    Gamma is replaced by sum_j lam[j] Lambda_j + nabla * nabla.  Polynomial
    coefficients come out to the left: the left one passes the pairing, the
    right one passes a and the pairing.
    """
    n = x.nvars
    ctx = x.ctx
    img = (tuple(sorted(lam.items())), nabla)
    cache = {} if cache is None else cache
    out = None
    for (pm, a), ca in x.terms.items():
        pa = x.module.parity(a)
        for (qm, b), cb in y.terms.items():
            key = (a, b, n, img)
            if key not in cache:
                br = pairing(a, b)
                br = br.embed(n + 1, [n]).substitute(n, lam, nabla).drop_var(n)
                cache[key] = br
            br = cache[key]
            s = sign(mono_parity(pm) * ppar + mono_parity(qm) * (pa + ppar))
            poly = SuperPoly(ctx, {pm: ca}) * SuperPoly(ctx, {qm: cb * s})
            term = br.lmul(poly)
            out = term if out is None else out + term
    if out is None:
        return None
    return out


def zero_like(module, nvars):
    return ModPoly(module, nvars)


class LCAStructure:
    """A Lambda-bracket on an H-module, tabulated on input keys (generators or a finite basis)."""

    def __init__(self, module, table, label=None):
        self.module = module
        self.flavor = module.flavor
        self.N = module.N
        self.nbar = module.N % 2
        self.table = {k: v for k, v in table.items() if not v.is_zero()}
        self.label = label
        self._cache = {}

    def parity(self, key):
        return self.module.parity(key)

    def zero(self, nvars=1):
        return ModPoly(self.module, nvars)

    def bracket(self, a, b):
        """Sesquilinear extension of the table to arbitrary basis keys."""
        ck = (a, b)
        if ck in self._cache:
            return self._cache[ck]
        mod = self.module
        if not isinstance(mod, FreeHModule):
            out = self.table.get((a, b), self.zero())
        else:
            (ha, ga), (hb, gb) = a, b
            x = self.table.get(((H_ONE, ga), (H_ONE, gb)), self.zero())
            if not x.is_zero():
                eps = sign(mod.parity((H_ONE, ga)) + RIGHT_SESQ_NBAR[self.flavor] * self.nbar)
                t, J = hb
                for j in reversed(J):
                    x = (x.lmul(SuperPoly.theta(x.ctx, 0, j)) + x.act((0, (j,)))).scale(eps)
                for _ in range(t):
                    x = x.lmul(SuperPoly.lam(x.ctx, 0)) + x.act((1, ()))
                t, J = ha
                left = SuperPoly.lam(x.ctx, 0, t).scale((-1) ** t)
                for j in J:
                    left = left * SuperPoly.theta(x.ctx, 0, j).scale(-sign(self.N))
                x = x.lmul(left)
            out = x
        self._cache[ck] = out
        return out

    def bracket_elems(self, x, y, nvars=1):
        """[x_Lambda y] for Lambda-free elements x, y given as ModPoly in 0 variables."""
        out = self.zero(nvars)
        for (_, a), ca in x.terms.items():
            for (_, b), cb in y.terms.items():
                out = out + self.bracket(a, b).scale(ca * cb)
        return out

    def inputs(self):
        return self.module.input_keys()

    def render_key(self, k):
        return self.module.render_key(k)


def vec_elem(module, vec):
    return ModPoly.element(module, vec, 0)


def sesq_cases(L, keys):
    """Defects of the sesquilinearity rules on the given keys."""
    mod = L.module
    N = L.N
    cases = []
    for a in keys:
        for b in keys:
            base = L.bracket(a, b)
            ctx = SuperContext(L.flavor, N, 1)
            pa = mod.parity(a)
            ops = [(0, (i,)) for i in range(1, N + 1)]
            if L.flavor == W:
                ops = [(1, ())] + ops
            for h in ops:
                ha = vec_elem(mod, mod.act(h, a))
                hb = vec_elem(mod, mod.act(h, b))
                one = vec_elem(mod, {a: 1})
                other = vec_elem(mod, {b: 1})
                wit = (L.render_key(a), L.render_key(b), "T" if h[0] else "S%d" % h[1][0])
                if h[0]:
                    lhs_l = L.bracket_elems(ha, other)
                    rhs_l = base.lmul(SuperPoly.lam(ctx, 0)).scale(-1)
                    lhs_r = L.bracket_elems(one, hb)
                    rhs_r = base.lmul(SuperPoly.lam(ctx, 0)) + base.act((1, ()))
                else:
                    i = h[1][0]
                    lhs_l = L.bracket_elems(ha, other)
                    rhs_l = base.lmul(SuperPoly.theta(ctx, 0, i)).scale(-sign(N))
                    eps = sign(pa + RIGHT_SESQ_NBAR[L.flavor] * L.nbar)
                    lhs_r = L.bracket_elems(one, hb)
                    rhs_r = (base.lmul(SuperPoly.theta(ctx, 0, i)) + base.act(h)).scale(eps)
                cases.append((wit + ("left",), lambda l=lhs_l, r=rhs_l: l - r))
                cases.append((wit + ("right",), lambda l=lhs_r, r=rhs_r: l - r))
    return cases


def skew_defect(L, a, b):
    s = sign(L.parity(a) * L.parity(b) + L.nbar)
    return L.bracket(b, a) + L.bracket(a, b).skew().scale(s)


def jacobi_defect(L, a, b, c, cache=None):
    mod = L.module
    nb = L.nbar
    pa, pb = L.parity(a), L.parity(b)
    xa = ModPoly.basis(mod, a, 2)
    xb = ModPoly.basis(mod, b, 2)
    xc = ModPoly.basis(mod, c, 2)
    br = L.bracket
    t0 = pair_in(br, nb, xa, L.bracket(b, c).embed(2, [1]), {0: 1}, cache=cache)
    t1 = pair_in(br, nb, L.bracket(a, b).embed(2, [0]), xc, {0: 1, 1: 1}, cache=cache)
    t2 = pair_in(br, nb, xb, L.bracket(a, c).embed(2, [0]), {1: 1}, cache=cache)
    out = ModPoly(mod, 2)
    if t0 is not None:
        out = out + t0
    if t1 is not None:
        out = out - t1.scale(sign((pa + nb) * nb))
    if t2 is not None:
        out = out - t2.scale(sign((pa + nb) * (pb + nb)))
    return out


def parity_cases(L):
    cases = []
    for (a, b), v in L.table.items():
        want = (L.parity(a) + L.parity(b) + L.nbar) % 2

        def d(v=v, want=want):
            bad = {k: c for k, c in v.terms.items() if v.term_parity(*k) != want}
            return ModPoly(v.module, v.nvars, bad)
        cases.append(((L.render_key(a), L.render_key(b)), d))
    return cases


def check_lca_axioms(L, spot_degree=1):
    """Parity, sesquilinearity, skew-symmetry and Jacobi, each with its first failing tuple."""
    keys = L.inputs()
    out = [first_failure("parity", parity_cases(L))]
    if isinstance(L.module, FreeHModule):
        # the extension is sesquilinear by construction; spot-check well-definedness on H-multiples
        sk = L.module.keys_up_to(spot_degree)
        out.append(first_failure("sesquilinearity", sesq_cases(L, sk), note="spot-checked on H-multiples"))
    else:
        out.append(first_failure("sesquilinearity", sesq_cases(L, keys)))
    skeys = L.module.keys_up_to(spot_degree) if isinstance(L.module, FreeHModule) else keys
    out.append(first_failure("skew-symmetry", [
        ((L.render_key(a), L.render_key(b)), lambda a=a, b=b: skew_defect(L, a, b))
        for a in skeys for b in skeys]))
    cache = {}
    out.append(first_failure("jacobi", [
        ((L.render_key(a), L.render_key(b), L.render_key(c)), lambda a=a, b=b, c=c: jacobi_defect(L, a, b, c, cache))
        for a in keys for b in keys for c in keys]))
    return out


class ChOperad(Operad):
    """The conformal operad of an H-module, parity-shifted by `shift` (stored offset)."""

    def __init__(self, module, shift=None):
        self.module = module
        self.shift = (module.N + 1 if shift is None else shift) % 2

    def input_parity(self, key):
        return (self.module.parity(key) + self.shift) % 2

    def inputs(self, arity):
        return list(product(self.module.input_keys(), repeat=arity))

    def zero_value(self, arity):
        return ModPoly(self.module, max(arity - 1, 0))

    def unit(self):
        return OpElement(self, 1, 0, lambda v: ModPoly.basis(self.module, v[0], 0))

    def element(self, arity, parity, gen_fn):
        """Element determined by its values on input keys, extended by H-equivariance."""
        mod = self.module
        if not isinstance(mod, FreeHModule):
            return OpElement(self, arity, parity, gen_fn)

        def fn(v):
            hs = [k[0] for k in v]
            gens = tuple((H_ONE, k[1]) for k in v)
            if all(h == H_ONE for h in hs):
                return gen_fn(gens)
            s = 0
            for j in range(arity):
                for i in range(j):
                    s += h_parity(hs[j]) * self.input_parity(gens[i])
            s += sum(h_parity(h) for h in hs) * parity
            val = gen_fn(gens).embed(arity)
            phi = SuperPoly.const(val.ctx)
            for j, h in enumerate(hs):
                phi = phi * h_image(val.ctx, j, h)
            return val.lmul(phi).scale(sign(s)).reduce_last()
        return OpElement(self, arity, parity, fn)

    def act(self, f, sigma):
        sigma = tuple(sigma)
        n = f.arity
        inv = perm_inverse(sigma)

        def fn(v):
            s, w = koszul_permute(sigma, v, self.input_parity)
            val = f(w)
            return val.embed(n, [inv[j] for j in range(n - 1)]).reduce_last().scale(s)
        return OpElement(self, n, f.parity, fn)

    def compose(self, f, gs):
        if len(gs) != f.arity:
            raise ValueError("need one operation per input of f")
        arities = [g.arity for g in gs]
        n = sum(arities)
        m = len(gs)
        parity = (f.parity + sum(g.parity for g in gs)) % 2
        starts = [sum(arities[:j]) for j in range(m)]
        images = [{k: 1 for k in range(starts[j], starts[j] + arities[j])} for j in range(m)]
        mod = self.module

        def fn(v):
            blocks = [v[starts[j]:starts[j] + arities[j]] for j in range(m)]
            s1 = 0
            for j, g in enumerate(gs):
                if g.parity:
                    s1 += sum(self.input_parity(x) for b in blocks[:j] for x in b)
            outs = [g(b) for g, b in zip(gs, blocks)]
            acc = ModPoly(mod, n)
            ctx = acc.ctx
            for choice in product(*[list(o.terms.items()) for o in outs]):
                keys = tuple(k for (_, k), _ in choice)
                s2 = s1
                coef = Fraction(1)
                poly = SuperPoly.const(ctx)
                for j, ((mono, key), c) in enumerate(choice):
                    coef *= c
                    pj = mono_parity(mono)
                    s2 += pj * (f.parity + sum(self.input_parity(kk) for kk in keys[:j]))
                    local = SuperPoly(SuperContext(mod.flavor, mod.N, arities[j] - 1), {mono: 1})
                    poly = poly * local.permute_vars([starts[j] + r for r in range(arities[j] - 1)], n)
                val = f(keys)
                val = val.linear_change(images[:m - 1], n)
                acc = acc + val.lmul(poly).scale(coef * sign(s2))
            return acc.reduce_last()
        return OpElement(self, n, parity, fn)


def lca_to_mc(L):
    """The odd arity-2 element X with X(a, b) = (-1)^{p(a)(Nbar+1)} [a_Lambda b]."""
    op = ChOperad(L.module)

    def gen_fn(v):
        a, b = v
        return L.bracket(a, b).scale(sign(L.parity(a) * (L.nbar + 1)))
    return op.element(2, 1, gen_fn)


def mc_to_lca(X):
    mod = X.operad.module
    nbar = mod.N % 2
    table = {}
    for a, b in X.operad.inputs(2):
        val = X((a, b))
        if not val.is_zero():
            table[(a, b)] = val.scale(sign(mod.parity(a) * (nbar + 1)))
    return LCAStructure(mod, table)


def ch_box(X, Y):
    return box(X, Y)


def mc_check_lca(L):
    """X box X = 0 on all input triples, after checking X is S_2-invariant."""
    X = lca_to_mc(L)
    if not is_symmetric(X):
        return False
    return box(X, X).is_zero()


def mc_report(L):
    X = lca_to_mc(L)
    if not is_symmetric(X):
        bad = [v for v in X.operad.inputs(2) if not (X(v) - X.act((1, 0))(v)).is_zero()]
        v = bad[0]
        return [Check("S2-invariance", FAIL, tuple(L.render_key(k) for k in v), (X(v) - X.act((1, 0))(v)).render())]
    sq = box(X, X)
    for v in X.operad.inputs(3):
        d = sq(v)
        if not d.is_zero():
            return [Check("S2-invariance", PASS), Check("X box X", FAIL, tuple(L.render_key(k) for k in v), d.render())]
    return [Check("S2-invariance", PASS), Check("X box X", PASS)]


# example structures


def free_lca(flavor, N, generators, entries, central=(), label=None):
    """LCA on a free module from entries (a, b) -> {generator: coefficient} or a function of the module; skew partners filled in."""
    mod = FreeHModule(flavor, N, generators, central)
    table = {}
    for (a, b), v in entries.items():
        if callable(v):
            v = v(mod)
        else:
            out = ModPoly(mod, 1)
            for g, c in v.items():
                out = out + ModPoly.basis(mod, mod.gen(g), 1, c)
            v = out
        table[(mod.gen(a), mod.gen(b))] = v
    L = LCAStructure(mod, table, label)
    for (a, b), v in list(L.table.items()):
        if (b, a) not in L.table:
            s = sign(L.parity(a) * L.parity(b) + L.nbar)
            L.table[(b, a)] = v.skew().scale(-s)
    L._cache = {}
    return L


def f1():
    """W, N=1: alpha even, phi odd, C even central, [alpha_Lambda phi] = C."""
    return free_lca(W, 1, [("alpha", 0), ("phi", 1), ("C", 0)], {("alpha", "phi"): {"C": 1}}, central=("C",), label="F1")


def b1():
    """K, N=1: Psi odd, C even central, [Psi_Lambda Psi] = theta C."""
    def value(mod):
        return ModPoly.basis(mod, mod.gen("C"), 1).lmul(SuperPoly.theta(SuperContext(K, 1, 1), 0, 1))
    return free_lca(K, 1, [("Psi", 1), ("C", 0)], {("Psi", "Psi"): value}, central=("C",), label="B1")


def current_lca(flavor, N):
    """so(3) currents: [J_i Lambda J_j] = eps_ijk J_k, generators of parity Nbar."""
    par = N % 2
    gens = [("J1", par), ("J2", par), ("J3", par)]
    entries = {}
    for a, b, c in (("J1", "J2", "J3"), ("J2", "J3", "J1"), ("J3", "J1", "J2")):
        entries[(a, b)] = {c: 1}
        entries[(b, a)] = {c: -1}
    return free_lca(flavor, N, gens, entries, label="so(3) currents")


def skew_failing_rank1():
    """W, N=1, one odd generator a with [a_Lambda a] = a: skew-symmetry fails by 2a."""
    mod = FreeHModule(W, 1, [("a", 1)])
    return LCAStructure(mod, {(mod.gen("a"), mod.gen("a")): ModPoly.basis(mod, mod.gen("a"), 1)}, "skew-failing rank 1")


def table_slots(mod, a, b):
    """Parity-legal (lambda-power, theta?, generator) slots of [a_Lambda b] with lambda-degree <= 1 and no nabla."""
    target = (mod.parity(a) + mod.parity(b) + mod.N) % 2
    out = []
    for g in mod.names:
        for p in (0, 1):
            for t in (0, 1):
                if (t + mod.parity(mod.gen(g)) - target) % 2 == 0:
                    out.append((p, t, g))
    return out


def slot_value(mod, slots):
    """The bracket value sum c * lambda^p theta^t g over {slot: c}."""
    ctx = SuperContext(mod.flavor, mod.N, 1)
    out = ModPoly(mod, 1)
    for (p, t, g), c in slots.items():
        m = SuperPoly.lam(ctx, 0, p)
        if t:
            m = m * SuperPoly.theta(ctx, 0, 1)
        out = out + ModPoly.basis(mod, mod.gen(g), 1, c).lmul(m)
    return out


def table_family(max_support=2, random_samples=100, seed=0):
    """Rank <= 2, W, N = 1 bracket tables with coefficients in {-1, 0, 1} that pass skew-symmetry.

    Entries (a, b) with a <= b are free; (b, a) is filled in by skew-symmetry.
    All tables with at most max_support nonzero slots are listed, followed by a
    seeded sample of denser ones.
    """
    import random
    from itertools import combinations
    rng = random.Random(seed)
    configs = [[("a", 0)], [("a", 1)], [("a", 0), ("b", 0)], [("a", 0), ("b", 1)], [("a", 1), ("b", 1)]]
    out = []
    for gens in configs:
        mod = FreeHModule(W, 1, gens)
        names = [g for g, _ in gens]
        pairs = [(x, y) for i, x in enumerate(names) for y in names[i:]]
        slots = [(pr, s) for pr in pairs for s in table_slots(mod, mod.gen(pr[0]), mod.gen(pr[1]))]
        choices = []
        for k in range(max_support + 1):
            for sub in combinations(range(len(slots)), k):
                for signs in product((1, -1), repeat=k):
                    choices.append(dict(zip(sub, signs)))
        for _ in range(random_samples // len(configs)):
            choices.append({j: c for j in range(len(slots)) for c in [rng.choice((-1, 0, 1))] if c})
        for ch in choices:
            entries = {}
            for j, c in ch.items():
                pr, s = slots[j]
                entries.setdefault(pr, {})[s] = c
            L = free_lca(W, 1, gens, {pr: (lambda m, v=v: slot_value(m, v)) for pr, v in entries.items()},
                         label="%s: %s" % (",".join("%s%d" % g for g in gens),
                                           "; ".join("%s %s" % (pr, sorted(v.items())) for pr, v in sorted(entries.items())) or "zero"))
            keys = [mod.gen(g) for g in names]
            if all(skew_defect(L, x, y).is_zero() for x in keys for y in keys):
                out.append(L)
    return out
