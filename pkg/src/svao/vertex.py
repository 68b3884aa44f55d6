"""Non-unital SUSY vertex algebras on finite carriers.

Axiom checkers, the integral of the Lambda-bracket and its integral-form
identities, two-point elements of the chiral operad with their right
D_2^T-actions, and the finite MC certificate.
"""
from fractions import Fraction
from itertools import combinations
from math import comb, factorial

from .conformal import LCAStructure, jacobi_defect, pair_in, parity_cases, sesq_cases, sign, skew_defect
from .hmodule import ZERO, FiniteHModule, ModPoly, bound, vec_add, vec_scale
from .report import FAIL, PASS, Check, first_failure
from .superfun import inject_difference
from .superpoly import K, W, SuperPoly, mono_parity, mono_parts, sigma


def subsets(N):
    return [I for r in range(N + 1) for I in combinations(range(1, N + 1), r)]


class FiniteVA:
    """A finite-dimensional H-module with a Lambda-bracket table and a multiplication table.

    bracket: (a, b) -> ModPoly in one variable; mu: (a, b) -> {c: coefficient}.
    """

    def __init__(self, module, bracket=None, mu=None, label=None):
        self.module = module
        self.flavor = module.flavor
        self.N = module.N
        self.nbar = module.N % 2
        self.lca = LCAStructure(module, bracket or {}, label)
        self.mu = {}
        for k, v in (mu or {}).items():
            v = {int(c): Fraction(x) for c, x in v.items() if x}
            if v:
                self.mu[tuple(k)] = v
        self.label = label
        self._F = {}

    def keys(self):
        return self.module.keys()

    def parity(self, k):
        return self.module.parity(k)

    def vec_parity(self, vec):
        ps = {self.parity(k) for k in vec}
        return ps.pop() if len(ps) == 1 else 0

    def name(self, k):
        return self.module.names[k]

    def bracket(self, a, b):
        return self.lca.bracket(a, b)

    def prod(self, u, v):
        out = {}
        for a, ca in u.items():
            for b, cb in v.items():
                for c, x in self.mu.get((a, b), {}).items():
                    out[c] = out.get(c, 0) + ca * cb * x
        return {k: c for k, c in out.items() if c}

    def pk(self, a, b):
        return self.mu.get((a, b), {})

    def act(self, h, vec):
        out = {}
        for k, c in vec.items():
            for k2, c2 in self.module.act(h, k).items():
                out[k2] = out.get(k2, 0) + c * c2
        return {k: c for k, c in out.items() if c}

    def elem(self, vec, nvars=0):
        return ModPoly.element(self.module, vec, nvars)

    def zero(self, nvars=0):
        return ModPoly(self.module, nvars)

    def br_vec(self, u, v, nvars=1):
        out = self.zero(1)
        for a, ca in u.items():
            for b, cb in v.items():
                out = out + self.bracket(a, b).scale(ca * cb)
        return out if nvars == 1 else out.embed(nvars)

    def F(self, a, b):
        """Integral of the Lambda-bracket with respect to mu, on basis keys."""
        if (a, b) not in self._F:
            self._F[(a, b)] = integral_bracket(self, a, b)
        return self._F[(a, b)]

    def t_bound(self):
        """Nilpotency order of T, or the dimension when T is not nilpotent."""
        k = self.module.t_nilpotency()
        return self.module.dim if k is None else k

    def lambda_degree(self):
        d = 0
        for v in self.lca.table.values():
            for (mono, _), _c in v.terms.items():
                d = max(d, mono[0][0])
        return d


# polynomial times vector products


def mul_right(S, P, vec):
    """P c for P in V[Lambda...] and c in V: sum of mono (v c)."""
    out = {}
    for (mono, key), c in P.terms.items():
        for k2, c2 in S.prod({key: 1}, vec).items():
            out[(mono, k2)] = out.get((mono, k2), 0) + c * c2
    return ModPoly(S.module, P.nvars, out)


def mul_left(S, vec, P):
    """b P for b in V: the polynomial moves past b with its Koszul sign."""
    pb = S.vec_parity(vec)
    out = {}
    for (mono, key), c in P.terms.items():
        s = sign(pb * mono_parity(mono))
        for k2, c2 in S.prod(vec, {key: 1}).items():
            out[(mono, k2)] = out.get((mono, k2), 0) + s * c * c2
    return ModPoly(S.module, P.nvars, out)


def int_minus_T(P):
    """The definite integral from -T to 0 of a one-variable element, as a vector."""
    return P.integral(0, bound(t=-1), ZERO).drop_var(0).vector()


def int_T_left(S, a, P):
    """(int_0^T dLambda a) applied to a one-variable element P."""
    out = {}
    for (mono, key), c in P.terms.items():
        u = ModPoly(S.module, 1, {(mono, a): c}).integral(0, ZERO, bound(t=1)).drop_var(0).vector()
        out = vec_add(out, S.prod(u, {key: 1}))
    return out


def lam_antiderivative(P, k=0):
    """int_0^lambda_k d lambda_k, leaving the odd variables alone."""
    out = {}
    for ((ev, od), key), c in P.terms.items():
        ev2 = list(ev)
        ev2[k] += 1
        kk = ((tuple(ev2), od), key)
        out[kk] = out.get(kk, 0) + c / ev2[k]
    return ModPoly(P.module, P.nvars, out)


def coefficient(P, m, I):
    """Vector coefficient of lambda^m theta^I in a one-variable element."""
    out = {}
    for (mono, key), c in P.terms.items():
        mm, II = mono_parts(mono)[0]
        if mm == m and tuple(II) == tuple(I):
            out[key] = out.get(key, 0) + c
    return {k: c for k, c in out.items() if c}


def theta_word(ctx, I, var=0):
    p = SuperPoly.const(ctx)
    for i in I:
        p = p * SuperPoly.theta(ctx, var, i)
    return p


def integral_bracket(S, a, b):
    N = S.N
    out = S.zero(1)
    full = tuple(range(1, N + 1))
    for I in subsets(N):
        rest = tuple(i for i in full if i not in I)
        s = sign(len(I) * (N + 1)) * sigma(I, rest)
        vec = S.prod(S.module.act((0, I), a), {b: 1})
        if vec:
            out = out + S.elem(vec, 1).lmul(theta_word(out.ctx, rest)).scale(s)
    return out + lam_antiderivative(S.bracket(a, b))


def integral_conditions(S, F, a, b):
    """Defects of the three conditions characterizing the integral; F(x, y) -> one-variable element."""
    out = [("d/dlambda", F(a, b).partial_lambda(0) - S.bracket(a, b)),
           ("residue", F(a, b).residue(0) - S.elem(S.pk(a, b)))]
    N = S.N
    for i in range(1, N + 1):
        lhs = S.zero(0)
        for k, c in S.module.act((0, (i,)), a).items():
            lhs = lhs + F(k, b).residue(0).scale(c)
        fab = F(a, b)
        rhs = fab.lmul(SuperPoly.theta(fab.ctx, 0, i)).residue(0).scale(sign(N + 1))
        out.append(("S%d" % i, lhs - rhs))
    return out


# direct axioms


def der_defects(S, a, b):
    out = []
    ab = S.pk(a, b)
    pa = S.parity(a)
    if S.flavor == W:
        d = vec_add(S.act((1, ()), ab), vec_scale(vec_add(S.prod(S.act((1, ()), {a: 1}), {b: 1}), S.prod({a: 1}, S.act((1, ()), {b: 1}))), -1))
        out.append(("T", d))
    for i in range(1, S.N + 1):
        h = (0, (i,))
        rhs = vec_add(S.prod(S.act(h, {a: 1}), {b: 1}), vec_scale(S.prod({a: 1}, S.act(h, {b: 1})), sign(pa)))
        out.append(("S%d" % i, vec_add(S.act(h, ab), vec_scale(rhs, -1))))
    return out


def qcom_defect(S, a, b):
    s = sign(S.parity(a) * S.parity(b))
    d = vec_add(S.pk(a, b), vec_scale(S.pk(b, a), -s))
    return vec_add(d, vec_scale(int_minus_T(S.bracket(a, b)), -1))


def qass_defect_vec(S, u, v, w, pu, pv):
    lhs = vec_add(S.prod(S.prod(u, v), w), vec_scale(S.prod(u, S.prod(v, w)), -1))
    r1 = {}
    for a, c in u.items():
        r1 = vec_add(r1, vec_scale(int_T_left(S, a, S.br_vec(v, w)), c))
    r2 = {}
    for b, c in v.items():
        r2 = vec_add(r2, vec_scale(int_T_left(S, b, S.br_vec(u, w)), c))
    return vec_add(lhs, vec_scale(vec_add(r1, vec_scale(r2, sign(pu * pv))), -1))


def qass_defect(S, a, b, c):
    return qass_defect_vec(S, {a: 1}, {b: 1}, {c: 1}, S.parity(a), S.parity(b))


def wick_defect(S, a, b, c):
    nb = S.nbar
    pa, pb = S.parity(a), S.parity(b)
    lhs = S.br_vec({a: 1}, S.pk(b, c))
    t1 = mul_right(S, S.bracket(a, b), {c: 1})
    t2 = mul_left(S, {b: 1}, S.bracket(a, c)).scale(sign((pa + nb) * pb))
    inner = S.bracket(a, b).embed(2, [0])
    t3 = pair_in(S.lca.bracket, nb, inner, ModPoly.basis(S.module, c, 2), {1: 1})
    out = lhs - t1 - t2
    if t3 is not None:
        out = out - t3.integral(1, ZERO, bound({0: 1})).drop_var(1)
    return out


def lsym_defect(S, a, b, c):
    s = sign(S.parity(a) * S.parity(b))
    lhs = vec_add(S.prod({a: 1}, S.pk(b, c)), vec_scale(S.prod({b: 1}, S.pk(a, c)), -s))
    rhs = S.prod(vec_add(S.pk(a, b), vec_scale(S.pk(b, a), -s)), {c: 1})
    return vec_add(lhs, vec_scale(rhs, -1))


def exp_left(S, a, P):
    """(e^{nabla . d/dLambda} a) applied to a one-variable element P."""
    pa = S.parity(a)
    out = S.zero(1)
    for (mono, key), c in P.terms.items():
        I = mono_parts(mono)[0][1]
        e = ModPoly(S.module, 1, {(mono, a): c * sign(pa * len(I))}).exp_nabla_partial()
        out = out + mul_right(S, e, {key: 1})
    return out


def rwick_parts(S, a, b, c):
    """[ab_Lambda c] minus the two exponential terms, and the double-bracket integral term."""
    nb = S.nbar
    pa, pb = S.parity(a), S.parity(b)
    lhs = S.br_vec(S.pk(a, b), {c: 1})
    e1 = exp_left(S, a, S.bracket(b, c)).scale(sign(pa * nb))
    e2 = exp_left(S, b, S.bracket(a, c)).scale(sign((pa + nb) * pb))
    inner = S.bracket(a, c).embed(2, [0]).substitute(0, {0: 1, 1: -1})
    t3 = pair_in(S.lca.bracket, nb, ModPoly.basis(S.module, b, 2), inner, {1: 1})
    integ = S.zero(1)
    if t3 is not None:
        integ = t3.integral(1, ZERO, bound({0: 1})).drop_var(1).scale(sign((pa + nb) * pb))
    return lhs - e1 - e2, integ


def rwick_defect(S, a, b, c):
    head, integ = rwick_parts(S, a, b, c)
    return head - integ


def pair_names(S, *keys):
    return tuple(S.name(k) for k in keys)


def vcase(S, keys, fn):
    return (pair_names(S, *keys), lambda: S.elem(fn()))


def h_relation_check(S):
    bad = S.module.relation_defects()
    if bad:
        return Check("h-module", FAIL, bad[0][1:], bad[0][0])
    return Check("h-module", PASS)


def mu_parity_cases(S):
    cases = []
    for (a, b), v in S.mu.items():
        want = (S.parity(a) + S.parity(b)) % 2
        bad = {k: c for k, c in v.items() if S.parity(k) != want}
        cases.append((pair_names(S, a, b), lambda bad=bad: S.elem(bad)))
    return cases


def all_pairs(S):
    ks = S.keys()
    return [(a, b) for a in ks for b in ks]


def all_triples(S):
    ks = S.keys()
    return [(a, b, c) for a in ks for b in ks for c in ks]


def check_va_axioms(S, pairs=None, triples=None):
    """Per-axiom reports; pairs/triples restrict the tuples (module checks use this)."""
    pairs = all_pairs(S) if pairs is None else pairs
    triples = all_triples(S) if triples is None else triples
    L = S.lca
    out = [h_relation_check(S)]
    out.append(first_failure("parity", [c for c in parity_cases(L)] + mu_parity_cases(S)))
    sq = []
    for a, b in pairs:
        sq.extend(sesq_cases_pair(L, a, b))
    out.append(first_failure("sesquilinearity", sq))
    out.append(first_failure("skew-symmetry", [(pair_names(S, a, b), lambda a=a, b=b: skew_defect(L, a, b)) for a, b in pairs]))
    cache = {}
    out.append(first_failure("jacobi", [(pair_names(S, a, b, c), lambda a=a, b=b, c=c: jacobi_defect(L, a, b, c, cache)) for a, b, c in triples]))
    dc = []
    for a, b in pairs:
        for name, d in der_defects(S, a, b):
            dc.append((pair_names(S, a, b) + (name,), lambda d=d: S.elem(d)))
    out.append(first_failure("derivation", dc))
    out.append(first_failure("quasi-commutativity", [vcase(S, (a, b), lambda a=a, b=b: qcom_defect(S, a, b)) for a, b in pairs]))
    out.append(first_failure("quasi-associativity", [vcase(S, t, lambda t=t: qass_defect(S, *t)) for t in triples]))
    out.append(first_failure("wick", [(pair_names(S, *t), lambda t=t: wick_defect(S, *t)) for t in triples]))
    return out


def sesq_cases_pair(L, a, b):
    return [c for c in sesq_cases(L, [a, b]) if c[0][:2] == (L.render_key(a), L.render_key(b))]


def equivalence_hypotheses(S, with_wick=False):
    """What the Wick and left-symmetry equivalences assume: sesquilinearity, derivation, skew, quasi-commutativity."""
    names = {"h-module", "parity", "sesquilinearity", "derivation", "skew-symmetry", "quasi-commutativity"}
    if with_wick:
        names.add("wick")
    return [c for c in check_va_axioms(S) if c.name in names]


def hypotheses_ok(S, with_wick=False):
    return all(c.ok for c in equivalence_hypotheses(S, with_wick))


def check_right_wick(S):
    """Right Wick formula; a distinct status when its hypotheses fail."""
    if not hypotheses_ok(S):
        return Check("right-wick", "hypothesis-violation")
    return first_failure("right-wick", [(pair_names(S, *t), lambda t=t: rwick_defect(S, *t)) for t in all_triples(S)])


def check_lsym(S):
    if not hypotheses_ok(S, with_wick=True):
        return Check("left-symmetry", "hypothesis-violation")
    return first_failure("left-symmetry", [vcase(S, t, lambda t=t: lsym_defect(S, *t)) for t in all_triples(S)])


# integral forms


def skecom_defect(S, a, b):
    s = sign(S.parity(a) * S.parity(b) + S.nbar)
    return S.F(b, a) - S.F(a, b).skew().scale(s)


def jqas_defect(S, a, b, c):
    nb = S.nbar
    pa, pb = S.parity(a), S.parity(b)
    mod = S.module
    F = S.F
    out = ModPoly(mod, 2)
    t1 = pair_in(F, nb, ModPoly.basis(mod, a, 2), F(b, c).embed(2, [1]), {0: 1})
    t2 = pair_in(F, nb, ModPoly.basis(mod, b, 2), F(a, c).embed(2, [0]), {1: 1})
    q = F(a, b).embed(2, [0]) - F(a, b).embed(2, [1]).skew(1)
    t3 = pair_in(F, nb, q, ModPoly.basis(mod, c, 2), {0: 1, 1: 1})
    if t1 is not None:
        out = out + t1
    if t2 is not None:
        out = out - t2.scale(sign((pa + nb) * (pb + nb)))
    if t3 is not None:
        out = out - t3.scale(sign((pa + nb) * nb))
    return out


def check_integral_forms(S):
    out = [first_failure("integral skew-commutativity", [(pair_names(S, a, b), lambda a=a, b=b: skecom_defect(S, a, b)) for a, b in all_pairs(S)]),
           first_failure("integral jacobi-associativity", [(pair_names(S, *t), lambda t=t: jqas_defect(S, *t)) for t in all_triples(S)])]
    direct = {c.name: c.ok for c in check_va_axioms(S)}
    pair_ok = direct["skew-symmetry"] and direct["quasi-commutativity"]
    triple_ok = direct["jacobi"] and direct["quasi-associativity"] and direct["wick"]
    agree = (out[0].ok == pair_ok) and (out[1].ok == triple_ok)
    note = None if hypotheses_ok_basic(S) else "hypotheses (sesquilinearity, derivation) fail; agreement not implied"
    out.append(Check("integral/direct agreement", PASS if agree else FAIL, note=note))
    return out


def hypotheses_ok_basic(S):
    names = {"h-module", "parity", "sesquilinearity", "derivation"}
    return all(c.ok for c in check_va_axioms(S, triples=[]) if c.name in names)


# two-point elements of the chiral operad


class Pch2Element:
    """An element of P^ch(2) on the parity-shifted carrier, stored by its values at f = 1 and f = z12^-1.

    beta(a, b), em(a, b) are one-variable elements (the reduced presentation,
    Lambda_2 = -Lambda_1 - nabla); all other monomials z12^-m zeta12^I follow
    from the right D_2^T-actions.
    """

    def __init__(self, module, beta, em, parity=1):
        self.module = module
        self.flavor = module.flavor
        self.N = module.N
        self.shift = (module.N + 1) % 2
        self.beta = beta
        self.em = em
        self.parity = parity
        self._memo = {}

    def tp(self, k):
        return (self.module.parity(k) + self.shift) % 2

    def vec_tp(self, vec):
        ps = {self.tp(k) for k in vec}
        return ps.pop() if len(ps) == 1 else 0

    def act(self, h, vec):
        out = {}
        for k, c in vec.items():
            for k2, c2 in self.module.act(h, k).items():
                out[k2] = out.get(k2, 0) + c * c2
        return {k: c for k, c in out.items() if c}

    def value(self, a, b, m, I=()):
        """X(a (x) b (x) z12^-m zeta12^I) on basis keys; m < 0 gives positive powers."""
        key = (a, b, m, tuple(I))
        if key in self._memo:
            return self._memo[key]
        if I:
            out = out_action(self, self.value(a, b, m, I[:-1]), ("zeta", I[-1]))
        elif m == 0:
            out = self.beta(a, b)
        elif m == 1:
            out = self.em(a, b)
        elif m >= 2:
            prev = self.value(a, b, m - 1)
            out = prev.lmul(SuperPoly.lam(prev.ctx, 0)).scale(-1)
            for k, c in self.module.act((1, ()), a).items():
                out = out - self.value(k, b, m - 1).scale(c)
            out = out.scale(Fraction(1, m - 1))
        else:
            out = out_action(self, self.value(a, b, m + 1), ("z",))
        self._memo[key] = out
        return out

    def value_vec(self, u, v, m, I=()):
        out = ModPoly(self.module, 1)
        for a, ca in u.items():
            for b, cb in v.items():
                out = out + self.value(a, b, m, I).scale(ca * cb)
        return out


def out_action(X, A, gen):
    """Right action of a D_2^T generator on the output space, through a two-variable lift.

    z12 -> d/dlambda_2 - d/dlambda_1 (K adds sum_i d/dtheta_1^i d/dtheta_2^i),
    zeta12^i -> d/dtheta_1^i - d/dtheta_2^i, d/dz_k -> -lambda_k, D_zeta_k^i -> theta_k^i.
    These are parity-free so that D_zeta^2 = d/dz holds in both flavors.
    """
    A2 = A.embed(2)
    ctx = A2.ctx
    if gen[0] == "z":
        out = A2.partial_lambda(1) - A2.partial_lambda(0)
        if X.flavor == K:
            for i in range(1, X.N + 1):
                out = out + A2.partial_theta(1, i).partial_theta(0, i)
    elif gen[0] == "zeta":
        out = A2.partial_theta(0, gen[1]) - A2.partial_theta(1, gen[1])
    elif gen[0] == "dz":
        out = A2.lmul(SuperPoly.lam(ctx, gen[1])).scale(-1)
    elif gen[0] == "dzeta":
        out = A2.lmul(SuperPoly.theta(ctx, gen[1], gen[2]))
    else:
        raise ValueError("unknown generator %r" % (gen,))
    return out.reduce_last()


def monomial_function(flavor, N, m, I):
    """z12^-m zeta12^I as a rational superfunction of two points."""
    if m >= 0:
        f = inject_difference(flavor, N, 2, "zinv", 0, 1) ** m
    else:
        f = inject_difference(flavor, N, 2, "z", 0, 1) ** (-m)
    for i in I:
        f = f * inject_difference(flavor, N, 2, "zeta", 0, 1, i)
    return f


def decompose(f):
    """Coordinates of a translation-invariant two-point function in the monomials z12^-m zeta12^I."""
    e = f.den.get((0, 1), 0)
    out = {}
    for (ev, od), c in f.num.terms.items():
        if ev[1] or any(k == 1 for k, _ in od):
            continue
        key = (e - ev[0], tuple(i for _, i in od))
        out[key] = out.get(key, 0) + c
    return {k: c for k, c in out.items() if c}


_INPUT_CACHE = {}


def input_action(flavor, N, m, I, gen):
    """(v (x) f) . gen as a list of (operator on v, coefficient, monomial).

    The operator is None, ('T', k) or ('S', k, i).  D_zeta acts on inputs by
    (-1)^{p(f)} S^(k) v (x) f - (-1)^{p(f)} v (x) D_zeta f.
    """
    ck = (flavor, N, m, I, gen)
    if ck in _INPUT_CACHE:
        return _INPUT_CACHE[ck]
    f = monomial_function(flavor, N, m, I)
    pf = len(I) % 2
    out = []
    if gen[0] == "z":
        g = inject_difference(flavor, N, 2, "z", 0, 1)
        for mono, c in decompose(f * g).items():
            out.append((None, c, mono))
    elif gen[0] == "zeta":
        g = inject_difference(flavor, N, 2, "zeta", 0, 1, gen[1])
        for mono, c in decompose(f * g).items():
            out.append((None, c, mono))
    elif gen[0] == "dz":
        k = gen[1]
        out.append((("T", k), Fraction(1), (m, I)))
        for mono, c in decompose(f.d_z(k)).items():
            out.append((None, -c, mono))
    elif gen[0] == "dzeta":
        k, i = gen[1], gen[2]
        out.append((("S", k, i), Fraction(sign(pf)), (m, I)))
        for mono, c in decompose(f.D_zeta(k, i)).items():
            out.append((None, -sign(pf) * c, mono))
    _INPUT_CACHE[ck] = out
    return out


def generators_d2(N):
    gens = [("z",)] + [("zeta", i) for i in range(1, N + 1)]
    gens += [("dz", 0), ("dz", 1)]
    gens += [("dzeta", k, i) for k in (0, 1) for i in range(1, N + 1)]
    return gens


def render_gen(g):
    if g[0] == "z":
        return "z12"
    if g[0] == "zeta":
        return "zeta12^%d" % g[1]
    if g[0] == "dz":
        return "d/dz%d" % (g[1] + 1)
    return "D/dzeta%d^%d" % (g[1] + 1, g[2])


def render_f(m, I):
    parts = []
    if m:
        parts.append("z12^%d" % -m)
    parts.extend("zeta12^%d" % i for i in I)
    return "*".join(parts) or "1"


def equivariance_defect(X, a, b, m, I, gen):
    lhs = ModPoly(X.module, 1)
    for op, c, (m2, I2) in input_action(X.flavor, X.N, m, I, gen):
        u, v = {a: Fraction(1)}, {b: Fraction(1)}
        s = 1
        if op is not None:
            if op[0] == "T":
                if op[1] == 0:
                    u = X.act((1, ()), u)
                else:
                    v = X.act((1, ()), v)
            else:
                h = (0, (op[2],))
                if op[1] == 0:
                    u = X.act(h, u)
                else:
                    v = X.act(h, v)
                    s *= sign(X.tp(a))
        lhs = lhs + X.value_vec(u, v, m2, I2).scale(c * s)
    rhs = out_action(X, X.value(a, b, m, I), gen)
    return lhs - rhs


def equivariance_cases(X, pole_order=4, keys=None):
    keys = X.module.keys() if keys is None else keys
    names = X.module.names
    cases = []
    for a in keys:
        for b in keys:
            for m in range(pole_order + 1):
                for I in subsets(X.N):
                    for g in generators_d2(X.N):
                        w = (names[a], names[b], render_f(m, I), render_gen(g))
                        cases.append((w, lambda a=a, b=b, m=m, I=I, g=g: equivariance_defect(X, a, b, m, I, g)))
    return cases


def evaluate_pch2(X, a, b, m, I=()):
    return X.value(a, b, m, tuple(I))


def pch2_from_structure(S):
    def beta(a, b):
        return S.bracket(a, b).scale(sign(S.parity(a) * (S.nbar + 1)))

    def em(a, b):
        return S.F(a, b).scale(sign(S.parity(a) * (S.nbar + 1) + 1))
    return Pch2Element(S.module, beta, em)


def mc_to_va(X):
    """Bracket and multiplication tables recovered from a two-point element."""
    mod = X.module
    nbar = X.N % 2
    bracket, mu = {}, {}
    for a in mod.keys():
        for b in mod.keys():
            s = sign(mod.parity(a) * (nbar + 1))
            br = X.value(a, b, 0).scale(s)
            if not br.is_zero():
                bracket[(a, b)] = br
            prod = X.value(a, b, 1).residue(0).scale(-s).vector()
            if prod:
                mu[(a, b)] = prod
    return bracket, mu


def s2_defect(X, a, b, m):
    s = sign(X.tp(a) * X.tp(b) + m)
    return X.value(b, a, m).skew().scale(s) - X.value(a, b, m)


def ladder_bound(S):
    return S.lambda_degree() + S.t_bound() + 2


def res_coeff(P, n):
    """Res_Lambda(lambda^{-n-1} P) for a one-variable element: the lambda^n theta^[N] coefficient."""
    return coefficient(P, n, tuple(range(1, P.ctx.N + 1)))


def mode(S, u, b, m):
    """u_{m|N} b for a vector u and a basis key b."""
    out = {}
    for a, c in u.items():
        out = vec_add(out, vec_scale(coefficient(S.bracket(a, b), m, tuple(range(1, S.N + 1))), c))
    return out


def mode_vec(S, u, v, m):
    out = {}
    for b, c in v.items():
        out = vec_add(out, vec_scale(mode(S, u, b, m), c))
    return out


def ladder_defect(S, a, b, c, n):
    """The n-th residue of the lambda_1-derivative ladder, as a vector."""
    pa, pb = S.parity(a), S.parity(b)
    if n == 0:
        ta = S.act((1, ()), {a: 1})
        tb = S.act((1, ()), {b: 1})
        d = qass_defect_vec(S, ta, {b: 1}, {c: 1}, pa, pb)
        return vec_add(d, vec_scale(qass_defect_vec(S, tb, {a: 1}, {c: 1}, pb, pa), sign(pa * pb)))
    if n == 1:
        return qass_defect(S, a, b, c)
    k = n - 2
    head, _ = rwick_parts(S, a, b, c)
    out = vec_scale(res_coeff(head, k), factorial(k))
    for j in range(k):
        t = vec_add(mode_vec(S, {a: 1}, mode(S, {b: 1}, c, j), k - j - 1),
                    vec_scale(mode_vec(S, mode(S, {a: 1}, b, k - j - 1), {c: 1}, j), -comb(k, j)))
        out = vec_add(out, vec_scale(t, -factorial(j) * factorial(k - j - 1)))
    return out


def mc_certificate(S, pole_order=2):
    """The finite certificate for X box X = 0, line by line."""
    X = pch2_from_structure(S)
    out = [h_relation_check(S)]
    out.append(first_failure("P(2) membership", equivariance_cases(X, pole_order), note="right D_2^T-equivariance up to pole order %d" % pole_order))
    s2 = []
    for a, b in all_pairs(S):
        for m in (0, 1):
            s2.append(((S.name(a), S.name(b), render_f(m, ())), lambda a=a, b=b, m=m: s2_defect(X, a, b, m)))
    out.append(first_failure("S2-invariance", s2))
    out.append(first_failure("box at z13^-1 z23^-1", [(pair_names(S, *t), lambda t=t: jqas_defect(S, *t)) for t in all_triples(S)]))
    nmax = ladder_bound(S)
    lad = []
    for n in range(nmax + 1):
        for t in all_triples(S):
            lad.append((pair_names(S, *t) + ("n=%d" % n,), lambda t=t, n=n: S.elem(ladder_defect(S, *t, n))))
    out.append(first_failure("residue ladder", lad, note="n_max = %d" % nmax))
    return out


def mc_check_va(S):
    for c in mc_certificate(S):
        if not c.ok:
            return False
    return True


def first_failed(checks):
    for c in checks:
        if not c.ok:
            return c
    return None


def vacuum_defects(S, vac):
    """Keys a with a|0> != a or |0>a != a."""
    bad = []
    for a in S.keys():
        if S.pk(a, vac) != {a: 1} or S.pk(vac, a) != {a: 1}:
            bad.append(S.name(a))
    return bad


# the holomorphic family


class SuperCommAlgebra:
    """Truncated C[x_1..]/(x^k) (x) Grassmann algebra on a monomial basis, with derivations given on generators."""

    def __init__(self, even, odd, trunc, unital=True):
        self.even = even
        self.odd = odd
        self.trunc = trunc
        self.basis = []
        from itertools import product as iproduct
        for ex in iproduct(*[range(t) for t in trunc]):
            for r in range(len(odd) + 1):
                for J in combinations(range(len(odd)), r):
                    if not unital and not any(ex) and not J:
                        continue
                    self.basis.append((ex, J))
        self.index = {b: i for i, b in enumerate(self.basis)}

    def parity(self, b):
        return len(b[1]) % 2

    def mono_mul(self, u, v):
        ex = tuple(p + q for p, q in zip(u[0], v[0]))
        if any(e >= t for e, t in zip(ex, self.trunc)):
            return 0, None
        if set(u[1]) & set(v[1]):
            return 0, None
        s = sigma(u[1], v[1])
        return s, (ex, tuple(sorted(u[1] + v[1])))

    def mul(self, x, y):
        out = {}
        for u, a in x.items():
            for v, b in y.items():
                s, w = self.mono_mul(u, v)
                if s and (w in self.index or not any(w[0]) and not w[1] and False):
                    out[w] = out.get(w, 0) + s * a * b
        return {k: c for k, c in out.items() if c}

    def gen_even(self, j):
        return (tuple(1 if i == j else 0 for i in range(len(self.even))), ())

    def gen_odd(self, j):
        return (tuple(0 for _ in self.even), (j,))

    def derivation(self, images, parity):
        """Map on the basis of the derivation with images {('x', j) | ('xi', j): element}."""
        memo = {}

        def D(b):
            if b in memo:
                return memo[b]
            ex, J = b
            out = {}
            # split off the first generator: b = g * rest
            if any(ex):
                j = next(i for i, e in enumerate(ex) if e)
                g = self.gen_even(j)
                rest = (tuple(e - (1 if i == j else 0) for i, e in enumerate(ex)), J)
                gimg = images.get(("x", j), {})
                pg = 0
            elif J:
                g = self.gen_odd(J[0])
                rest = (ex, J[1:])
                gimg = images.get(("xi", J[0]), {})
                pg = 1
            else:
                memo[b] = {}
                return {}
            restv = {rest: 1} if (any(rest[0]) or rest[1]) else None
            if restv is None:
                out = dict(gimg)
            else:
                out = self.mul(gimg, restv)
                sub = D(rest)
                t = self.mul({g: 1}, sub)
                for k, c in t.items():
                    out[k] = out.get(k, 0) + sign(parity * pg) * c
            out = {k: c for k, c in out.items() if c and k in self.index}
            memo[b] = out
            return out
        return {self.index[b]: {self.index[k]: c for k, c in D(b).items()} for b in self.basis}

    def name(self, b):
        ex, J = b
        parts = []
        for i, e in enumerate(ex):
            if e:
                parts.append(self.even[i] if e == 1 else "%s^%d" % (self.even[i], e))
        parts.extend(self.odd[j] for j in J)
        return "".join(parts) or "1"

    def va(self, flavor, N, T=None, S=None, label=None):
        names = [self.name(b) for b in self.basis]
        pars = [self.parity(b) for b in self.basis]
        Tm = self.derivation(T or {}, 0)
        Sm = {i: self.derivation((S or {}).get(i, {}), 1) for i in range(1, N + 1)}
        mod = FiniteHModule(flavor, N, names, pars, Tm, Sm)
        mu = {}
        for u in self.basis:
            for v in self.basis:
                p = self.mul({u: 1}, {v: 1})
                if p:
                    mu[(self.index[u], self.index[v])] = {self.index[k]: c for k, c in p.items()}
        return FiniteVA(mod, {}, mu, label)


def zero_product_va(flavor, N, d0, d1, label=None):
    """Zero multiplication on (d0|d1); S^1 sends the first odd vector to the first even one (W only)."""
    names = ["e%d" % (i + 1) for i in range(d0)] + ["f%d" % (i + 1) for i in range(d1)]
    pars = [0] * d0 + [1] * d1
    S = {}
    T = {}
    if d0 and d1:
        S[1] = {d0: {0: 1}}
    if flavor == W and d0 >= 2:
        T = {1: {0: 1}}
    if flavor == K:
        # S^2 = T forces T = 0 here since S squares to zero
        T = {}
    mod = FiniteHModule(flavor, N, names, pars, T, S)
    return FiniteVA(mod, {}, {}, label or "zero product (%d|%d)" % (d0, d1))


def holomorphic_family(flavor, N=1):
    """Zero-bracket finite vertex algebras: supercommutative associative products with commuting derivations."""
    fam = []
    for d0 in range(5):
        for d1 in range(5 - d0):
            if d0 + d1:
                fam.append(zero_product_va(flavor, N, d0, d1))
    g1 = SuperCommAlgebra([], ["xi"], [])
    fam.append(g1.va(flavor, N, S={1: {("xi", 0): {((), ()): 1}}}, label="grassmann(xi), S1 = d/dxi"))
    g2 = SuperCommAlgebra([], ["xi", "eta"], [])
    S2 = {1: {("xi", 0): {((), ()): 1}}}
    if N >= 2:
        S2[2] = {("xi", 1): {((), ()): 1}}
    fam.append(g2.va(flavor, N, S=S2, label="grassmann(xi, eta), S = d/dxi, d/deta"))
    c3 = SuperCommAlgebra(["x"], [], [3], unital=False)
    c4 = SuperCommAlgebra(["x"], [], [4])
    if flavor == W:
        # T = x^2 d/dx; K would need an odd square root of T
        fam.append(c3.va(flavor, N, T={("x", 0): {((2,), ()): 1}}, label="x C[x]/(x^3), T = x^2 d/dx"))
        fam.append(c4.va(flavor, N, T={("x", 0): {((2,), ()): 1}}, label="C[x]/(x^4), T = x^2 d/dx"))
    else:
        fam.append(c3.va(flavor, N, label="x C[x]/(x^3)"))
        fam.append(c4.va(flavor, N, label="C[x]/(x^4)"))
    cx = SuperCommAlgebra(["x"], ["xi"], [2])
    Tx = {("x", 0): {((1,), ()): 1}}
    if flavor == W:
        Sx = {1: {("xi", 0): {((0,), ()): 1}}}
        fam.append(cx.va(flavor, N, T=Tx, S=Sx, label="C[x]/(x^2) (x) grassmann(xi), T = x d/dx, S1 = d/dxi"))
    elif N == 1:
        # S = d/dxi + xi x d/dx squares to T = x d/dx
        Sx = {1: {("xi", 0): {((0,), ()): 1}, ("x", 0): {((1,), (0,)): 1}}}
        fam.append(cx.va(flavor, N, T=Tx, S=Sx, label="C[x]/(x^2) (x) grassmann(xi), S = d/dxi + xi x d/dx"))
    return fam


def mutants(S, limit=None):
    """Single-entry perturbations of a structure: one mu entry, one T/S entry, one bracket entry."""
    mod = S.module
    out = []
    keys = S.keys()
    # multiplication: a one-sided bump of a parity-legal entry breaks commutativity
    for a in keys:
        for b in keys:
            if a == b:
                continue
            for c in keys:
                if (mod.parity(a) + mod.parity(b) - mod.parity(c)) % 2:
                    continue
                mu = {k: dict(v) for k, v in S.mu.items()}
                mu.setdefault((a, b), {})
                mu[(a, b)][c] = mu[(a, b)].get(c, 0) + 1
                out.append(("mu[%s,%s] += %s" % (S.name(a), S.name(b), S.name(c)),
                            FiniteVA(mod, dict(S.lca.table), mu, S.label)))
                break
            if len(out) >= 2:
                break
        if len(out) >= 2:
            break
    # a bracket entry: nonzero brackets cannot be sesquilinear on a finite carrier
    for a in keys:
        for c in keys:
            if (mod.parity(a) * 2 + S.nbar - mod.parity(c)) % 2 == 0:
                br = dict(S.lca.table)
                br[(a, a)] = ModPoly.basis(mod, c, 1)
                out.append(("bracket[%s,%s] = %s" % (S.name(a), S.name(a), S.name(c)),
                            FiniteVA(mod, br, S.mu, S.label)))
                break
        else:
            continue
        break
    # a diagonal T entry on a product vector breaks the derivation rule
    if S.flavor == W:
        targets = sorted({c for v in S.mu.values() for c in v})
        if targets:
            a = targets[-1]
            T = {k: dict(v) for k, v in mod.T.items()}
            T.setdefault(a, {})
            T[a][a] = T[a].get(a, 0) + 1
            m2 = FiniteHModule(mod.flavor, mod.N, mod.names, mod.parities, T, mod.S)
            out.append(("T[%s] += %s" % (S.name(a), S.name(a)), FiniteVA(m2, {}, S.mu, S.label)))
    return out[:limit] if limit else out
