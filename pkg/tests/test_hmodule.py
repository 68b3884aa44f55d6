import random
from fractions import Fraction
from itertools import product

import pytest
from hypothesis import given, strategies as st

from conftest import monomials
from svao.hmodule import H_ONE, FiniteHModule, FreeHModule, ModPoly, bound, h_monomials, mod_nabla
from svao.superpoly import K, W, SuperContext, SuperPoly

T = (1, ())


def S(i):
    return (0, (i,))


def gen_poly(mod, g, mono_parts):
    ctx = SuperContext(mod.flavor, mod.N, len(mono_parts))
    return ModPoly.basis(mod, mod.gen(g), ctx.nvars).lmul(SuperPoly.monomial(ctx, mono_parts))


def test_s_passes_theta_with_sign():
    M = FreeHModule(W, 1, [("a", 0)])
    P = gen_poly(M, "a", [(0, (1,))])
    expected = ModPoly.basis(M, (S(1), 0), 1).lmul(SuperPoly.theta(P.ctx, 0, 1)).scale(-1)
    assert P.act(S(1)) == expected


def test_t_commutes_with_lambda():
    M = FreeHModule(W, 1, [("a", 0)])
    P = gen_poly(M, "a", [(1, ())])
    assert P.act(T) == ModPoly.basis(M, (T, 0), 1).lmul(SuperPoly.lam(P.ctx, 0))


def test_k_s_squares_to_t():
    M = FreeHModule(K, 1, [("a", 0)])
    a = ModPoly.basis(M, M.gen("a"), 0)
    assert a.act(S(1)).act(S(1)) == a.act(T)


def test_reduce_last_one_and_two_variables():
    M = FreeHModule(W, 1, [("a", 0)])
    P = gen_poly(M, "a", [(0, ()), (1, ())])
    lam1 = ModPoly.basis(M, M.gen("a"), 1).lmul(SuperPoly.lam(SuperContext(W, 1, 1), 0))
    assert P.reduce_last() == -lam1 - ModPoly.basis(M, (T, 0), 1)
    Q = gen_poly(M, "a", [(0, ()), (0, (1,))])
    th1 = ModPoly.basis(M, M.gen("a"), 1).lmul(SuperPoly.theta(SuperContext(W, 1, 1), 0, 1))
    assert Q.reduce_last() == -th1 - ModPoly.basis(M, (S(1), 0), 1)
    assert gen_poly(M, "a", [(1, ())]).reduce_last() == -ModPoly.basis(M, (T, 0), 0)


@pytest.mark.parametrize("N", [1, 2])
def test_integral_examples(N):
    M = FreeHModule(W, N, [("a", 0)])
    full = tuple(range(1, N + 1))
    top = gen_poly(M, "a", [(0, full)])
    assert top.integral(0, bound(t=-1), bound()) == ModPoly.basis(M, (T, 0), 1)
    sq = gen_poly(M, "a", [(2, full)])
    lam = SuperPoly.lam(sq.ctx, 0)
    assert sq.integral(0, bound(), bound({0: 1})) == ModPoly.basis(M, M.gen("a"), 1).lmul((lam ** 3).scale(Fraction(1, 3)))
    if N == 2:
        assert gen_poly(M, "a", [(0, (1,))]).integral(0, bound(), bound({0: 1})).is_zero()


def test_integral_additive_in_bounds():
    M = FreeHModule(W, 1, [("a", 0)])
    P = gen_poly(M, "a", [(2, (1,))]) + gen_poly(M, "a", [(0, (1,))])
    F, G, H = bound(), bound({0: 1}), bound({0: 1}, 1)
    assert P.integral(0, F, G) + P.integral(0, G, H) == P.integral(0, F, H)


@pytest.mark.parametrize("N", [1, 2])
def test_residue_examples(N):
    M = FreeHModule(W, N, [("a", 0)])
    full = tuple(range(1, N + 1))
    a = ModPoly.basis(M, M.gen("a"), 0)
    assert gen_poly(M, "a", [(0, full)]).residue(0) == a
    assert gen_poly(M, "a", [(1, full)]).residue(0).is_zero()
    if N == 2:
        assert gen_poly(M, "a", [(0, (1,))]).residue(0).is_zero()


def test_exp_nabla():
    M = FreeHModule(W, 1, [("a", 0)], central=("a",))
    P = gen_poly(M, "a", [(1, ())])
    assert P.exp_nabla_partial() == P
    F = FreeHModule(W, 1, [("a", 0)])
    P = gen_poly(F, "a", [(1, ())])
    assert P.exp_nabla_partial() == P + ModPoly.basis(F, (T, 0), 1)
    odd = FreeHModule(W, 1, [("b", 1)])
    Q = gen_poly(odd, "b", [(0, (1,))])
    assert Q.exp_nabla_partial() == Q + ModPoly.basis(odd, (S(1), 0), 1)


def test_mod_nabla_free():
    M = FreeHModule(W, 1, [("a", 0), ("b", 1)])
    reps, project = mod_nabla(M)
    assert len(reps) == 2
    assert project({(T, 0): 1}) == {}
    assert project({(H_ONE, 0): 1, (S(1), 1): 1}) == {0: 1}


def test_mod_nabla_finite():
    mod = FiniteHModule(W, 1, ["u", "v", "w"], [0, 0, 1], {0: {1: 1}}, {1: {2: {0: 1}}})
    reps, project = mod_nabla(mod)
    assert len(reps) == 1
    assert project({1: 1}) == {} and project({0: 1}) == {}


@pytest.mark.parametrize("flavor", [W, K])
@pytest.mark.parametrize("N", [1, 2])
def test_h_relations(flavor, N):
    M = FreeHModule(flavor, N, [("a", 0), ("b", 1)])
    a = ModPoly.basis(M, M.gen("a"), 0)
    for i, j in product(range(1, N + 1), repeat=2):
        lhs = a.act(S(i)).act(S(j)) + a.act(S(j)).act(S(i))
        rhs = a.act(T).scale(2) if (i == j and flavor == K) else a.empty()
        assert lhs == rhs
        assert a.act(S(i)).act(T) == a.act(T).act(S(i))


@pytest.mark.parametrize("flavor", [W, K])
@pytest.mark.parametrize("N", [1, 2])
def test_skew_is_involution_exhaustive(flavor, N):
    M = FreeHModule(flavor, N, [("a", 0), ("b", 1), ("c", 0)])
    ctx = SuperContext(flavor, N, 1)
    for mono in monomials(ctx, 3):
        for h in h_monomials(N, 1):
            for g in range(3):
                P = ModPoly(M, 1, {(mono, (h, g)): 1})
                assert P.skew().skew() == P


@pytest.mark.parametrize("flavor", [W, K])
@given(seed=st.integers(0, 10 ** 9))
def test_reduce_then_skew_twice(flavor, seed):
    rng = random.Random(seed)
    M = FreeHModule(flavor, 2, [("a", 0), ("b", 1)])
    ctx = SuperContext(flavor, 2, 2)
    monos = monomials(ctx, 3)
    P = ModPoly(M, 2, {(rng.choice(monos), (rng.choice(h_monomials(2, 1)), rng.randrange(2))): rng.randint(-2, 2) for _ in range(3)})
    R = P.reduce_last()
    assert R.skew().skew() == R


def test_residue_kills_lambda_multiples():
    M = FreeHModule(W, 2, [("a", 0)])
    ctx = SuperContext(W, 2, 1)
    for mono in monomials(ctx, 3):
        P = ModPoly(M, 1, {(mono, M.gen("a")): 1}).lmul(SuperPoly.lam(ctx, 0))
        assert P.residue(0).is_zero()


def test_derivative_of_integral():
    M = FreeHModule(W, 1, [("a", 0)])
    ctx = SuperContext(W, 1, 1)
    for mono in monomials(ctx, 3):
        P = ModPoly(M, 1, {(mono, M.gen("a")): 1})
        if len(mono[1]) != 1:
            continue
        # the integral consumes theta^[N]
        assert P.integral(0, bound(), bound({0: 1})).partial_lambda(0) == P.partial_theta(0, 1)
