import random

import pytest
from hypothesis import given, strategies as st

from svao.superfun import RationalSuperFunction, apply_diffop, inject_difference
from svao.superpoly import K, W


def z(flavor, N, n, k, l):
    return inject_difference(flavor, N, n, "z", k, l)


def zinv(flavor, N, n, k, l):
    return inject_difference(flavor, N, n, "zinv", k, l)


def zeta(flavor, N, n, k, l, i=1):
    return inject_difference(flavor, N, n, "zeta", k, l, i)


def test_w_difference():
    one = RationalSuperFunction.z(W, 1, 2, 0) - RationalSuperFunction.z(W, 1, 2, 1)
    assert z(W, 1, 2, 0, 1).equals(one)
    d = RationalSuperFunction.zeta(W, 1, 2, 0, 1) - RationalSuperFunction.zeta(W, 1, 2, 1, 1)
    assert zeta(W, 1, 2, 0, 1).equals(d)


def test_k_inverse_expansion():
    z1, z2 = RationalSuperFunction.z(K, 1, 2, 0), RationalSuperFunction.z(K, 1, 2, 1)
    x1, x2 = RationalSuperFunction.zeta(K, 1, 2, 0, 1), RationalSuperFunction.zeta(K, 1, 2, 1, 1)
    diff = z1 - z2
    expected = RationalSuperFunction.const(K, 1, 2)
    # (z1 - z2)^-1 + zeta1 zeta2 (z1 - z2)^-2, checked through the product with z_{1,2}
    inv = zinv(K, 1, 2, 0, 1)
    assert (inv * z(K, 1, 2, 0, 1)).equals(expected)
    assert (inv * diff * diff).equals(diff + x1 * x2)


def test_telescoping():
    assert z(W, 1, 3, 0, 2).equals(z(W, 1, 3, 0, 1) + z(W, 1, 3, 1, 2))
    defect = z(K, 1, 3, 0, 2) - z(K, 1, 3, 0, 1) - z(K, 1, 3, 1, 2)
    x = [RationalSuperFunction.zeta(K, 1, 3, k, 1) for k in range(3)]
    assert defect.equals(-(x[0] * x[2]) + x[0] * x[1] + x[1] * x[2])
    assert not defect.is_zero()


@pytest.mark.parametrize("flavor", [W, K])
def test_inverse(flavor):
    for N in (1, 2):
        for n in (2, 3, 4):
            for k in range(n):
                for l in range(k + 1, n):
                    assert (zinv(flavor, N, n, k, l) * z(flavor, N, n, k, l)).equals(RationalSuperFunction.const(flavor, N, n))


@pytest.mark.parametrize("flavor", [W, K])
def test_translation_invariance(flavor):
    assert zinv(flavor, 1, 2, 0, 1).is_translation_invariant()
    assert zeta(flavor, 1, 2, 0, 1).is_translation_invariant()
    assert (zeta(flavor, 1, 3, 0, 1) * zinv(flavor, 1, 3, 0, 2) * zinv(flavor, 1, 3, 1, 2)).is_translation_invariant()
    assert not RationalSuperFunction.z(flavor, 1, 2, 0).is_translation_invariant()
    assert not RationalSuperFunction.zeta(flavor, 1, 2, 0, 1).is_translation_invariant()


def test_derivatives():
    assert zinv(W, 1, 2, 0, 1).d_z(0).equals(-(zinv(W, 1, 2, 0, 1) ** 2))
    assert z(K, 1, 2, 0, 1).D_zeta(0, 1).equals(zeta(K, 1, 2, 0, 1))
    assert (zeta(W, 1, 2, 0, 1) * zinv(W, 1, 2, 0, 1)).d_zeta(0, 1).equals(zinv(W, 1, 2, 0, 1))


def test_k_D_squares_to_d_z():
    f = zinv(K, 1, 2, 0, 1) * zeta(K, 1, 2, 0, 1)
    assert f.D_zeta(0, 1).D_zeta(0, 1).equals(f.d_z(0))


def random_fun(flavor, rng):
    out = RationalSuperFunction.const(flavor, 1, 3, rng.randint(-2, 2))
    for _ in range(rng.randint(1, 3)):
        k, l = sorted(rng.sample(range(3), 2))
        kind = rng.choice(["z", "zinv", "zeta"])
        term = inject_difference(flavor, 1, 3, kind, k, l, 1 if kind == "zeta" else None)
        out = out + term.scale(rng.randint(-2, 2)) if rng.random() < 0.5 else out * term
    return out


@pytest.mark.parametrize("flavor", [W, K])
@given(seed=st.integers(0, 10 ** 9))
def test_equality_congruence(flavor, seed):
    rng = random.Random(seed)
    f, g, h = (random_fun(flavor, rng) for _ in range(3))
    assert (f + g).equals(g + f)
    assert ((f + g) * h).equals(f * h + g * h)
    assert ((f * g) * h).equals(f * (g * h))
    assert (f - f).is_zero()


def test_apply_diffop_matches_derivatives():
    f = zinv(W, 1, 2, 0, 1) ** 2
    assert apply_diffop(f, [("dz", 0)]).equals(f.d_z(0))
    assert apply_diffop(f, [("z", 0, 1), ("dzeta", 0, 1)]).equals((z(W, 1, 2, 0, 1) * f).D_zeta(0, 1))
    with pytest.raises(ValueError):
        apply_diffop(f, [("bogus",)])
