import random
from itertools import combinations

import pytest
from hypothesis import settings, strategies as st

from svao.superpoly import SuperContext, SuperPoly, make_mono

settings.register_profile("svao", max_examples=40, deadline=None, derandomize=True)
settings.load_profile("svao")


def odd_sets(N):
    return [I for r in range(N + 1) for I in combinations(range(1, N + 1), r)]


def monomials(ctx, degree):
    """All monomials with lambda-power plus odd count <= degree in each variable's total."""
    out = []

    def rec(k, parts, left):
        if k == ctx.nvars:
            out.append(make_mono(ctx, parts))
            return
        for I in odd_sets(ctx.N):
            for m in range(left - len(I) + 1):
                rec(k + 1, parts + [(m, I)], left - m - len(I))
    rec(0, [], degree)
    return out


def random_poly(ctx, rng, degree=4, terms=4):
    monos = monomials(ctx, degree)
    return SuperPoly(ctx, {rng.choice(monos): rng.randint(-3, 3) for _ in range(rng.randint(0, terms))})


@st.composite
def polys(draw, ctx, degree=4, terms=4):
    seed = draw(st.integers(0, 10 ** 9))
    return random_poly(ctx, random.Random(seed), degree, terms)


@pytest.fixture
def rng():
    return random.Random(12345)


ACCEPTANCE = []


def record(criterion, ok, detail):
    line = "criterion %2d: %s  %s" % (criterion, "PASS" if ok else "FAIL", detail)
    ACCEPTANCE.append(line)
    print(line)


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE:
        terminalreporter.section("acceptance criteria")
        for line in sorted(ACCEPTANCE):
            terminalreporter.write_line(line)
