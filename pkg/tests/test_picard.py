"""Class group and Riemann-Roch space oracles.

Anchor groups, cross-checked against zeta orders:
  y^3 = x^2 + x + 1 / GF(2):   Pic^0 = Z/3,  over GF(4) (Z/3)^2
  y^5 = x^2 + x + 1 / GF(2):   Pic^0 = Z/5,  over GF(16) (Z/5)^4
"""

import pytest

from superjac import gf
from superjac.errors import RequiresD1
from superjac.curves import (Divisor, FunctionRep, InfPlace, base_change,
                             make_curve, principal_divisor, valuation)
from superjac.picard import (conjecture_check, effective_divisors, ell,
                             enumerate_places, function_space, is_principal,
                             picard_group)


@pytest.fixture(scope="module")
def cubic():
    return make_curve(3, [1, 1, 1], gf.field(2))


@pytest.fixture(scope="module")
def quintic():
    return make_curve(5, [1, 1, 1], gf.field(2))


def test_ell_baseline(cubic):
    assert ell(cubic, Divisor()) == 1
    inf = cubic.inf_place()
    # deg > 2g - 2 pins the dimension exactly
    for k in range(2, 7):
        assert ell(cubic, Divisor.single(inf, k)) == k


def test_function_space_basis_valuations(cubic):
    inf = cubic.inf_place()
    sp = function_space(cubic, Divisor.single(inf, 5))
    assert sp.dim == 5
    for k in range(sp.dim):
        f = sp.function(k)
        assert valuation(sp.ext, f, sp.ext.inf_place()) >= -5
        D = principal_divisor(sp.ext, f)
        aff = [(P, c) for P, c in D.items() if not isinstance(P, InfPlace)]
        assert all(c > 0 for _, c in aff)


def test_enumerate_places(cubic, quintic):
    pls = enumerate_places(cubic, 2)
    assert [(P.label(), P.degree) for P in pls] == [
        ("P1(0,1)", 1), ("P1(1,1)", 1), ("inf", 1),
        ("P2(0,2)", 2), ("P2(1,2)", 2), ("P2(2,0)", 2)]
    degs = [P.degree for P in enumerate_places(quintic, 2)]
    assert degs == [1, 1, 1, 2]


def test_effective_divisors(quintic):
    pls = enumerate_places(quintic, 2)
    effs = effective_divisors(pls, 2)
    assert len(effs) == 7
    assert all(E.degree() == 2 and E.is_effective() for E in effs)
    assert sorted(ell(quintic, E) for E in effs) == [1, 1, 1, 1, 2, 2, 2]


def test_is_principal_anchors(cubic):
    f = FunctionRep(cubic, [(), (1,), ()])  # the function y
    D = principal_divisor(cubic, f)
    assert is_principal(cubic, D)

    inf = cubic.inf_place()
    P = enumerate_places(cubic, 1)[0]
    D1 = Divisor([(P, 1), (inf, -1)])
    assert not is_principal(cubic, D1)
    assert is_principal(cubic, D1.scale(3))

    # nonzero degree is never principal
    assert not is_principal(cubic, Divisor.single(P, 1))


def test_is_principal_pole_support(cubic):
    # poles at an affine place force u-denominator conditions
    P0, P1 = enumerate_places(cubic, 1)[:2]
    D = Divisor([(P0, 3), (P1, -3)])
    assert is_principal(cubic, D)
    assert not is_principal(cubic, Divisor([(P0, 1), (P1, -1)]))


def test_no_rational_point_gives_no_single_pole(quintic):
    # a function with one simple pole would make the curve rational
    inf = quintic.inf_place()
    P = enumerate_places(quintic, 1)[0]
    assert not is_principal(quintic, Divisor([(P, 1), (inf, -1)]))
    assert is_principal(quintic, Divisor([(P, 1), (inf, -1)]).scale(5))


def test_special_divisor_on_split_curve():
    ctx = gf.field(11)
    c = make_curve(2, gf.pfrom_roots(ctx, [0, 1, 2, 3, 4]), ctx)
    E = -Divisor.single(c.inf_place(), 1)
    for i in range(1, c.r):
        E = E + Divisor.single(c.ram_place(i), c.m - 1)
    assert E.degree() == 2 * c.genus - 1
    assert ell(c, E) == c.genus


def test_picard_group_anchors(cubic, quintic):
    G = picard_group(cubic)
    assert (G.order, G.invariant_factors, G.special_classes) == (3, (3,), 0)
    assert G.lpoly_coeffs == (1, 0, 2)

    G = picard_group(quintic)
    assert (G.order, G.invariant_factors, G.special_classes) == (5, (5,), 1)
    assert G.lpoly_coeffs == (1, 0, 0, 0, 4)


def test_picard_group_extension(cubic):
    G = picard_group(base_change(cubic, gf.field(2, 2)))
    assert G.order == 9
    assert G.invariant_factors == (3, 3)


def test_picard_group_large_extension(quintic):
    G = picard_group(base_change(quintic, gf.field(2, 4)))
    assert G.order == 625
    assert G.invariant_factors == (5, 5, 5, 5)
    assert G.lpoly_coeffs == (1, 16, 96, 256, 256)
    assert G.special_classes == 1


def test_conjecture_consistent(cubic, quintic):
    rep = conjecture_check(cubic)
    assert rep.verdict == "consistent"
    assert (rep.k, rep.base_factors, rep.ext_factors) == (2, (3,), (3, 3))

    rep = conjecture_check(quintic)
    assert rep.verdict == "consistent"
    assert rep.ext_factors == (5, 5, 5, 5)
    assert rep.expected_factors == (5, 5, 5, 5)
    assert rep.to_dict()["verdict"] == "consistent"


def test_requires_single_infinite_place():
    ctx = gf.field(11)
    c = make_curve(2, gf.pfrom_roots(ctx, [0, 1, 2, 3, 4, 5]), ctx)
    with pytest.raises(RequiresD1):
        enumerate_places(c, 1)
    with pytest.raises(RequiresD1):
        picard_group(c)
