from fractions import Fraction

import pytest

from dgcat.category import validate_dg_category
from dgcat.errors import ValidationFailure
from dgcat.fields import PrimeField, Rationals
from dgcat.fixtures import zero_bimodule
from dgcat.functors import representable_module, validate_dg_functor
from dgcat.lambda_cat import build_lambda, lambda_leibniz_check, restrict_module
from tests.test_bimodule import kkk_setup, random_setup

QQ = Rationals()


def test_kkk_lambda_end_dims_and_table():
    # The one-pair endomorphism space is the lower triangular 2x2 algebra:
    # dimension 3 in degree 0, zero elsewhere, with the multiplication
    # table e_t e_t = e_t, e_m e_t = e_m, e_u e_m = e_m, e_u e_u = e_u and
    # all other products zero (hand-checked oracle).
    u_cat, t_cat, _, _, bim = kkk_setup()
    lam = build_lambda(t_cat, u_cat, bim)
    pres = lam.presentation
    pair = lam.object_name("t0", "u0")
    end = pres.hom[(pair, pair)]
    assert end.carrier.dims() == {0: 3}
    basis = {
        "t": pres.basis_element(pair, pair, 0, 0),
        "m": pres.basis_element(pair, pair, 0, 1),
        "u": pres.basis_element(pair, pair, 0, 2),
    }
    table = {}
    for gname, g in basis.items():
        for fname, f in basis.items():
            table[(gname, fname)] = pres.compose(g, f).coords
    one = Fraction(1)
    zero3 = (Fraction(0),) * 3
    assert table[("t", "t")] == (one, Fraction(0), Fraction(0))
    assert table[("m", "t")] == (Fraction(0), one, Fraction(0))
    assert table[("u", "m")] == (Fraction(0), one, Fraction(0))
    assert table[("u", "u")] == (Fraction(0), Fraction(0), one)
    for key in [("t", "m"), ("t", "u"), ("m", "m"), ("m", "u"), ("u", "t")]:
        assert table[key] == zero3
    assert validate_dg_category(pres).passed


def test_lambda_identity_is_diagonal():
    u_cat, t_cat, _, _, bim = kkk_setup()
    lam = build_lambda(t_cat, u_cat, bim)
    pair = lam.object_name("t0", "u0")
    ident = lam.presentation.identity(pair)
    assert ident.coords == (Fraction(1), Fraction(0), Fraction(1))


def test_zero_bimodule_block_diagonal():
    u_cat, t_cat, _, _, _ = kkk_setup()
    lam = build_lambda(t_cat, u_cat, zero_bimodule(u_cat, t_cat))
    pres = lam.presentation
    pair = lam.object_name("t0", "u0")
    end = pres.hom[(pair, pair)]
    # no m-block: only hom_T + hom_U survive
    assert end.carrier.dims() == {0: 2}
    assert validate_dg_category(pres).passed


def test_lambda_validates_on_random_fixtures():
    for seed in (0, 3):
        u_cat, t_cat, u_modules, t_modules, bim, _ = random_setup(seed, max_objects=1)
        lam = build_lambda(t_cat, u_cat, bim)
        assert validate_dg_category(lam.presentation).passed


def test_lambda_validates_f5():
    u_cat, t_cat, u_modules, t_modules, bim, _ = random_setup(
        1, field=PrimeField(5), max_objects=1
    )
    lam = build_lambda(t_cat, u_cat, bim)
    assert validate_dg_category(lam.presentation).passed


def test_lambda_refuses_invalid_bimodule():
    u_cat, t_cat, u_modules, t_modules, bim, _ = random_setup(7, max_objects=1)
    field = QQ
    flipped = False
    for key, action in bim.right_action.items():
        if action.blocks and not flipped:
            bim.right_action[key] = action.scale(field.from_int(-1))
            flipped = True
    assert flipped
    bim._right_map_cache.clear()
    bim._slice_u.clear()
    with pytest.raises(ValidationFailure) as exc:
        build_lambda(t_cat, u_cat, bim)
    assert exc.value.report is not None


def test_lambda_leibniz_identities():
    for seed in (0, 2, 5):
        u_cat, t_cat, u_modules, t_modules, bim, _ = random_setup(seed, max_objects=2)
        lam = build_lambda(t_cat, u_cat, bim, validate=False)
        report = lambda_leibniz_check(lam)
        assert report.passed, report.render()


def test_lambda_leibniz_trivial_when_differentials_vanish():
    u_cat, t_cat, _, _, bim = kkk_setup()
    lam = build_lambda(t_cat, u_cat, bim)
    assert lambda_leibniz_check(lam).passed


def test_restrict_representable_module():
    # C = hom((t0,u0), -): C1(t) = hom_T(t0, t), C2(u) = M(u, t0) + hom_U(u0, u)
    u_cat, t_cat, _, _, bim = kkk_setup()
    lam = build_lambda(t_cat, u_cat, bim)
    pres = lam.presentation
    origin = lam.object_name("t0", "u0")
    module = representable_module(pres, origin)
    c1, c2 = restrict_module(lam, module)
    assert validate_dg_functor(c1).passed
    assert validate_dg_functor(c2).passed
    assert c1.on_objects["t0"].carrier.dims() == {0: 1}
    assert c2.on_objects["u0"].carrier.dims() == {0: 2}


def test_restrict_zero_module():
    from dgcat.functors import zero_functor

    u_cat, t_cat, _, _, bim = kkk_setup()
    lam = build_lambda(t_cat, u_cat, bim)
    c1, c2 = restrict_module(lam, zero_functor(lam.presentation))
    assert c1.is_zero() and c2.is_zero()


def test_restrict_on_random_lambda_representables():
    u_cat, t_cat, u_modules, t_modules, bim, rng = random_setup(4, max_objects=1)
    lam = build_lambda(t_cat, u_cat, bim, validate=False)
    pres = lam.presentation
    for origin in pres.objects:
        module = representable_module(pres, origin)
        c1, c2 = restrict_module(lam, module)
        r1, r2 = validate_dg_functor(c1), validate_dg_functor(c2)
        assert r1.passed, r1.render()
        assert r2.passed, r2.render()
