import random
from fractions import Fraction

from dgcat.category import opposite_category
from dgcat.fields import PrimeField, Rationals
from dgcat.fixtures import (
    endomorphism_category,
    exterior_category,
    random_dg_module,
    random_endo_category,
    trivial_category,
)
from dgcat.functors import (
    DgFunctor,
    DgNatTransformation,
    compose_nat,
    dgnat_differential,
    dgnat_space,
    dgnat_window,
    direct_sum_functors,
    identity_nat,
    naturality_witness,
    representable_module,
    validate_dg_functor,
    yoneda_module,
    zero_functor,
)

QQ = Rationals()


def test_zero_functor_validates():
    cat = exterior_category(QQ)
    assert validate_dg_functor(zero_functor(cat)).passed


def test_representable_validates_on_trivial_and_exterior():
    for cat in (trivial_category(QQ), exterior_category(QQ)):
        fun = representable_module(cat, "*")
        report = validate_dg_functor(fun)
        assert report.passed, report.render()


def test_representable_validates_on_random_endo():
    for seed in range(5):
        rng = random.Random(seed)
        cat, _, _ = random_endo_category(rng, QQ, "E", max_objects=2)
        for obj in cat.objects:
            report = validate_dg_functor(representable_module(cat, obj))
            assert report.passed, report.render()


def test_functor_negative_control_chain_map():
    # Break the chain-map axiom: base with nonzero differential, action
    # scaled inconsistently across degrees.
    rng = random.Random(3)
    modules = {"m0": random_dg_module(rng, QQ)}
    while modules["m0"].d.is_zero():
        modules = {"m0": random_dg_module(rng, QQ)}
    cat, _ = endomorphism_category(QQ, modules, name="E")
    fun = representable_module(cat, "m0")
    action = fun.on_hom[("m0", "m0")]
    scaled = {}
    sign = False
    for i, block in action.blocks.items():
        scaled[i] = [[x * (2 if sign else 1) for x in row] for row in block]
        sign = not sign
    from dgcat.graded import GradedMap

    fun.on_hom[("m0", "m0")] = GradedMap(
        action.source, action.target, 0, scaled
    )
    fun._basis_map_cache.clear()
    report = validate_dg_functor(fun)
    assert not report.passed
    names = [c.name for c in report.failures()]
    assert "chain_map" in names or "functoriality" in names or "unit" in names


def test_dgnat_space_zero_functors():
    cat = exterior_category(QQ)
    zero = zero_functor(cat)
    for n in range(-2, 3):
        _, _, nats = dgnat_space(zero, zero, n)
        assert nats == []


def test_dgnat_space_trivial_base_scalars():
    cat = trivial_category(QQ)
    fun = representable_module(cat, "*")
    keys, vecs, nats = dgnat_space(fun, fun, 0)
    assert len(nats) == 1
    assert list(dgnat_window(fun, fun)) == [0]
    _, _, nats1 = dgnat_space(fun, fun, 1)
    assert nats1 == []


def test_dgnat_space_disjoint_supports_is_zero():
    from dgcat.complexes import dg_module

    cat = trivial_category(QQ)
    low = DgFunctor(cat, {"*": dg_module(QQ, {0: 1}, {})}, {})
    # action of the identity must be the identity for validity; build via
    # representable-style explicit action
    high = DgFunctor(cat, {"*": dg_module(QQ, {5: 1}, {})}, {})
    # shape-forced: no degree-0 transformation can exist between them
    keys, _, _ = dgnat_space(low, high, 0)
    assert keys == [] or len(keys) == 0


def test_dgnat_solutions_satisfy_naturality_exactly():
    for seed in range(4):
        rng = random.Random(seed)
        cat, _, _ = random_endo_category(rng, QQ, "E", max_objects=2)
        funs = [representable_module(cat, obj) for obj in cat.objects]
        F, G = funs[0], funs[-1]
        for n in dgnat_window(F, G):
            _, _, nats = dgnat_space(F, G, n)
            for nat in nats:
                assert naturality_witness(nat) is None


def test_dgnat_linearity_within_degree():
    # a random linear combination of basis transformations is again natural
    rng = random.Random(9)
    cat, _, _ = random_endo_category(rng, QQ, "E", max_objects=2)
    fun = representable_module(cat, cat.objects[0])
    for n in dgnat_window(fun, fun):
        _, _, nats = dgnat_space(fun, fun, n)
        if len(nats) >= 2:
            combo = nats[0].scale(Fraction(3)).add(nats[1].scale(Fraction(-2)))
            assert naturality_witness(combo) is None


def test_dgnat_differential_closure_and_square_zero():
    for seed in range(4):
        rng = random.Random(seed)
        cat, _, _ = random_endo_category(rng, QQ, "E", max_objects=2)
        F = representable_module(cat, cat.objects[0])
        G = representable_module(cat, cat.objects[-1])
        for n in dgnat_window(F, G):
            keys1, vecs1, _ = dgnat_space(F, G, n + 1)
            _, _, nats = dgnat_space(F, G, n)
            for nat in nats:
                d_nat = dgnat_differential(nat)
                # closure: d maps DgNat^n into DgNat^{n+1}
                assert naturality_witness(d_nat) is None
                dd = dgnat_differential(d_nat)
                assert dd.is_zero()


def test_dgnat_differential_of_chain_map_components_is_zero():
    cat = trivial_category(QQ)
    fun = representable_module(cat, "*")
    ident = identity_nat(fun)
    assert dgnat_differential(ident).is_zero()


def test_compose_nat_unital_and_associative():
    rng = random.Random(15)
    cat, _, _ = random_endo_category(rng, QQ, "E", max_objects=1)
    fun = representable_module(cat, cat.objects[0])
    window = list(dgnat_window(fun, fun))
    pool = []
    for n in window:
        _, _, nats = dgnat_space(fun, fun, n)
        pool.extend(nats)
    ident = identity_nat(fun)
    for nat in pool:
        assert compose_nat(ident, nat) == nat
        assert compose_nat(nat, ident) == nat
    for a in pool[:3]:
        for b in pool[:3]:
            for c in pool[:3]:
                assert compose_nat(a, compose_nat(b, c)) == compose_nat(
                    compose_nat(a, b), c
                )


def test_compose_nat_leibniz():
    # d(nu . eta) = d(nu) . eta + (-1)^{|nu|} nu . d(eta)
    rng = random.Random(21)
    cat, _, _ = random_endo_category(rng, QQ, "E", max_objects=2)
    F = representable_module(cat, cat.objects[0])
    pool = []
    for n in dgnat_window(F, F):
        _, _, nats = dgnat_space(F, F, n)
        pool.extend(nats)
    field = QQ
    for nu in pool[:4]:
        for eta in pool[:4]:
            lhs = dgnat_differential(compose_nat(nu, eta))
            rhs = compose_nat(dgnat_differential(nu), eta).add(
                compose_nat(nu, dgnat_differential(eta)).scale(
                    field.sign(nu.degree)
                )
            )
            assert lhs == rhs


def test_compose_nat_degree_one_pair_natural():
    rng = random.Random(33)
    cat, _, _ = random_endo_category(rng, QQ, "E", max_objects=1)
    fun = representable_module(cat, cat.objects[0])
    _, _, nats = dgnat_space(fun, fun, 1)
    for a in nats:
        for b in nats:
            composite = compose_nat(a, b)
            assert composite.degree == 2
            assert naturality_witness(composite) is None


def test_yoneda_trivial_base():
    cat = trivial_category(QQ)
    fun = yoneda_module(cat, "*")
    assert fun.on_objects["*"].carrier.dims() == {0: 1}
    assert validate_dg_functor(fun).passed


def test_yoneda_exterior_sign():
    # two-dimensional module; the action of x is right multiplication
    # with the sign (-1)^{|x||j|}.
    cat = exterior_category(QQ)
    opp = opposite_category(cat)
    fun = yoneda_module(cat, "*", opposite=opp)
    report = validate_dg_functor(fun)
    assert report.passed, report.render()
    x_action = fun.map_of_basis("*", "*", 1, 0)
    # j = 1 (degree 0): sign +1, j . x = x
    assert x_action.block(0) == ((Fraction(1),),)
    # j = x (degree 1): sign -1, x . x = 0; block at degree 1 hits hom^2 = 0
    assert 1 not in x_action.blocks


def test_yoneda_two_object_category():
    rng = random.Random(41)
    cat, _, _ = random_endo_category(rng, QQ, "E", max_objects=2)
    opp = opposite_category(cat)
    for obj in cat.objects:
        report = validate_dg_functor(yoneda_module(cat, obj, opposite=opp))
        assert report.passed, report.render()


def test_direct_sum_functors_validates():
    rng = random.Random(45)
    cat, _, _ = random_endo_category(rng, QQ, "E", max_objects=2)
    f1 = representable_module(cat, cat.objects[0])
    f2 = representable_module(cat, cat.objects[-1])
    total, _ = direct_sum_functors([f1, f2])
    report = validate_dg_functor(total)
    assert report.passed, report.render()
    for obj in cat.objects:
        assert total.on_objects[obj].carrier.total_dim() == (
            f1.on_objects[obj].carrier.total_dim()
            + f2.on_objects[obj].carrier.total_dim()
        )


def test_functors_over_f5():
    rng = random.Random(51)
    field = PrimeField(5)
    cat, _, _ = random_endo_category(rng, field, "E", max_objects=2)
    fun = representable_module(cat, cat.objects[0])
    assert validate_dg_functor(fun).passed
    for n in dgnat_window(fun, fun):
        _, _, nats = dgnat_space(fun, fun, n)
        for nat in nats:
            assert naturality_witness(nat) is None


def test_dgnat_differential_single_component_evaluation():
    # base K, one component in degree -1 over a contractible module: the
    # differential of the transformation is its component postcomposed
    # into cycles, i.e. exactly the Hom-complex formula with |a| = -1.
    from dgcat.complexes import dg_module, hom_differential
    from dgcat.graded import GradedMap

    field = QQ
    cat = trivial_category(field)
    contractible = dg_module(field, {0: 1, 1: 1}, {0: [[field.one()]]})
    plain = dg_module(field, {0: 1}, {})
    from dgcat.complexes import HomComplex
    from dgcat.graded import identity_map, map_from_action

    def const_action(module):
        hc = HomComplex(module, module)
        return map_from_action(
            cat.hom[("*", "*")].carrier,
            hc.module.carrier,
            0,
            lambda m, k: hc.encode(identity_map(module.carrier)),
        )

    F = DgFunctor(cat, {"*": contractible}, {("*", "*"): const_action(contractible)})
    G = DgFunctor(cat, {"*": plain}, {("*", "*"): const_action(plain)})
    assert validate_dg_functor(F).passed and validate_dg_functor(G).passed
    alpha = GradedMap(
        contractible.carrier, plain.carrier, -1, {1: ((field.one(),),)}
    )
    eta = DgNatTransformation(F, G, -1, {"*": alpha})
    d_eta = dgnat_differential(eta)
    assert d_eta.components["*"] == hom_differential(contractible, plain, alpha)
    # with |alpha| = -1 the sign -(-1)^{-1} = +1 leaves alpha . d_M
    assert d_eta.components["*"] == alpha.compose(contractible.d)
    assert not d_eta.is_zero()
