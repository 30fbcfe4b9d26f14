"""Standard constructions and the seeded random fixture generator.

Random dg-categories are built as endomorphism categories of randomly
chosen dg K-modules: homs are Hom complexes and composition is actual
composition of graded maps, so every axiom holds by construction while
differentials and signs stay genuinely nonzero.  Distributions are
documented on the generators; every random object is reproducible from
its seed.
"""

from __future__ import annotations

from . import linalg
from .category import DgCategoryPresentation, one_object_category
from .complexes import DgModule, HomComplex, dg_module
from .graded import GradedMap, GradedModule

# ---------------------------------------------------------------------------
# deterministic small categories


def trivial_category(field, name="K", obj="*"):
    """The one-object dg-category with endomorphisms K in degree 0."""
    hom = dg_module(field, {0: 1}, {}, labels={0: ("1",)})
    comp = GradedMap(
        _tensor_carrier(hom, hom),
        hom.carrier,
        0,
        {0: [[field.one()]]},
    )
    return one_object_category(field, hom, comp, (field.one(),), name=name, obj=obj)


def exterior_category(field, name="Ext", obj="*"):
    """One object, hom = K.1 + K.x with |x| = 1, x.x = 0, zero differential."""
    hom = dg_module(field, {0: 1, 1: 1}, {}, labels={0: ("1",), 1: ("x",)})
    carrier = _tensor_carrier(hom, hom)
    one = field.one()
    blocks = {
        # 1 (x) 1 -> 1
        0: [[one]],
        # 1 (x) x -> x, x (x) 1 -> x  (tensor basis ordered by left degree)
        1: [[one, one]],
        # x (x) x -> 0 lands in the zero space hom^2; no block
    }
    comp = GradedMap(carrier, hom.carrier, 0, blocks)
    return one_object_category(field, hom, comp, (one,), name=name, obj=obj)


def _tensor_carrier(left, right):
    from .complexes import TensorComplex

    return TensorComplex(left, right).module.carrier


def path_category(field, arrows, name="Path"):
    """A poset-like category: one basis arrow x_i -> x_{i+1} in degree 0.

    arrows is the number of generating arrows; composites are the unique
    degree-0 basis elements between comparable objects.  Used as a
    deterministic associativity playground and for negative controls.
    """
    objects = tuple(f"x{i}" for i in range(arrows + 1))
    hom = {}
    for i in range(arrows + 1):
        for j in range(arrows + 1):
            if i <= j:
                hom[(objects[i], objects[j])] = dg_module(field, {0: 1}, {})
    cat = DgCategoryPresentation(
        field,
        objects,
        hom,
        {},
        {obj: (field.one(),) for obj in objects},
        name=name,
    )
    comp = {}
    for i in range(arrows + 1):
        for j in range(i, arrows + 1):
            for k in range(j, arrows + 1):
                x, y, z = objects[i], objects[j], objects[k]
                tensor = cat.tensor_cx(x, y, z)
                comp[(x, y, z)] = GradedMap(
                    tensor.module.carrier,
                    cat.hom[(x, z)].carrier,
                    0,
                    {0: [[field.one()]]},
                )
    for x in cat.objects:
        for y in cat.objects:
            for z in cat.objects:
                comp.setdefault(
                    (x, y, z),
                    GradedMap(
                        cat.tensor_cx(x, y, z).module.carrier,
                        cat.hom[(x, z)].carrier,
                        0,
                        {},
                    ),
                )
    cat.set_comp(comp)
    return cat


def endomorphism_category(field, modules, name="End"):
    """Full sub-dg-category of dg K-modules on the given named modules.

    modules: ordered dict-like of name -> DgModule.  Homs are Hom
    complexes; composition composes the decoded graded maps, making
    every axiom true by construction.
    """
    names = tuple(modules)
    hom_cx = {}
    hom = {}
    for x in names:
        for y in names:
            hc = HomComplex(modules[x], modules[y])
            hom_cx[(x, y)] = hc
            hom[(x, y)] = hc.module
    ids = {}
    from .graded import identity_map

    for x in names:
        ids[x] = hom_cx[(x, x)].encode(identity_map(modules[x].carrier))
    cat = DgCategoryPresentation(field, names, hom, {}, ids, name=name)
    comp = {}
    for x in names:
        for y in names:
            for z in names:
                tensor = cat.tensor_cx(x, y, z)
                gcx = hom_cx[(y, z)]
                fcx = hom_cx[(x, y)]
                ocx = hom_cx[(x, z)]

                def column(n, k, _t=tensor, _g=gcx, _f=fcx, _o=ocx):
                    gdeg, gidx, fidx = _t.basis(n)[k]
                    fdeg = n - gdeg
                    gmap = _g.decode(gdeg, _unit(field, _g.module.dim(gdeg), gidx))
                    fmap = _f.decode(fdeg, _unit(field, _f.module.dim(fdeg), fidx))
                    return _o.encode(gmap.compose(fmap))

                from .graded import map_from_action

                comp[(x, y, z)] = map_from_action(
                    tensor.module.carrier, hom[(x, z)].carrier, 0, column
                )
    cat.set_comp(comp)
    return cat, hom_cx


def _unit(field, n, k):
    return tuple(field.one() if i == k else field.zero() for i in range(n))


# ---------------------------------------------------------------------------
# seeded random dg modules

RANDOM_WINDOW = (-2, 2)         # degree support drawn inside this window
RANDOM_MAX_DEGREES = 3          # at most this many consecutive degrees
RANDOM_MAX_DIM = 1              # per-degree dimension (keeps homs <= 3/degree)
RANDOM_ENTRY_RANGE = (-2, 2)    # integer differential entries before reduction


def random_dg_module(rng, field, max_dim=RANDOM_MAX_DIM, max_span=RANDOM_MAX_DEGREES):
    """A random dg module supported on a short window inside [-2, 2].

    Dimensions are uniform in [1, max_dim] per occupied degree; the
    differential is a random integer block pattern with no two
    consecutive nonzero blocks, which forces d . d = 0 blockwise.
    """
    lo_bound, hi_bound = RANDOM_WINDOW
    span = rng.randint(1, max_span)
    lo = rng.randint(lo_bound, hi_bound - span + 1)
    dims = {}
    for deg in range(lo, lo + span):
        if rng.random() < 0.85:
            dims[deg] = rng.randint(1, max_dim)
    if not dims:
        dims[lo] = 1
    carrier = GradedModule(field, dims)
    blocks = {}
    prev_nonzero = False
    for deg in sorted(dims):
        rows = carrier.dim(deg + 1)
        cols = carrier.dim(deg)
        if rows and cols and not prev_nonzero and rng.random() < 0.5:
            block = [
                [field.from_int(rng.randint(*RANDOM_ENTRY_RANGE)) for _ in range(cols)]
                for _ in range(rows)
            ]
            blocks[deg] = block
            prev_nonzero = not linalg.is_zero_matrix(field, block)
        else:
            prev_nonzero = False
    return DgModule(carrier, GradedMap(carrier, carrier, 1, blocks))


def random_endo_category(rng, field, name, max_objects=2):
    """Endomorphism category of 1..max_objects random dg modules."""
    count = rng.randint(1, max_objects)
    modules = {f"{name.lower()}{i}": random_dg_module(rng, field) for i in range(count)}
    cat, hom_cx = endomorphism_category(field, modules, name=name)
    return cat, modules, hom_cx


# ---------------------------------------------------------------------------
# bimodules and modules built from endomorphism categories


def zero_bimodule(u_cat, t_cat, name="0"):
    from .bimodule import Bimodule

    return Bimodule(u_cat, t_cat, {}, {}, {}, name=name)


def hom_bimodule(u_cat, u_modules, t_cat, t_modules, name="M"):
    """The bimodule M(u, t) = Hom(P_t, Q_u) over endomorphism categories.

    u_cat/t_cat must be endomorphism categories of the named dg modules;
    the left action postcomposes, the right action precomposes with the
    contravariant Koszul sign (-1)^{|t||m|}.
    """
    from .bimodule import Bimodule
    from .complexes import HomComplex

    field = u_cat.field
    values = {}
    value_cx = {}
    for u in u_cat.objects:
        for t in t_cat.objects:
            hc = HomComplex(t_modules[t], u_modules[u])
            value_cx[(u, t)] = hc
            values[(u, t)] = hc.module

    u_hom_cx = {
        (u, u2): HomComplex(u_modules[u], u_modules[u2])
        for u in u_cat.objects
        for u2 in u_cat.objects
    }
    t_hom_cx = {
        (t, t2): HomComplex(t_modules[t], t_modules[t2])
        for t in t_cat.objects
        for t2 in t_cat.objects
    }

    from .graded import map_from_action

    left_action = {}
    for u in u_cat.objects:
        for u2 in u_cat.objects:
            for t in t_cat.objects:
                out_cx = HomComplex(values[(u, t)], values[(u2, t)])

                def column(m, k, _u=u, _u2=u2, _t=t, _out=out_cx):
                    g = u_hom_cx[(_u, _u2)].decode(
                        m, _unit(field, u_cat.hom[(_u, _u2)].dim(m), k)
                    )
                    action = map_from_action(
                        values[(_u, _t)].carrier,
                        values[(_u2, _t)].carrier,
                        m,
                        lambda i, j: value_cx[(_u2, _t)].encode(
                            g.compose(value_cx[(_u, _t)].decode(
                                i, _unit(field, values[(_u, _t)].dim(i), j)
                            ))
                        ),
                    )
                    return _out.encode(action)

                left_action[(u, u2, t)] = map_from_action(
                    u_cat.hom[(u, u2)].carrier, out_cx.module.carrier, 0, column
                )

    right_action = {}
    for t in t_cat.objects:
        for t2 in t_cat.objects:
            for u in u_cat.objects:
                out_cx = HomComplex(values[(u, t2)], values[(u, t)])

                def column(m, k, _t=t, _t2=t2, _u=u, _out=out_cx):
                    s = t_hom_cx[(_t, _t2)].decode(
                        m, _unit(field, t_cat.hom[(_t, _t2)].dim(m), k)
                    )

                    def inner(i, j):
                        jmap = value_cx[(_u, _t2)].decode(
                            i, _unit(field, values[(_u, _t2)].dim(i), j)
                        )
                        sgn = field.sign(m * i)
                        composed = jmap.compose(s).scale(sgn)
                        return value_cx[(_u, _t)].encode(composed)

                    action = map_from_action(
                        values[(_u, _t2)].carrier,
                        values[(_u, _t)].carrier,
                        m,
                        inner,
                    )
                    return _out.encode(action)

                right_action[(t, t2, u)] = map_from_action(
                    t_cat.hom[(t, t2)].carrier, out_cx.module.carrier, 0, column
                )

    return Bimodule(u_cat, t_cat, values, left_action, right_action, name=name)


def hom_from_module(u_cat, u_modules, z_module, name=None):
    """The dg U-module u |-> Hom(Z, Q_u) with post-composition action."""
    from .complexes import HomComplex
    from .functors import DgFunctor
    from .graded import map_from_action

    field = u_cat.field
    name = name or "Hom(Z,-)"
    values = {u: HomComplex(z_module, u_modules[u]) for u in u_cat.objects}
    on_objects = {u: values[u].module for u in u_cat.objects}
    u_hom_cx = {
        (u, u2): HomComplex(u_modules[u], u_modules[u2])
        for u in u_cat.objects
        for u2 in u_cat.objects
    }
    fun = DgFunctor(u_cat, on_objects, {}, name=name)
    on_hom = {}
    for u in u_cat.objects:
        for u2 in u_cat.objects:
            hc = fun.hom_cx(u, u2)

            def column(m, k, _u=u, _u2=u2, _hc=hc):
                g = u_hom_cx[(_u, _u2)].decode(
                    m, _unit(field, u_cat.hom[(_u, _u2)].dim(m), k)
                )
                action = map_from_action(
                    on_objects[_u].carrier,
                    on_objects[_u2].carrier,
                    m,
                    lambda i, j: values[_u2].encode(
                        g.compose(values[_u].decode(
                            i, _unit(field, on_objects[_u].dim(i), j)
                        ))
                    ),
                )
                return _hc.encode(action)

            on_hom[(u, u2)] = map_from_action(
                u_cat.hom[(u, u2)].carrier, hc.module.carrier, 0, column
            )
    return DgFunctor(u_cat, on_objects, on_hom, name=name)


# ---------------------------------------------------------------------------
# random comma objects and whole-equivalence fixtures


def closed_structure_maps(A, fun):
    """Basis of closed degree-0 transformations A -> fun (e.g. G(B))."""
    from .functors import (
        dgnat_differential,
        dgnat_space,
        nat_to_flat,
        nat_unknowns,
    )

    field = A.base.field
    _, _, nats = dgnat_space(A, fun, 0)
    if not nats:
        return []
    keys1 = nat_unknowns(A, fun, 1)
    columns = [
        nat_to_flat(A, fun, 1, keys1, dgnat_differential(nat)) for nat in nats
    ]
    mat = tuple(
        tuple(columns[i][r] for i in range(len(nats))) for r in range(len(keys1))
    )
    combos = linalg.nullspace(field, mat, ncols=len(nats))
    closed = []
    for combo in combos:
        out = None
        for coeff, nat in zip(combo, nats):
            term = nat.scale(coeff)
            out = term if out is None else out.add(term)
        closed.append(out)
    return closed


def random_comma_object(rng, bim, A, B, g_of_b=None, name="o"):
    """A comma object with a random closed degree-0 structure map."""
    from .bimodule import g_on_objects
    from .comma import CommaObject

    field = bim.field
    gb = g_of_b if g_of_b is not None else g_on_objects(bim, B)
    closed = closed_structure_maps(A, gb.functor)
    chosen = None
    for nat in closed:
        c = field.from_int(rng.randint(-2, 2))
        term = nat.scale(c)
        chosen = term if chosen is None else chosen.add(term)
    components = chosen.components if chosen is not None else {}
    return CommaObject(bim, A, B, components, g_of_b=gb, name=name)


def random_axiom_fixture(seed, field):
    """Categories, bimodule and modules for the axiom acceptance sweep.

    Distributions: 1-2 objects per category (3 for every fifth seed),
    module dims <= 1 per degree over windows of <= 3 degrees inside
    [-2, 2]; every hom space then has dimension <= 3 per degree.
    """
    import random as _random

    rng = _random.Random(seed)
    max_objects = 3 if seed % 5 == 0 else 2
    u_cat, u_modules, _ = random_endo_category(rng, field, "U", max_objects=max_objects)
    t_cat, t_modules, _ = random_endo_category(rng, field, "T", max_objects=max_objects)
    if seed % 7 == 0:
        bim = zero_bimodule(u_cat, t_cat)
    else:
        bim = hom_bimodule(u_cat, u_modules, t_cat, t_modules)
    from .functors import representable_module

    a_module = representable_module(t_cat, rng.choice(t_cat.objects))
    if seed % 3 == 0:
        b_module = hom_from_module(u_cat, u_modules, random_dg_module(rng, field))
    else:
        b_module = representable_module(u_cat, rng.choice(u_cat.objects))
    return {
        "seed": seed,
        "t_cat": t_cat,
        "u_cat": u_cat,
        "bimodule": bim,
        "modules": [a_module, b_module],
    }


def random_theorem_fixture(seed, field, max_objects=1):
    """A full instance for the equivalence suite: Lambda, comma objects,
    Lambda-modules.  Sizes stay minimal so exact solves remain fast."""
    import random as _random

    from .bimodule import g_on_objects
    from .functors import representable_module
    from .lambda_cat import build_lambda

    rng = _random.Random(seed)
    u_cat, u_modules, _ = random_endo_category(rng, field, "U", max_objects=max_objects)
    t_cat, t_modules, _ = random_endo_category(rng, field, "T", max_objects=max_objects)
    bim = hom_bimodule(u_cat, u_modules, t_cat, t_modules)
    lam = build_lambda(t_cat, u_cat, bim, validate=False)

    A = representable_module(t_cat, rng.choice(t_cat.objects))
    if seed % 3 == 1:
        B = hom_from_module(u_cat, u_modules, random_dg_module(rng, field))
    else:
        B = representable_module(u_cat, rng.choice(u_cat.objects))
    gb = g_on_objects(bim, B)
    from .comma import CommaObject

    zero_obj = CommaObject(bim, A, B, {}, g_of_b=gb, name="o_zero")
    rand_obj = random_comma_object(rng, bim, A, B, g_of_b=gb, name="o_rand")
    comma_objects = [zero_obj, rand_obj]
    if max_objects == 1 and seed % 2 == 0:
        # a third object over different modules, so cross Hom spaces mix
        # distinct transformation spaces on both legs
        A2 = hom_from_module(
            t_cat, t_modules, random_dg_module(rng, field), name="A2"
        )
        B2 = hom_from_module(
            u_cat, u_modules, random_dg_module(rng, field), name="B2"
        )
        gb2 = g_on_objects(bim, B2)
        comma_objects.append(
            random_comma_object(rng, bim, A2, B2, g_of_b=gb2, name="o_mix")
        )

    origin = rng.choice(lam.presentation.objects)
    lambda_modules = [representable_module(lam.presentation, origin)]
    if seed % 2 == 0:
        from .functors import direct_sum_functors

        others = [o for o in lam.presentation.objects if o != origin]
        second = representable_module(lam.presentation, rng.choice(others))
        total, _ = direct_sum_functors(
            [lambda_modules[0], second], name="C_sum"
        )
        lambda_modules.append(total)
    return {
        "seed": seed,
        "t_cat": t_cat,
        "u_cat": u_cat,
        "bimodule": bim,
        "lambda": lam,
        "comma_objects": comma_objects,
        "lambda_modules": lambda_modules,
    }
