"""Dg-modules over a presented dg-category and their transformation spaces.

A DgFunctor packages a dg-functor into dg K-modules: a dg module per
object and, per object pair, a degree-0 chain map from the hom dg-module
into the Hom complex of the images.  A transformation of degree n is a
family of degree-n graded maps whose naturality squares commute up to
(-1)^{nm} against degree-m morphisms; dgnat_space computes an exact basis
of these by a single linear solve over the block entries.
"""

from __future__ import annotations

from . import linalg
from .category import opposite_category
from .complexes import HomComplex, zero_dg_module
from .errors import StructureError
from .graded import DirectSum, GradedMap, block_diag_between, identity_map, zero_map
from .report import Report, fmt_graded_map


class DgFunctor:
    """A dg-functor base -> DgMod(K), given on objects and on hom modules."""

    def __init__(self, base, on_objects, on_hom, name="F"):
        self.base = base
        self.name = name
        field = base.field
        self.on_objects = {}
        for obj in base.objects:
            module = on_objects.get(obj)
            if module is None:
                module = zero_dg_module(field)
            self.on_objects[obj] = module
        self._hom_cx = {}
        self.on_hom = {}
        for x in base.objects:
            for y in base.objects:
                hc = self.hom_cx(x, y)
                action = on_hom.get((x, y))
                if action is None:
                    action = zero_map(
                        base.hom[(x, y)].carrier, hc.module.carrier, 0
                    )
                if (
                    action.degree != 0
                    or action.source != base.hom[(x, y)].carrier
                    or action.target != hc.module.carrier
                ):
                    raise StructureError(
                        f"action of {name} on hom({x},{y}) has the wrong shape"
                    )
                self.on_hom[(x, y)] = action
        self._basis_map_cache = {}

    @property
    def field(self):
        return self.base.field

    def hom_cx(self, x, y):
        key = (x, y)
        if key not in self._hom_cx:
            self._hom_cx[key] = HomComplex(self.on_objects[x], self.on_objects[y])
        return self._hom_cx[key]

    def module_at(self, obj):
        return self.on_objects[obj]

    def map_of(self, element):
        """The graded map F(element): F(source) -> F(target)."""
        hc = self.hom_cx(element.source, element.target)
        vec = self.on_hom[(element.source, element.target)].apply(
            element.degree, element.coords
        )
        return hc.decode(element.degree, vec)

    def map_of_basis(self, x, y, degree, index):
        key = (x, y, degree, index)
        cached = self._basis_map_cache.get(key)
        if cached is None:
            cached = self.map_of(self.base.basis_element(x, y, degree, index))
            self._basis_map_cache[key] = cached
        return cached

    def is_zero(self):
        return all(m.is_zero() for m in self.on_objects.values())

    def __repr__(self):
        return f"DgFunctor({self.name} over {self.base.name})"


def zero_functor(base, name="0"):
    return DgFunctor(base, {}, {}, name=name)


def validate_dg_functor(fun):
    """PASS/FAIL per axiom: chain map, units, functoriality on basis pairs."""
    base = fun.base
    field = base.field
    report = Report(f"dg-functor {fun.name}")

    witness = None
    for x in base.objects:
        bad = fun.on_objects[x].d_squared_witness()
        if bad is not None:
            witness = {"object": x, "degree": bad}
            break
    report.add("values_d_squared", witness is None, witness)

    witness = None
    for x in base.objects:
        for y in base.objects:
            action = fun.on_hom[(x, y)]
            hc = fun.hom_cx(x, y)
            lhs = action.compose(base.hom[(x, y)].d)
            rhs = hc.module.d.compose(action)
            if lhs != rhs:
                witness = {
                    "pair": [x, y],
                    "action_after_d": fmt_graded_map(lhs),
                    "d_after_action": fmt_graded_map(rhs),
                }
                break
        if witness:
            break
    report.add("chain_map", witness is None, witness)

    witness = None
    for x in base.objects:
        image = fun.map_of(base.identity(x))
        ident = identity_map(fun.on_objects[x].carrier)
        if image != ident:
            witness = {"object": x, "image_of_identity": fmt_graded_map(image)}
            break
    report.add("unit", witness is None, witness)

    witness = None
    for x in base.objects:
        for y in base.objects:
            for z in base.objects:
                if witness:
                    break
                for fd, fi in base.basis_elements(x, y):
                    if witness:
                        break
                    f_map = fun.map_of_basis(x, y, fd, fi)
                    for gd, gi in base.basis_elements(y, z):
                        g_map = fun.map_of_basis(y, z, gd, gi)
                        composite = base.element(
                            x,
                            z,
                            gd + fd,
                            _dense(
                                field,
                                base.compose_basis(x, y, z, gd, gi, fd, fi),
                                base.hom[(x, z)].dim(gd + fd),
                            ),
                        )
                        if fun.map_of(composite) != g_map.compose(f_map):
                            witness = {
                                "objects": [x, y, z],
                                "basis": [[fd, fi], [gd, gi]],
                                "image_of_composite": fmt_graded_map(
                                    fun.map_of(composite)
                                ),
                                "composite_of_images": fmt_graded_map(
                                    g_map.compose(f_map)
                                ),
                            }
                            break
    report.add("functoriality", witness is None, witness)
    return report


def _dense(field, sparse, dim):
    out = [field.zero()] * dim
    for k, v in sparse:
        out[k] = v
    return tuple(out)


class DgNatTransformation:
    """Degree-n family of component maps F(X) -> G(X)."""

    def __init__(self, source, target, degree, components):
        self.source = source
        self.target = target
        self.degree = degree
        self.components = {}
        for obj in source.base.objects:
            comp = components.get(obj)
            if comp is None:
                comp = zero_map(
                    source.on_objects[obj].carrier,
                    target.on_objects[obj].carrier,
                    degree,
                )
            if (
                comp.degree != degree
                or comp.source != source.on_objects[obj].carrier
                or comp.target != target.on_objects[obj].carrier
            ):
                raise StructureError(f"component at {obj} has the wrong shape")
            self.components[obj] = comp

    @property
    def field(self):
        return self.source.field

    def component(self, obj):
        return self.components[obj]

    def is_zero(self):
        return all(c.is_zero() for c in self.components.values())

    def add(self, other):
        return DgNatTransformation(
            self.source,
            self.target,
            self.degree,
            {
                obj: self.components[obj].add(other.components[obj])
                for obj in self.components
            },
        )

    def scale(self, c):
        return DgNatTransformation(
            self.source,
            self.target,
            self.degree,
            {obj: comp.scale(c) for obj, comp in self.components.items()},
        )

    def __eq__(self, other):
        return (
            isinstance(other, DgNatTransformation)
            and self.degree == other.degree
            and self.components == other.components
        )

    def __repr__(self):
        return f"DgNat(degree={self.degree})"


def naturality_witness(nat):
    """First basis morphism violating graded naturality, or None."""
    F, G = nat.source, nat.target
    base = F.base
    field = base.field
    n = nat.degree
    for x in base.objects:
        for y in base.objects:
            for m, k in base.basis_elements(x, y):
                f_map = F.map_of_basis(x, y, m, k)
                g_map = G.map_of_basis(x, y, m, k)
                lhs = g_map.compose(nat.components[x])
                rhs = nat.components[y].compose(f_map).scale(field.sign(n * m))
                if lhs != rhs:
                    return {
                        "pair": [x, y],
                        "basis": [m, k],
                        "G_f_after_eta": fmt_graded_map(lhs),
                        "signed_eta_after_F_f": fmt_graded_map(rhs),
                    }
    return None


def identity_nat(fun):
    return DgNatTransformation(
        fun,
        fun,
        0,
        {
            obj: identity_map(fun.on_objects[obj].carrier)
            for obj in fun.base.objects
        },
    )


def compose_nat(nu, eta):
    """Componentwise composite nu . eta; degrees add."""
    if eta.target is not nu.source and eta.target.on_objects != nu.source.on_objects:
        raise StructureError("transformations are not composable")
    return DgNatTransformation(
        eta.source,
        nu.target,
        nu.degree + eta.degree,
        {
            obj: nu.components[obj].compose(eta.components[obj])
            for obj in eta.components
        },
    )


def dgnat_differential(eta):
    """Componentwise Hom-complex differential of a transformation."""
    from .complexes import hom_differential

    return DgNatTransformation(
        eta.source,
        eta.target,
        eta.degree + 1,
        {
            obj: hom_differential(
                eta.source.on_objects[obj], eta.target.on_objects[obj], comp
            )
            for obj, comp in eta.components.items()
        },
    )


# ---------------------------------------------------------------------------
# the DgNat linear system


def nat_unknowns(F, G, n):
    """Deterministic unknown keys (object, source degree, row, col)."""
    keys = []
    for obj in F.base.objects:
        src = F.on_objects[obj].carrier
        tgt = G.on_objects[obj].carrier
        for i in src.degrees():
            rows = tgt.dim(i + n)
            cols = src.dim(i)
            for r in range(rows):
                for c in range(cols):
                    keys.append((obj, i, r, c))
    return keys


def dgnat_window(F, G):
    """Degrees where a transformation could be nonzero by shape."""
    lo, hi = None, None
    for obj in F.base.objects:
        sw = F.on_objects[obj].carrier.window()
        tw = G.on_objects[obj].carrier.window()
        if sw is None or tw is None:
            continue
        cand_lo = tw[0] - sw[1]
        cand_hi = tw[1] - sw[0]
        lo = cand_lo if lo is None else min(lo, cand_lo)
        hi = cand_hi if hi is None else max(hi, cand_hi)
    if lo is None:
        return ()
    return range(lo, hi + 1)


def naturality_rows(F, G, n, tag):
    """Linear constraints expressing graded naturality for degree-n families.

    Unknowns are tagged (tag, object, source degree, row, col).  Rows are
    generated per homogeneous basis morphism and per identity element;
    the solver deduplicates.
    """
    base = F.base
    field = base.field
    elements = []
    for x in base.objects:
        for y in base.objects:
            for m, k in base.basis_elements(x, y):
                elements.append((x, y, base.basis_element(x, y, m, k)))
        ident = base.identity(x)
        if not ident.is_zero(field):
            elements.append((x, x, ident))
    for x, y, morphism in elements:
        m = morphism.degree
        f_map = F.map_of(morphism)
        g_map = G.map_of(morphism)
        sgn = field.neg(field.sign(n * m))
        fx = F.on_objects[x].carrier
        fy = F.on_objects[y].carrier
        gx = G.on_objects[x].carrier
        gy = G.on_objects[y].carrier
        for i in fx.degrees():
            cols = fx.dim(i)
            rows = gy.dim(i + n + m)
            if rows == 0 or cols == 0:
                continue
            g_block = g_map.block(i + n)
            f_block = f_map.block(i)
            for r in range(rows):
                for c in range(cols):
                    row = {}
                    for s in range(gx.dim(i + n)):
                        coeff = g_block[r][s]
                        if not field.is_zero(coeff):
                            key = (tag, x, i, s, c)
                            row[key] = field.add(row.get(key, field.zero()), coeff)
                    for s in range(fy.dim(i + m)):
                        coeff = f_block[s][c]
                        if not field.is_zero(coeff):
                            key = (tag, y, i + m, r, s)
                            row[key] = field.add(
                                row.get(key, field.zero()), field.mul(sgn, coeff)
                            )
                    if row:
                        yield row


def nat_from_flat(F, G, n, keys, vec):
    field = F.base.field
    blocks = {}
    for key, value in zip(keys, vec):
        obj, i, r, c = key
        blocks.setdefault(obj, {}).setdefault(i, {})[(r, c)] = value
    components = {}
    for obj in F.base.objects:
        src = F.on_objects[obj].carrier
        tgt = G.on_objects[obj].carrier
        per_degree = {}
        for i, entries in blocks.get(obj, {}).items():
            rows = tgt.dim(i + n)
            cols = src.dim(i)
            block = [[field.zero()] * cols for _ in range(rows)]
            for (r, c), value in entries.items():
                block[r][c] = value
            per_degree[i] = block
        components[obj] = GradedMap(src, tgt, n, per_degree)
    return DgNatTransformation(F, G, n, components)


def nat_to_flat(F, G, n, keys, nat):
    out = []
    for obj, i, r, c in keys:
        out.append(nat.components[obj].block(i)[r][c])
    return tuple(out)


def dgnat_space(F, G, n):
    """Exact basis of the degree-n transformation space.

    Returns (basis keys, flat solution vectors, transformations); every
    solution satisfies every naturality constraint exactly.
    """
    if F.base is not G.base and F.base.objects != G.base.objects:
        raise StructureError("functors live over different bases")
    field = F.base.field
    keys = nat_unknowns(F, G, n)
    tagged = [("n",) + k for k in keys]
    rows = naturality_rows(F, G, n, "n")
    solutions = linalg.solve_linear(field, tagged, rows)
    nats = [nat_from_flat(F, G, n, keys, vec) for vec in solutions]
    return keys, solutions, nats


def encode_nat_in_basis(F, G, n, keys, basis_vectors, nat):
    """Coordinates of a transformation in a dgnat basis; None if outside."""
    field = F.base.field
    target = nat_to_flat(F, G, n, keys, nat)
    return linalg.solve_in_span(field, list(basis_vectors), target)


# ---------------------------------------------------------------------------
# canonical functors


def representable_module(cat, origin, name=None):
    """The covariant module hom(origin, -) with post-composition action."""
    field = cat.field
    name = name or f"h[{origin}]"
    on_objects = {obj: cat.hom[(origin, obj)] for obj in cat.objects}
    fun = DgFunctor(cat, on_objects, {}, name=name)
    on_hom = {}
    for y in cat.objects:
        for z in cat.objects:
            hc = fun.hom_cx(y, z)
            source = cat.hom[(y, z)].carrier

            def column(m, k, _y=y, _z=z, _hc=hc):
                gmap = _action_map(cat, origin, _y, _z, m, k)
                return _hc.encode(gmap)

            from .graded import map_from_action

            on_hom[(y, z)] = map_from_action(source, hc.module.carrier, 0, column)
    return DgFunctor(cat, on_objects, on_hom, name=name)


def _action_map(cat, origin, y, z, m, k):
    """hom(origin, y) -> hom(origin, z) by post-composition with basis (m, k)."""
    field = cat.field
    src = cat.hom[(origin, y)].carrier
    tgt = cat.hom[(origin, z)].carrier

    def column(i, j):
        sparse = cat.compose_basis(origin, y, z, m, k, i, j)
        return _dense(field, sparse, tgt.dim(i + m))

    from .graded import map_from_action

    return map_from_action(src, tgt, m, column)


def yoneda_module(cat, origin, opposite=None, name=None):
    """hom(-, origin) over the opposite category, with the Koszul sign.

    The contravariant action sends a basis morphism f of degree m to
    j |-> (-1)^{m |j|} j . f.
    """
    field = cat.field
    opp = opposite if opposite is not None else opposite_category(cat)
    name = name or f"y[{origin}]"
    on_objects = {obj: cat.hom[(obj, origin)] for obj in cat.objects}
    fun = DgFunctor(opp, on_objects, {}, name=name)
    on_hom = {}
    for x in opp.objects:
        for y in opp.objects:
            # a morphism x -> y in the opposite category is f: y -> x here
            hc = fun.hom_cx(x, y)
            source = opp.hom[(x, y)].carrier

            def column(m, k, _x=x, _y=y, _hc=hc):
                gmap = _yoneda_action_map(cat, origin, _x, _y, m, k)
                return _hc.encode(gmap)

            from .graded import map_from_action

            on_hom[(x, y)] = map_from_action(source, hc.module.carrier, 0, column)
    return DgFunctor(opp, on_objects, on_hom, name=name)


def _yoneda_action_map(cat, origin, x, y, m, k):
    field = cat.field
    src = cat.hom[(x, origin)].carrier
    tgt = cat.hom[(y, origin)].carrier

    def column(i, j):
        # j-th basis element of hom(x, origin)^i, precomposed with
        # f = basis (m, k) of hom(y, x), signed by (-1)^{m i}.
        sparse = cat.compose_basis(y, x, origin, i, j, m, k)
        dense = _dense(field, sparse, tgt.dim(i + m))
        sgn = field.sign(m * i)
        return tuple(field.mul(sgn, v) for v in dense)

    from .graded import map_from_action

    return map_from_action(src, tgt, m, column)


def direct_sum_functors(funs, name=None):
    """Objectwise direct sum of dg-functors over a common base."""
    funs = list(funs)
    base = funs[0].base
    name = name or "(+)".join(f.name for f in funs)
    sums = {}
    on_objects = {}
    for obj in base.objects:
        parts = [f.on_objects[obj] for f in funs]
        ds = DirectSum([p.carrier for p in parts])
        from .complexes import DgModule

        diff = ds.block_diag([p.d for p in parts], degree=1)
        sums[obj] = ds
        on_objects[obj] = DgModule(ds.module, diff, check=False)
    result = DgFunctor(base, on_objects, {}, name=name)
    on_hom = {}
    for x in base.objects:
        for y in base.objects:
            hc = result.hom_cx(x, y)
            source = base.hom[(x, y)].carrier

            def column(m, k, _x=x, _y=y, _hc=hc):
                maps = [f.map_of_basis(_x, _y, m, k) for f in funs]
                combined = block_diag_between(sums[_x], sums[_y], maps, degree=m)
                return _hc.encode(combined)

            from .graded import map_from_action

            on_hom[(x, y)] = map_from_action(source, hc.module.carrier, 0, column)
    return DgFunctor(base, on_objects, on_hom, name=name), sums
