"""Finite presentations of dg-categories and their validation.

A presentation lists objects, a dg K-module of morphisms for every
ordered object pair, a composition structure tensor per object triple
(a degree-0 map from the tensor complex hom(Y,Z) (x) hom(X,Y) into
hom(X,Z)), and the coordinates of each identity.  Validation checks,
in order: differentials square to zero, composition is a degree-0
chain map against the tensor differential, identities are cycles,
unit laws, and associativity on homogeneous basis triples.  All checks
extend to arbitrary morphisms by bilinearity, and the signs involved
depend only on degrees, so basis tuples decide everything.

The opposite category and the tensor product of two presentations
carry the Koszul signs: op-composition picks up (-1)^{|a||b|}, and
composition in a tensor product picks up (-1)^{|b2||a1|} from moving
b2 past a1.
"""

from __future__ import annotations

from dataclasses import dataclass

from .complexes import TensorComplex, zero_dg_module
from .errors import StructureError, ValidationFailure
from .graded import GradedMap
from .report import Report, fmt_vector

ZERO_OBJECT = "@0"


@dataclass(frozen=True)
class HomElement:
    """A homogeneous morphism: coordinates in hom(source, target)^degree."""

    source: str
    target: str
    degree: int
    coords: tuple

    def is_zero(self, field):
        return all(field.is_zero(x) for x in self.coords)


class DgCategoryPresentation:
    """Objects, hom dg-modules, composition tensors, identity coordinates."""

    def __init__(self, field, objects, hom, comp, ids, name="C"):
        self.field = field
        self.name = name
        self.objects = tuple(objects)
        if len(set(self.objects)) != len(self.objects):
            raise StructureError("duplicate object names")
        self.hom = {}
        for x in self.objects:
            for y in self.objects:
                module = hom.get((x, y))
                if module is None:
                    module = zero_dg_module(field)
                if module.field != field:
                    raise StructureError(f"hom({x},{y}) over the wrong field")
                self.hom[(x, y)] = module
        self._tensor_cache = {}
        self._pair_cache = {}
        self.set_comp(comp)
        self.ids = {}
        for x in self.objects:
            vec = ids.get(x)
            dim0 = self.hom[(x, x)].dim(0)
            if vec is None:
                if dim0 != 0:
                    raise StructureError(f"missing identity coordinates for {x}")
                vec = ()
            vec = tuple(vec)
            if len(vec) != dim0:
                raise StructureError(
                    f"identity of {x} has length {len(vec)}, expected {dim0}"
                )
            self.ids[x] = vec

    def set_comp(self, comp):
        """Install composition tensors (missing triples default to zero)."""
        self.comp = {}
        self._pair_cache.clear()
        for x in self.objects:
            for y in self.objects:
                for z in self.objects:
                    tensor = self.tensor_cx(x, y, z)
                    cmap = comp.get((x, y, z))
                    if cmap is None:
                        cmap = GradedMap(
                            tensor.module.carrier, self.hom[(x, z)].carrier, 0, {}
                        )
                    if (
                        cmap.degree != 0
                        or cmap.source != tensor.module.carrier
                        or cmap.target != self.hom[(x, z)].carrier
                    ):
                        raise StructureError(
                            f"composition tensor for ({x},{y},{z}) has the wrong shape"
                        )
                    self.comp[(x, y, z)] = cmap

    def tensor_cx(self, x, y, z):
        """Cached tensor complex hom(y,z) (x) hom(x,y)."""
        key = (x, y, z)
        if key not in self._tensor_cache:
            self._tensor_cache[key] = TensorComplex(self.hom[(y, z)], self.hom[(x, y)])
        return self._tensor_cache[key]

    def compose_basis(self, x, y, z, gdeg, gidx, fdeg, fidx):
        """Sparse composite of two basis morphisms: ((index, coeff), ...).

        The result lives in hom(x,z)^(gdeg+fdeg); entries are cached per
        presentation, which makes basis-tuple axiom sweeps cheap.
        """
        key = (x, y, z, gdeg, gidx, fdeg, fidx)
        cached = self._pair_cache.get(key)
        if cached is not None:
            return cached
        field = self.field
        tensor = self.tensor_cx(x, y, z)
        n = gdeg + fdeg
        cmap = self.comp[(x, y, z)]
        out = ()
        if self.hom[(x, z)].dim(n):
            col = tensor.index(n, gdeg, gidx, fidx)
            block = cmap.blocks.get(n)
            if block is not None:
                out = tuple(
                    (r, block[r][col])
                    for r in range(len(block))
                    if not field.is_zero(block[r][col])
                )
        self._pair_cache[key] = out
        return out

    def element(self, source, target, degree, coords):
        coords = tuple(coords)
        if len(coords) != self.hom[(source, target)].dim(degree):
            raise StructureError(
                f"element of hom({source},{target})^{degree} has wrong length"
            )
        return HomElement(source, target, degree, coords)

    def basis_element(self, source, target, degree, index):
        dim = self.hom[(source, target)].dim(degree)
        return HomElement(
            source,
            target,
            degree,
            tuple(
                self.field.one() if k == index else self.field.zero()
                for k in range(dim)
            ),
        )

    def basis_elements(self, source, target):
        for degree in self.hom[(source, target)].carrier.degrees():
            for index in range(self.hom[(source, target)].dim(degree)):
                yield degree, index

    def zero_element(self, source, target, degree):
        return self.element(
            source,
            target,
            degree,
            (self.field.zero(),) * self.hom[(source, target)].dim(degree),
        )

    def identity(self, x):
        return HomElement(x, x, 0, self.ids[x])

    def compose(self, g, f):
        """g after f, extended bilinearly from the structure tensor."""
        if f.target != g.source:
            raise StructureError(
                f"morphisms not composable: {f.source}->{f.target} then {g.source}->{g.target}"
            )
        field = self.field
        n = g.degree + f.degree
        out = [field.zero()] * self.hom[(f.source, g.target)].dim(n)
        for gi, gval in enumerate(g.coords):
            if field.is_zero(gval):
                continue
            for fi, fval in enumerate(f.coords):
                if field.is_zero(fval):
                    continue
                weight = field.mul(gval, fval)
                for r, coeff in self.compose_basis(
                    f.source, f.target, g.target, g.degree, gi, f.degree, fi
                ):
                    out[r] = field.add(out[r], field.mul(weight, coeff))
        return HomElement(f.source, g.target, n, tuple(out))

    def differential(self, e):
        out = self.hom[(e.source, e.target)].d.apply(e.degree, e.coords)
        return HomElement(e.source, e.target, e.degree + 1, out)

    def hom_is_zero(self, x, y):
        return self.hom[(x, y)].is_zero()


def validate_dg_category(cat):
    """Total axiom report: every axiom is checked even after a failure.

    Per axiom the witness is the first violating basis tuple together
    with both sides' coordinate vectors.
    """
    field = cat.field
    report = Report(f"dg-category {cat.name}")

    witness = None
    for (x, y), module in sorted(cat.hom.items()):
        bad = module.d_squared_witness()
        if bad is not None:
            witness = {"hom": [x, y], "degree": bad}
            break
    report.add("d_squared", witness is None, witness)

    witness = None
    for x in cat.objects:
        for y in cat.objects:
            for z in cat.objects:
                tensor = cat.tensor_cx(x, y, z)
                cmap = cat.comp[(x, y, z)]
                lhs = cmap.compose(tensor.module.d)
                rhs = cat.hom[(x, z)].d.compose(cmap)
                if lhs != rhs:
                    diff = lhs.sub(rhs)
                    deg = min(diff.blocks)
                    block = diff.blocks[deg]
                    col = next(
                        k
                        for k in range(len(block[0]))
                        if any(not field.is_zero(row[k]) for row in block)
                    )
                    gdeg, gidx, fidx = tensor.basis(deg)[col]
                    unit = _unit(field, tensor.module.dim(deg), col)
                    witness = {
                        "triple": [x, y, z],
                        "basis": {
                            "g": [gdeg, gidx],
                            "f": [deg - gdeg, fidx],
                        },
                        "comp_after_d": fmt_vector(field, lhs.apply(deg, unit)),
                        "d_after_comp": fmt_vector(field, rhs.apply(deg, unit)),
                    }
                    break
            if witness:
                break
        if witness:
            break
    report.add("composition_chain_map", witness is None, witness)

    witness = None
    for x in cat.objects:
        d_id = cat.differential(cat.identity(x))
        if not d_id.is_zero(field):
            witness = {"object": x, "d_of_identity": fmt_vector(field, d_id.coords)}
            break
    report.add("identity_closed", witness is None, witness)

    witness = None
    for x in cat.objects:
        for y in cat.objects:
            id_y = cat.identity(y)
            id_x = cat.identity(x)
            for degree, index in cat.basis_elements(x, y):
                f = cat.basis_element(x, y, degree, index)
                left = cat.compose(id_y, f)
                right = cat.compose(f, id_x)
                if left.coords != f.coords or right.coords != f.coords:
                    witness = {
                        "pair": [x, y],
                        "basis": [degree, index],
                        "id_then_f": fmt_vector(field, left.coords),
                        "f_then_id": fmt_vector(field, right.coords),
                        "f": fmt_vector(field, f.coords),
                    }
                    break
            if witness:
                break
        if witness:
            break
    report.add("units", witness is None, witness)

    witness = None
    for x in cat.objects:
        for y in cat.objects:
            for z in cat.objects:
                for w in cat.objects:
                    if witness:
                        break
                    witness = _associativity_witness(cat, x, y, z, w)
    report.add("associativity", witness is None, witness)
    return report


def _sparse_then(cat, x, y, z, gdeg, gidx, sparse, sdeg):
    """Sparse composite basis(gdeg, gidx) . (sparse vector at degree sdeg)."""
    field = cat.field
    acc = {}
    for fi, fval in sparse:
        for r, coeff in cat.compose_basis(x, y, z, gdeg, gidx, sdeg, fi):
            acc[r] = field.add(acc.get(r, field.zero()), field.mul(fval, coeff))
    return {k: v for k, v in acc.items() if not field.is_zero(v)}


def _sparse_after(cat, x, y, z, sparse, sdeg, fdeg, fidx):
    """Sparse composite (sparse vector at degree sdeg) . basis(fdeg, fidx)."""
    field = cat.field
    acc = {}
    for gi, gval in sparse:
        for r, coeff in cat.compose_basis(x, y, z, sdeg, gi, fdeg, fidx):
            acc[r] = field.add(acc.get(r, field.zero()), field.mul(gval, coeff))
    return {k: v for k, v in acc.items() if not field.is_zero(v)}


def _associativity_witness(cat, x, y, z, w):
    field = cat.field
    for fd, fi in cat.basis_elements(x, y):
        for gd, gi in cat.basis_elements(y, z):
            gf = cat.compose_basis(x, y, z, gd, gi, fd, fi)
            for hd, hi in cat.basis_elements(z, w):
                hg = cat.compose_basis(y, z, w, hd, hi, gd, gi)
                left = _sparse_then(cat, x, z, w, hd, hi, gf, gd + fd)
                right = _sparse_after(cat, x, y, w, hg, hd + gd, fd, fi)
                if left != right:
                    dim = cat.hom[(x, w)].dim(fd + gd + hd)
                    return {
                        "objects": [x, y, z, w],
                        "basis": [[fd, fi], [gd, gi], [hd, hi]],
                        "h_after_gf": fmt_vector(field, _densify(field, left, dim)),
                        "hg_after_f": fmt_vector(field, _densify(field, right, dim)),
                    }
    return None


def _densify(field, sparse_dict, dim):
    out = [field.zero()] * dim
    for k, v in sparse_dict.items():
        out[k] = v
    return tuple(out)


def _unit(field, n, k):
    return tuple(field.one() if i == k else field.zero() for i in range(n))


def require_valid_category(cat):
    report = validate_dg_category(cat)
    if not report.passed:
        raise ValidationFailure(
            f"dg-category {cat.name} failed validation: "
            f"{report.first_failure().name}",
            report,
        )
    return cat


def opposite_category(cat):
    """Same objects, reversed homs, composition with the (-1)^{|a||b|} sign."""
    field = cat.field
    hom = {(a, b): cat.hom[(b, a)] for a in cat.objects for b in cat.objects}
    opposite = DgCategoryPresentation(
        field, cat.objects, hom, {}, {x: cat.ids[x] for x in cat.objects},
        name=f"{cat.name}.op",
    )
    comp = {}
    for x in cat.objects:
        for y in cat.objects:
            for z in cat.objects:
                tensor = opposite.tensor_cx(x, y, z)
                target = opposite.hom[(x, z)].carrier

                def column(n, k, _x=x, _y=y, _z=z, _tensor=tensor):
                    # basis pair: b in hom(z,y)^p (the op-morphism y->z),
                    # a in hom(y,x)^q (the op-morphism x->y); compose a . b
                    # in the original category and twist by (-1)^{pq}.
                    p, ib, ia = _tensor.basis(n)[k]
                    q = n - p
                    b = cat.basis_element(_z, _y, p, ib)
                    a = cat.basis_element(_y, _x, q, ia)
                    out = cat.compose(a, b)
                    sgn = field.sign(p * q)
                    return tuple(field.mul(sgn, v) for v in out.coords)

                comp[(x, y, z)] = _comp_from_columns(
                    tensor.module.carrier, target, column
                )
    opposite.set_comp(comp)
    return opposite


def _comp_from_columns(source_carrier, target_carrier, column):
    from .graded import map_from_action

    return map_from_action(source_carrier, target_carrier, 0, column)


def tensor_category(cat_a, cat_b, name=None):
    """Product objects, tensor-complex homs, interchange-signed composition."""
    if cat_a.field != cat_b.field:
        raise StructureError("tensor product over mismatched fields")
    field = cat_a.field
    name = name or f"({cat_a.name})x({cat_b.name})"
    objects = []
    pair_of = {}
    for xa in cat_a.objects:
        for xb in cat_b.objects:
            obj = f"({xa},{xb})"
            objects.append(obj)
            pair_of[obj] = (xa, xb)

    hom_tensors = {}
    hom = {}
    for p in objects:
        for q in objects:
            xa, xb = pair_of[p]
            ya, yb = pair_of[q]
            tensor = TensorComplex(cat_a.hom[(xa, ya)], cat_b.hom[(xb, yb)])
            hom_tensors[(p, q)] = tensor
            hom[(p, q)] = tensor.module

    ids = {}
    for p in objects:
        xa, xb = pair_of[p]
        tensor = hom_tensors[(p, p)]
        ids[p] = tensor.encode_pure(0, cat_a.ids[xa], 0, cat_b.ids[xb])

    result = DgCategoryPresentation(field, objects, hom, {}, ids, name=name)
    comp = {}
    for p in objects:
        for q in objects:
            for r in objects:
                tensor = result.tensor_cx(p, q, r)
                target_tensor = hom_tensors[(p, r)]
                g_tensor = hom_tensors[(q, r)]
                f_tensor = hom_tensors[(p, q)]
                xa, xb = pair_of[p]
                ya, yb = pair_of[q]
                za, zb = pair_of[r]

                def column(
                    n,
                    k,
                    _tensor=tensor,
                    _gt=g_tensor,
                    _ft=f_tensor,
                    _tt=target_tensor,
                    _xa=xa,
                    _xb=xb,
                    _ya=ya,
                    _yb=yb,
                    _za=za,
                    _zb=zb,
                ):
                    gdeg, gidx, fidx = _unpack_pair(_tensor, n, k)
                    fdeg = n - gdeg
                    p2, ia2, ib2 = _gt.basis(gdeg)[gidx]
                    q2 = gdeg - p2
                    p1, ia1, ib1 = _ft.basis(fdeg)[fidx]
                    q1 = fdeg - p1
                    alpha = cat_a.compose(
                        cat_a.basis_element(_ya, _za, p2, ia2),
                        cat_a.basis_element(_xa, _ya, p1, ia1),
                    )
                    beta = cat_b.compose(
                        cat_b.basis_element(_yb, _zb, q2, ib2),
                        cat_b.basis_element(_xb, _yb, q1, ib1),
                    )
                    out = _tt.encode_pure(p2 + p1, alpha.coords, q2 + q1, beta.coords)
                    sgn = field.sign(q2 * p1)
                    return tuple(field.mul(sgn, v) for v in out)

                comp[(p, q, r)] = _comp_from_columns(
                    tensor.module.carrier, hom[(p, r)].carrier, column
                )
    result.set_comp(comp)
    return result


def _unpack_pair(tensor, n, k):
    gdeg, gidx, fidx = tensor.basis(n)[k]
    return gdeg, gidx, fidx


def with_zero_object(cat, marker=ZERO_OBJECT):
    """Adjoin a formal object with all-zero hom spaces."""
    if marker in cat.objects:
        raise StructureError(f"object name {marker!r} is reserved")
    objects = cat.objects + (marker,)
    hom = dict(cat.hom)
    comp = dict(cat.comp)
    ids = dict(cat.ids)
    ids[marker] = ()
    out = DgCategoryPresentation(
        cat.field, objects, hom, comp, ids, name=f"{cat.name}+0"
    )
    return out


def one_object_category(field, hom_module, comp_map, id_coords, name="A", obj="*"):
    """A dg-algebra presented as a one-object dg-category."""
    return DgCategoryPresentation(
        field,
        (obj,),
        {(obj, obj): hom_module},
        {(obj, obj, obj): comp_map},
        {obj: id_coords},
        name=name,
    )
