"""Dg-bimodules as two one-sided action families, and the functor G.

A bimodule over (U, T) assigns a dg K-module to each (U-object,
T-object) pair, a left action by U-morphisms and a right action by
T-morphisms (contravariant).  The two families must commute up to the
Koszul interchange sign; this is exactly the data equivalent to a
dg-functor out of U (x) T^op, and an optional round-trip to such a
functor is provided for cross-validation.

G sends a dg U-module B to the dg T-module T |-> Hom(M_T, B), with a
morphism t acting by eta |-> (-1)^{|eta||t|} eta . tbar where tbar is
the right action of t between slice functors.
"""

from __future__ import annotations

from .category import opposite_category, tensor_category
from .complexes import DgModule, HomComplex, zero_dg_module
from .errors import InternalCheckError, StructureError
from .graded import GradedModule, Homog, map_from_action, zero_map
from .functors import (
    DgFunctor,
    DgNatTransformation,
    compose_nat,
    dgnat_differential,
    dgnat_space,
    dgnat_window,
    validate_dg_functor,
)
from .report import Report, fmt_graded_map


class Bimodule:
    """Values plus left/right actions; see the module docstring."""

    def __init__(self, left_base, right_base, values, left_action, right_action, name="M"):
        if left_base.field != right_base.field:
            raise StructureError("bimodule bases over different fields")
        self.left_base = left_base      # U
        self.right_base = right_base    # T
        self.name = name
        field = left_base.field
        self.values = {}
        for u in left_base.objects:
            for t in right_base.objects:
                module = values.get((u, t))
                if module is None:
                    module = zero_dg_module(field)
                self.values[(u, t)] = module
        self._value_cx = {}
        self.left_action = {}
        self.right_action = {}
        for u in left_base.objects:
            for u2 in left_base.objects:
                for t in right_base.objects:
                    key = (u, u2, t)
                    action = left_action.get(key)
                    hc = self.value_cx(u, t, u2, t)
                    if action is None:
                        action = zero_map(
                            left_base.hom[(u, u2)].carrier, hc.module.carrier, 0
                        )
                    if (
                        action.degree != 0
                        or action.source != left_base.hom[(u, u2)].carrier
                        or action.target != hc.module.carrier
                    ):
                        raise StructureError(
                            f"left action at {key} has the wrong shape"
                        )
                    self.left_action[key] = action
        for t in right_base.objects:
            for t2 in right_base.objects:
                for u in left_base.objects:
                    key = (t, t2, u)
                    action = right_action.get(key)
                    hc = self.value_cx(u, t2, u, t)
                    if action is None:
                        action = zero_map(
                            right_base.hom[(t, t2)].carrier, hc.module.carrier, 0
                        )
                    if (
                        action.degree != 0
                        or action.source != right_base.hom[(t, t2)].carrier
                        or action.target != hc.module.carrier
                    ):
                        raise StructureError(
                            f"right action at {key} has the wrong shape"
                        )
                    self.right_action[key] = action
        self._opposite_right = None
        self._slice_t = {}
        self._slice_u = {}
        self._left_map_cache = {}
        self._right_map_cache = {}

    @property
    def field(self):
        return self.left_base.field

    def value(self, u, t):
        return self.values[(u, t)]

    def value_cx(self, u_src, t_src, u_tgt, t_tgt):
        """Cached Hom complex between two value modules."""
        key = (u_src, t_src, u_tgt, t_tgt)
        if key not in self._value_cx:
            self._value_cx[key] = HomComplex(
                self.values[(u_src, t_src)], self.values[(u_tgt, t_tgt)]
            )
        return self._value_cx[key]

    def opposite_right_base(self):
        if self._opposite_right is None:
            self._opposite_right = opposite_category(self.right_base)
        return self._opposite_right

    def left_map(self, u_elem, t):
        """M(u (x) 1_t): M(source(u), t) -> M(target(u), t)."""
        hc = self.value_cx(u_elem.source, t, u_elem.target, t)
        vec = self.left_action[(u_elem.source, u_elem.target, t)].apply(
            u_elem.degree, u_elem.coords
        )
        return hc.decode(u_elem.degree, vec)

    def right_map(self, t_elem, u):
        """M(1_u (x) t^op): M(u, target(t)) -> M(u, source(t))."""
        hc = self.value_cx(u, t_elem.target, u, t_elem.source)
        vec = self.right_action[(t_elem.source, t_elem.target, u)].apply(
            t_elem.degree, t_elem.coords
        )
        return hc.decode(t_elem.degree, vec)

    def left_map_basis(self, u, u2, t, degree, index):
        key = (u, u2, t, degree, index)
        cached = self._left_map_cache.get(key)
        if cached is None:
            cached = self.left_map(
                self.left_base.basis_element(u, u2, degree, index), t
            )
            self._left_map_cache[key] = cached
        return cached

    def right_map_basis(self, t, t2, u, degree, index):
        key = (t, t2, u, degree, index)
        cached = self._right_map_cache.get(key)
        if cached is None:
            cached = self.right_map(
                self.right_base.basis_element(t, t2, degree, index), u
            )
            self._right_map_cache[key] = cached
        return cached

    def slice_t(self, t):
        """The dg U-module M_t: U |-> M(U, t)."""
        if t not in self._slice_t:
            on_objects = {u: self.values[(u, t)] for u in self.left_base.objects}
            on_hom = {
                (u, u2): self.left_action[(u, u2, t)]
                for u in self.left_base.objects
                for u2 in self.left_base.objects
            }
            self._slice_t[t] = DgFunctor(
                self.left_base, on_objects, on_hom, name=f"{self.name}_{t}"
            )
        return self._slice_t[t]

    def slice_u(self, u):
        """The dg T^op-module M_u: T |-> M(u, T)."""
        if u not in self._slice_u:
            opp = self.opposite_right_base()
            on_objects = {t: self.values[(u, t)] for t in self.right_base.objects}
            # hom_{T^op}(t, t2) = hom_T(t2, t); its basis element s: t2 -> t
            # acts by M(1_u (x) s^op): M(u, t) -> M(u, t2).
            on_hom = {
                (t, t2): self.right_action[(t2, t, u)]
                for t in self.right_base.objects
                for t2 in self.right_base.objects
            }
            self._slice_u[u] = DgFunctor(
                opp, on_objects, on_hom, name=f"{self.name}^{u}"
            )
        return self._slice_u[u]

    def right_bullet(self, u, m, t_elem):
        """m . t := (-1)^{|t||m|} M(1_u (x) t^op)(m) for m in M(u, target(t))."""
        field = self.field
        rmap = self.right_map(t_elem, u)
        out = rmap.apply(m.degree, m.coords)
        sgn = field.sign(t_elem.degree * m.degree)
        return Homog(m.degree + t_elem.degree, tuple(field.mul(sgn, x) for x in out))

    def left_bullet(self, u_elem, t, m):
        """u . m := M(u (x) 1_t)(m) for m in M(source(u), t); no sign."""
        lmap = self.left_map(u_elem, t)
        out = lmap.apply(m.degree, m.coords)
        return Homog(m.degree + u_elem.degree, out)


def validate_bimodule(bim):
    """Slice functors, interchange sign, and the two-sided Leibniz identity."""
    field = bim.field
    report = Report(f"bimodule {bim.name}")
    U, T = bim.left_base, bim.right_base

    for t in T.objects:
        sub = validate_dg_functor(bim.slice_t(t))
        report.add(
            f"t_slice[{t}]",
            sub.passed,
            None if sub.passed else sub.first_failure().to_json(),
        )
    for u in U.objects:
        sub = validate_dg_functor(bim.slice_u(u))
        report.add(
            f"u_slice[{u}]",
            sub.passed,
            None if sub.passed else sub.first_failure().to_json(),
        )

    witness = None
    for u in U.objects:
        for u2 in U.objects:
            for t in T.objects:
                for t2 in T.objects:
                    if witness:
                        break
                    for ud, ui in U.basis_elements(u, u2):
                        if witness:
                            break
                        for td, ti in T.basis_elements(t, t2):
                            # both routes M(u, t2) -> M(u2, t)
                            via_left_first = bim.right_map_basis(
                                t, t2, u2, td, ti
                            ).compose(bim.left_map_basis(u, u2, t2, ud, ui))
                            via_right_first = bim.left_map_basis(
                                u, u2, t, ud, ui
                            ).compose(bim.right_map_basis(t, t2, u, td, ti))
                            sgn = field.sign(ud * td)
                            if via_left_first.scale(sgn) != via_right_first:
                                witness = {
                                    "u": [u, u2, ud, ui],
                                    "t": [t, t2, td, ti],
                                    "signed_t_after_u": fmt_graded_map(
                                        via_left_first.scale(sgn)
                                    ),
                                    "u_after_t": fmt_graded_map(via_right_first),
                                }
                                break
    report.add("interchange_sign", witness is None, witness)

    witness = None
    for u in U.objects:
        for u2 in U.objects:
            for t in T.objects:
                for t2 in T.objects:
                    if witness:
                        break
                    witness = _leibniz_witness(bim, u, u2, t, t2)
    report.add("two_sided_leibniz", witness is None, witness)
    return report


def _tensor_action(bim, alpha, beta):
    """M(alpha (x) beta^op) := M(alpha (x) 1) . M(1 (x) beta^op).

    alpha: U-morphism u -> u2, beta: T-morphism t -> t2; the composite
    maps M(u, t2) to M(u2, t).
    """
    return bim.left_map(alpha, beta.source).compose(bim.right_map(beta, alpha.source))


def _leibniz_witness(bim, u, u2, t, t2):
    """Check M(da (x) b) + (-1)^|a| M(a (x) db) = d.M(a (x) b) -
    (-1)^{|a|+|b|} M(a (x) b).d on basis pairs."""
    field = bim.field
    U, T = bim.left_base, bim.right_base
    for ud, ui in U.basis_elements(u, u2):
        alpha = U.basis_element(u, u2, ud, ui)
        d_alpha = U.differential(alpha)
        for td, ti in T.basis_elements(t, t2):
            beta = T.basis_element(t, t2, td, ti)
            d_beta = T.differential(beta)
            lhs = _tensor_action(bim, d_alpha, beta).add(
                _tensor_action(bim, alpha, d_beta).scale(field.sign(ud))
            )
            action = _tensor_action(bim, alpha, beta)
            rhs = bim.values[(u2, t)].d.compose(action).sub(
                action.compose(bim.values[(u, t2)].d).scale(field.sign(ud + td))
            )
            if lhs != rhs:
                return {
                    "u": [u, u2, ud, ui],
                    "t": [t, t2, td, ti],
                    "lhs": fmt_graded_map(lhs),
                    "rhs": fmt_graded_map(rhs),
                }
    return None


def bimodule_to_tensor_functor(bim, name=None):
    """Round-trip view of the bimodule as a module over U (x) T^op.

    Used for cross-validation: the result must pass validate_dg_functor,
    which re-derives the interchange and Leibniz identities from the
    tensor-category axioms.
    """
    U, T = bim.left_base, bim.right_base
    field = bim.field
    opp = bim.opposite_right_base()
    base = tensor_category(U, opp, name=f"({U.name})x({T.name}.op)")
    name = name or f"{bim.name}~tensor"
    pair_of = {}
    for u in U.objects:
        for t in T.objects:
            pair_of[f"({u},{t})"] = (u, t)
    on_objects = {
        obj: bim.values[pair_of[obj]] for obj in base.objects
    }
    fun = DgFunctor(base, on_objects, {}, name=name)
    on_hom = {}
    for p in base.objects:
        for q in base.objects:
            u, t = pair_of[p]
            u2, t2 = pair_of[q]
            hc = fun.hom_cx(p, q)
            source = base.hom[(p, q)].carrier
            # basis of hom((u,t),(u2,t2)) = hom_U(u,u2) (x) hom_{T^op}(t,t2)
            # decodes through the tensor complex of the product category
            tensor = base._tensor_cache.get(("__decode__", p, q))
            from .complexes import TensorComplex

            tensor = TensorComplex(U.hom[(u, u2)], opp.hom[(t, t2)])

            def column(n, k, _tensor=tensor, _u=u, _u2=u2, _t=t, _t2=t2, _hc=hc):
                ud, uidx, tidx = _tensor.basis(n)[k]
                td = n - ud
                alpha = U.basis_element(_u, _u2, ud, uidx)
                # hom_{T^op}(t, t2) = hom_T(t2, t): basis is beta: t2 -> t
                beta = T.basis_element(_t2, _t, td, tidx)
                return _hc.encode(_tensor_action(bim, alpha, beta))

            on_hom[(p, q)] = map_from_action(source, hc.module.carrier, 0, column)
    return DgFunctor(base, on_objects, on_hom, name=name)


# ---------------------------------------------------------------------------
# the functor G


class GModule:
    """G(B) over T together with the transformation bases of its carriers."""

    def __init__(self, bim, B):
        self.bimodule = bim
        self.B = B
        field = bim.field
        T = bim.right_base
        self.keys = {}
        self.basis_vectors = {}
        self.nat_basis = {}
        dims_per_object = {}
        for t in T.objects:
            slice_t = bim.slice_t(t)
            window = dgnat_window(slice_t, B)
            dims = {}
            for n in window:
                keys, vecs, nats = dgnat_space(slice_t, B, n)
                self.keys[(t, n)] = keys
                self.basis_vectors[(t, n)] = vecs
                self.nat_basis[(t, n)] = nats
                if nats:
                    dims[n] = len(nats)
            dims_per_object[t] = dims
        on_objects = {}
        for t in T.objects:
            carrier = GradedModule(
                field,
                dims_per_object[t],
                labels={
                    n: tuple(f"nat{n}_{k}" for k in range(d))
                    for n, d in dims_per_object[t].items()
                },
            )
            diff = map_from_action(
                carrier, carrier, 1, lambda n, k, _t=t: self._d_column(_t, n, k)
            )
            on_objects[t] = DgModule(carrier, diff, check=False)
        self._on_objects = on_objects
        fun = DgFunctor(T, on_objects, {}, name=f"G({B.name})")
        on_hom = {}
        for t in T.objects:
            for t2 in T.objects:
                hc = fun.hom_cx(t, t2)
                source = T.hom[(t, t2)].carrier

                def column(m, k, _t=t, _t2=t2, _hc=hc):
                    return _hc.encode(self._action_map(_t, _t2, m, k))

                on_hom[(t, t2)] = map_from_action(
                    source, hc.module.carrier, 0, column
                )
        self.functor = DgFunctor(T, on_objects, on_hom, name=f"G({B.name})")

    def _d_column(self, t, n, k):
        """Differential of a basis transformation, in the basis one degree up."""
        nat = self.nat_basis[(t, n)][k]
        image = dgnat_differential(nat)
        coords = self.encode(t, n + 1, image)
        if coords is None:
            raise InternalCheckError(
                "differential of a natural transformation left the computed basis"
            )
        return coords

    def decode(self, t, n, vec):
        """The transformation M_t -> B with the given carrier coordinates."""
        field = self.bimodule.field
        basis = self.nat_basis.get((t, n), [])
        slice_t = self.bimodule.slice_t(t)
        out = None
        for coeff, nat in zip(vec, basis):
            term = nat.scale(coeff)
            out = term if out is None else out.add(term)
        if out is None:
            out = DgNatTransformation(slice_t, self.B, n, {})
        return out

    def encode(self, t, n, nat):
        """Carrier coordinates of a transformation, or None if outside."""
        from .functors import encode_nat_in_basis

        keys = self.keys.get((t, n))
        if keys is None:
            flat_zero = all(c.is_zero() for c in nat.components.values())
            return () if flat_zero else None
        slice_t = self.bimodule.slice_t(t)
        return encode_nat_in_basis(
            slice_t, self.B, n, keys, self.basis_vectors[(t, n)], nat
        )

    def _action_map(self, t, t2, m, k):
        """G(B)(t basis element): eta |-> (-1)^{|eta||t|} eta . tbar."""
        bim = self.bimodule
        field = bim.field
        src = self._on_objects[t].carrier
        tgt = self._on_objects[t2].carrier
        # tbar: M_{t2} -> M_t has components M(1_u (x) t^op)
        tbar_components = {
            u: bim.right_map_basis(t, t2, u, m, k) for u in bim.left_base.objects
        }

        def column(n, j):
            eta = self.nat_basis[(t, n)][j]
            composed = {
                u: eta.components[u].compose(tbar_components[u])
                for u in bim.left_base.objects
            }
            slice_t2 = bim.slice_t(t2)
            candidate = DgNatTransformation(slice_t2, self.B, n + m, composed)
            sgn = field.sign(n * m)
            coords = self.encode(t2, n + m, candidate)
            if coords is None:
                raise InternalCheckError(
                    "composite with tbar left the transformation space"
                )
            return tuple(field.mul(sgn, x) for x in coords)

        return map_from_action(src, tgt, m, column)


def g_on_objects(bim, B):
    """G(B): the dg T-module of transformations out of the slices of M."""
    return GModule(bim, B)


def g_on_morphisms(bim, g_source, g_target, eps):
    """G(eps): postcomposition by eps, a transformation G(B) -> G(B')."""
    field = bim.field
    T = bim.right_base
    degree = eps.degree
    components = {}
    for t in T.objects:
        src = g_source.functor.on_objects[t].carrier
        tgt = g_target.functor.on_objects[t].carrier

        def column(n, j, _t=t):
            eta = g_source.nat_basis[(_t, n)][j]
            composed = compose_nat(eps, eta)
            coords = g_target.encode(_t, n + degree, composed)
            if coords is None:
                raise InternalCheckError(
                    "postcomposition left the transformation space"
                )
            return coords

        components[t] = map_from_action(src, tgt, degree, column)
    return DgNatTransformation(
        g_source.functor, g_target.functor, degree, components
    )
