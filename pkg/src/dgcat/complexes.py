"""Dg K-modules and the two workhorse complexes built from them.

The Hom complex carries the differential d(a) = d_N . a - (-1)^|a| a . d_M
on graded maps; the tensor complex carries d(m (x) n) = d(m) (x) n +
(-1)^|m| m (x) d(n) on pure tensors.  Both come with deterministic bases:
Hom^n is spanned by elementary maps ordered by (source degree, source
index, target index); (M (x) N)^n by pure tensors ordered by (left degree,
left index, right index).
"""

from __future__ import annotations

from .errors import StructureError
from .graded import GradedMap, GradedModule, map_from_action, zero_module


class DgModule:
    """A graded module with a degree +1 differential squaring to zero."""

    __slots__ = ("carrier", "d")

    def __init__(self, carrier, d, check=True):
        if d.source != carrier or d.target != carrier or d.degree != 1:
            raise StructureError("differential must be a degree +1 endomorphism")
        self.carrier = carrier
        self.d = d
        if check:
            witness = self.d_squared_witness()
            if witness is not None:
                raise StructureError(
                    f"differential does not square to zero at degree {witness}"
                )

    @property
    def field(self):
        return self.carrier.field

    def d_squared_witness(self):
        """First degree where d . d has a nonzero block, or None."""
        dd = self.d.compose(self.d)
        if dd.blocks:
            return min(dd.blocks)
        return None

    def dim(self, n):
        return self.carrier.dim(n)

    def is_zero(self):
        return self.carrier.is_zero()

    def __eq__(self, other):
        return (
            isinstance(other, DgModule)
            and self.carrier == other.carrier
            and self.d == other.d
        )

    def __hash__(self):
        return hash((self.carrier, self.d))

    def __repr__(self):
        return f"DgModule({self.carrier.dims()})"


def zero_dg_module(field):
    z = zero_module(field)
    return DgModule(z, GradedMap(z, z, 1, {}), check=False)


def dg_module(field, dims, d_blocks, labels=None, check=True):
    carrier = GradedModule(field, dims, labels)
    return DgModule(carrier, GradedMap(carrier, carrier, 1, d_blocks), check=check)


def hom_differential(source, target, f):
    """Direct evaluation of d(f) = d_N . f - (-1)^|f| f . d_M on a graded map."""
    field = f.field
    left = target.d.compose(f)
    right = f.compose(source.d).scale(field.sign(f.degree))
    return left.sub(right)


def is_closed_degree_zero(source, target, f):
    """True iff f has degree 0 and commutes with the differentials."""
    if f.degree != 0:
        return False
    return hom_differential(source, target, f).is_zero()


class HomComplex:
    """Hom(M, N) as a dg K-module with the elementary-map basis."""

    def __init__(self, source, target):
        if source.field != target.field:
            raise StructureError("hom complex over mismatched fields")
        self.source = source
        self.target = target
        field = source.field
        self._basis = {}
        dims = {}
        labels = {}
        src_w = source.carrier.window()
        tgt_w = target.carrier.window()
        if src_w and tgt_w:
            lo = tgt_w[0] - src_w[1]
            hi = tgt_w[1] - src_w[0]
            for n in range(lo, hi + 1):
                triples = []
                for i in source.carrier.degrees():
                    sd = source.dim(i)
                    td = target.dim(i + n)
                    if sd == 0 or td == 0:
                        continue
                    for a in range(sd):
                        for b in range(td):
                            triples.append((i, a, b))
                if triples:
                    self._basis[n] = tuple(triples)
                    dims[n] = len(triples)
                    labels[n] = tuple(
                        f"[{source.carrier.label(i, a)}=>{target.carrier.label(i + n, b)}]"
                        for (i, a, b) in triples
                    )
        carrier = GradedModule(field, dims, labels)
        self._carrier = carrier
        self._index = {
            n: {t: k for k, t in enumerate(ts)} for n, ts in self._basis.items()
        }
        d = map_from_action(carrier, carrier, 1, self._d_column)
        self.module = DgModule(carrier, d, check=False)

    def _d_column(self, n, k):
        field = self.source.field
        i, a, b = self._basis[n][k]
        out = [field.zero()] * self._carrier.dim(n + 1)
        index = self._index.get(n + 1, {})
        # d_N after the elementary map: column b of d_N at degree i + n.
        dn = self.target.d.block(i + n)
        for b2 in range(self.target.dim(i + n + 1)):
            key = (i, a, b2)
            if key in index and not field.is_zero(dn[b2][b]):
                out[index[key]] = field.add(out[index[key]], dn[b2][b])
        # minus (-1)^n times the elementary map after d_M: row a of d_M at i - 1.
        sgn = field.neg(field.sign(n))
        dm = self.source.d.block(i - 1)
        for a2 in range(self.source.dim(i - 1)):
            key = (i - 1, a2, b)
            if key in index and not field.is_zero(dm[a][a2]):
                out[index[key]] = field.add(
                    out[index[key]], field.mul(sgn, dm[a][a2])
                )
        return out

    def basis(self, n):
        return self._basis.get(n, ())

    def index(self, n, i, a, b):
        return self._index[n][(i, a, b)]

    def encode(self, gmap):
        """Coordinates of a graded map M -> N in the elementary basis."""
        if gmap.source != self.source.carrier or gmap.target != self.target.carrier:
            raise StructureError("graded map does not belong to this hom complex")
        n = gmap.degree
        field = self.source.field
        out = [field.zero()] * self.module.dim(n)
        for k, (i, a, b) in enumerate(self.basis(n)):
            out[k] = gmap.block(i)[b][a]
        return tuple(out)

    def decode(self, n, vec):
        """The graded map of degree n with the given coordinates."""
        field = self.source.field
        if len(vec) != self.module.dim(n):
            raise StructureError(
                f"vector length {len(vec)} != hom dimension {self.module.dim(n)}"
            )
        blocks = {}
        for k, (i, a, b) in enumerate(self.basis(n)):
            x = vec[k]
            if field.is_zero(x):
                continue
            block = blocks.get(i)
            if block is None:
                block = [
                    [field.zero()] * self.source.dim(i)
                    for _ in range(self.target.dim(i + n))
                ]
                blocks[i] = block
            block[b][a] = field.add(block[b][a], x)
        return GradedMap(self.source.carrier, self.target.carrier, n, blocks)


class TensorComplex:
    """M (x) N as a dg K-module with the pure-tensor basis."""

    def __init__(self, left, right):
        if left.field != right.field:
            raise StructureError("tensor complex over mismatched fields")
        self.left = left
        self.right = right
        field = left.field
        self._basis = {}
        dims = {}
        labels = {}
        lw = left.carrier.window()
        rw = right.carrier.window()
        if lw and rw:
            for n in range(lw[0] + rw[0], lw[1] + rw[1] + 1):
                triples = []
                for i in left.carrier.degrees():
                    j = n - i
                    ld = left.dim(i)
                    rd = right.dim(j)
                    if ld == 0 or rd == 0:
                        continue
                    for a in range(ld):
                        for b in range(rd):
                            triples.append((i, a, b))
                if triples:
                    self._basis[n] = tuple(triples)
                    dims[n] = len(triples)
                    labels[n] = tuple(
                        f"[{left.carrier.label(i, a)}(x){right.carrier.label(n - i, b)}]"
                        for (i, a, b) in triples
                    )
        carrier = GradedModule(field, dims, labels)
        self._carrier = carrier
        self._index = {
            n: {t: k for k, t in enumerate(ts)} for n, ts in self._basis.items()
        }
        d = map_from_action(carrier, carrier, 1, self._d_column)
        self.module = DgModule(carrier, d, check=False)

    def _d_column(self, n, k):
        field = self.left.field
        i, a, b = self._basis[n][k]
        j = n - i
        out = [field.zero()] * self._carrier.dim(n + 1)
        index = self._index.get(n + 1, {})
        dl = self.left.d.block(i)
        for a2 in range(self.left.dim(i + 1)):
            key = (i + 1, a2, b)
            if key in index and not field.is_zero(dl[a2][a]):
                out[index[key]] = field.add(out[index[key]], dl[a2][a])
        sgn = field.sign(i)
        dr = self.right.d.block(j)
        for b2 in range(self.right.dim(j + 1)):
            key = (i, a, b2)
            if key in index and not field.is_zero(dr[b2][b]):
                out[index[key]] = field.add(
                    out[index[key]], field.mul(sgn, dr[b2][b])
                )
        return out

    def basis(self, n):
        return self._basis.get(n, ())

    def index(self, n, i, a, b):
        return self._index[n][(i, a, b)]

    def encode_pure(self, i, left_vec, j, right_vec):
        """Coordinates of left_vec (x) right_vec at degree i + j."""
        field = self.left.field
        n = i + j
        out = [field.zero()] * self.module.dim(n)
        if len(left_vec) != self.left.dim(i) or len(right_vec) != self.right.dim(j):
            raise StructureError("pure tensor factors have wrong lengths")
        for a, x in enumerate(left_vec):
            if field.is_zero(x):
                continue
            for b, y in enumerate(right_vec):
                if field.is_zero(y):
                    continue
                out[self._index[n][(i, a, b)]] = field.mul(x, y)
        return tuple(out)


def hom_complex(source, target):
    """The dg K-module Hom(source, target); see HomComplex for the basis."""
    return HomComplex(source, target)


def tensor_complex(left, right):
    """The dg K-module left (x) right; see TensorComplex for the basis."""
    return TensorComplex(left, right)


def tensor_differential_oracle(tcx, i, left_vec, j, right_vec):
    """Right-hand side of the tensor Leibniz rule, computed independently.

    Returns the coordinates of d(x (x) y) = d(x) (x) y + (-1)^i x (x) d(y)
    at degree i + j + 1 without touching the assembled differential matrix.
    """
    field = tcx.left.field
    dx = tcx.left.d.apply(i, left_vec)
    dy = tcx.right.d.apply(j, right_vec)
    first = tcx.encode_pure(i + 1, dx, j, right_vec)
    second = tcx.encode_pure(i, left_vec, j + 1, dy)
    sgn = field.sign(i)
    return tuple(
        field.add(u, field.mul(sgn, v)) for u, v in zip(first, second)
    )
