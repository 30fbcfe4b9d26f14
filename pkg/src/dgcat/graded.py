"""Graded modules over an exact field and degree-homogeneous maps.

A GradedModule is a finitely supported map degree -> dimension with
stable basis labels.  A GradedMap of degree n is a sparse family of
blocks, one matrix per source degree i, sending degree i to i + n;
an absent block is the zero block.
"""

from __future__ import annotations

from dataclasses import dataclass

from . import linalg
from .errors import StructureError


class GradedModule:
    """Finitely supported degree -> dimension table with basis labels."""

    __slots__ = ("field", "_dims", "_labels")

    def __init__(self, field, dims, labels=None):
        self.field = field
        clean = {}
        for deg, dim in dims.items():
            if not isinstance(deg, int):
                raise StructureError(f"degree must be an int: {deg!r}")
            if not isinstance(dim, int) or dim < 0:
                raise StructureError(f"dimension must be a non-negative int: {dim!r}")
            if dim > 0:
                clean[deg] = dim
        self._dims = dict(sorted(clean.items()))
        self._labels = {}
        if labels:
            for deg, names in labels.items():
                if deg in self._dims:
                    if len(names) != self._dims[deg]:
                        raise StructureError(
                            f"{len(names)} labels for dimension {self._dims[deg]} at degree {deg}"
                        )
                    self._labels[deg] = tuple(str(x) for x in names)

    def dim(self, degree):
        return self._dims.get(degree, 0)

    def degrees(self):
        return tuple(self._dims)

    def dims(self):
        return dict(self._dims)

    def total_dim(self):
        return sum(self._dims.values())

    def is_zero(self):
        return not self._dims

    def window(self):
        """(lo, hi) support bounds, or None for the zero module."""
        if not self._dims:
            return None
        keys = list(self._dims)
        return (keys[0], keys[-1])

    def label(self, degree, index):
        if degree in self._labels:
            return self._labels[degree][index]
        return f"e{degree}_{index}"

    def labels_at(self, degree):
        return tuple(self.label(degree, i) for i in range(self.dim(degree)))

    def __eq__(self, other):
        return (
            isinstance(other, GradedModule)
            and self.field == other.field
            and self._dims == other._dims
        )

    def __hash__(self):
        return hash((self.field, tuple(self._dims.items())))

    def __repr__(self):
        return f"GradedModule({self._dims})"


def zero_module(field):
    return GradedModule(field, {})


class GradedMap:
    """Degree-homogeneous linear map between graded modules.

    blocks[i] is the matrix of the component source^i -> target^(i+degree);
    blocks with a zero-dimensional side or all-zero entries are dropped at
    construction, so equality is plain data equality.
    """

    __slots__ = ("source", "target", "degree", "blocks")

    def __init__(self, source, target, degree, blocks):
        if source.field != target.field:
            raise StructureError("source and target live over different fields")
        self.source = source
        self.target = target
        self.degree = degree
        field = source.field
        clean = {}
        for i, block in blocks.items():
            nr, nc = len(block), len(block[0]) if block else 0
            want = (target.dim(i + degree), source.dim(i))
            if (nr, nc) != want:
                raise StructureError(
                    f"block at degree {i} has shape {(nr, nc)}, expected {want}"
                )
            if nr == 0 or nc == 0:
                continue
            if linalg.is_zero_matrix(field, block):
                continue
            clean[i] = linalg.freeze(block)
        self.blocks = dict(sorted(clean.items()))

    @property
    def field(self):
        return self.source.field

    def block(self, i):
        if i in self.blocks:
            return self.blocks[i]
        return linalg.zeros(self.field, self.target.dim(i + self.degree), self.source.dim(i))

    def apply(self, i, vec):
        """Image of a degree-i coordinate vector; lands in degree i + degree."""
        if len(vec) != self.source.dim(i):
            raise StructureError(
                f"vector length {len(vec)} != source dimension {self.source.dim(i)} at degree {i}"
            )
        tdim = self.target.dim(i + self.degree)
        if tdim == 0:
            return ()
        if i not in self.blocks:
            return (self.field.zero(),) * tdim
        return linalg.mat_vec(self.field, self.blocks[i], vec)

    def is_zero(self):
        return not self.blocks

    def compose(self, other):
        return compose_graded(self, other)

    def add(self, other):
        if (self.source, self.target, self.degree) != (
            other.source,
            other.target,
            other.degree,
        ):
            raise StructureError("cannot add maps of different shapes")
        field = self.field
        out = {}
        for i in set(self.blocks) | set(other.blocks):
            out[i] = linalg.mat_add(field, self.block(i), other.block(i))
        return GradedMap(self.source, self.target, self.degree, out)

    def sub(self, other):
        return self.add(other.scale(self.field.neg(self.field.one())))

    def scale(self, c):
        out = {i: linalg.mat_scale(self.field, c, b) for i, b in self.blocks.items()}
        return GradedMap(self.source, self.target, self.degree, out)

    def __eq__(self, other):
        return (
            isinstance(other, GradedMap)
            and self.source == other.source
            and self.target == other.target
            and self.degree == other.degree
            and self.blocks == other.blocks
        )

    def __hash__(self):
        return hash((self.source, self.target, self.degree, tuple(self.blocks)))

    def __repr__(self):
        return f"GradedMap(degree={self.degree}, blocks at {list(self.blocks)})"


def zero_map(source, target, degree):
    return GradedMap(source, target, degree, {})


def identity_map(module):
    blocks = {
        i: linalg.identity(module.field, module.dim(i)) for i in module.degrees()
    }
    return GradedMap(module, module, 0, blocks)


def compose_graded(g, f):
    """g after f; degrees add, block_i(g . f) = block_{i+deg f}(g) . block_i(f)."""
    if f.target != g.source:
        raise StructureError("maps are not composable: target/source mismatch")
    field = f.field
    out = {}
    for i in f.blocks:
        j = i + f.degree
        if g.target.dim(j + g.degree) == 0:
            continue
        out[i] = linalg.mat_mul(field, g.block(j), f.blocks[i])
    return GradedMap(f.source, g.target, f.degree + g.degree, out)


def map_from_action(source, target, degree, action):
    """Assemble a GradedMap from its action on source basis vectors.

    action(i, k) must return the image coordinates (length target.dim(i +
    degree)) of the k-th basis vector of source^i.
    """
    field = source.field
    blocks = {}
    for i in source.degrees():
        rows = target.dim(i + degree)
        cols = source.dim(i)
        if rows == 0:
            continue
        block = [[field.zero()] * cols for _ in range(rows)]
        for k in range(cols):
            image = action(i, k)
            if len(image) != rows:
                raise StructureError(
                    f"action at degree {i} returned length {len(image)}, expected {rows}"
                )
            for r, x in enumerate(image):
                block[r][k] = x
        blocks[i] = block
    return GradedMap(source, target, degree, blocks)


def kernel(f):
    """Degreewise exact kernel with its inclusion map."""
    field = f.field
    dims = {}
    incl_blocks = {}
    for i in f.source.degrees():
        n = f.source.dim(i)
        basis = linalg.nullspace(field, f.block(i), ncols=n)
        if not basis:
            continue
        dims[i] = len(basis)
        incl_blocks[i] = tuple(
            tuple(vec[r] for vec in basis) for r in range(n)
        )
    ker = GradedModule(
        f.source.field,
        dims,
        labels={i: tuple(f"ker{i}_{k}" for k in range(d)) for i, d in dims.items()},
    )
    incl = GradedMap(ker, f.source, 0, incl_blocks)
    return ker, incl


@dataclass(frozen=True)
class Homog:
    """A homogeneous element: a degree and its coordinate vector."""

    degree: int
    coords: tuple

    def is_zero(self, field):
        return all(field.is_zero(x) for x in self.coords)

    def add(self, field, other):
        if other.degree != self.degree or len(other.coords) != len(self.coords):
            raise StructureError("cannot add inhomogeneous elements")
        return Homog(self.degree, linalg.vec_add(field, self.coords, other.coords))

    def scale(self, field, c):
        return Homog(self.degree, linalg.vec_scale(field, c, self.coords))


class DirectSum:
    """Ordered direct sum of graded modules with coordinate bookkeeping."""

    def __init__(self, parts):
        parts = tuple(parts)
        if not parts:
            raise StructureError("direct sum needs at least one part")
        field = parts[0].field
        dims = {}
        labels = {}
        for part in parts:
            if part.field != field:
                raise StructureError("direct sum parts over different fields")
        degrees = sorted({d for p in parts for d in p.degrees()})
        for deg in degrees:
            total = sum(p.dim(deg) for p in parts)
            dims[deg] = total
            labs = []
            for pi, p in enumerate(parts):
                labs.extend(f"s{pi}.{p.label(deg, k)}" for k in range(p.dim(deg)))
            labels[deg] = tuple(labs)
        self.parts = parts
        self.module = GradedModule(field, dims, labels)

    def offset(self, part_index, degree):
        return sum(p.dim(degree) for p in self.parts[:part_index])

    def inject(self, part_index, degree, vec):
        field = self.module.field
        out = [field.zero()] * self.module.dim(degree)
        off = self.offset(part_index, degree)
        for k, x in enumerate(vec):
            out[off + k] = x
        return tuple(out)

    def project(self, part_index, degree, vec):
        off = self.offset(part_index, degree)
        return tuple(vec[off : off + self.parts[part_index].dim(degree)])

    def block_diag(self, maps, degree=0):
        """Blockwise endomorphism from per-part maps of a common degree."""
        return block_diag_between(self, self, maps, degree)


def block_diag_between(source_sum, target_sum, maps, degree=0):
    """Blockwise map source_sum -> target_sum; maps[k] sends part k to part k."""
    if len(maps) != len(source_sum.parts) or len(maps) != len(target_sum.parts):
        raise StructureError("one map per part required")
    field = source_sum.module.field
    for pi, m in enumerate(maps):
        if m.source != source_sum.parts[pi] or m.target != target_sum.parts[pi]:
            raise StructureError(f"map {pi} does not match the direct-sum parts")
        if m.degree != degree:
            raise StructureError("all parts must share the stated degree")
    blocks = {}
    for i in source_sum.module.degrees():
        rows = target_sum.module.dim(i + degree)
        cols = source_sum.module.dim(i)
        if rows == 0 or cols == 0:
            continue
        block = [[field.zero()] * cols for _ in range(rows)]
        for pi, m in enumerate(maps):
            src_off = source_sum.offset(pi, i)
            tgt_off = target_sum.offset(pi, i + degree)
            sub = m.block(i)
            for r in range(len(sub)):
                for c in range(len(sub[0]) if sub else 0):
                    block[tgt_off + r][src_off + c] = sub[r][c]
        blocks[i] = block
    return GradedMap(source_sum.module, target_sum.module, degree, blocks)
