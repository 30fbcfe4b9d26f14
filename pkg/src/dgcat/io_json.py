"""The presentation file format: parsing and canonical emission.

A file is a single JSON document with a field declaration and named
sections for categories, bimodules, modules, comma objects and fixtures.
Scalars are strings ("p/q" over Q with q > 0 and gcd 1; integers in
[0, p) over F_p).  Matrices are row-major lists of scalar strings with
entry [row][col] the coefficient of source basis vector col in target
basis vector row.  Composition tensors and action tables are sparse
entry lists; an omitted block, pair or entry is zero.

Emission is canonical: keys sorted, entries sorted, zero data dropped,
two-space indentation.  emit(parse(emit(x))) == emit(x) byte for byte.
"""

from __future__ import annotations

import json

from .bimodule import Bimodule
from .category import DgCategoryPresentation
from .comma import CommaObject
from .complexes import DgModule
from .errors import StructureError
from .fields import field_from_descriptor
from .functors import DgFunctor
from .graded import GradedMap, GradedModule
from .lambda_cat import build_lambda


def _unit(field, n, k):
    return tuple(field.one() if i == k else field.zero() for i in range(n))


# ---------------------------------------------------------------------------
# emission


def emit_matrix(field, mat):
    return [[field.format(x) for x in row] for row in mat]


def emit_dg_module(module):
    field = module.field
    out = {"dims": {str(d): module.dim(d) for d in module.carrier.degrees()}}
    d_blocks = {
        str(i): emit_matrix(field, block) for i, block in module.d.blocks.items()
    }
    if d_blocks:
        out["d"] = d_blocks
    return out


def emit_category(cat):
    field = cat.field
    out = {"objects": list(cat.objects)}
    hom = {}
    for x in cat.objects:
        for y in cat.objects:
            module = cat.hom[(x, y)]
            if module.is_zero():
                continue
            hom.setdefault(x, {})[y] = emit_dg_module(module)
    if hom:
        out["hom"] = hom
    comp = {}
    for x in cat.objects:
        for y in cat.objects:
            for z in cat.objects:
                entries = _comp_entries(cat, x, y, z)
                if entries:
                    comp.setdefault(x, {}).setdefault(y, {})[z] = entries
    if comp:
        out["comp"] = comp
    ids = {}
    for x in cat.objects:
        vec = cat.ids[x]
        if vec:
            ids[x] = [field.format(v) for v in vec]
    if ids:
        out["id"] = ids
    return out


def _comp_entries(cat, x, y, z):
    field = cat.field
    tensor = cat.tensor_cx(x, y, z)
    cmap = cat.comp[(x, y, z)]
    entries = []
    for n, block in sorted(cmap.blocks.items()):
        basis = tensor.basis(n)
        for col, (gdeg, gidx, fidx) in enumerate(basis):
            for row in range(len(block)):
                value = block[row][col]
                if not field.is_zero(value):
                    entries.append(
                        [gdeg, gidx, n - gdeg, fidx, row, field.format(value)]
                    )
    entries.sort(key=lambda e: (e[0] + e[2], e[0], e[1], e[3], e[4]))
    return entries


def _action_entries(field, source_carrier, hom_cx, action):
    """Sparse [hdeg, hidx, srcdeg, row, col, coeff] rows of an action map."""
    entries = []
    for hdeg in source_carrier.degrees():
        for hidx in range(source_carrier.dim(hdeg)):
            vec = action.apply(hdeg, _unit(field, source_carrier.dim(hdeg), hidx))
            gmap = hom_cx.decode(hdeg, vec)
            for srcdeg, block in sorted(gmap.blocks.items()):
                for row in range(len(block)):
                    for col in range(len(block[0])):
                        value = block[row][col]
                        if not field.is_zero(value):
                            entries.append(
                                [hdeg, hidx, srcdeg, row, col, field.format(value)]
                            )
    entries.sort(key=lambda e: (e[0], e[1], e[2], e[3], e[4]))
    return entries


def emit_bimodule(bim):
    field = bim.field
    out = {"left": bim.left_base.name, "right": bim.right_base.name}
    values = {}
    for u in bim.left_base.objects:
        for t in bim.right_base.objects:
            module = bim.value(u, t)
            if module.is_zero():
                continue
            values.setdefault(u, {})[t] = emit_dg_module(module)
    if values:
        out["values"] = values
    left = {}
    for (u, u2, t), action in sorted(bim.left_action.items()):
        if action.is_zero():
            continue
        entries = _action_entries(
            field,
            bim.left_base.hom[(u, u2)].carrier,
            bim.value_cx(u, t, u2, t),
            action,
        )
        if entries:
            left.setdefault(u, {}).setdefault(u2, {})[t] = entries
    if left:
        out["left_action"] = left
    right = {}
    for (t, t2, u), action in sorted(bim.right_action.items()):
        if action.is_zero():
            continue
        entries = _action_entries(
            field,
            bim.right_base.hom[(t, t2)].carrier,
            bim.value_cx(u, t2, u, t),
            action,
        )
        if entries:
            right.setdefault(t, {}).setdefault(t2, {})[u] = entries
    if right:
        out["right_action"] = right
    return out


def emit_module(fun, base_ref):
    field = fun.base.field
    out = {"base": base_ref}
    on_objects = {}
    for obj in fun.base.objects:
        module = fun.on_objects[obj]
        if module.is_zero():
            continue
        on_objects[obj] = emit_dg_module(module)
    if on_objects:
        out["on_objects"] = on_objects
    on_hom = {}
    for x in fun.base.objects:
        for y in fun.base.objects:
            action = fun.on_hom[(x, y)]
            if action.is_zero():
                continue
            entries = _action_entries(
                field, fun.base.hom[(x, y)].carrier, fun.hom_cx(x, y), action
            )
            if entries:
                on_hom.setdefault(x, {})[y] = entries
    if on_hom:
        out["on_hom"] = on_hom
    return out


def emit_comma_object(obj, refs):
    field = obj.field
    out = dict(refs)
    f_blocks = {}
    for t in obj.bimodule.right_base.objects:
        blocks = {
            str(k): emit_matrix(field, block)
            for k, block in sorted(obj.f[t].blocks.items())
        }
        if blocks:
            f_blocks[t] = blocks
    if f_blocks:
        out["f"] = f_blocks
    return out


def render_document(document):
    return json.dumps(document, indent=2, sort_keys=True) + "\n"


# ---------------------------------------------------------------------------
# parsing


class Workspace:
    """Everything a file declares, with lazily built Lambda categories."""

    def __init__(self, field):
        self.field = field
        self.categories = {}
        self.bimodules = {}
        self.modules = {}
        self.module_bases = {}
        self.comma_objects = {}
        self.comma_refs = {}
        self.fixtures = {}
        self._lambdas = {}

    def lambda_for(self, t_name, u_name, m_name):
        key = (t_name, u_name, m_name)
        if key not in self._lambdas:
            self._lambdas[key] = build_lambda(
                self.categories[t_name],
                self.categories[u_name],
                self.bimodules[m_name],
                validate=False,
            )
        return self._lambdas[key]


def _expect_dict(value, path):
    if not isinstance(value, dict):
        raise StructureError(f"{path}: expected an object")
    return value


def parse_matrix(field, rows, path, shape):
    if not isinstance(rows, list) or any(not isinstance(r, list) for r in rows):
        raise StructureError(f"{path}: expected a matrix (list of rows)")
    if len(rows) != shape[0] or any(len(r) != shape[1] for r in rows):
        raise StructureError(
            f"{path}: matrix has wrong shape, expected {shape[0]}x{shape[1]}"
        )
    try:
        return tuple(tuple(field.parse(x) for x in row) for row in rows)
    except StructureError as exc:
        raise StructureError(f"{path}: {exc}") from None


def parse_dg_module(field, data, path):
    data = _expect_dict(data, path)
    dims = {}
    for key, dim in _expect_dict(data.get("dims", {}), f"{path}.dims").items():
        try:
            deg = int(key)
        except ValueError:
            raise StructureError(f"{path}.dims: bad degree {key!r}") from None
        if not isinstance(dim, int) or dim < 0:
            raise StructureError(f"{path}.dims[{key}]: bad dimension {dim!r}")
        dims[deg] = dim
    labels = None
    if "labels" in data:
        labels = {
            int(k): tuple(v)
            for k, v in _expect_dict(data["labels"], f"{path}.labels").items()
        }
    carrier = GradedModule(field, dims, labels)
    blocks = {}
    for key, rows in _expect_dict(data.get("d", {}), f"{path}.d").items():
        i = int(key)
        blocks[i] = parse_matrix(
            field, rows, f"{path}.d[{key}]", (carrier.dim(i + 1), carrier.dim(i))
        )
    d = GradedMap(carrier, carrier, 1, blocks)
    # d . d = 0 is a mathematical axiom, not a schema rule: files carrying
    # a bad differential parse fine and fail validation with a witness.
    return DgModule(carrier, d, check=False)


def parse_category(field, name, data, path):
    data = _expect_dict(data, path)
    objects = data.get("objects")
    if not isinstance(objects, list) or not all(isinstance(x, str) for x in objects):
        raise StructureError(f"{path}.objects: expected a list of names")
    hom = {}
    hom_data = _expect_dict(data.get("hom", {}), f"{path}.hom")
    for x, per_target in hom_data.items():
        if x not in objects:
            raise StructureError(f"{path}.hom: unknown object {x!r}")
        for y, module_data in _expect_dict(per_target, f"{path}.hom.{x}").items():
            if y not in objects:
                raise StructureError(f"{path}.hom.{x}: unknown object {y!r}")
            hom[(x, y)] = parse_dg_module(field, module_data, f"{path}.hom.{x}.{y}")
    ids = {}
    for x, vec in _expect_dict(data.get("id", {}), f"{path}.id").items():
        if x not in objects:
            raise StructureError(f"{path}.id: unknown object {x!r}")
        ids[x] = tuple(field.parse(v) for v in vec)
    cat = DgCategoryPresentation(field, objects, hom, {}, ids, name=name)
    comp = {}
    comp_data = _expect_dict(data.get("comp", {}), f"{path}.comp")
    for x, per_y in comp_data.items():
        for y, per_z in _expect_dict(per_y, f"{path}.comp.{x}").items():
            for z, entries in _expect_dict(per_z, f"{path}.comp.{x}.{y}").items():
                if x not in objects or y not in objects or z not in objects:
                    raise StructureError(f"{path}.comp: unknown object in ({x},{y},{z})")
                comp[(x, y, z)] = _parse_comp_map(
                    field, cat, x, y, z, entries, f"{path}.comp.{x}.{y}.{z}"
                )
    cat.set_comp(comp)
    return cat


def _parse_comp_map(field, cat, x, y, z, entries, path):
    tensor = cat.tensor_cx(x, y, z)
    target = cat.hom[(x, z)].carrier
    blocks = {}
    if not isinstance(entries, list):
        raise StructureError(f"{path}: expected a list of entries")
    for pos, entry in enumerate(entries):
        if not isinstance(entry, list) or len(entry) != 6:
            raise StructureError(f"{path}[{pos}]: expected [gdeg, gidx, fdeg, fidx, out, coeff]")
        gdeg, gidx, fdeg, fidx, out_idx, coeff = entry
        n = gdeg + fdeg
        try:
            col = tensor.index(n, gdeg, gidx, fidx)
        except KeyError:
            raise StructureError(f"{path}[{pos}]: no such basis pair") from None
        if not 0 <= out_idx < target.dim(n):
            raise StructureError(f"{path}[{pos}]: output index out of range")
        block = blocks.setdefault(
            n,
            [[field.zero()] * tensor.module.dim(n) for _ in range(target.dim(n))],
        )
        block[out_idx][col] = field.add(block[out_idx][col], field.parse(coeff))
    return GradedMap(tensor.module.carrier, target, 0, blocks)


def _parse_action_map(field, source_carrier, hom_cx, entries, path):
    per_basis = {}
    if not isinstance(entries, list):
        raise StructureError(f"{path}: expected a list of entries")
    for pos, entry in enumerate(entries):
        if not isinstance(entry, list) or len(entry) != 6:
            raise StructureError(
                f"{path}[{pos}]: expected [hdeg, hidx, srcdeg, row, col, coeff]"
            )
        hdeg, hidx, srcdeg, row, col, coeff = entry
        if not 0 <= hidx < source_carrier.dim(hdeg):
            raise StructureError(f"{path}[{pos}]: morphism index out of range")
        src_dim = hom_cx.source.dim(srcdeg)
        tgt_dim = hom_cx.target.dim(srcdeg + hdeg)
        if not (0 <= col < src_dim and 0 <= row < tgt_dim):
            raise StructureError(f"{path}[{pos}]: block entry out of range")
        blocks = per_basis.setdefault((hdeg, hidx), {})
        block = blocks.setdefault(
            srcdeg, [[field.zero()] * src_dim for _ in range(tgt_dim)]
        )
        block[row][col] = field.add(block[row][col], field.parse(coeff))
    action_blocks = {}
    for hdeg in source_carrier.degrees():
        dim = source_carrier.dim(hdeg)
        out_dim = hom_cx.module.dim(hdeg)
        if out_dim == 0 or dim == 0:
            continue
        block = [[field.zero()] * dim for _ in range(out_dim)]
        for hidx in range(dim):
            gmap_blocks = per_basis.get((hdeg, hidx))
            if not gmap_blocks:
                continue
            gmap = GradedMap(
                hom_cx.source.carrier, hom_cx.target.carrier, hdeg, gmap_blocks
            )
            for r, value in enumerate(hom_cx.encode(gmap)):
                block[r][hidx] = value
        action_blocks[hdeg] = block
    return GradedMap(source_carrier, hom_cx.module.carrier, 0, action_blocks)


def parse_bimodule(field, name, data, workspace, path):
    data = _expect_dict(data, path)
    for key in ("left", "right"):
        if data.get(key) not in workspace.categories:
            raise StructureError(f"{path}.{key}: unknown category {data.get(key)!r}")
    left_base = workspace.categories[data["left"]]
    right_base = workspace.categories[data["right"]]
    values = {}
    for u, per_t in _expect_dict(data.get("values", {}), f"{path}.values").items():
        if u not in left_base.objects:
            raise StructureError(f"{path}.values: unknown object {u!r}")
        for t, module_data in _expect_dict(per_t, f"{path}.values.{u}").items():
            if t not in right_base.objects:
                raise StructureError(f"{path}.values.{u}: unknown object {t!r}")
            values[(u, t)] = parse_dg_module(
                field, module_data, f"{path}.values.{u}.{t}"
            )
    bim = Bimodule(left_base, right_base, values, {}, {}, name=name)
    left_action = {}
    for u, per_u2 in _expect_dict(
        data.get("left_action", {}), f"{path}.left_action"
    ).items():
        for u2, per_t in _expect_dict(per_u2, f"{path}.left_action.{u}").items():
            for t, entries in _expect_dict(
                per_t, f"{path}.left_action.{u}.{u2}"
            ).items():
                left_action[(u, u2, t)] = _parse_action_map(
                    field,
                    left_base.hom[(u, u2)].carrier,
                    bim.value_cx(u, t, u2, t),
                    entries,
                    f"{path}.left_action.{u}.{u2}.{t}",
                )
    right_action = {}
    for t, per_t2 in _expect_dict(
        data.get("right_action", {}), f"{path}.right_action"
    ).items():
        for t2, per_u in _expect_dict(per_t2, f"{path}.right_action.{t}").items():
            for u, entries in _expect_dict(
                per_u, f"{path}.right_action.{t}.{t2}"
            ).items():
                right_action[(t, t2, u)] = _parse_action_map(
                    field,
                    right_base.hom[(t, t2)].carrier,
                    bim.value_cx(u, t2, u, t),
                    entries,
                    f"{path}.right_action.{t}.{t2}.{u}",
                )
    return Bimodule(
        left_base, right_base, values, left_action, right_action, name=name
    )


def parse_module(field, name, data, workspace, path):
    data = _expect_dict(data, path)
    base_ref = data.get("base")
    if isinstance(base_ref, str):
        if base_ref not in workspace.categories:
            raise StructureError(f"{path}.base: unknown category {base_ref!r}")
        base = workspace.categories[base_ref]
    elif isinstance(base_ref, dict) and set(base_ref) == {"lambda"}:
        ref = _expect_dict(base_ref["lambda"], f"{path}.base.lambda")
        for key in ("t", "u", "bimodule"):
            if key not in ref:
                raise StructureError(f"{path}.base.lambda: missing {key!r}")
        if ref["bimodule"] not in workspace.bimodules:
            raise StructureError(
                f"{path}.base.lambda: unknown bimodule {ref['bimodule']!r}"
            )
        base = workspace.lambda_for(ref["t"], ref["u"], ref["bimodule"]).presentation
    else:
        raise StructureError(f"{path}.base: expected a name or a lambda reference")
    on_objects = {}
    for obj, module_data in _expect_dict(
        data.get("on_objects", {}), f"{path}.on_objects"
    ).items():
        if obj not in base.objects:
            raise StructureError(f"{path}.on_objects: unknown object {obj!r}")
        on_objects[obj] = parse_dg_module(
            field, module_data, f"{path}.on_objects.{obj}"
        )
    fun = DgFunctor(base, on_objects, {}, name=name)
    on_hom = {}
    for x, per_y in _expect_dict(data.get("on_hom", {}), f"{path}.on_hom").items():
        for y, entries in _expect_dict(per_y, f"{path}.on_hom.{x}").items():
            if x not in base.objects or y not in base.objects:
                raise StructureError(f"{path}.on_hom: unknown pair ({x},{y})")
            on_hom[(x, y)] = _parse_action_map(
                field,
                base.hom[(x, y)].carrier,
                fun.hom_cx(x, y),
                entries,
                f"{path}.on_hom.{x}.{y}",
            )
    return DgFunctor(base, on_objects, on_hom, name=name), base_ref


def parse_comma_object(field, name, data, workspace, path):
    from .bimodule import g_on_objects

    data = _expect_dict(data, path)
    refs = {}
    for key in ("bimodule", "module_t", "module_u"):
        if key not in data:
            raise StructureError(f"{path}: missing {key!r}")
        refs[key] = data[key]
    if refs["bimodule"] not in workspace.bimodules:
        raise StructureError(f"{path}.bimodule: unknown bimodule {refs['bimodule']!r}")
    bim = workspace.bimodules[refs["bimodule"]]
    for key, base in (("module_t", bim.right_base), ("module_u", bim.left_base)):
        if refs[key] not in workspace.modules:
            raise StructureError(f"{path}.{key}: unknown module {refs[key]!r}")
        if workspace.modules[refs[key]].base.objects != base.objects:
            raise StructureError(f"{path}.{key}: module is over the wrong category")
    A = workspace.modules[refs["module_t"]]
    B = workspace.modules[refs["module_u"]]
    gb = g_on_objects(bim, B)
    f = {}
    for t, per_degree in _expect_dict(data.get("f", {}), f"{path}.f").items():
        if t not in bim.right_base.objects:
            raise StructureError(f"{path}.f: unknown object {t!r}")
        src = A.on_objects[t].carrier
        tgt = gb.functor.on_objects[t].carrier
        blocks = {}
        for key, rows in _expect_dict(per_degree, f"{path}.f.{t}").items():
            k = int(key)
            blocks[k] = parse_matrix(
                field, rows, f"{path}.f.{t}[{key}]", (tgt.dim(k), src.dim(k))
            )
        f[t] = GradedMap(src, tgt, 0, blocks)
    return CommaObject(bim, A, B, f, g_of_b=gb, name=name), refs


def parse_fixture(name, data, workspace, path):
    data = _expect_dict(data, path)
    out = {"name": name}
    for key, pool, kind in (
        ("t", workspace.categories, "category"),
        ("u", workspace.categories, "category"),
        ("bimodule", workspace.bimodules, "bimodule"),
    ):
        if data.get(key) not in pool:
            raise StructureError(f"{path}.{key}: unknown {kind} {data.get(key)!r}")
        out[key] = data[key]
    out["comma_objects"] = []
    for ref in data.get("comma_objects", []):
        if ref not in workspace.comma_objects:
            raise StructureError(f"{path}.comma_objects: unknown object {ref!r}")
        out["comma_objects"].append(ref)
    out["lambda_modules"] = []
    for ref in data.get("lambda_modules", []):
        if ref not in workspace.modules:
            raise StructureError(f"{path}.lambda_modules: unknown module {ref!r}")
        out["lambda_modules"].append(ref)
    return out


def parse_document(document):
    document = _expect_dict(document, "$")
    if "field" not in document:
        raise StructureError("$.field: missing field declaration")
    field = field_from_descriptor(document["field"])
    workspace = Workspace(field)
    for name, data in sorted(
        _expect_dict(document.get("categories", {}), "$.categories").items()
    ):
        workspace.categories[name] = parse_category(
            field, name, data, f"$.categories.{name}"
        )
    for name, data in sorted(
        _expect_dict(document.get("bimodules", {}), "$.bimodules").items()
    ):
        workspace.bimodules[name] = parse_bimodule(
            field, name, data, workspace, f"$.bimodules.{name}"
        )
    for name, data in sorted(
        _expect_dict(document.get("modules", {}), "$.modules").items()
    ):
        fun, base_ref = parse_module(
            field, name, data, workspace, f"$.modules.{name}"
        )
        workspace.modules[name] = fun
        workspace.module_bases[name] = base_ref
    for name, data in sorted(
        _expect_dict(document.get("comma_objects", {}), "$.comma_objects").items()
    ):
        obj, refs = parse_comma_object(
            field, name, data, workspace, f"$.comma_objects.{name}"
        )
        workspace.comma_objects[name] = obj
        workspace.comma_refs[name] = refs
    for name, data in sorted(
        _expect_dict(document.get("fixtures", {}), "$.fixtures").items()
    ):
        workspace.fixtures[name] = parse_fixture(
            name, data, workspace, f"$.fixtures.{name}"
        )
    return workspace


def parse_text(text):
    try:
        document = json.loads(text)
    except json.JSONDecodeError as exc:
        raise StructureError(f"invalid JSON: {exc}") from None
    return parse_document(document)


def emit_workspace(workspace):
    """Canonical document for a whole workspace."""
    document = {"field": workspace.field.descriptor()}
    if workspace.categories:
        document["categories"] = {
            name: emit_category(cat)
            for name, cat in sorted(workspace.categories.items())
        }
    if workspace.bimodules:
        document["bimodules"] = {
            name: emit_bimodule(bim)
            for name, bim in sorted(workspace.bimodules.items())
        }
    if workspace.modules:
        document["modules"] = {
            name: emit_module(fun, workspace.module_bases.get(name, fun.base.name))
            for name, fun in sorted(workspace.modules.items())
        }
    if workspace.comma_objects:
        document["comma_objects"] = {
            name: emit_comma_object(obj, workspace.comma_refs[name])
            for name, obj in sorted(workspace.comma_objects.items())
        }
    if workspace.fixtures:
        document["fixtures"] = {
            name: {
                "t": fx["t"],
                "u": fx["u"],
                "bimodule": fx["bimodule"],
                "comma_objects": fx["comma_objects"],
                "lambda_modules": fx["lambda_modules"],
            }
            for name, fx in sorted(workspace.fixtures.items())
        }
    return document
