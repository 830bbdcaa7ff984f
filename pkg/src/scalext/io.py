"""JSON interchange: canonical encoders and decoders for fields, categories,
twisted complexes, module structures, workspaces and generation witnesses.

Scalars are strings (``"num/den"`` over Q, residues over F_p). Dumps use
sorted keys and a fixed indent so equal data gives identical bytes.
"""

from __future__ import annotations

import hashlib
import json
from dataclasses import dataclass, field as dc_field
from typing import Any

from .catalog import EXAMPLES, UnknownExample, build_example
from .complexes import CochainComplex
from .dg import FiniteDgCategory, IsoWitness, MatrixModel, Morphism
from .fields import QQ, GF, ExtensionField, FieldError, is_prime, make_extension
from .linalg import Matrix
from .pretr import PretriangulatedHull, TwistedComplex

SCHEMA_VERSION = 1


class InputError(ValueError):
    """Malformed input; ``path`` locates the offending item."""

    def __init__(self, message: str, path: str = ""):
        super().__init__(f"{path}: {message}" if path else message)
        self.path = path


def dumps(obj) -> str:
    return json.dumps(obj, sort_keys=True, indent=2) + "\n"


def loads(text: str, source: str = "<input>"):
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise InputError(f"invalid JSON at line {exc.lineno} column {exc.colno}: {exc.msg}", source) from None


def digest(obj) -> str:
    return hashlib.sha256(dumps(obj).encode()).hexdigest()


def _req(d, key, path, kind=None):
    if not isinstance(d, dict):
        raise InputError("expected an object", path)
    if key not in d:
        raise InputError(f"missing key {key!r}", path)
    v = d[key]
    if kind is not None and not isinstance(v, kind):
        raise InputError(f"{key!r} has the wrong type", f"{path}.{key}")
    return v


# scalars, matrices, complexes -------------------------------------------------------


def scalar_to_json(F, x) -> str:
    return F.format(x)


def scalar_from_json(F, s, path=""):
    if not isinstance(s, (str, int)) or isinstance(s, bool):
        raise InputError("scalars must be strings", path)
    try:
        return F.parse(s) if isinstance(F, ExtensionField) else F(s)
    except (ValueError, ZeroDivisionError, FieldError) as exc:
        raise InputError(f"bad scalar {s!r}: {exc}", path) from None


def vector_to_json(F, v) -> list:
    return [scalar_to_json(F, x) for x in v]


def vector_from_json(F, v, path="") -> tuple:
    if not isinstance(v, list):
        raise InputError("expected a list of scalars", path)
    return tuple(scalar_from_json(F, x, f"{path}[{i}]") for i, x in enumerate(v))


def matrix_to_json(F, m: Matrix) -> dict:
    return {"shape": [m.nrows, m.ncols], "rows": [vector_to_json(F, r) for r in m.rows]}


def matrix_from_json(F, d, path="") -> Matrix:
    r, c = _req(d, "shape", path, list)
    rows = [vector_from_json(F, row, f"{path}.rows[{i}]") for i, row in enumerate(_req(d, "rows", path, list))]
    if len(rows) != r or any(len(row) != c for row in rows):
        raise InputError("rows do not match shape", path)
    return Matrix(F, rows, c)


def complex_to_json(C: CochainComplex) -> dict:
    F = C.field
    dims = {str(n): C.dim(n) for n in C.degrees if C.dim(n)}
    d = {}
    for n in C.degrees:
        m = C.differential(n)
        if m.nrows and m.ncols and not m.is_zero():
            d[str(n)] = matrix_to_json(F, m)
    return {"dims": dims, "d": d}


def complex_from_json(F, d, path="") -> CochainComplex:
    try:
        dims = {int(k): int(v) for k, v in _req(d, "dims", path, dict).items()}
        ds = {int(k): matrix_from_json(F, m, f"{path}.d.{k}") for k, m in d.get("d", {}).items()}
    except (TypeError, ValueError) as exc:
        if isinstance(exc, InputError):
            raise
        raise InputError(f"bad complex: {exc}", path) from None
    for n, m in ds.items():
        if (m.nrows, m.ncols) != (dims.get(n + 1, 0), dims.get(n, 0)):
            raise InputError(f"differential in degree {n} has the wrong shape", path)
    try:
        return CochainComplex(F, dims, ds)
    except Exception as exc:  # d^2 != 0
        raise InputError(str(exc), path) from None


# fields ---------------------------------------------------------------------------------


def base_field_to_json(F):
    return F.to_json()


def base_field_from_json(d, path=""):
    if d == "Q":
        return QQ
    if isinstance(d, dict) and set(d) == {"Fp"} and isinstance(d["Fp"], int) and is_prime(d["Fp"]):
        return GF(d["Fp"])
    raise InputError('base field must be "Q" or {"Fp": prime}', path)


def field_to_json(F) -> dict:
    """Descriptor ``{"base", "minpoly", "trusted"}``; a base field is its
    own trivial extension with empty ``minpoly``."""
    if isinstance(F, ExtensionField):
        return F.to_json()
    return {"base": F.to_json(), "minpoly": [], "trusted": False}


def field_from_json(d, path=""):
    base = base_field_from_json(_req(d, "base", path), f"{path}.base")
    mp = _req(d, "minpoly", path, list)
    if not mp:
        return base
    coeffs = vector_from_json(base, mp, f"{path}.minpoly")
    try:
        return make_extension(base, coeffs, trusted=bool(d.get("trusted", False)))
    except FieldError as exc:
        raise InputError(f"{type(exc).__name__}: {exc}", path) from None


# categories ---------------------------------------------------------------------------


def category_to_json(A: FiniteDgCategory) -> dict:
    F = A.field
    homs = []
    for (X, Y), C in sorted(A.homs.items()):
        homs.append({"source": X, "target": Y, "complex": complex_to_json(C)})
    prods = []
    for (X, Y, Z), terms in sorted(A.products.items()):
        ts = sorted(
            [[b, i], [a, j], [c, k], scalar_to_json(F, s)]
            for (b, i), (a, j), (c, k), s in terms if F(s)
        )
        prods.append({"objects": [X, Y, Z], "terms": ts})
    out = {
        "name": A.name,
        "objects": list(A.objects),
        "homs": homs,
        "products": prods,
        "identities": {X: vector_to_json(F, v) for X, v in A.identities.items()},
    }
    if A.matrix_model is not None:
        mm = A.matrix_model
        out["matrix_model"] = {
            "sizes": dict(mm.sizes),
            "basis": [
                {"source": X, "target": Y, "matrices": [matrix_to_json(F, m) for m in ms]}
                for (X, Y), ms in sorted(mm.basis.items())
            ],
        }
    return out


def category_from_json(F, d, path="") -> FiniteDgCategory:
    if "example" in d:
        params = d.get("params", {})
        try:
            return build_example(d["example"], F, **params)
        except UnknownExample:
            raise InputError(f"unknown example {d['example']!r}; known: {sorted(EXAMPLES)}", path) from None
        except (TypeError, ValueError) as exc:
            raise InputError(str(exc), path) from None
    objects = _req(d, "objects", path, list)
    if not all(isinstance(X, str) for X in objects):
        raise InputError("object names must be strings", f"{path}.objects")
    obj_set = set(objects)

    def check_obj(X, p):
        if X not in obj_set:
            raise InputError(f"unknown object {X!r}", p)
        return X

    homs = {}
    for i, h in enumerate(_req(d, "homs", path, list)):
        p = f"{path}.homs[{i}]"
        X = check_obj(_req(h, "source", p), p)
        Y = check_obj(_req(h, "target", p), p)
        homs[(X, Y)] = complex_from_json(F, _req(h, "complex", p), f"{p}.complex")
    products = {}
    for i, pr in enumerate(_req(d, "products", path, list)):
        p = f"{path}.products[{i}]"
        objs = _req(pr, "objects", p, list)
        if len(objs) != 3:
            raise InputError("products need three objects", p)
        X, Y, Z = (check_obj(o, p) for o in objs)
        terms = []
        for j, t in enumerate(_req(pr, "terms", p, list)):
            try:
                (b, i1), (a, i2), (c, i3), s = t
                terms.append(((int(b), int(i1)), (int(a), int(i2)), (int(c), int(i3)), scalar_from_json(F, s)))
            except (TypeError, ValueError) as exc:
                raise InputError(f"bad term: {exc}", f"{p}.terms[{j}]") from None
        products[(X, Y, Z)] = terms
    ids = {}
    for X, v in _req(d, "identities", path, dict).items():
        ids[check_obj(X, f"{path}.identities")] = vector_from_json(F, v, f"{path}.identities.{X}")
    for X in objects:
        if X not in ids:
            raise InputError(f"missing identity for {X!r}", f"{path}.identities")
        if len(ids[X]) != homs.get((X, X), CochainComplex(F, {})).dim(0):
            raise InputError(f"identity of {X!r} has the wrong length", f"{path}.identities")
    model = None
    if "matrix_model" in d:
        mm = d["matrix_model"]
        p = f"{path}.matrix_model"
        basis = {}
        for i, b in enumerate(_req(mm, "basis", p, list)):
            q = f"{p}.basis[{i}]"
            basis[(_req(b, "source", q), _req(b, "target", q))] = [
                matrix_from_json(F, m, f"{q}.matrices[{j}]") for j, m in enumerate(_req(b, "matrices", q, list))
            ]
        model = MatrixModel(_req(mm, "sizes", p, dict), basis)
    return FiniteDgCategory(F, objects, homs, products, ids, name=d.get("name", ""), matrix_model=model)


# twisted complexes, morphisms, structures -------------------------------------------------


class HullCodec:
    """Encoding of entries of twisted complexes over a ``FiniteDgCategory``:
    an entry is an object name."""

    kind = "hull"

    def __init__(self, A: FiniteDgCategory, H: PretriangulatedHull | None = None):
        self.A = A
        self.field = A.field
        self.H = H or PretriangulatedHull(A)

    def entry_to_json(self, X):
        return X

    def entry_from_json(self, d, path):
        if d not in self.A.objects:
            raise InputError(f"unknown object {d!r}", path)
        return d

    def context_json(self) -> dict:
        return {"kind": self.kind, "field": field_to_json(self.field), "category": category_to_json(self.A)}


class BaseChangeCodec(HullCodec):
    """Entries are module structures ``{"object": twisted, "phi": coords}``
    over the hull of ``A``; morphism coordinates are in the subcomplex bases
    of the base-change category, which are recomputed deterministically."""

    kind = "base_change_hull"

    def __init__(self, A: FiniteDgCategory, L: ExtensionField, BCH=None):
        from .basechange import BaseChangeHull

        self.A = A
        self.L = L
        self.field = A.field
        self.BCH = BCH or BaseChangeHull(A, L)
        self.H = self.BCH.H_L
        self._inner = HullCodec(A, self.BCH.H_A)

    def entry_to_json(self, s):
        return {"object": twisted_to_json(self._inner, s.obj), "phi": vector_to_json(self.field, s.phi)}

    def entry_from_json(self, d, path):
        from .basechange import ModuleStructure

        obj = twisted_from_json(self._inner, _req(d, "object", path), f"{path}.object")
        phi = vector_from_json(self.field, _req(d, "phi", path, list), f"{path}.phi")
        if len(phi) != self.BCH.H_A.hom(obj, obj).dim(0):
            raise InputError("phi has the wrong length", f"{path}.phi")
        return ModuleStructure(obj, phi, self.L)

    def context_json(self) -> dict:
        out = super().context_json()
        out["extension"] = field_to_json(self.L)
        return out


def codec_from_context(d, path="context") -> HullCodec:
    kind = _req(d, "kind", path)
    F = field_from_json(_req(d, "field", path), f"{path}.field")
    A = category_from_json(F, _req(d, "category", path), f"{path}.category")
    if kind == "hull":
        return HullCodec(A)
    if kind == "base_change_hull":
        L = field_from_json(_req(d, "extension", path), f"{path}.extension")
        if not isinstance(L, ExtensionField) or L.base != F:
            raise InputError("extension must be over the category's field", f"{path}.extension")
        return BaseChangeCodec(A, L)
    raise InputError(f"unknown context kind {kind!r}", path)


def twisted_to_json(codec: HullCodec, T: TwistedComplex) -> dict:
    F = codec.field
    return {
        "entries": [[codec.entry_to_json(C), r] for C, r in T.entries],
        "q": {f"{i},{j}": vector_to_json(F, v) for i, j, v in T.q},
    }


def twisted_from_json(codec: HullCodec, d, path="") -> TwistedComplex:
    F = codec.field
    entries = []
    for i, e in enumerate(_req(d, "entries", path, list)):
        p = f"{path}.entries[{i}]"
        if not isinstance(e, list) or len(e) != 2 or not isinstance(e[1], int) or isinstance(e[1], bool):
            raise InputError("entry must be [object, shift]", p)
        entries.append((codec.entry_from_json(e[0], f"{p}[0]"), e[1]))
    q = []
    amb = codec.H.ambient
    for key, v in d.get("q", {}).items():
        p = f"{path}.q.{key}"
        try:
            i, j = (int(x) for x in key.split(","))
        except ValueError:
            raise InputError("q keys must be 'i,j'", p) from None
        if not (0 <= i < j < len(entries)):
            raise InputError("q must be strictly upper triangular", p)
        vec = vector_from_json(F, v, p)
        (Ci, ri), (Cj, rj) = entries[i], entries[j]
        if len(vec) != amb.hom(Cj, Ci).dim(1 + ri - rj):
            raise InputError("q component has the wrong length", p)
        q.append((i, j, vec))
    return TwistedComplex(tuple(entries), tuple(q))


def morphism_vector_from_json(codec, d, S, T, n, path) -> Morphism:
    vec = vector_from_json(codec.field, d, path)
    if len(vec) != codec.H.hom(S, T).dim(n):
        raise InputError("morphism vector has the wrong length", path)
    return Morphism(S, T, n, vec)


# generation witnesses -------------------------------------------------------------------


def _iso_to_json(F, w: IsoWitness) -> dict:
    return {k: vector_to_json(F, getattr(w, k).vector) for k in ("u", "v", "h1", "h2")}


def _iso_from_json(codec, d, X, Y, path) -> IsoWitness:
    m = morphism_vector_from_json
    return IsoWitness(
        m(codec, _req(d, "u", path), X, Y, 0, f"{path}.u"),
        m(codec, _req(d, "v", path), Y, X, 0, f"{path}.v"),
        m(codec, _req(d, "h1", path), Y, Y, -1, f"{path}.h1"),
        m(codec, _req(d, "h2", path), X, X, -1, f"{path}.h2"),
    )


def witness_body_to_json(codec: HullCodec, W) -> dict:
    F = codec.field
    out = {
        "kind": W.kind,
        "level": W.level,
        "target": twisted_to_json(codec, W.target),
        "complement": twisted_to_json(codec, W.complement),
        "iso": _iso_to_json(F, W.iso),
    }
    if W.kind == "leaf":
        out["shifts"] = list(W.shifts)
    else:
        out["lower"] = witness_body_to_json(codec, W.lower)
        out["upper"] = witness_body_to_json(codec, W.upper)
        out["triangle_map"] = vector_to_json(F, W.triangle_map.vector)
    return out


def witness_body_from_json(codec: HullCodec, E: TwistedComplex, d, path="witness"):
    """Rebuild a witness; objects implied by the structure (sums of shifts,
    cones) are recomputed, not read."""
    from .dimension import GenerationWitness, shifted_sum

    H = codec.H
    kind = _req(d, "kind", path)
    level = _req(d, "level", path, int)
    M = twisted_from_json(codec, _req(d, "target", path), f"{path}.target")
    C = twisted_from_json(codec, _req(d, "complement", path), f"{path}.complement")
    src = H.direct_sum(M, C)
    if kind == "leaf":
        shifts = _req(d, "shifts", path, list)
        if not all(isinstance(s, int) and not isinstance(s, bool) for s in shifts):
            raise InputError("shifts must be integers", f"{path}.shifts")
        S = shifted_sum(H, E, shifts)
        iso = _iso_from_json(codec, _req(d, "iso", path), src, S, f"{path}.iso")
        return GenerationWitness("leaf", E, M, level, C, iso, shifts=tuple(shifts))
    if kind != "node":
        raise InputError(f"unknown witness kind {kind!r}", path)
    lo = witness_body_from_json(codec, E, _req(d, "lower", path), f"{path}.lower")
    up = witness_body_from_json(codec, E, _req(d, "upper", path), f"{path}.upper")
    c = morphism_vector_from_json(
        codec, _req(d, "triangle_map", path), H.shift(up.target, -1), lo.target, 0, f"{path}.triangle_map"
    )
    try:
        cone = H.cone(c).cone
    except Exception as exc:
        raise InputError(f"triangle map: {exc}", f"{path}.triangle_map") from None
    iso = _iso_from_json(codec, _req(d, "iso", path), src, cone, f"{path}.iso")
    return GenerationWitness("node", E, M, level, C, iso, lower=lo, upper=up, triangle_map=c)


def witness_to_json(codec: HullCodec, W) -> dict:
    body = {
        "context": codec.context_json(),
        "generator": twisted_to_json(codec, W.generator),
        "witness": witness_body_to_json(codec, W),
    }
    return {"schema": SCHEMA_VERSION, "type": "generation_witness", "sha256": digest(body), **body}


def witness_from_json(d, check_digest: bool = True):
    """Returns ``(codec, witness)``. Raises ``InputError`` on schema or
    digest mismatch."""
    if _req(d, "schema", "") != SCHEMA_VERSION or d.get("type") != "generation_witness":
        raise InputError("not a generation witness of a supported schema version")
    body = {k: d[k] for k in ("context", "generator", "witness") if k in d}
    if check_digest and digest(body) != d.get("sha256"):
        raise InputError("sha256 digest does not match the content", "sha256")
    codec = codec_from_context(_req(d, "context", ""))
    E = twisted_from_json(codec, _req(d, "generator", ""), "generator")
    return codec, witness_body_from_json(codec, E, _req(d, "witness", ""))


# workspaces -------------------------------------------------------------------------


@dataclass
class Workspace:
    fields: dict = dc_field(default_factory=dict)
    categories: dict = dc_field(default_factory=dict)  # name -> (field name, category)
    twisted: dict = dc_field(default_factory=dict)  # name -> (category name, TwistedComplex)
    structures: dict = dc_field(default_factory=dict)  # name -> descriptor
    tasks: list = dc_field(default_factory=list)
    raw: dict = dc_field(default_factory=dict)

    def category(self, name: str, path: str = ""):
        if name not in self.categories:
            raise InputError(f"unknown category {name!r}", path)
        return self.categories[name][1]

    def field_named(self, name: str, path: str = ""):
        if name not in self.fields:
            raise InputError(f"unknown field {name!r}", path)
        return self.fields[name]

    def twisted_named(self, name: str, category: str, path: str = "") -> TwistedComplex:
        if name not in self.twisted:
            raise InputError(f"unknown twisted complex {name!r}", path)
        cat, T = self.twisted[name]
        if cat != category:
            raise InputError(f"{name!r} lives over {cat!r}, not {category!r}", path)
        return T


def _named_list(ws_raw, key, path):
    items = ws_raw.get(key, [])
    if not isinstance(items, list):
        raise InputError("expected a list", f"{path}{key}")
    seen = set()
    for i, it in enumerate(items):
        name = _req(it, "name", f"{key}[{i}]", str)
        if name in seen:
            raise InputError(f"duplicate name {name!r}", f"{key}[{i}]")
        seen.add(name)
    return items


def _normalize_category(F, d, A):
    if "example" in d:
        out = {"name": d["name"], "field": d["field"], "example": d["example"]}
        if d.get("params"):
            out["params"] = d["params"]
        return out
    return {"name": d["name"], "field": d["field"], **category_to_json(A)}


def parse_workspace(raw) -> Workspace:
    """Load and cross-check a workspace; ``ws.raw`` is its canonical form."""
    if not isinstance(raw, dict):
        raise InputError("workspace must be a JSON object")
    if raw.get("schema") != SCHEMA_VERSION:
        raise InputError(f"schema version must be {SCHEMA_VERSION}", "schema")
    ws = Workspace()
    norm = {"schema": SCHEMA_VERSION, "fields": [], "categories": [], "twisted": [], "structures": [], "tasks": []}
    for i, fd in enumerate(_named_list(raw, "fields", "")):
        F = field_from_json(fd, f"fields[{i}]")
        ws.fields[fd["name"]] = F
        norm["fields"].append({"name": fd["name"], **field_to_json(F)})
    for i, cd in enumerate(_named_list(raw, "categories", "")):
        p = f"categories[{i}]"
        F = ws.field_named(_req(cd, "field", p, str), f"{p}.field")
        if isinstance(F, ExtensionField):
            raise InputError("categories live over a base field", f"{p}.field")
        A = category_from_json(F, cd, p)
        ws.categories[cd["name"]] = (cd["field"], A)
        norm["categories"].append(_normalize_category(F, cd, A))
    for i, td in enumerate(_named_list(raw, "twisted", "")):
        p = f"twisted[{i}]"
        cat = _req(td, "category", p, str)
        codec = HullCodec(ws.category(cat, f"{p}.category"))
        T = twisted_from_json(codec, td, p)
        ws.twisted[td["name"]] = (cat, T)
        norm["twisted"].append({"name": td["name"], "category": cat, **twisted_to_json(codec, T)})
    for i, sd in enumerate(_named_list(raw, "structures", "")):
        p = f"structures[{i}]"
        body = _req(sd, "module_structure", p, dict)
        cat = _req(body, "category", f"{p}.module_structure", str)
        A = ws.category(cat, p)
        ext = ws.field_named(_req(body, "extension", f"{p}.module_structure", str), p)
        obj = ws.twisted_named(_req(body, "object", f"{p}.module_structure", str), cat, p)
        phi = vector_from_json(A.field, _req(body, "phi", f"{p}.module_structure", list), f"{p}.module_structure.phi")
        ws.structures[sd["name"]] = {"category": cat, "extension": body["extension"], "object": body["object"], "phi": phi}
        norm["structures"].append({
            "name": sd["name"],
            "module_structure": {
                "category": cat, "extension": body["extension"], "object": body["object"],
                "phi": vector_to_json(A.field, phi),
            },
        })
    for i, t in enumerate(_named_list(raw, "tasks", "")):
        _req(t, "command", f"tasks[{i}]", str)
        ws.tasks.append(t)
        norm["tasks"].append(t)
    ws.raw = norm
    return ws


def load_workspace(path: str) -> Workspace:
    try:
        with open(path) as fh:
            text = fh.read()
    except OSError as exc:
        raise InputError(str(exc), path) from None
    return parse_workspace(loads(text, path))


def dump_workspace(ws: Workspace) -> str:
    return dumps(ws.raw)
