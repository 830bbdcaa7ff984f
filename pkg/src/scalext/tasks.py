"""Execution of workspace tasks; every task yields a JSON-ready report dict
with ``status`` in ``pass``, ``fail`` or ``exhausted``."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .basechange import (
    BaseChangeCategory,
    CocycleFailure,
    DescentFailure,
    ModuleStructure,
    NotGalois,
    UnsupportedAmbient,
    adjunction_check,
    canonical_equivariance,
    check_cocycle,
    descend,
    galois_act,
    orbit_equivariance,
    orbit_sum,
    p_star,
    projection_formula_check,
    require_galois,
    star_condition_check,
    structure_shift,
    structure_sum,
    validate_module_structure,
)
from .complexes import NotClosed, cohomology
from .dg import (
    FiniteDgCategory,
    IsoWitness,
    Morphism,
    check_h0_well_defined,
    inject_leibniz_violation,
    validate_dg_category,
)
from .dimension import Exhausted, SearchBudget, dimension_upper_bound, search_generation
from .fields import ExtensionField, FieldAutomorphism, FieldElement, GFElement
from .io import (
    BaseChangeCodec,
    HullCodec,
    InputError,
    Workspace,
    twisted_to_json,
    vector_to_json,
    witness_to_json,
)
from .linalg import Matrix
from .pretr import PretriangulatedHull, TwistedComplex
from .report import Report


@dataclass
class RunOptions:
    budget: dict | None = None  # overrides of SearchBudget fields
    k: int | None = None
    seed: int | None = None


def jsonable(x):
    """Best-effort conversion of counterexamples and payload values."""
    if x is None or isinstance(x, (bool, int, str)):
        return x
    if isinstance(x, (Fraction, GFElement)):
        return str(x)
    if isinstance(x, FieldElement):
        return x.parent.format(x)
    if isinstance(x, Morphism):
        return {"degree": x.degree, "vector": [jsonable(c) for c in x.vector]}
    if isinstance(x, Matrix):
        return [[jsonable(c) for c in row] for row in x.rows]
    if isinstance(x, FieldAutomorphism):
        return x.parent.format(x.image)
    if isinstance(x, dict):
        return {str(k): jsonable(v) for k, v in sorted(x.items(), key=lambda kv: str(kv[0]))}
    if isinstance(x, (list, tuple)):
        return [jsonable(v) for v in x]
    return repr(x)


def report_json(rep: Report, payload: dict | None = None) -> dict:
    checks = []
    for r in rep.results:
        c = {"name": r.name, "pass": r.passed}
        if r.counterexample is not None:
            c["counterexample"] = jsonable(r.counterexample)
        if r.detail is not None:
            c["detail"] = jsonable(r.detail)
        checks.append(c)
    out = {"check": rep.check, "pass": rep.passed, "checks": checks}
    if payload:
        out["payload"] = payload
    return out


# argument resolution ---------------------------------------------------------------------


class _Ctx:
    def __init__(self, ws: Workspace, task: dict, path: str):
        self.ws = ws
        self.task = task
        self.path = path

    def arg(self, key, kind=None, default=...):
        if key not in self.task:
            if default is ...:
                raise InputError(f"missing argument {key!r}", self.path)
            return default
        v = self.task[key]
        if kind is not None and not isinstance(v, kind):
            raise InputError(f"argument {key!r} has the wrong type", f"{self.path}.{key}")
        return v

    def category(self) -> FiniteDgCategory:
        return self.ws.category(self.arg("category", str), f"{self.path}.category")

    def extension(self) -> ExtensionField:
        L = self.ws.field_named(self.arg("extension", str), f"{self.path}.extension")
        A = self.category()
        if not isinstance(L, ExtensionField) or L.base != A.field:
            raise InputError("extension must be a proper extension of the category's field", f"{self.path}.extension")
        return L

    def twisted(self, key) -> TwistedComplex:
        return self.ws.twisted_named(self.arg(key, str), self.arg("category", str), f"{self.path}.{key}")

    def twisted_list(self, key) -> list:
        names = self.arg(key, list)
        cat = self.arg("category", str)
        return [self.ws.twisted_named(n, cat, f"{self.path}.{key}[{i}]") for i, n in enumerate(names)]

    def structure(self, key, D, L) -> ModuleStructure:
        """``key`` names a twisted complex (used through ``p^*``) or, with
        prefix ``structure:``, a module structure of the workspace."""
        name = self.arg(key, str)
        if name.startswith("structure:"):
            sname = name[len("structure:"):]
            sd = self.ws.structures.get(sname)
            if sd is None:
                raise InputError(f"unknown structure {sname!r}", f"{self.path}.{key}")
            if sd["category"] != self.arg("category") or self.ws.fields.get(sd["extension"]) != L:
                raise InputError("structure lives over another category or extension", f"{self.path}.{key}")
            obj = self.ws.twisted_named(sd["object"], sd["category"])
            if len(sd["phi"]) != D.hom(obj, obj).dim(0):
                raise InputError("phi has the wrong length", f"{self.path}.{key}")
            return ModuleStructure(obj, sd["phi"], L)
        return p_star(D, L, self.twisted(key))


# commands -------------------------------------------------------------------------------


def task_validate(c: _Ctx, opts):
    A = c.category()
    if c.arg("inject_leibniz_violation", bool, False):
        A = inject_leibniz_violation(A)
    rep = validate_dg_category(A)
    return report_json(rep), None


def task_h0(c: _Ctx, opts):
    A = c.category()
    rep = check_h0_well_defined(A)
    dims = {f"{X}->{Y}": cohomology(A.hom(X, Y), 0)[0] for X in A.objects for Y in A.objects}
    return report_json(rep, {"h0_dimensions": dims}), None


def task_basechange(c: _Ctx, opts):
    """``End(p^* X)`` in ``A_L`` has ``[L:K]`` times the size of ``End(X)``
    in every degree, and ``p^* X`` is a valid module structure."""
    A = c.category()
    L = c.extension()
    H = PretriangulatedHull(A)
    objs = c.twisted_list("objects") if "objects" in c.task else [H.psi(X) for X in A.objects]
    BL = BaseChangeCategory(H, L)
    rep = Report("basechange")
    dims = {}
    for i, T in enumerate(objs):
        s = p_star(H, L, T)
        v = validate_module_structure(H, s)
        rep.add(f"structure[{i}]", v.passed, v.first_failure() and v.first_failure().name)
        EL, EA = BL.hom(s, s), H.hom(T, T)
        degs = sorted(set(EL.degrees) | set(EA.degrees))
        dims[str(i)] = {str(n): EL.dim(n) for n in degs if EL.dim(n) or EA.dim(n)}
        ok = all(EL.dim(n) == L.degree * EA.dim(n) for n in degs)
        rep.add(f"end_dimension[{i}]", ok, None if ok else {str(n): [EL.dim(n), EA.dim(n)] for n in degs})
    return report_json(rep, {"end_dimensions": dims, "degree": L.degree}), None


def task_hull(c: _Ctx, opts):
    A = c.category()
    H = PretriangulatedHull(A)
    rep = Report("hull")
    for i, T in enumerate(c.twisted_list("twisted")):
        v = H.validate_twisted(T)
        rep.add(f"twisted[{i}]", v.passed, v.first_failure() and v.first_failure().name)
        if not v.passed:
            continue
        E = H.hom(T, T)
        ok = all((E.differential(n + 1) @ E.differential(n)).is_zero() for n in E.degrees)
        rep.add(f"d_squared[{i}]", ok)
        C = H.cone(H.identity(T)).cone
        rep.add(f"cone_identity_zero[{i}]", H.null_homotopy(H.identity(C)) is not None)
    return report_json(rep), None


def task_cone(c: _Ctx, opts):
    A = c.category()
    H = PretriangulatedHull(A)
    codec = HullCodec(A, H)
    rep = Report("cone")
    if "vector" in c.task:
        S, T = c.twisted("source"), c.twisted("target")
        from .io import morphism_vector_from_json

        f = morphism_vector_from_json(codec, c.arg("vector", list), S, T, 0, f"{c.path}.vector")
    else:
        S = c.twisted("twisted")
        f = H.identity(S)
    try:
        cd = H.cone(f)
    except NotClosed:
        rep.add("closed", False)
        return report_json(rep), None
    rep.add("closed", True)
    rep.add("twisted_complex", H.validate_twisted(cd.cone).passed)
    rep.add("inclusion_closed", H.is_closed(cd.inclusion))
    rep.add("projection_closed", H.is_closed(cd.projection))
    rep.add("composite_null", H.null_homotopy(H.compose(cd.inclusion, f)) is not None)
    payload = {
        "cone": twisted_to_json(codec, cd.cone),
        "h0_zero": H.null_homotopy(H.identity(cd.cone)) is not None,
    }
    return report_json(rep, payload), None


def _bl(c: _Ctx):
    A = c.category()
    L = c.extension()
    H = PretriangulatedHull(A)
    return A, L, H, BaseChangeCategory(H, L)


def task_adjunction(c: _Ctx, opts):
    A, L, H, BL = _bl(c)
    C = c.twisted("source")
    t = c.structure("target", H, L)
    rep = adjunction_check(BL, C, t, naturality=[(H.identity(C), BL.identity(t), b) for b in BL.basis(p_star(H, L, C), t, 0)])
    return report_json(rep, rep.payload), None


def task_galois(c: _Ctx, opts):
    A, L, H, BL = _bl(c)
    G = require_galois(L)
    N = c.twisted("object")
    s = p_star(H, L, N)
    rep = Report("galois")
    for sigma in G:
        v = validate_module_structure(H, galois_act(H, sigma, s))
        rep.add(f"twist[{L.format(sigma.image)}]", v.passed)
    rep.add("canonical_cocycle", check_cocycle(BL, G, canonical_equivariance(BL, G, N)) is None)
    rep.add("orbit_cocycle", check_cocycle(BL, G, orbit_equivariance(BL, G, s)) is None)
    payload = {"group": [L.format(g.image) for g in G], "galois": G.is_galois}
    return report_json(rep, payload), None


def task_descent(c: _Ctx, opts):
    A, L, H, BL = _bl(c)
    G = require_galois(L)
    N = c.twisted("object")
    codec = HullCodec(A, H)
    s = p_star(H, L, N)
    if c.arg("orbit_sum", bool, False):
        lambdas = orbit_equivariance(BL, G, s)
        s = orbit_sum(H, G, s)
    else:
        lambdas = canonical_equivariance(BL, G, N)
    res = descend(BL, s, lambdas, G)
    payload = {"descended": twisted_to_json(codec, res.descended), "iso": jsonable(res.iso)}
    return report_json(res.report, payload), None


def task_projection(c: _Ctx, opts):
    A, L, H, BL = _bl(c)
    parts = []
    for i, item in enumerate(c.arg("objects", list)):
        p = f"{c.path}.objects[{i}]"
        if not (isinstance(item, list) and len(item) == 2 and isinstance(item[1], int)):
            raise InputError("objects entries are [twisted name, shift]", p)
        T = c.ws.twisted_named(item[0], c.arg("category"), p)
        parts.append(structure_shift(H, p_star(H, L, T), item[1]))
    s = structure_sum(H, parts)
    rep = projection_formula_check(BL, s)
    payload = {}
    if "iso" in rep.payload:
        payload = {"iso": jsonable(rep.payload["iso"]), "inverse": jsonable(rep.payload["inverse"])}
    elif rep.payload.get("witness") is not None:
        w = rep.payload["witness"]
        payload = {"iso": jsonable(w.u), "inverse": jsonable(w.v)}
    return report_json(rep, payload), None


def task_star(c: _Ctx, opts):
    A = c.category()
    H = PretriangulatedHull(A)
    L = c.extension()
    s = c.structure("source", H, L)
    t = c.structure("target", H, L)
    rep = star_condition_check(H, s, t)
    return report_json(rep, rep.payload), None


def _search_context(c: _Ctx):
    A = c.category()
    if "extension" in c.task:
        codec = BaseChangeCodec(A, c.extension())
        lift = codec.BCH.p_star
    else:
        codec = HullCodec(A)
        lift = lambda T: T  # noqa: E731
    return codec, lift


def task_dim_search(c: _Ctx, opts):
    """With ``target``: search a level ``k`` witness. With ``objects``: the
    smallest level reached by all listed objects. Over an extension every
    twisted complex is first sent through ``p^*``."""
    codec, lift = _search_context(c)
    H = codec.H
    E = lift(c.twisted("generator"))
    try:
        budget = SearchBudget(**{**c.arg("budget", dict, {}), **(opts.budget or {})})
    except (TypeError, ValueError) as exc:
        raise InputError(f"bad budget: {exc}", f"{c.path}.budget") from None
    if "target" in c.task:
        M = lift(c.twisted("target"))
        k = opts.k if opts.k is not None else c.arg("k", int, 1)
        W = search_generation(H, E, M, k, budget, seed=opts.seed)
        if isinstance(W, Exhausted):
            return {"check": "dim_search", "pass": False, "exhausted": True, "reason": W.reason, "k": k}, None
        wj = witness_to_json(codec, W)
        return {"check": "dim_search", "pass": True, "k": k, "level": W.level, "payload": {"witness": wj}}, [wj]
    objs = [lift(T) for T in c.twisted_list("objects")]
    res = dimension_upper_bound(H, E, objs, budget, max_level=c.arg("max_level", int, 4), seed=opts.seed)
    if isinstance(res, Exhausted):
        return {"check": "dim_bound", "pass": False, "exhausted": True, "reason": res.reason}, None
    ws = [witness_to_json(codec, W) for W in res.witnesses]
    out = {
        "check": "dim_bound", "pass": True, "level": res.level, "dimension_bound": res.dimension_bound,
        "payload": {"witness_digests": [w["sha256"] for w in ws]},
    }
    return out, ws


COMMANDS = {
    "validate": task_validate,
    "h0": task_h0,
    "basechange": task_basechange,
    "hull": task_hull,
    "cone": task_cone,
    "adjunction": task_adjunction,
    "galois": task_galois,
    "descent": task_descent,
    "projection": task_projection,
    "star": task_star,
    "dim-search": task_dim_search,
}


def run_task(ws: Workspace, task: dict, index: int, opts: RunOptions) -> tuple[dict, list]:
    """Returns ``(report, witnesses)``. Input problems raise ``InputError``;
    mathematical refusals (not Galois, descent out of scope) are failures."""
    name = task.get("name", f"task{index}")
    path = f"tasks[{index}]"
    cmd = task["command"]
    if cmd not in COMMANDS:
        raise InputError(f"unknown command {cmd!r}", f"{path}.command")
    c = _Ctx(ws, task, path)
    try:
        out, wits = COMMANDS[cmd](c, opts)
    except (NotGalois, UnsupportedAmbient, DescentFailure, CocycleFailure) as exc:
        out, wits = {"check": cmd, "pass": False, "error": f"{type(exc).__name__}: {exc}"}, None
    expect = task.get("expect")
    if expect is not None:
        if not isinstance(expect, bool):
            raise InputError("expect must be true or false", f"{path}.expect")
        # the task passes when the check's verdict matches the expectation
        out = {**out, "outcome": out["pass"], "expected": expect, "pass": out["pass"] == expect}
        out.pop("exhausted", None)
    status = "pass" if out["pass"] else ("exhausted" if out.get("exhausted") else "fail")
    return {"task": name, "command": cmd, "status": status, **out}, wits or []
