"""The shipped workspaces, built in code so the JSON files can be
regenerated and compared."""

from __future__ import annotations

from .io import SCHEMA_VERSION, dump_workspace, parse_workspace

Q = {"name": "Q", "base": "Q", "minpoly": [], "trusted": False}
F2 = {"name": "F2", "base": {"Fp": 2}, "minpoly": [], "trusted": False}
F3 = {"name": "F3", "base": {"Fp": 3}, "minpoly": [], "trusted": False}
QSQRT2 = {"name": "Q(sqrt2)", "base": "Q", "minpoly": ["-2", "0", "1"], "trusted": False}
F4 = {"name": "F4", "base": {"Fp": 2}, "minpoly": ["1", "1", "1"], "trusted": False}


def _ws(fields, categories, twisted=(), tasks=(), structures=()):
    return {
        "schema": SCHEMA_VERSION,
        "fields": list(fields),
        "categories": list(categories),
        "twisted": list(twisted),
        "structures": list(structures),
        "tasks": list(tasks),
    }


def point_workspace():
    cats = [{"name": f"point/{f['name']}", "field": f["name"], "example": "point"} for f in (Q, F2, F3)]
    return _ws([Q, F2, F3], cats)


def examples_workspace():
    cats, tasks = [], []
    for f in (Q, F2, F3):
        for ex, params in (("point", {}), ("matrix_algebra", {"n": 2}), ("dual_numbers", {}), ("path_algebra_An", {"n": 3})):
            name = f"{ex}/{f['name']}"
            c = {"name": name, "field": f["name"], "example": ex}
            if params:
                c["params"] = params
            cats.append(c)
            tasks.append({"name": f"validate {name}", "command": "validate", "category": name})
            tasks.append({"name": f"h0 {name}", "command": "h0", "category": name})
        tasks.append({
            "name": f"validate leibniz injection {f['name']}", "command": "validate",
            "category": f"dual_numbers/{f['name']}", "inject_leibniz_violation": True, "expect": False,
        })
    return _ws([Q, F2, F3], cats, tasks=tasks)


def _base_change_workspace(K, L):
    cat = f"point/{K['name']}"
    twisted = [
        {"name": "pt", "category": cat, "entries": [["pt", 0]], "q": {}},
        {"name": "pt[2]+pt[-1]", "category": cat, "entries": [["pt", 2], ["pt", -1]], "q": {}},
        {"name": "cone(id)", "category": cat, "entries": [["pt", 0], ["pt", 1]], "q": {"0,1": ["1"]}},
    ]
    base = {"category": cat, "extension": L["name"]}
    tasks = [
        {"name": "basechange", "command": "basechange", **base},
        {"name": "adjunction", "command": "adjunction", **base, "source": "pt[2]+pt[-1]", "target": "pt"},
        {"name": "galois", "command": "galois", **base, "object": "pt"},
        {"name": "descent", "command": "descent", **base, "object": "pt[2]+pt[-1]"},
        {"name": "descent orbit sum", "command": "descent", **base, "object": "pt", "orbit_sum": True},
        {"name": "projection pt", "command": "projection", **base, "objects": [["pt", 0]]},
        {"name": "projection pt+pt[1]", "command": "projection", **base, "objects": [["pt", 0], ["pt", 1]]},
        {"name": "star p*pt", "command": "star", **base, "source": "pt", "target": "pt", "expect": False},
        {"name": "hull", "command": "hull", "category": cat, "twisted": ["pt", "pt[2]+pt[-1]", "cone(id)"]},
        {"name": "cone", "command": "cone", "category": cat, "twisted": "pt[2]+pt[-1]"},
        {
            "name": "dim bound", "command": "dim-search", "category": cat, "generator": "pt",
            "objects": ["pt[2]+pt[-1]", "cone(id)"],
        },
        {
            "name": "dim bound after base change", "command": "dim-search", **base, "generator": "pt",
            "objects": ["pt[2]+pt[-1]", "cone(id)"],
        },
    ]
    cats = [{"name": cat, "field": K["name"], "example": "point"}]
    return _ws([K, L], cats, twisted, tasks)


def sqrt2_workspace():
    return _base_change_workspace(Q, QSQRT2)


def f4_workspace():
    return _base_change_workspace(F2, F4)


def dual_numbers_workspace():
    cat = "dual_numbers/Q"
    twisted = [
        {"name": "pt", "category": cat, "entries": [["pt", 0]], "q": {}},
        {"name": "cone(e)", "category": cat, "entries": [["pt", 0], ["pt", 1]], "q": {"0,1": ["0", "1"]}},
    ]
    tasks = [
        {
            "name": "cone(e) level 1", "command": "dim-search", "category": cat, "generator": "pt",
            "target": "cone(e)", "k": 1, "budget": {"shift_window": 1, "node_limit": 2},
        },
        {"name": "cone(e) level 2", "command": "dim-search", "category": cat, "generator": "pt", "target": "cone(e)", "k": 2},
        {"name": "hull", "command": "hull", "category": cat, "twisted": ["pt", "cone(e)"]},
    ]
    return _ws([Q], [{"name": cat, "field": "Q", "example": "dual_numbers"}], twisted, tasks)


def a2_workspace():
    twisted, tasks, cats = [], [], []
    for K, L in ((Q, QSQRT2), (F2, F4)):
        cat = f"A2/{K['name']}"
        cats.append({"name": cat, "field": K["name"], "example": "path_algebra_An", "params": {"n": 2}})
        objs = {
            "E": ([["1", 0], ["2", 0], ["2", 0], ["1", 1]], {"2,3": ["1"]}),
            "P1": ([["1", 0]], {}),
            "P2[1]": ([["2", 1]], {}),
            "cone(a)": ([["2", 0], ["1", 1]], {"0,1": ["1"]}),
            "cone(a)[-1]+P2": ([["2", -1], ["1", 0], ["2", 0]], {"0,1": ["-1" if K is Q else "1"]}),
            "cone(P1->cone(a))": ([["2", 0], ["1", 1], ["1", 1]], {"0,1": ["1"], "0,2": ["1"]}),
        }
        for name, (entries, q) in objs.items():
            twisted.append({"name": f"{name}/{K['name']}", "category": cat, "entries": entries, "q": q})
        targets = [f"{n}/{K['name']}" for n in objs if n != "E"]
        gen = f"E/{K['name']}"
        tasks.append({"name": f"hull {cat}", "command": "hull", "category": cat, "twisted": [gen] + targets})
        tasks.append({"name": f"dim bound {cat}", "command": "dim-search", "category": cat, "generator": gen, "objects": targets})
        tasks.append({
            "name": f"dim bound {cat} over {L['name']}", "command": "dim-search", "category": cat,
            "extension": L["name"], "generator": gen, "objects": targets,
        })
    return _ws([Q, F2, QSQRT2, F4], cats, twisted, tasks)


SHIPPED = {
    "point.json": point_workspace,
    "examples.json": examples_workspace,
    "sqrt2.json": sqrt2_workspace,
    "f4.json": f4_workspace,
    "dual_numbers.json": dual_numbers_workspace,
    "a2.json": a2_workspace,
}


def render(name: str) -> str:
    """Canonical text of a shipped workspace."""
    return dump_workspace(parse_workspace(SHIPPED[name]()))
