"""Builders for the shipped example DG-categories."""

from __future__ import annotations

from typing import Mapping, Sequence

from .complexes import CochainComplex
from .dg import DgFunctor, FiniteDgCategory, MatrixModel
from .linalg import Matrix


class UnknownExample(KeyError):
    pass


def graded_algebra(
    field,
    name: str,
    obj: str,
    basis: Sequence[tuple[str, int]],
    mult: Mapping[tuple[str, str], Mapping[str, object]],
    unit: str,
    d: Mapping[str, Mapping[str, object]] | None = None,
    matrix_model: MatrixModel | None = None,
) -> FiniteDgCategory:
    """One-object DG-category from named homogeneous basis elements.

    ``basis`` lists ``(label, degree)``; ``mult[(x, y)]`` is ``x * y`` as a
    combination of labels; ``d[x]`` is the differential of ``x``.
    """
    d = d or {}
    by_deg: dict[int, list[str]] = {}
    for lab, deg in basis:
        by_deg.setdefault(deg, []).append(lab)
    pos = {lab: (deg, by_deg[deg].index(lab)) for lab, deg in basis}
    dims = {deg: len(labs) for deg, labs in by_deg.items()}
    dmats = {}
    for deg, labs in by_deg.items():
        if deg + 1 not in dims:
            continue
        cols = []
        for lab in labs:
            col = [field.zero] * dims[deg + 1]
            for out, s in d.get(lab, {}).items():
                col[pos[out][1]] = col[pos[out][1]] + field(s)
            cols.append(col)
        dmats[deg] = Matrix.from_columns(field, cols, dims[deg + 1])
    hom = CochainComplex(field, dims, dmats, check=False)
    products = []
    for (x, y), res in mult.items():
        for z, s in res.items():
            products.append((pos[x], pos[y], pos[z], field(s)))
    ident = [field.zero] * dims[0]
    ident[pos[unit][1]] = field.one
    return FiniteDgCategory(
        field, [obj], {(obj, obj): hom}, {(obj, obj, obj): products}, {obj: ident},
        name=name, matrix_model=matrix_model,
    )


def point(field) -> FiniteDgCategory:
    model = MatrixModel({"pt": 1}, {("pt", "pt"): [Matrix.identity(field, 1)]})
    return graded_algebra(field, "point", "pt", [("1", 0)], {("1", "1"): {"1": 1}}, "1", matrix_model=model)


def matrix_algebra(field, n: int) -> FiniteDgCategory:
    """One object with ``End = Mat_n(K)``; basis ``E_ab`` in row-major order."""
    if n < 1:
        raise ValueError("matrix size must be positive")
    labels = [f"E{a}{b}" if n < 10 else f"E{a}_{b}" for a in range(n) for b in range(n)]
    basis = [(lab, 0) for lab in labels]
    mult = {}
    for a in range(n):
        for b in range(n):
            for c in range(n):
                for e in range(n):
                    if b == c:
                        mult[(labels[a * n + b], labels[c * n + e])] = {labels[a * n + e]: 1}
    cat = graded_algebra(field, f"matrix_algebra({n})", "M", basis, mult, labels[0])
    ident = [field.one if a == b else field.zero for a in range(n) for b in range(n)]
    mats = []
    for a in range(n):
        for b in range(n):
            m = [[field.zero] * n for _ in range(n)]
            m[a][b] = field.one
            mats.append(Matrix(field, m, n))
    model = MatrixModel({"M": n}, {("M", "M"): mats})
    return FiniteDgCategory(
        field, cat.objects, cat.homs, cat.products, {"M": ident}, name=cat.name, matrix_model=model
    )


def dual_numbers(field) -> FiniteDgCategory:
    """``End = K[e]/(e^2)`` in degree 0 with zero differential."""
    mult = {("1", "1"): {"1": 1}, ("1", "e"): {"e": 1}, ("e", "1"): {"e": 1}}
    return graded_algebra(field, "dual_numbers", "pt", [("1", 0), ("e", 0)], mult, "1")


def path_algebra_An(field, n: int) -> FiniteDgCategory:
    """Linear quiver ``1 -> 2 -> ... -> n`` with all paths: ``Hom(i, j)`` is
    one-dimensional for ``i <= j`` and zero otherwise."""
    if n < 1:
        raise ValueError("need at least one vertex")
    objs = [str(i) for i in range(1, n + 1)]
    homs = {}
    for i in range(1, n + 1):
        for j in range(i, n + 1):
            homs[(str(i), str(j))] = CochainComplex(field, {0: 1})
    products = {}
    for i in range(1, n + 1):
        for j in range(i, n + 1):
            for k in range(j, n + 1):
                products[(str(i), str(j), str(k))] = [((0, 0), (0, 0), (0, 0), field.one)]
    ident = {X: [field.one] for X in objs}
    return FiniteDgCategory(field, objs, homs, products, ident, name=f"path_algebra_A{n}")


def point_with_negative_class(field) -> FiniteDgCategory:
    """``End = K`` in degree 0 plus ``K`` in degree -1, zero differential."""
    mult = {("1", "1"): {"1": 1}, ("1", "t"): {"t": 1}, ("t", "1"): {"t": 1}}
    return graded_algebra(field, "point_with_negative_class", "pt", [("1", 0), ("t", -1)], mult, "1")


def point_with_acyclic_summand(field) -> FiniteDgCategory:
    """``End = K.1 + span(a, b)`` with ``|a| = -1``, ``d a = b`` and every
    product not involving the unit zero; quasi-isomorphic to the point."""
    mult = {
        ("1", "1"): {"1": 1},
        ("1", "a"): {"a": 1}, ("a", "1"): {"a": 1},
        ("1", "b"): {"b": 1}, ("b", "1"): {"b": 1},
    }
    return graded_algebra(
        field, "point_with_acyclic_summand", "pt", [("1", 0), ("b", 0), ("a", -1)], mult, "1",
        d={"a": {"b": 1}},
    )


def dual_numbers_with_derivation_defect(field) -> FiniteDgCategory:
    """``K[e, s]/(e^2, s^2)`` with ``|s| = 1``, ``e s = s e`` and ``d e = s``.

    Here ``d(e e) = 0`` while ``de e + e de = 2 s e``, so the Leibniz rule
    fails exactly when the characteristic is not 2.
    """
    basis = [("1", 0), ("e", 0), ("s", 1), ("se", 1)]
    mult = {}
    for x, _ in basis:
        mult[("1", x)] = {x: 1}
        mult[(x, "1")] = {x: 1}
    mult[("e", "s")] = {"se": 1}
    mult[("s", "e")] = {"se": 1}
    return graded_algebra(
        field, "dual_numbers_with_derivation_defect", "pt", basis, mult, "1", d={"e": {"s": 1}}
    )


def unit_functor(source: FiniteDgCategory, target: FiniteDgCategory) -> DgFunctor:
    """The functor from the one-object point category sending ``1`` to the
    identity of the (single) target object."""
    F = source.field
    (X,), (Y,) = source.objects, target.objects
    cols = [target.identities[Y]]
    m = Matrix.from_columns(F, cols, target.hom(Y, Y).dim(0))
    return DgFunctor(source, target, {X: Y}, {(X, X): {0: m}})


EXAMPLES = {
    "point": lambda field, **_: point(field),
    "matrix_algebra": lambda field, n=2, **_: matrix_algebra(field, int(n)),
    "dual_numbers": lambda field, **_: dual_numbers(field),
    "path_algebra_An": lambda field, n=2, **_: path_algebra_An(field, int(n)),
    "point_with_negative_class": lambda field, **_: point_with_negative_class(field),
    "point_with_acyclic_summand": lambda field, **_: point_with_acyclic_summand(field),
    "dual_numbers_with_derivation_defect": lambda field, **_: dual_numbers_with_derivation_defect(field),
}


def build_example(name: str, field, **params) -> FiniteDgCategory:
    try:
        builder = EXAMPLES[name]
    except KeyError:
        raise UnknownExample(name) from None
    return builder(field, **params)
