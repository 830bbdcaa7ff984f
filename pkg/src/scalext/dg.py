"""DG-categories with finite-dimensional hom complexes.

A morphism is a homogeneous element of a hom complex, stored as its
coordinate vector in the chosen basis of ``Hom^n(X, Y)``. ``compose(g, f)``
is ``g o f``; the Leibniz rule reads
``d(g o f) = dg o f + (-1)^|g| g o df``.
"""

from __future__ import annotations

from dataclasses import dataclass, field as dc_field
from itertools import product
from typing import Hashable, Iterable, Mapping, Sequence

from .complexes import (
    CochainComplex,
    InvalidComplex,
    NotClosed,
    add_vec,
    cohomology,
    coboundaries,
    is_zero_vec,
    scale_vec,
    sub_vec,
    unit_vec,
    zero_vec,
)
from .linalg import Matrix, extend_to_basis, rank, solve
from .report import Report


@dataclass(frozen=True)
class Morphism:
    source: Hashable
    target: Hashable
    degree: int
    vector: tuple

    def _same(self, other: "Morphism"):
        if (self.source, self.target, self.degree) != (other.source, other.target, other.degree):
            raise ValueError("morphisms live in different hom spaces")

    def __add__(self, other: "Morphism") -> "Morphism":
        self._same(other)
        return Morphism(self.source, self.target, self.degree, add_vec(self.vector, other.vector))

    def __sub__(self, other: "Morphism") -> "Morphism":
        self._same(other)
        return Morphism(self.source, self.target, self.degree, sub_vec(self.vector, other.vector))

    def __neg__(self) -> "Morphism":
        return Morphism(self.source, self.target, self.degree, tuple(-x for x in self.vector))

    def scale(self, c) -> "Morphism":
        return Morphism(self.source, self.target, self.degree, scale_vec(c, self.vector))

    @property
    def is_zero(self) -> bool:
        return is_zero_vec(self.vector)


@dataclass(frozen=True)
class IsoWitness:
    """``u: X -> Y`` closed of degree 0 with inverse ``v`` up to homotopy:
    ``u v - id_Y = d h1`` and ``v u - id_X = d h2``."""

    u: Morphism
    v: Morphism
    h1: Morphism
    h2: Morphism

    def verify(self, cat: "DgCategory") -> bool:
        u, v = self.u, self.v
        X, Y = u.source, u.target
        if u.degree != 0 or v.degree != 0 or (v.source, v.target) != (Y, X):
            return False
        if (self.h1.source, self.h1.target, self.h1.degree) != (Y, Y, -1):
            return False
        if (self.h2.source, self.h2.target, self.h2.degree) != (X, X, -1):
            return False
        if not (cat.is_closed(u) and cat.is_closed(v)):
            return False
        if cat.compose(u, v) - cat.identity(Y) != cat.differential(self.h1):
            return False
        return cat.compose(v, u) - cat.identity(X) == cat.differential(self.h2)


class DgCategory:
    """Interface shared by finite DG-categories, their hulls and base changes.

    Subclasses provide ``field``, ``_build_hom``, ``identity`` and
    ``compose``; everything else is derived.
    """

    field = None

    def __init__(self):
        self._hom_cache: dict = {}

    def hom(self, X, Y) -> CochainComplex:
        key = (X, Y)
        c = self._hom_cache.get(key)
        if c is None:
            c = self._build_hom(X, Y)
            self._hom_cache[key] = c
        return c

    def _build_hom(self, X, Y) -> CochainComplex:
        raise NotImplementedError

    def identity(self, X) -> Morphism:
        raise NotImplementedError

    def compose(self, g: Morphism, f: Morphism) -> Morphism:
        raise NotImplementedError

    def check_composable(self, g: Morphism, f: Morphism):
        if f.target != g.source:
            raise ValueError(f"cannot compose: target {f.target!r} != source {g.source!r}")

    def zero(self, X, Y, n: int) -> Morphism:
        return Morphism(X, Y, n, zero_vec(self.field, self.hom(X, Y).dim(n)))

    def basis(self, X, Y, n: int) -> list[Morphism]:
        k = self.hom(X, Y).dim(n)
        return [Morphism(X, Y, n, unit_vec(self.field, k, i)) for i in range(k)]

    def morphism(self, X, Y, n: int, coords: Sequence) -> Morphism:
        k = self.hom(X, Y).dim(n)
        if len(coords) != k:
            raise ValueError(f"Hom^{n} has dimension {k}, got {len(coords)} coordinates")
        return Morphism(X, Y, n, tuple(self.field(c) for c in coords))

    def differential(self, f: Morphism) -> Morphism:
        H = self.hom(f.source, f.target)
        return Morphism(f.source, f.target, f.degree + 1, H.apply_d(f.degree, f.vector))

    def is_closed(self, f: Morphism) -> bool:
        return is_zero_vec(self.differential(f).vector)

    def left_matrix(self, g: Morphism, X, a: int) -> Matrix:
        """Matrix of ``f -> g o f`` on ``Hom^a(X, g.source)``."""
        rows = self.hom(X, g.target).dim(a + g.degree)
        cols = [self.compose(g, b).vector for b in self.basis(X, g.source, a)]
        return Matrix.from_columns(self.field, cols, rows)

    def right_matrix(self, f: Morphism, Z, b: int) -> Matrix:
        """Matrix of ``g -> g o f`` on ``Hom^b(f.target, Z)``."""
        rows = self.hom(f.source, Z).dim(b + f.degree)
        cols = [self.compose(g, f).vector for g in self.basis(f.target, Z, b)]
        return Matrix.from_columns(self.field, cols, rows)

    def null_homotopy(self, f: Morphism) -> Morphism | None:
        """``h`` with ``d h = f`` or ``None``; ``f`` must be closed."""
        if not self.is_closed(f):
            raise NotClosed("null-homotopy requested for a non-closed morphism")
        H = self.hom(f.source, f.target)
        if is_zero_vec(f.vector):
            return self.zero(f.source, f.target, f.degree - 1)
        x = solve(H.differential(f.degree - 1), f.vector)
        if x is None:
            return None
        return Morphism(f.source, f.target, f.degree - 1, x)

    def is_h0_invertible(self, u: Morphism) -> tuple[bool, IsoWitness | None]:
        """Decide invertibility of ``u`` in ``H^0`` by one linear solve for
        ``(v, h1, h2)``."""
        if u.degree != 0:
            raise ValueError("H^0 invertibility needs a degree 0 morphism")
        if not self.is_closed(u):
            raise NotClosed("u is not closed")
        X, Y = u.source, u.target
        F = self.field
        hYX, hYY, hXX = self.hom(Y, X), self.hom(Y, Y), self.hom(X, X)
        nv, n1, n2 = hYX.dim(0), hYY.dim(-1), hXX.dim(-1)
        r1, r2, r3 = hYY.dim(0), hXX.dim(0), hYX.dim(1)
        blocks = {
            (0, 0): self.left_matrix(u, Y, 0),
            (0, 1): -hYY.differential(-1),
            (1, 0): self.right_matrix(u, X, 0),
            (1, 2): -hXX.differential(-1),
            (2, 0): hYX.differential(0),
        }
        A = Matrix.block(F, [r1, r2, r3], [nv, n1, n2], blocks)
        rhs = self.identity(Y).vector + self.identity(X).vector + zero_vec(F, r3)
        x = solve(A, rhs)
        if x is None:
            return False, None
        v = Morphism(Y, X, 0, x[:nv])
        h1 = Morphism(Y, Y, -1, x[nv:nv + n1])
        h2 = Morphism(X, X, -1, x[nv + n1:])
        return True, IsoWitness(u, v, h1, h2)

    def strict_inverse(self, u: Morphism) -> Morphism | None:
        """Degree 0 ``v`` with ``u v = id`` and ``v u = id`` exactly, or ``None``."""
        if u.degree != 0:
            raise ValueError("strict inverse needs a degree 0 morphism")
        X, Y = u.source, u.target
        A = self.left_matrix(u, Y, 0).vstack(self.right_matrix(u, X, 0))
        x = solve(A, self.identity(Y).vector + self.identity(X).vector)
        if x is None:
            return None
        return Morphism(Y, X, 0, x)

    def h0_basis(self, X, Y, n: int = 0) -> list[Morphism]:
        _, reps = cohomology(self.hom(X, Y), n)
        return [Morphism(X, Y, n, r) for r in reps]

    def cohomology_class(self, f: Morphism) -> tuple:
        """Coordinates of the class of closed ``f`` in the ``h0_basis`` order."""
        if not self.is_closed(f):
            raise NotClosed("cohomology class of a non-closed morphism")
        H = self.hom(f.source, f.target)
        _, reps = cohomology(H, f.degree)
        bnd = coboundaries(H, f.degree)
        cols = list(reps) + list(bnd)
        A = Matrix.from_columns(self.field, cols, H.dim(f.degree))
        x = solve(A, f.vector)
        assert x is not None
        return tuple(x[: len(reps)])

    def homotopic(self, f: Morphism, g: Morphism) -> bool:
        return self.null_homotopy(f - g) is not None


class MatrixModel:
    """Faithful realization of a degree-0 category by honest matrices:
    object ``X`` acts on ``K^size[X]`` and ``basis[(X, Y)][i]`` is the
    ``size[Y] x size[X]`` matrix of the ``i``-th basis morphism."""

    def __init__(self, sizes: Mapping, basis: Mapping):
        self.sizes = dict(sizes)
        self.basis = {k: list(v) for k, v in basis.items()}

    def matrix(self, f: Morphism, field) -> Matrix:
        acc = Matrix.zeros(field, self.sizes[f.target], self.sizes[f.source])
        for c, m in zip(f.vector, self.basis.get((f.source, f.target), [])):
            if c:
                acc = acc + m.scale(c)
        return acc


class FiniteDgCategory(DgCategory):
    """Finitely many objects with explicit hom complexes and structure constants.

    ``products`` maps ``(X, Y, Z)`` to a list of
    ``((b, i), (a, j), (c, k), s)`` meaning: basis element ``i`` of
    ``Hom^b(Y, Z)`` composed with basis element ``j`` of ``Hom^a(X, Y)`` has
    ``s`` as its ``k``-th coordinate in ``Hom^c(X, Z)``.
    """

    def __init__(
        self,
        field,
        objects: Sequence,
        homs: Mapping[tuple, CochainComplex],
        products: Mapping[tuple, Iterable],
        identities: Mapping,
        name: str = "",
        matrix_model: MatrixModel | None = None,
    ):
        super().__init__()
        self.field = field
        self.objects = list(objects)
        self.name = name
        self.homs = {k: v for k, v in homs.items()}
        self.products = {k: [tuple(e) for e in v] for k, v in products.items()}
        self.matrix_model = matrix_model
        self._tables: dict = {}
        for (X, Y, Z), entries in self.products.items():
            for (b, i), (a, j), (c, k), s in entries:
                s = field(s)
                if not s:
                    continue
                t = self._tables.setdefault((X, Y, Z, b, a), {})
                t.setdefault((i, j), []).append((k, s))
        self.identities = {X: tuple(field(c) for c in v) for X, v in identities.items()}

    def __repr__(self):
        return f"FiniteDgCategory({self.name or self.objects!r} over {self.field!r})"

    def _build_hom(self, X, Y) -> CochainComplex:
        c = self.homs.get((X, Y))
        if c is None:
            return CochainComplex(self.field, {})
        return c

    def identity(self, X) -> Morphism:
        return Morphism(X, X, 0, self.identities[X])

    def compose(self, g: Morphism, f: Morphism) -> Morphism:
        self.check_composable(g, f)
        X, Y, Z = f.source, f.target, g.target
        a, b = f.degree, g.degree
        n = self.hom(X, Z).dim(a + b)
        out = [self.field.zero] * n
        table = self._tables.get((X, Y, Z, b, a))
        if table:
            gnz = [(i, x) for i, x in enumerate(g.vector) if x]
            fnz = [(j, y) for j, y in enumerate(f.vector) if y]
            for i, x in gnz:
                for j, y in fnz:
                    for k, s in table.get((i, j), ()):
                        out[k] = out[k] + x * y * s
        return Morphism(X, Z, a + b, tuple(out))

    def left_matrix(self, g: Morphism, X, a: int) -> Matrix:
        Y, Z, b = g.source, g.target, g.degree
        rows = self.hom(X, Z).dim(a + b)
        cols = self.hom(X, Y).dim(a)
        out = [[self.field.zero] * cols for _ in range(rows)]
        table = self._tables.get((X, Y, Z, b, a), {})
        for (i, j), entries in table.items():
            x = g.vector[i]
            if x:
                for k, s in entries:
                    out[k][j] = out[k][j] + x * s
        return Matrix(self.field, out, cols)

    def right_matrix(self, f: Morphism, Z, b: int) -> Matrix:
        X, Y, a = f.source, f.target, f.degree
        rows = self.hom(X, Z).dim(a + b)
        cols = self.hom(Y, Z).dim(b)
        out = [[self.field.zero] * cols for _ in range(rows)]
        table = self._tables.get((X, Y, Z, b, a), {})
        for (i, j), entries in table.items():
            y = f.vector[j]
            if y:
                for k, s in entries:
                    out[k][i] = out[k][i] + y * s
        return Matrix(self.field, out, cols)

    def hom_pairs(self):
        return [(X, Y) for X in self.objects for Y in self.objects]


# validation ---------------------------------------------------------------


def _d_squared_failure(C: CochainComplex):
    for n in C.degrees:
        m = C.differential(n + 1) @ C.differential(n)
        if not m.is_zero():
            return n
    return None


def validate_dg_category(A: FiniteDgCategory) -> Report:
    """Check every DG axiom on basis elements; failures carry the offending
    objects, degrees and basis indices."""
    rep = Report("dg_category")
    F = A.field
    objs = A.objects

    # structural: shapes and degree bookkeeping of the structure constants
    bad = None
    for (X, Y, Z), entries in A.products.items():
        for (b, i), (a, j), (c, k), s in entries:
            if c != a + b or i >= A.hom(Y, Z).dim(b) or j >= A.hom(X, Y).dim(a) or k >= A.hom(X, Z).dim(c):
                bad = bad or {"objects": (X, Y, Z), "entry": ((b, i), (a, j), (c, k))}
    rep.add("structure_constants", bad is None, bad)

    bad = None
    for X, Y in A.hom_pairs():
        n = _d_squared_failure(A.hom(X, Y))
        if n is not None:
            bad = {"objects": (X, Y), "degree": n}
            break
    rep.add("d_squared", bad is None, bad)

    bad = None
    for X in objs:
        idX = A.identity(X)
        if len(idX.vector) != A.hom(X, X).dim(0) or not A.is_closed(idX):
            bad = {"object": X}
            break
    rep.add("identity_closed", bad is None, bad)

    bad = None
    for X, Y in A.hom_pairs():
        if bad:
            break
        for n in A.hom(X, Y).degrees:
            for idx, f in enumerate(A.basis(X, Y, n)):
                if A.compose(A.identity(Y), f) != f or A.compose(f, A.identity(X)) != f:
                    bad = {"objects": (X, Y), "degree": n, "index": idx}
                    break
            if bad:
                break
    rep.add("units", bad is None, bad)

    bad = None
    for X, Y, Z in product(objs, repeat=3):
        if bad:
            break
        for b in A.hom(Y, Z).degrees:
            for a in A.hom(X, Y).degrees:
                for i, g in enumerate(A.basis(Y, Z, b)):
                    dg = A.differential(g)
                    sign = F.one if b % 2 == 0 else -F.one
                    for j, f in enumerate(A.basis(X, Y, a)):
                        lhs = A.differential(A.compose(g, f))
                        rhs = A.compose(dg, f) + A.compose(g, A.differential(f)).scale(sign)
                        if lhs != rhs:
                            bad = {"objects": (X, Y, Z), "degrees": (b, a), "indices": (i, j)}
                            break
                    if bad:
                        break
                if bad:
                    break
            if bad:
                break
    rep.add("leibniz", bad is None, bad)

    bad = None
    for W, X, Y, Z in product(objs, repeat=4):
        if bad:
            break
        for c in A.hom(Y, Z).degrees:
            for b in A.hom(X, Y).degrees:
                for a in A.hom(W, X).degrees:
                    for i, h in enumerate(A.basis(Y, Z, c)):
                        for j, g in enumerate(A.basis(X, Y, b)):
                            hg = A.compose(h, g)
                            for k, f in enumerate(A.basis(W, X, a)):
                                if A.compose(hg, f) != A.compose(h, A.compose(g, f)):
                                    bad = {"objects": (W, X, Y, Z), "degrees": (c, b, a), "indices": (i, j, k)}
                                    break
                            if bad:
                                break
                        if bad:
                            break
                    if bad:
                        break
                if bad:
                    break
            if bad:
                break
    rep.add("associativity", bad is None, bad)
    return rep


def inject_leibniz_violation(A: FiniteDgCategory, X=None) -> FiniteDgCategory:
    """Copy of ``A`` with a new degree 1 element ``eta`` in ``End(X)`` and
    ``d(v) = lambda(v) eta`` on ``End^0(X)``, where ``lambda(id_X) = 1``.

    All products involving ``eta`` vanish, so ``d(id o id) = eta`` while
    ``d(id) o id + id o d(id) = 0``: the Leibniz rule fails in every
    characteristic.
    """
    F = A.field
    X = A.objects[0] if X is None else X
    E = A.hom(X, X)
    old1 = E.dim(1)
    idv = A.identities[X]
    # a functional with lambda(id) = 1 vanishing on coboundaries d^{-1}
    bnd = [c for c in E.differential(-1).columns() if any(c)]
    lam = None
    if bnd:
        M = Matrix.from_columns(F, bnd + [idv], E.dim(0)).T
        rhs = tuple([F.zero] * len(bnd) + [F.one])
        lam = solve(M, rhs)
    else:
        k = next(i for i, x in enumerate(idv) if x)
        lam = tuple((1 / idv[k]) * F.one if i == k else F.zero for i in range(E.dim(0)))
    if lam is None:
        raise ValueError("identity is a coboundary; the object is contractible")
    dims = dict(E.space.dims)
    dims[1] = old1 + 1
    d = {}
    for n in set(E.degrees) | {-1, 0, 1}:
        m = E.differential(n)
        if n == 0:
            m = Matrix(F, [list(r) for r in m.rows] + [list(lam)], E.dim(0))
        elif n == 1:
            m = Matrix(F, [list(r) + [F.zero] for r in m.rows], old1 + 1)
        d[n] = m
    homs = dict(A.homs)
    homs[(X, X)] = CochainComplex(F, dims, d, check=False)
    return FiniteDgCategory(F, A.objects, homs, A.products, A.identities, name=f"{A.name}+eta", matrix_model=None)


# homotopy categories ------------------------------------------------------


@dataclass
class H0Category:
    """Degree-zero cohomology category with chosen cocycle representatives.

    ``table[(X, Y, Z)][(i, j)]`` is the coordinate vector of
    ``[g_i] o [f_j]`` in the basis of ``H^0(X, Z)``.
    """

    source: DgCategory
    objects: list
    reps: dict
    table: dict

    def dim(self, X, Y) -> int:
        return len(self.reps[(X, Y)])

    def compose(self, X, Y, Z, g: Sequence, f: Sequence) -> tuple:
        F = self.source.field
        out = [F.zero] * self.dim(X, Z)
        for (i, j), v in self.table[(X, Y, Z)].items():
            if g[i] and f[j]:
                c = g[i] * f[j]
                out = [o + c * x for o, x in zip(out, v)]
        return tuple(out)

    def identity(self, X) -> tuple:
        return self.source.cohomology_class(self.source.identity(X))


def h0_category(A: FiniteDgCategory) -> H0Category:
    objs = A.objects
    reps = {(X, Y): A.h0_basis(X, Y, 0) for X in objs for Y in objs}
    table = {}
    for X, Y, Z in product(objs, repeat=3):
        t = {}
        for i, g in enumerate(reps[(Y, Z)]):
            for j, f in enumerate(reps[(X, Y)]):
                t[(i, j)] = A.cohomology_class(A.compose(g, f))
        table[(X, Y, Z)] = t
    return H0Category(A, objs, reps, table)


def check_h0_well_defined(A: FiniteDgCategory) -> Report:
    """Perturbing representatives by coboundaries leaves classes of products
    unchanged, checked on every basis pair."""
    rep = Report("h0_well_defined")
    H = h0_category(A)
    bad = None
    for X, Y, Z in product(A.objects, repeat=3):
        bYZ = [Morphism(Y, Z, 0, c) for c in coboundaries(A.hom(Y, Z), 0)]
        bXY = [Morphism(X, Y, 0, c) for c in coboundaries(A.hom(X, Y), 0)]
        for i, g in enumerate(H.reps[(Y, Z)]):
            for j, f in enumerate(H.reps[(X, Y)]):
                base = H.table[(X, Y, Z)][(i, j)]
                for b in bYZ:
                    if A.cohomology_class(A.compose(g + b, f)) != base:
                        bad = {"objects": (X, Y, Z), "indices": (i, j)}
                for b in bXY:
                    if A.cohomology_class(A.compose(g, f + b)) != base:
                        bad = {"objects": (X, Y, Z), "indices": (i, j)}
    rep.add("representative_independence", bad is None, bad)
    # associativity and units of the induced composition
    bad = None
    for W, X, Y, Z in product(A.objects, repeat=4):
        for i in range(H.dim(Y, Z)):
            for j in range(H.dim(X, Y)):
                for k in range(H.dim(W, X)):
                    e = lambda n, p: unit_vec(A.field, n, p)
                    hi, gj, fk = e(H.dim(Y, Z), i), e(H.dim(X, Y), j), e(H.dim(W, X), k)
                    lhs = H.compose(W, X, Z, H.compose(X, Y, Z, hi, gj), fk)
                    rhs = H.compose(W, Y, Z, hi, H.compose(W, X, Y, gj, fk))
                    if lhs != rhs:
                        bad = {"objects": (W, X, Y, Z), "indices": (i, j, k)}
    rep.add("associativity", bad is None, bad)
    bad = None
    for X, Y in product(A.objects, repeat=2):
        for j in range(H.dim(X, Y)):
            f = unit_vec(A.field, H.dim(X, Y), j)
            if H.compose(X, Y, Y, H.identity(Y), f) != f or H.compose(X, X, Y, f, H.identity(X)) != f:
                bad = {"objects": (X, Y), "index": j}
    rep.add("units", bad is None, bad)
    return rep


def graded_category(A: FiniteDgCategory) -> dict:
    """``(X, Y, n) -> dim H^n Hom(X, Y)`` for every nonzero entry."""
    out = {}
    for X, Y in A.hom_pairs():
        C = A.hom(X, Y)
        for n in C.degrees:
            k, _ = cohomology(C, n)
            if k:
                out[(X, Y, n)] = k
    return out


# functors -----------------------------------------------------------------


@dataclass
class DgFunctor:
    """``hom_maps[(X, Y)][n]`` is the matrix ``Hom^n(X, Y) -> Hom^n(FX, FY)``."""

    source: FiniteDgCategory
    target: DgCategory
    object_map: dict
    hom_maps: dict

    def on_object(self, X):
        return self.object_map[X]

    def matrix(self, X, Y, n: int) -> Matrix:
        m = self.hom_maps.get((X, Y), {}).get(n)
        if m is None:
            FX, FY = self.object_map[X], self.object_map[Y]
            return Matrix.zeros(self.source.field, self.target.hom(FX, FY).dim(n), self.source.hom(X, Y).dim(n))
        return m

    def __call__(self, f: Morphism) -> Morphism:
        FX, FY = self.object_map[f.source], self.object_map[f.target]
        return Morphism(FX, FY, f.degree, self.matrix(f.source, f.target, f.degree).apply(f.vector))


def identity_functor(A: FiniteDgCategory) -> DgFunctor:
    maps = {}
    for X, Y in A.hom_pairs():
        C = A.hom(X, Y)
        maps[(X, Y)] = {n: Matrix.identity(A.field, C.dim(n)) for n in C.degrees}
    return DgFunctor(A, A, {X: X for X in A.objects}, maps)


def validate_dg_functor(F: DgFunctor) -> Report:
    rep = Report("dg_functor")
    A, B = F.source, F.target
    bad = None
    for X, Y in A.hom_pairs():
        C = A.hom(X, Y)
        D = B.hom(F.on_object(X), F.on_object(Y))
        for n in set(C.degrees) | {m - 1 for m in C.degrees}:
            lhs = D.differential(n) @ F.matrix(X, Y, n)
            rhs = F.matrix(X, Y, n + 1) @ C.differential(n)
            if lhs != rhs:
                bad = {"objects": (X, Y), "degree": n}
    rep.add("chain_maps", bad is None, bad)
    bad = None
    for X in A.objects:
        if F(A.identity(X)) != B.identity(F.on_object(X)):
            bad = {"object": X}
    rep.add("identities", bad is None, bad)
    bad = None
    for X, Y, Z in product(A.objects, repeat=3):
        for b in A.hom(Y, Z).degrees:
            for a in A.hom(X, Y).degrees:
                for i, g in enumerate(A.basis(Y, Z, b)):
                    for j, f in enumerate(A.basis(X, Y, a)):
                        if F(A.compose(g, f)) != B.compose(F(g), F(f)):
                            bad = {"objects": (X, Y, Z), "degrees": (b, a), "indices": (i, j)}
    rep.add("composition", bad is None, bad)
    return rep


def _induces_cohomology_iso(field, C: CochainComplex, D: CochainComplex, maps) -> bool:
    for n in sorted(set(C.degrees) | set(D.degrees)):
        dimC, repsC = cohomology(C, n)
        dimD, _ = cohomology(D, n)
        if dimC != dimD:
            return False
        if not dimC:
            continue
        m = maps(n)
        imgs = [m.apply(r) for r in repsC]
        bnd = coboundaries(D, n)
        r0 = rank(Matrix.from_columns(field, bnd, D.dim(n))) if bnd else 0
        cols = bnd + imgs
        if rank(Matrix.from_columns(field, cols, D.dim(n))) != r0 + dimC:
            return False
    return True


def is_quasi_fully_faithful(F: DgFunctor) -> bool:
    """Every hom map induces isomorphisms on all cohomology groups."""
    A, B = F.source, F.target
    for X, Y in A.hom_pairs():
        C = A.hom(X, Y)
        D = B.hom(F.on_object(X), F.on_object(Y))
        if not _induces_cohomology_iso(A.field, C, D, lambda n, X=X, Y=Y: F.matrix(X, Y, n)):
            return False
    return True


def find_h0_iso(cat: DgCategory, X, Y, coefficient_radius: int = 1, max_support: int = 2):
    """Bounded search for an ``H^0`` isomorphism ``X -> Y`` among combinations
    of at most ``max_support`` basis classes with small coefficients."""
    from itertools import combinations

    basis = cat.h0_basis(X, Y, 0)
    scalars = cat.field.small_scalars(coefficient_radius)
    for size in range(1, min(max_support, len(basis)) + 1):
        for idx in combinations(range(len(basis)), size):
            for coeffs in product(scalars, repeat=size):
                u = cat.zero(X, Y, 0)
                for i, c in zip(idx, coeffs):
                    u = u + basis[i].scale(c)
                ok, w = cat.is_h0_invertible(u)
                if ok:
                    return w
    if not basis and not cat.hom(X, X).dim(0) and not cat.hom(Y, Y).dim(0):
        ok, w = cat.is_h0_invertible(cat.zero(X, Y, 0))
        if ok:
            return w
    return None


def is_quasi_equivalence(F: DgFunctor, targets: Sequence | None = None, coefficient_radius: int = 1, max_support: int = 2) -> tuple[bool, dict]:
    """Quasi fully faithful plus essential surjectivity on ``H^0`` over the
    listed target objects, the latter by bounded search. ``False`` from the
    surjectivity part only means no iso was found within budget."""
    info = {"quasi_fully_faithful": is_quasi_fully_faithful(F), "unreached": []}
    objs = targets if targets is not None else getattr(F.target, "objects", [])
    for Y in objs:
        hit = False
        for X in F.source.objects:
            if find_h0_iso(F.target, F.on_object(X), Y, coefficient_radius, max_support) is not None:
                hit = True
                break
        if not hit:
            info["unreached"].append(Y)
    return info["quasi_fully_faithful"] and not info["unreached"], info
