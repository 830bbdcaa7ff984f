"""Seeded generators of random test data: scalars, closed morphisms and
twisted complexes built by iterated cones."""

from __future__ import annotations

import random

from .complexes import cocycles
from .dg import DgCategory, Morphism
from .pretr import PretriangulatedHull, TwistedComplex


def random_scalar(field, rng: random.Random, radius: int = 3):
    if getattr(field, "kind", "") == "extension":
        return field.element([random_scalar(field.base, rng, radius) for _ in range(field.degree)])
    if field.is_finite:
        return field(rng.randrange(field.characteristic))
    return field(rng.randint(-radius, radius))


def random_vector(field, n: int, rng: random.Random):
    return tuple(random_scalar(field, rng) for _ in range(n))


def random_morphism(cat: DgCategory, X, Y, n: int, rng: random.Random) -> Morphism:
    return Morphism(X, Y, n, random_vector(cat.field, cat.hom(X, Y).dim(n), rng))


def random_closed_morphism(cat: DgCategory, X, Y, n: int, rng: random.Random) -> Morphism:
    F = cat.field
    Z = cocycles(cat.hom(X, Y), n)
    acc = cat.zero(X, Y, n)
    for z in Z:
        c = random_scalar(F, rng)
        if c:
            acc = acc + Morphism(X, Y, n, tuple(c * x for x in z))
    return acc


def random_twisted(
    hull: PretriangulatedHull,
    objects,
    rng: random.Random,
    max_entries: int = 4,
    shift_range: tuple[int, int] = (-2, 2),
) -> TwistedComplex:
    """Random twisted complex with at most ``max_entries`` entries, made by
    direct sums, shifts and cones of random closed degree 0 maps. Shifts of
    all entries stay inside ``shift_range``."""
    lo, hi = shift_range
    objects = list(objects)

    def build(budget: int) -> TwistedComplex:
        if budget <= 1 or rng.random() < 0.3:
            return hull.shift(hull.psi(rng.choice(objects)), rng.randint(lo, hi))
        left = rng.randint(1, budget - 1)
        A = build(left)
        B = build(budget - left)
        if rng.random() < 0.4:
            return hull.direct_sum(A, B)
        # cone of a map A -> B; align one entry of A with one of B so that
        # degree 0 maps can be nonzero, then the source is shifted up by one
        k = rng.choice(B.shifts) - rng.choice(A.shifts)
        if min(A.shifts) + k >= lo and max(A.shifts) + k + 1 <= hi:
            A = hull.shift(A, k)
        elif max(A.shifts) + 1 > hi:
            return hull.direct_sum(A, B)
        alpha = random_closed_morphism(hull, A, B, 0, rng)
        return hull.cone(alpha).cone

    return build(rng.randint(1, max_entries))


def random_invertible_matrix(field, n: int, rng: random.Random):
    from .linalg import Matrix, rank

    while True:
        m = Matrix(field, [[random_scalar(field, rng) for _ in range(n)] for _ in range(n)], n)
        if rank(m) == n:
            return m


def random_equivariant_object(BL, G, N: TwistedComplex, rng: random.Random):
    """``p^*(N)`` with its canonical Galois structure, transported along a
    random invertible degree 0 automorphism of the underlying object (not
    necessarily ``L``-linear). Returns ``(structure, lambdas)``."""
    from .basechange import (
        ModuleStructure,
        canonical_equivariance,
        from_honest,
        galois_act,
        honest_matrix,
        p_star,
    )
    from .linalg import Matrix, inverse

    D = BL.ambient
    F = D.field
    L = BL.extension
    s0 = p_star(D, L, N)
    M = s0.obj
    n = D.ambient.matrix_model.sizes[D.ambient.objects[0]]
    size = len(M) * n
    rows = [[F.zero] * size for _ in range(size)]
    for r in sorted(set(M.shifts)):
        idx = [i * n + a for i, (_, ri) in enumerate(M.entries) if ri == r for a in range(n)]
        g = random_invertible_matrix(F, len(idx), rng)
        for x, i in enumerate(idx):
            for y, j in enumerate(idx):
                rows[i][j] = g[x, y]
    gh = Matrix(F, rows, size)
    g = from_honest(D, M, M, gh)
    ginv = from_honest(D, M, M, inverse(gh))
    phi = D.compose(g, D.compose(Morphism(M, M, 0, s0.phi), ginv))
    s = ModuleStructure(M, phi.vector, L)
    can = canonical_equivariance(BL, G, N)
    lambdas = {}
    for sigma in G:
        lam = D.compose(g, D.compose(BL.embed(can[sigma]), ginv))
        lambdas[sigma] = BL.project(galois_act(D, sigma, s), s, lam)
    return s, lambdas
