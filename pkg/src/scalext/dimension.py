"""Certificates for membership ``M in <E>_k`` and a bounded search for them.

A level 1 certificate exhibits an object ``M'`` and a homotopy equivalence
``M + M' -> E[s_1] + ... + E[s_m]``. A level ``k`` certificate exhibits a
level ``<= k-1`` certificate for ``I1``, a level 1 certificate for ``I2``, a
closed map ``c: I2[-1] -> I1`` and a homotopy equivalence
``M + M' -> cone(c)``; the cone sits in a triangle ``I1 -> cone(c) -> I2``.

Search failure is returned as ``Exhausted`` and never claims non-membership.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, replace
from typing import Sequence

from .dg import IsoWitness, Morphism
from .linalg import LinAlgError, Matrix, solve
from .pretr import ZERO, PretriangulatedHull, TwistedComplex
from .report import Report


@dataclass(frozen=True)
class SearchBudget:
    shift_window: int = 3
    max_multiplicity: int = 16
    max_coefficient_support: int = 64
    node_limit: int = 200

    def __post_init__(self):
        for name in ("shift_window", "max_multiplicity", "max_coefficient_support", "node_limit"):
            if getattr(self, name) < 1:
                raise ValueError(f"{name} must be positive")


@dataclass(frozen=True)
class Exhausted:
    reason: str
    nodes: int = 0

    def __bool__(self):
        return False


@dataclass(frozen=True)
class GenerationWitness:
    kind: str  # "leaf" or "node"
    generator: TwistedComplex
    target: TwistedComplex
    level: int
    complement: TwistedComplex
    iso: IsoWitness  # target + complement -> sum of shifts (leaf) or cone (node)
    shifts: tuple = ()
    lower: "GenerationWitness | None" = None
    upper: "GenerationWitness | None" = None
    triangle_map: Morphism | None = None

    def node_count(self) -> int:
        if self.kind == "leaf":
            return 1
        return 1 + self.lower.node_count() + self.upper.node_count()


def shifted_sum(H: PretriangulatedHull, E: TwistedComplex, shifts: Sequence[int]) -> TwistedComplex:
    return H.direct_sum(*[H.shift(E, s) for s in shifts])


# iso witness algebra ----------------------------------------------------------


def strict_iso_witness(H, u: Morphism) -> IsoWitness:
    v = H.strict_inverse(u)
    if v is None:
        raise LinAlgError("map is not a strict isomorphism")
    return IsoWitness(u, v, H.zero(u.target, u.target, -1), H.zero(u.source, u.source, -1))


def compose_iso(H, w1: IsoWitness, w2: IsoWitness) -> IsoWitness:
    """``w2 o w1`` for ``w1: X -> Y``, ``w2: Y -> Z``."""
    u = H.compose(w2.u, w1.u)
    v = H.compose(w1.v, w2.v)
    h1 = H.compose(w2.u, H.compose(w1.h1, w2.v)) + w2.h1
    h2 = H.compose(w1.v, H.compose(w2.h2, w1.u)) + w1.h2
    return IsoWitness(u, v, h1, h2)


def invert_iso(w: IsoWitness) -> IsoWitness:
    return IsoWitness(w.v, w.u, w.h2, w.h1)


def sum_iso(H: PretriangulatedHull, ws: Sequence[IsoWitness]) -> IsoWitness:
    return IsoWitness(
        H.sum_morphism([w.u for w in ws]),
        H.sum_morphism([w.v for w in ws]),
        H.sum_morphism([w.h1 for w in ws]),
        H.sum_morphism([w.h2 for w in ws]),
    )


def shift_iso(H: PretriangulatedHull, w: IsoWitness, j: int) -> IsoWitness:
    sign = H.field.one if j % 2 == 0 else -H.field.one
    return IsoWitness(
        H.shift_morphism(w.u, j),
        H.shift_morphism(w.v, j),
        H.shift_morphism(w.h1, j).scale(sign),
        H.shift_morphism(w.h2, j).scale(sign),
    )


def _block_perm(blocks: Sequence[int], order: Sequence[int]) -> list[int]:
    """Entry permutation putting block ``order[0]`` first, etc."""
    offs = [0]
    for b in blocks:
        offs.append(offs[-1] + b)
    perm = []
    for k in order:
        perm.extend(range(offs[k], offs[k + 1]))
    return perm


def regroup_iso(H: PretriangulatedHull, parts: Sequence[TwistedComplex], order: Sequence[int]) -> IsoWitness:
    """Strict iso ``sum(parts) -> sum(parts[k] for k in order)``."""
    S = H.direct_sum(*parts)
    perm = _block_perm([len(p) for p in parts], order)
    _, P = H.permutation(S, perm)
    return strict_iso_witness(H, P)


# verification -----------------------------------------------------------------


def verify_generation_witness(H: PretriangulatedHull, W: GenerationWitness, path: str = "root") -> Report:
    """Re-check every isomorphism and triangle of ``W`` exactly."""
    rep = Report("generation_witness")
    try:
        _verify(H, W, path, rep)
    except (ValueError, LinAlgError, KeyError, IndexError, TypeError, ZeroDivisionError) as exc:
        rep.add(path, False, f"malformed: {exc}")
    return rep


def _verify(H, W, path, rep) -> bool:
    E, M = W.generator, W.target
    src = H.direct_sum(M, W.complement)
    if W.kind == "leaf":
        if not rep.add(f"{path}.level", W.level == 1, W.level):
            return False
        S = shifted_sum(H, E, W.shifts)
        shape = (W.iso.u.source, W.iso.u.target) == (src, S)
        if not rep.add(f"{path}.shape", shape):
            return False
        return rep.add(f"{path}.iso", W.iso.verify(H))
    if W.kind != "node":
        rep.add(f"{path}.kind", False, W.kind)
        return False
    lo, up = W.lower, W.upper
    ok = rep.add(f"{path}.level", W.level >= 2 and lo.level <= W.level - 1 and up.level == 1, W.level)
    ok = rep.add(f"{path}.generator", lo.generator == E and up.generator == E) and ok
    if not ok:
        return False
    if not _verify(H, lo, path + ".lower", rep) or not _verify(H, up, path + ".upper", rep):
        return False
    c = W.triangle_map
    shape = c.degree == 0 and c.source == H.shift(up.target, -1) and c.target == lo.target
    if not rep.add(f"{path}.triangle_shape", shape):
        return False
    if not rep.add(f"{path}.triangle_closed", H.is_closed(c)):
        return False
    C = H.cone(c).cone
    shape = (W.iso.u.source, W.iso.u.target) == (src, C)
    if not rep.add(f"{path}.shape", shape):
        return False
    return rep.add(f"{path}.iso", W.iso.verify(H))


# building blocks ------------------------------------------------------------------


def zero_leaf(H: PretriangulatedHull, E: TwistedComplex) -> GenerationWitness:
    z = H.zero(ZERO, ZERO, 0)
    h = H.zero(ZERO, ZERO, -1)
    return GenerationWitness("leaf", E, ZERO, 1, ZERO, IsoWitness(z, z, h, h), shifts=())


def identity_leaf(H: PretriangulatedHull, E: TwistedComplex, shifts: Sequence[int]) -> GenerationWitness:
    """``M = E[s_1] + ...`` itself, complement zero."""
    S = shifted_sum(H, E, shifts)
    return GenerationWitness("leaf", E, S, 1, ZERO, strict_iso_witness(H, H.identity(S)), shifts=tuple(shifts))


def pad(H: PretriangulatedHull, W: GenerationWitness, k: int) -> GenerationWitness:
    """Raise the level of ``W`` to ``k`` by zero triangles ``M -> M -> 0``."""
    while W.level < k:
        E, M = W.generator, W.target
        z = zero_leaf(H, E)
        c = H.zero(H.shift(ZERO, -1), M, 0)
        C = H.cone(c).cone
        assert C == M
        iso = strict_iso_witness(H, H.identity(M))
        W = GenerationWitness("node", E, M, W.level + 1, ZERO, iso, lower=W, upper=z, triangle_map=c)
    return W


def shift_witness(H: PretriangulatedHull, W: GenerationWitness, j: int) -> GenerationWitness:
    """Witness for ``M[j]``."""
    sign = H.field.one if j % 2 == 0 else -H.field.one
    iso = shift_iso(H, W.iso, j)
    if W.kind == "leaf":
        return replace(
            W, target=H.shift(W.target, j), complement=H.shift(W.complement, j), iso=iso,
            shifts=tuple(s + j for s in W.shifts),
        )
    lo = shift_witness(H, W.lower, j)
    up = shift_witness(H, W.upper, j)
    c = H.shift_morphism(W.triangle_map, j).scale(sign)
    return replace(W, target=H.shift(W.target, j), complement=H.shift(W.complement, j), iso=iso, lower=lo, upper=up, triangle_map=c)


def sum_witness(H: PretriangulatedHull, W1: GenerationWitness, W2: GenerationWitness) -> GenerationWitness:
    """Witness for ``M1 + M2`` at the larger of the two levels."""
    k = max(W1.level, W2.level)
    W1, W2 = pad(H, W1, k), pad(H, W2, k)
    E = W1.generator
    M1, C1, M2, C2 = W1.target, W1.complement, W2.target, W2.complement
    # (M1 + M2) + (C1 + C2) -> (M1 + C1) + (M2 + C2)
    P = regroup_iso(H, [M1, M2, C1, C2], [0, 2, 1, 3])
    mid = compose_iso(H, P, sum_iso(H, [W1.iso, W2.iso]))
    M = H.direct_sum(M1, M2)
    C = H.direct_sum(C1, C2)
    if W1.kind == "leaf":
        return GenerationWitness("leaf", E, M, 1, C, mid, shifts=W1.shifts + W2.shifts)
    lo = sum_witness(H, W1.lower, W2.lower)
    up = sum_witness(H, W1.upper, W2.upper)
    c = H.sum_morphism([W1.triangle_map, W2.triangle_map])
    # cone(c1) + cone(c2) -> cone(c1 + c2): regroup entries I1, I1', I2, I2'
    a1, b1 = len(W1.lower.target), len(W1.upper.target)
    a2, b2 = len(W2.lower.target), len(W2.upper.target)
    cones = H.cone(W1.triangle_map).cone, H.cone(W2.triangle_map).cone
    parts = [
        TwistedComplex(cones[0].entries[:a1]), TwistedComplex(cones[0].entries[a1:]),
        TwistedComplex(cones[1].entries[:a2]), TwistedComplex(cones[1].entries[a2:]),
    ]
    S = H.direct_sum(*cones)
    perm = _block_perm([a1, b1, a2, b2], [0, 2, 1, 3])
    target, Q = H.permutation(S, perm)
    assert target == H.cone(c).cone
    iso = compose_iso(H, mid, strict_iso_witness(H, Q))
    return GenerationWitness("node", E, M, k, C, iso, lower=lo, upper=up, triangle_map=c)


def retarget(H: PretriangulatedHull, W: GenerationWitness, P: Morphism) -> GenerationWitness:
    """Witness for ``N`` from a witness for ``M`` and a strict iso ``P: M -> N``."""
    Pw = strict_iso_witness(H, P)
    C = W.complement
    back = sum_iso(H, [invert_iso(Pw), strict_iso_witness(H, H.identity(C))])
    return replace(W, target=P.target, iso=compose_iso(H, back, W.iso))


# search -------------------------------------------------------------------------


class _Counter:
    def __init__(self, limit: int, seed=None):
        self.limit = limit
        self.n = 0
        self.rng = random.Random(seed) if seed is not None else None

    def tick(self) -> bool:
        self.n += 1
        return self.n <= self.limit


def level_one(H: PretriangulatedHull, E: TwistedComplex, M: TwistedComplex, budget: SearchBudget):
    """Decide, for shifts in the window, whether ``id_M`` factors through a
    sum of shifted copies of ``E`` up to homotopy; one linear solve.

    Unknowns are the coefficients of ``b o a`` for ``H^0`` basis classes
    ``a: M -> E[s]`` and ``b: E[s] -> M``, plus a homotopy.
    """
    F = H.field
    w = budget.shift_window
    terms = []  # (s, a, b)
    for s in range(-w, w + 1):
        Es = H.shift(E, s)
        if not len(Es):
            continue
        A = H.h0_basis(M, Es, 0)
        if not A:
            continue
        B = H.h0_basis(Es, M, 0)
        for a in A:
            for b in B:
                terms.append((s, a, b))
    End = H.hom(M, M)
    cols = [H.compose(b, a).vector for s, a, b in terms]
    bnd = End.differential(-1)
    A_mat = Matrix.from_columns(F, cols, End.dim(0)) if cols else Matrix.zeros(F, End.dim(0), 0)
    A_mat = A_mat.hstack(bnd) if bnd.ncols else A_mat
    x = solve(A_mat, H.identity(M).vector)
    if x is None:
        return Exhausted(f"identity does not factor through shifts in [-{w}, {w}]")
    used = [(terms[i], c) for i, c in enumerate(x[: len(terms)]) if c]
    if len(used) > budget.max_coefficient_support:
        return Exhausted("factorization exceeds the coefficient support budget")
    # one copy of E[s] per distinct (s, a); the maps back are combined
    copies: dict = {}
    order = []
    for (s, a, b), c in used:
        key = (s, a)
        if key not in copies:
            copies[key] = b.scale(c)
            order.append(key)
        else:
            copies[key] = copies[key] + b.scale(c)
    order.sort(key=lambda k: k[0])
    per_shift: dict = {}
    for s, _ in order:
        per_shift[s] = per_shift.get(s, 0) + 1
    if per_shift and max(per_shift.values()) > budget.max_multiplicity:
        return Exhausted("factorization exceeds the multiplicity budget")
    shifts = tuple(s for s, _ in order)
    parts = [H.shift(E, s) for s in shifts]
    S = H.direct_sum(*parts)
    u = H.block_morphism([M], parts, 0, {(i, 0): a for i, (s, a) in enumerate(order)})
    v = H.block_morphism(parts, [M], 0, {(0, i): copies[k] for i, k in enumerate(order)})
    u = Morphism(M, S, 0, u.vector)
    v = Morphism(S, M, 0, v.vector)
    ok, wit = H.is_h0_invertible(u)
    if ok:
        # M + 0 is M itself
        return GenerationWitness("leaf", E, M, 1, ZERO, wit, shifts=shifts)
    # S = M + cone(u) since u is split by v
    cd = H.cone(u)
    Mc = cd.cone
    t = H.block_morphism([S], [M, Mc], 0, {(0, 0): v, (1, 0): cd.inclusion})
    t = Morphism(S, H.direct_sum(M, Mc), 0, t.vector)
    ok, wit = H.is_h0_invertible(t)
    if not ok:
        return Exhausted("split summand could not be complemented")
    return GenerationWitness("leaf", E, M, 1, Mc, invert_iso(wit), shifts=shifts)


def _sub_twisted(T: TwistedComplex, lo: int, hi: int) -> TwistedComplex:
    q = [(i - lo, j - lo, v) for i, j, v in T.q if lo <= i and j < hi]
    return TwistedComplex(T.entries[lo:hi], tuple(q))


def _search(H, E, M, k, budget, counter):
    if not counter.tick():
        return Exhausted("node limit reached", counter.n)
    W = level_one(H, E, M, budget)
    if W:
        return W
    if k <= 1:
        return Exhausted(W.reason, counter.n)
    n = len(M)
    splits = list(range(n - 1, 0, -1))
    if counter.rng is not None:
        counter.rng.shuffle(splits)
    for a in splits:
        I1 = _sub_twisted(M, 0, a)
        I2 = _sub_twisted(M, a, n)
        comps = {(i, j - a): H.q_component(M, i, j) for i, j, _ in M.q if i < a <= j}
        c = H.from_components(H.shift(I2, -1), I1, 0, comps)
        if not H.is_closed(c) or H.cone(c).cone != M:
            continue
        up = level_one(H, E, I2, budget)
        if not up:
            continue
        lo = _search(H, E, I1, k - 1, budget, counter)
        if not lo:
            if counter.n > counter.limit:
                return lo
            continue
        iso = strict_iso_witness(H, H.identity(M))
        return GenerationWitness("node", E, M, lo.level + 1, ZERO, iso, lower=lo, upper=up, triangle_map=c)
    return Exhausted(f"no level {k} witness from filtrations of the entries", counter.n)


def search_generation(H: PretriangulatedHull, E: TwistedComplex, M: TwistedComplex, k: int, budget: SearchBudget | None = None, seed=None):
    """A verified level ``k`` witness for ``M`` from ``E``, or ``Exhausted``.
    ``seed`` only permutes the order in which filtrations are tried."""
    budget = budget or SearchBudget()
    W = _search(H, E, M, k, budget, _Counter(budget.node_limit, seed))
    if not W:
        return W
    W = pad(H, W, k)
    rep = verify_generation_witness(H, W)
    if not rep.passed:
        raise AssertionError(f"search produced an invalid witness: {rep.first_failure()}")
    return W


def minimal_level(H, E, M, max_level: int, budget: SearchBudget | None = None, seed=None):
    budget = budget or SearchBudget()
    for k in range(1, max_level + 1):
        W = _search(H, E, M, k, budget, _Counter(budget.node_limit, seed))
        if W:
            return W
    return Exhausted(f"no witness up to level {max_level}")


@dataclass
class DimensionBound:
    level: int
    witnesses: list

    @property
    def dimension_bound(self) -> int:
        return self.level - 1


def dimension_upper_bound(H: PretriangulatedHull, E: TwistedComplex, objects: Sequence[TwistedComplex], budget: SearchBudget | None = None, max_level: int = 4, seed=None):
    """Smallest ``k <= max_level`` with a verified level ``k`` witness from
    ``E`` for every listed object; ``k - 1`` bounds the dimension of the
    thick closure of the list. Returns ``Exhausted`` otherwise."""
    budget = budget or SearchBudget()
    found = [minimal_level(H, E, M, max_level, budget, seed) for M in objects]
    if not all(found):
        return Exhausted(f"some object has no witness up to level {max_level}")
    k = max((W.level for W in found), default=1)
    ws = [pad(H, W, k) for W in found]
    for W in ws:
        if not verify_generation_witness(H, W).passed:
            raise AssertionError("invalid witness")
    return DimensionBound(k, ws)


# Galois transport -------------------------------------------------------------------


def _lower_iso(BCH, w: IsoWitness) -> IsoWitness:
    f = BCH.p_lower_morphism
    return IsoWitness(f(w.u), f(w.v), f(w.h1), f(w.h2))


def lower_witness(BCH, W: GenerationWitness, E: TwistedComplex) -> GenerationWitness:
    """Apply ``p_*`` to every node of a witness over the base change whose
    generator is ``p^*(E)``; the result has generator ``E`` and each shift
    repeated ``[L:K]`` times."""
    d = BCH.L.degree
    if W.generator != BCH.p_star(E):
        raise ValueError("witness generator is not p^*(E)")
    H = BCH.H_A
    tgt = BCH.p_lower(W.target)
    comp = BCH.p_lower(W.complement)
    iso = _lower_iso(BCH, W.iso)
    if W.kind == "leaf":
        shifts = tuple(s for s in W.shifts for _ in range(d))
        # p_* p^* E lists entry i copy c at i*d + c; E + ... + E wants c*n + i
        n = len(E)
        block = [i * d + c for c in range(d) for i in range(n)]
        perm = [t * n * d + b for t in range(len(W.shifts)) for b in block]
        S, P = H.permutation(iso.u.target, perm)
        if S != shifted_sum(H, E, shifts):
            raise ValueError("lowered sum does not match the generator copies")
        iso = compose_iso(H, iso, strict_iso_witness(H, P))
        return GenerationWitness("leaf", E, tgt, 1, comp, iso, shifts=shifts)
    lo = lower_witness(BCH, W.lower, E)
    up = lower_witness(BCH, W.upper, E)
    c = BCH.p_lower_morphism(W.triangle_map)
    return GenerationWitness("node", E, tgt, W.level, comp, iso, lower=lo, upper=up, triangle_map=c)


def galois_transport_witness(BCH, W: GenerationWitness, E: TwistedComplex, M: TwistedComplex | None = None) -> GenerationWitness:
    """Turn a witness for ``p^*(M)`` from ``p^*(E)`` into a witness for
    ``M^{+d}`` from ``E`` at the same level.

    ``p_*`` is applied node by node (it preserves shifts, sums, cones and
    homotopy equivalences strictly); by the projection formula this is the
    descent of the orbit sum of each node. The target ``p_* p^* M`` is then
    reordered into ``M + ... + M``.
    """
    H = BCH.H_A
    d = BCH.L.degree
    Wl = lower_witness(BCH, W, E)
    if M is None:
        return Wl
    if W.target != BCH.p_star(M):
        raise ValueError("witness target is not p^*(M)")
    n = len(M)
    # lowered entry (i, copy c) sits at i*d + c; M^{+d} wants it at c*n + i
    perm = [i * d + c for c in range(d) for i in range(n)]
    N, P = H.permutation(Wl.target, perm)
    if N != H.direct_sum(*([M] * d)):
        raise ValueError("lowered target is not a reordering of M^{+d}")
    out = retarget(H, Wl, P)
    rep = verify_generation_witness(H, out)
    if not rep.passed:
        raise ValueError(f"transported witness fails verification: {rep.first_failure()}")
    return out
