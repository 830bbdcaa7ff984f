"""Twisted complexes over a DG-category and their DG-category.

An object is ``(C_1[r_1] + ... + C_n[r_n], q)``. The component ``q_ij`` is an
element of the ambient ``Hom(C_j, C_i)`` of degree ``1 + r_i - r_j``, nonzero
only for ``i < j``.

A degree ``l`` morphism ``f: T -> T'`` has components
``f_ij in Hom(C_j, C'_i)`` of ambient degree ``l + r'_i - r_j``; components are
stored as ambient elements without any sign twist. Its differential is

    d(f)_ij = (-1)^(r'_i) d(f_ij) + sum_k q'_ik f_kj - (-1)^l sum_k f_ik q_kj

and composition is the plain matrix product. The Maurer-Cartan equation is
``(-1)^(r_i) d(q_ij) + sum_k q_ik q_kj = 0``.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Hashable, Mapping, Sequence

from .complexes import CochainComplex, NotClosed, is_zero_vec, zero_vec
from .dg import DgCategory, Morphism
from .linalg import Matrix
from .report import Report


@dataclass(frozen=True)
class TwistedComplex:
    entries: tuple
    q: tuple = ()

    def __post_init__(self):
        object.__setattr__(self, "entries", tuple((C, int(r)) for C, r in self.entries))
        q = tuple(sorted((int(i), int(j), tuple(v)) for i, j, v in self.q if any(v)))
        object.__setattr__(self, "q", q)

    def __len__(self):
        return len(self.entries)

    @property
    def objects(self) -> list:
        return [C for C, _ in self.entries]

    @property
    def shifts(self) -> list[int]:
        return [r for _, r in self.entries]

    def q_vector(self, i: int, j: int):
        for a, b, v in self.q:
            if (a, b) == (i, j):
                return v
        return None

    def __repr__(self):
        ent = " + ".join(f"{C!r}[{r}]" for C, r in self.entries) or "0"
        return f"Tw({ent}; {len(self.q)} q)"


ZERO = TwistedComplex((), ())


@dataclass(frozen=True)
class ConeData:
    cone: TwistedComplex
    inclusion: Morphism  # target -> cone
    projection: Morphism  # cone -> source[1]


class _Layout:
    """Block structure of ``Hom(T, T')``: per degree ``l`` an ordered list of
    ``(i, j, ambient_degree, offset, size)``."""

    def __init__(self, amb: DgCategory, T: TwistedComplex, U: TwistedComplex):
        blocks: dict[int, list] = {}
        for i, (Ci, ri) in enumerate(U.entries):
            for j, (Cj, rj) in enumerate(T.entries):
                H = amb.hom(Cj, Ci)
                for n in H.degrees:
                    blocks.setdefault(n - ri + rj, []).append([i, j, n, 0, H.dim(n)])
        self.blocks: dict[int, list[tuple]] = {}
        self.index: dict[tuple, tuple] = {}
        for l, bl in blocks.items():
            bl.sort()
            off = 0
            out = []
            for b in bl:
                b[3] = off
                off += b[4]
                out.append(tuple(b))
                self.index[(l, b[0], b[1])] = (b[3], b[4], b[2])
            self.blocks[l] = out
        self.dims = {l: sum(b[4] for b in bl) for l, bl in self.blocks.items()}

    def dim(self, l: int) -> int:
        return self.dims.get(l, 0)


def _add_into(rows: list[list], r0: int, c0: int, m: Matrix, sign) -> None:
    for i, row in enumerate(m.rows):
        tgt = rows[r0 + i]
        for j, x in enumerate(row):
            if x:
                tgt[c0 + j] = tgt[c0 + j] + sign * x


class PretriangulatedHull(DgCategory):
    def __init__(self, ambient: DgCategory):
        super().__init__()
        self.ambient = ambient
        self.field = ambient.field
        self._layouts: dict = {}

    def __repr__(self):
        return f"PretriangulatedHull({self.ambient!r})"

    # objects -------------------------------------------------------------

    def twisted(self, entries: Sequence, q: Mapping | None = None) -> TwistedComplex:
        """Build a twisted complex; ``q`` maps ``(i, j)`` to an ambient
        ``Morphism`` or a coordinate vector."""
        items = []
        for (i, j), v in (q or {}).items():
            if isinstance(v, Morphism):
                v = v.vector
            items.append((i, j, tuple(self.field(x) for x in v)))
        return TwistedComplex(tuple(entries), tuple(items))

    def psi(self, X) -> TwistedComplex:
        return TwistedComplex(((X, 0),), ())

    def psi_morphism(self, f: Morphism) -> Morphism:
        return Morphism(self.psi(f.source), self.psi(f.target), f.degree, f.vector)

    def q_component(self, T: TwistedComplex, i: int, j: int) -> Morphism:
        Ci, ri = T.entries[i]
        Cj, rj = T.entries[j]
        deg = 1 + ri - rj
        v = T.q_vector(i, j)
        if v is None:
            return self.ambient.zero(Cj, Ci, deg)
        return Morphism(Cj, Ci, deg, v)

    def shift(self, T: TwistedComplex, k: int) -> TwistedComplex:
        sign = self.field.one if k % 2 == 0 else -self.field.one
        return TwistedComplex(
            tuple((C, r + k) for C, r in T.entries),
            tuple((i, j, tuple(sign * x for x in v)) for i, j, v in T.q),
        )

    def shift_morphism(self, f: Morphism, k: int) -> Morphism:
        """``f[k]: T[k] -> T'[k]`` with the same components; ``d(f[k]) = (-1)^k d(f)[k]``."""
        return Morphism(self.shift(f.source, k), self.shift(f.target, k), f.degree, f.vector)

    def direct_sum(self, *Ts: TwistedComplex) -> TwistedComplex:
        entries = []
        q = []
        off = 0
        for T in Ts:
            entries.extend(T.entries)
            q.extend((i + off, j + off, v) for i, j, v in T.q)
            off += len(T)
        return TwistedComplex(tuple(entries), tuple(q))

    def validate_twisted(self, T: TwistedComplex) -> Report:
        rep = Report("twisted_complex")
        A = self.ambient
        n = len(T)
        bad = None
        for i, j, v in T.q:
            if not (0 <= i < j < n):
                bad = {"component": (i, j), "reason": "not strictly upper triangular"}
                break
        rep.add("triangular", bad is None, bad)
        if bad:
            return rep
        bad = None
        for i, j, v in T.q:
            Ci, ri = T.entries[i]
            Cj, rj = T.entries[j]
            if len(v) != A.hom(Cj, Ci).dim(1 + ri - rj):
                bad = {"component": (i, j), "expected_degree": 1 + ri - rj}
                break
        rep.add("degrees", bad is None, bad)
        if bad:
            return rep
        bad = None
        for i in range(n):
            for j in range(i + 1, n):
                if self._mc_component(T, i, j) is not None:
                    bad = {"component": (i, j)}
                    break
            if bad:
                break
        rep.add("maurer_cartan", bad is None, bad)
        return rep

    def _mc_component(self, T, i, j):
        A = self.ambient
        ri = T.entries[i][1]
        q_ij = self.q_component(T, i, j)
        acc = A.differential(q_ij)
        if ri % 2:
            acc = -acc
        for k in range(i + 1, j):
            acc = acc + A.compose(self.q_component(T, i, k), self.q_component(T, k, j))
        return None if acc.is_zero else acc

    # hom complexes -------------------------------------------------------

    def layout(self, T: TwistedComplex, U: TwistedComplex) -> _Layout:
        key = (T, U)
        lay = self._layouts.get(key)
        if lay is None:
            lay = _Layout(self.ambient, T, U)
            self._layouts[key] = lay
        return lay

    def _build_hom(self, T: TwistedComplex, U: TwistedComplex) -> CochainComplex:
        A = self.ambient
        F = self.field
        lay = self.layout(T, U)
        d = {}
        qU = [(i, k, self.q_component(U, i, k)) for i, k, _ in U.q]
        qT = [(k, j, self.q_component(T, k, j)) for k, j, _ in T.q]
        for l, blocks in lay.blocks.items():
            if l + 1 not in lay.blocks:
                continue
            rows = [[F.zero] * lay.dim(l) for _ in range(lay.dim(l + 1))]
            for i, j, n, off, size in blocks:
                Cj = T.entries[j][0]
                Ci, ri = U.entries[i]
                tgt = lay.index.get((l + 1, i, j))
                if tgt is not None:
                    sign = F.one if ri % 2 == 0 else -F.one
                    _add_into(rows, tgt[0], off, A.hom(Cj, Ci).differential(n), sign)
                # q' f: block (k=i, j) feeds (i', j) via q'_{i' i}
                for a, k, qa in qU:
                    if k != i:
                        continue
                    tgt = lay.index.get((l + 1, a, j))
                    if tgt is None:
                        continue
                    _add_into(rows, tgt[0], off, A.left_matrix(qa, Cj, n), F.one)
                # -(-1)^l f q: block (i, k=j) feeds (i, j') via q_{j j'}
                sign = -F.one if l % 2 == 0 else F.one
                for k, b, qb in qT:
                    if k != j:
                        continue
                    tgt = lay.index.get((l + 1, i, b))
                    if tgt is None:
                        continue
                    _add_into(rows, tgt[0], off, A.right_matrix(qb, Ci, n), sign)
            d[l] = Matrix(F, rows, lay.dim(l))
        return CochainComplex(F, lay.dims, d, check=False)

    def components(self, f: Morphism) -> dict:
        """Nonzero components of ``f`` as ambient morphisms keyed by ``(i, j)``."""
        lay = self.layout(f.source, f.target)
        out = {}
        for i, j, n, off, size in lay.blocks.get(f.degree, []):
            v = f.vector[off: off + size]
            if any(v):
                Cj = f.source.entries[j][0]
                Ci = f.target.entries[i][0]
                out[(i, j)] = Morphism(Cj, Ci, n, tuple(v))
        return out

    def component(self, f: Morphism, i: int, j: int) -> Morphism:
        Cj, rj = f.source.entries[j]
        Ci, ri = f.target.entries[i]
        n = f.degree + ri - rj
        lay = self.layout(f.source, f.target)
        idx = lay.index.get((f.degree, i, j))
        if idx is None:
            return self.ambient.zero(Cj, Ci, n)
        off, size, _ = idx
        return Morphism(Cj, Ci, n, f.vector[off: off + size])

    def from_components(self, T: TwistedComplex, U: TwistedComplex, l: int, comps: Mapping) -> Morphism:
        lay = self.layout(T, U)
        vec = [self.field.zero] * lay.dim(l)
        for (i, j), c in comps.items():
            v = c.vector if isinstance(c, Morphism) else tuple(c)
            if not any(v):
                continue
            idx = lay.index.get((l, i, j))
            if idx is None:
                raise ValueError(f"component ({i},{j}) has no room in degree {l}")
            off, size, n = idx
            if isinstance(c, Morphism) and c.degree != n:
                raise ValueError(f"component ({i},{j}) must have ambient degree {n}, got {c.degree}")
            if len(v) != size:
                raise ValueError(f"component ({i},{j}) has length {len(v)}, expected {size}")
            vec[off: off + size] = list(v)
        return Morphism(T, U, l, tuple(vec))

    def identity(self, T: TwistedComplex) -> Morphism:
        A = self.ambient
        return self.from_components(T, T, 0, {(i, i): A.identity(C) for i, (C, _) in enumerate(T.entries)})

    def compose(self, g: Morphism, f: Morphism) -> Morphism:
        self.check_composable(g, f)
        A = self.ambient
        gc = self.components(g)
        fc = self.components(f)
        by_k: dict[int, list] = {}
        for (k, j), fk in fc.items():
            by_k.setdefault(k, []).append((j, fk))
        acc: dict = {}
        for (i, k), gk in gc.items():
            for j, fk in by_k.get(k, ()):
                h = A.compose(gk, fk)
                acc[(i, j)] = acc[(i, j)] + h if (i, j) in acc else h
        return self.from_components(f.source, g.target, f.degree + g.degree, acc)

    def left_matrix(self, g: Morphism, X, a: int) -> Matrix:
        A = self.ambient
        F = self.field
        Y, Z = g.source, g.target
        src = self.layout(X, Y)
        dst = self.layout(X, Z)
        rows = [[F.zero] * src.dim(a) for _ in range(dst.dim(a + g.degree))]
        gc = self.components(g)
        for k, j, n, off, size in src.blocks.get(a, []):
            Cj = X.entries[j][0]
            for (i, kk), gk in gc.items():
                if kk != k:
                    continue
                tgt = dst.index.get((a + g.degree, i, j))
                if tgt is None:
                    continue
                _add_into(rows, tgt[0], off, A.left_matrix(gk, Cj, n), F.one)
        return Matrix(F, rows, src.dim(a))

    def right_matrix(self, f: Morphism, Z, b: int) -> Matrix:
        A = self.ambient
        F = self.field
        X, Y = f.source, f.target
        src = self.layout(Y, Z)
        dst = self.layout(X, Z)
        rows = [[F.zero] * src.dim(b) for _ in range(dst.dim(b + f.degree))]
        fc = self.components(f)
        for i, k, n, off, size in src.blocks.get(b, []):
            Ci = Z.entries[i][0]
            for (kk, j), fk in fc.items():
                if kk != k:
                    continue
                tgt = dst.index.get((b + f.degree, i, j))
                if tgt is None:
                    continue
                _add_into(rows, tgt[0], off, A.right_matrix(fk, Ci, n), F.one)
        return Matrix(F, rows, src.dim(b))

    # constructions -------------------------------------------------------

    def cone(self, alpha: Morphism) -> ConeData:
        """Cone of a closed degree 0 map ``alpha: T -> T'``: entries of ``T'``
        followed by those of ``T[1]``, with ``q = [[q', alpha], [0, -q]]``."""
        if alpha.degree != 0:
            raise ValueError("cone needs a degree 0 morphism")
        if not self.is_closed(alpha):
            raise NotClosed("cone of a non-closed morphism")
        T, U = alpha.source, alpha.target
        n = len(U)
        T1 = self.shift(T, 1)
        q = list(U.q) + [(i + n, j + n, v) for i, j, v in T1.q]
        for (i, j), c in self.components(alpha).items():
            q.append((i, j + n, c.vector))
        C = TwistedComplex(tuple(U.entries) + tuple(T1.entries), tuple(q))
        A = self.ambient
        inc = self.from_components(U, C, 0, {(i, i): A.identity(X) for i, (X, _) in enumerate(U.entries)})
        proj = self.from_components(C, T1, 0, {(j, j + n): A.identity(X) for j, (X, _) in enumerate(T1.entries)})
        return ConeData(C, inc, proj)

    def is_h0_iso(self, u: Morphism):
        return self.is_h0_invertible(u)

    def permutation(self, T: TwistedComplex, perm: Sequence[int]) -> tuple[TwistedComplex, Morphism]:
        """Reorder entries: new entry ``a`` is old entry ``perm[a]``. Returns
        the new complex and the strict isomorphism ``T -> T'``."""
        inv = {p: a for a, p in enumerate(perm)}
        if sorted(perm) != list(range(len(T))):
            raise ValueError("not a permutation")
        q = [(inv[i], inv[j], v) for i, j, v in T.q]
        if any(a >= b for a, b, _ in q):
            raise ValueError("permutation breaks triangularity of q")
        U = TwistedComplex(tuple(T.entries[p] for p in perm), tuple(q))
        A = self.ambient
        P = self.from_components(T, U, 0, {(a, p): A.identity(T.entries[p][0]) for a, p in enumerate(perm)})
        return U, P

    def injection(self, parts: Sequence[TwistedComplex], k: int) -> Morphism:
        S = self.direct_sum(*parts)
        off = sum(len(p) for p in parts[:k])
        A = self.ambient
        P = parts[k]
        return self.from_components(P, S, 0, {(off + i, i): A.identity(C) for i, (C, _) in enumerate(P.entries)})

    def projection(self, parts: Sequence[TwistedComplex], k: int) -> Morphism:
        S = self.direct_sum(*parts)
        off = sum(len(p) for p in parts[:k])
        A = self.ambient
        P = parts[k]
        return self.from_components(S, P, 0, {(i, off + i): A.identity(C) for i, (C, _) in enumerate(P.entries)})

    def sum_morphism(self, fs: Sequence[Morphism]) -> Morphism:
        """Block-diagonal ``f_1 + ... + f_m`` between the direct sums."""
        S = self.direct_sum(*[f.source for f in fs])
        U = self.direct_sum(*[f.target for f in fs])
        l = fs[0].degree if fs else 0
        comps = {}
        ro = co = 0
        for f in fs:
            for (i, j), c in self.components(f).items():
                comps[(ro + i, co + j)] = c
            ro += len(f.target)
            co += len(f.source)
        return self.from_components(S, U, l, comps)

    def block_morphism(self, sources: Sequence[TwistedComplex], targets: Sequence[TwistedComplex], l: int, blocks: Mapping) -> Morphism:
        """Morphism between direct sums from blocks ``(a, b) -> Morphism``
        with ``blocks[(a, b)]: sources[b] -> targets[a]``."""
        S = self.direct_sum(*sources)
        U = self.direct_sum(*targets)
        roff = [0]
        for t in targets:
            roff.append(roff[-1] + len(t))
        coff = [0]
        for s in sources:
            coff.append(coff[-1] + len(s))
        comps = {}
        for (a, b), f in blocks.items():
            for (i, j), c in self.components(f).items():
                comps[(roff[a] + i, coff[b] + j)] = c
        return self.from_components(S, U, l, comps)

    def map_entries(self, source_hull: "PretriangulatedHull", T: TwistedComplex, on_object: Callable, on_morphism: Callable) -> TwistedComplex:
        """Apply a strict DG functor ``source_hull.ambient -> self.ambient``
        entry by entry."""
        entries = tuple((on_object(C), r) for C, r in T.entries)
        q = []
        for i, j, _ in T.q:
            q.append((i, j, on_morphism(source_hull.q_component(T, i, j)).vector))
        return TwistedComplex(entries, tuple(q))

    def map_morphism(self, source_hull: "PretriangulatedHull", f: Morphism, on_object: Callable, on_morphism: Callable) -> Morphism:
        S = self.map_entries(source_hull, f.source, on_object, on_morphism)
        U = self.map_entries(source_hull, f.target, on_object, on_morphism)
        comps = {k: on_morphism(c) for k, c in source_hull.components(f).items()}
        return self.from_components(S, U, f.degree, comps)


def flatten(outer: PretriangulatedHull, TT: TwistedComplex) -> TwistedComplex:
    """Totalize a twisted complex whose entries are twisted complexes.

    Entry ``(T_a, s_a)`` contributes entries ``(C_ai, r_ai + s_a)``; inner
    differentials are multiplied by ``(-1)^(s_a)`` and outer components are
    copied block by block.
    """
    inner: PretriangulatedHull = outer.ambient
    F = outer.field
    entries = []
    offs = []
    for T, s in TT.entries:
        offs.append(len(entries))
        entries.extend((C, r + s) for C, r in T.entries)
    q = []
    for a, (T, s) in enumerate(TT.entries):
        sign = F.one if s % 2 == 0 else -F.one
        for i, j, v in T.q:
            q.append((offs[a] + i, offs[a] + j, tuple(sign * x for x in v)))
    for a, b, _ in TT.q:
        Q = outer.q_component(TT, a, b)
        for (i, j), c in inner.components(Q).items():
            q.append((offs[a] + i, offs[b] + j, c.vector))
    return TwistedComplex(tuple(entries), tuple(q))


def flatten_morphism(outer: PretriangulatedHull, f: Morphism) -> Morphism:
    inner: PretriangulatedHull = outer.ambient
    S, U = flatten(outer, f.source), flatten(outer, f.target)
    so = [0]
    for T, _ in f.source.entries:
        so.append(so[-1] + len(T))
    to = [0]
    for T, _ in f.target.entries:
        to.append(to[-1] + len(T))
    comps = {}
    for (a, b), fab in outer.components(f).items():
        for (i, j), c in inner.components(fab).items():
            comps[(to[a] + i, so[b] + j)] = c
    return inner.from_components(S, U, f.degree, comps)
