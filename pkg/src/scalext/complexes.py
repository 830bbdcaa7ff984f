"""Bounded cochain complexes of finite-dimensional vector spaces, their
cohomology, shifts, chain maps and null-homotopies.

Sign conventions used throughout the package:

* the differential on ``Hom(C, D)`` sends a degree ``n`` map ``a`` to
  ``d_D a - (-1)^n a d_C``;
* the shift ``C[k]`` has ``C[k]^n = C^(n+k)`` and differential ``(-1)^k d_C``.
"""

from __future__ import annotations

from dataclasses import dataclass, field as dc_field
from typing import Mapping, Sequence

from .linalg import LinAlgError, Matrix, extend_to_basis, kernel_basis, rank, solve_with_certificate


class NotClosed(ValueError):
    """A morphism required to be a cocycle is not closed."""


class NotNullHomotopic(ValueError):
    def __init__(self, message: str, certificate=None):
        super().__init__(message)
        self.certificate = certificate


class InvalidComplex(ValueError):
    pass


def zero_vec(field, n: int) -> tuple:
    return (field.zero,) * n


def add_vec(u: Sequence, v: Sequence) -> tuple:
    return tuple(a + b for a, b in zip(u, v))


def sub_vec(u: Sequence, v: Sequence) -> tuple:
    return tuple(a - b for a, b in zip(u, v))


def scale_vec(c, u: Sequence) -> tuple:
    return tuple(c * a for a in u)


def is_zero_vec(u: Sequence) -> bool:
    return not any(u)


def unit_vec(field, n: int, i: int) -> tuple:
    return tuple(field.one if k == i else field.zero for k in range(n))


@dataclass(frozen=True)
class GradedVectorSpace:
    dims: Mapping[int, int]

    def __post_init__(self):
        clean = {int(n): int(k) for n, k in self.dims.items() if k}
        if any(k < 0 for k in clean.values()):
            raise InvalidComplex("negative dimension")
        object.__setattr__(self, "dims", dict(sorted(clean.items())))

    def dim(self, n: int) -> int:
        return self.dims.get(n, 0)

    @property
    def degrees(self) -> list[int]:
        return list(self.dims)

    @property
    def total_dim(self) -> int:
        return sum(self.dims.values())

    def __hash__(self):
        return hash(tuple(self.dims.items()))


class CochainComplex:
    """``d[n]`` is the matrix of ``V^n -> V^(n+1)``; missing entries are zero."""

    def __init__(self, field, dims: Mapping[int, int], d: Mapping[int, Matrix] | None = None, check: bool = True):
        self.field = field
        self.space = GradedVectorSpace(dims)
        self._d: dict[int, Matrix] = {}
        for n, m in (d or {}).items():
            n = int(n)
            if m.shape != (self.dim(n + 1), self.dim(n)):
                raise InvalidComplex(
                    f"d^{n} has shape {m.shape}, expected {(self.dim(n + 1), self.dim(n))}"
                )
            if not m.is_zero():
                self._d[n] = m
        if check:
            self.check()

    def dim(self, n: int) -> int:
        return self.space.dim(n)

    @property
    def degrees(self) -> list[int]:
        return self.space.degrees

    def differential(self, n: int) -> Matrix:
        m = self._d.get(n)
        if m is None:
            return Matrix.zeros(self.field, self.dim(n + 1), self.dim(n))
        return m

    def check(self) -> None:
        for n in self._d:
            if n + 1 in self._d and not (self._d[n + 1] @ self._d[n]).is_zero():
                raise InvalidComplex(f"d^{n + 1} d^{n} != 0")

    def apply_d(self, n: int, v: Sequence) -> tuple:
        m = self._d.get(n)
        if m is None:
            return zero_vec(self.field, self.dim(n + 1))
        return m.apply(v)

    def __eq__(self, other):
        return (
            isinstance(other, CochainComplex)
            and self.space == other.space
            and self._d == other._d
        )

    def __hash__(self):
        return hash(self.space)

    def __repr__(self):
        return f"CochainComplex(dims={self.space.dims})"

    def to_dict(self) -> dict:
        return {"dims": dict(self.space.dims), "d": dict(self._d)}


def cocycles(C: CochainComplex, n: int) -> list[tuple]:
    return kernel_basis(C.differential(n))


def coboundaries(C: CochainComplex, n: int) -> list[tuple]:
    m = C.differential(n - 1)
    return [c for c in m.columns() if any(c)]


def cohomology(C: CochainComplex, n: int) -> tuple[int, list[tuple]]:
    """``(dim H^n, representatives)``.

    Representatives are the cocycles of ``kernel_basis(d^n)`` that extend a
    basis of ``im d^(n-1)``, taken greedily in that order.
    """
    z = cocycles(C, n)
    b = coboundaries(C, n)
    chosen = extend_to_basis(C.field, b, z, C.dim(n))
    reps = [z[i] for i in chosen]
    expected = len(z) - rank(C.differential(n - 1))
    assert len(reps) == expected
    return len(reps), reps


def cohomology_dims(C: CochainComplex) -> dict[int, int]:
    out = {}
    for n in C.degrees:
        k, _ = cohomology(C, n)
        if k:
            out[n] = k
    return out


def is_acyclic(C: CochainComplex) -> bool:
    return not cohomology_dims(C)


def shift_complex(C: CochainComplex, k: int) -> CochainComplex:
    sign = C.field.one if k % 2 == 0 else -C.field.one
    dims = {n - k: m for n, m in C.space.dims.items()}
    d = {n - k: C.differential(n).scale(sign) for n in C._d}
    return CochainComplex(C.field, dims, d, check=False)


class ChainMap:
    """Homogeneous map of degree ``k``: ``components[n]: V^n -> W^(n+k)``."""

    def __init__(self, source: CochainComplex, target: CochainComplex, shift_degree: int, components: Mapping[int, Matrix]):
        self.source = source
        self.target = target
        self.shift_degree = shift_degree
        f = source.field
        self.components: dict[int, Matrix] = {}
        for n, m in components.items():
            if m.shape != (target.dim(n + shift_degree), source.dim(n)):
                raise InvalidComplex(f"component {n} has shape {m.shape}")
            if not m.is_zero():
                self.components[n] = m
        self.field = f

    def component(self, n: int) -> Matrix:
        m = self.components.get(n)
        if m is None:
            return Matrix.zeros(self.field, self.target.dim(n + self.shift_degree), self.source.dim(n))
        return m

    def differential(self) -> "ChainMap":
        """``d(f) = d_W f - (-1)^k f d_V``, a map of degree ``k + 1``."""
        k = self.shift_degree
        sign = self.field.one if k % 2 == 0 else -self.field.one
        out = {}
        for n in self.source.degrees:
            if not self.target.dim(n + k + 1):
                continue
            m = self.target.differential(n + k) @ self.component(n)
            m = m - (self.component(n + 1) @ self.source.differential(n)).scale(sign)
            out[n] = m
        return ChainMap(self.source, self.target, k + 1, out)

    @property
    def is_closed(self) -> bool:
        return not self.differential().components

    def __add__(self, other: "ChainMap") -> "ChainMap":
        keys = set(self.components) | set(other.components)
        return ChainMap(self.source, self.target, self.shift_degree, {n: self.component(n) + other.component(n) for n in keys})

    def __sub__(self, other: "ChainMap") -> "ChainMap":
        keys = set(self.components) | set(other.components)
        return ChainMap(self.source, self.target, self.shift_degree, {n: self.component(n) - other.component(n) for n in keys})

    def __eq__(self, other):
        return (
            isinstance(other, ChainMap)
            and self.shift_degree == other.shift_degree
            and self.components == other.components
        )

    def __hash__(self):
        return hash(self.shift_degree)

    @classmethod
    def identity(cls, C: CochainComplex) -> "ChainMap":
        return cls(C, C, 0, {n: Matrix.identity(C.field, C.dim(n)) for n in C.degrees})

    @classmethod
    def zero(cls, source: CochainComplex, target: CochainComplex, k: int = 0) -> "ChainMap":
        return cls(source, target, k, {})


def hom_complex(C: CochainComplex, D: CochainComplex) -> CochainComplex:
    """``Hom(C, D)`` with degree ``n`` part ``prod_m Hom(C^m, D^(m+n))``.

    A degree ``n`` element is stored as the concatenation over ascending ``m``
    of the row-major entries of its components.
    """
    layout = _hom_layout(C, D)
    dims = {n: sum(r * c for _, r, c in blocks) for n, blocks in layout.items()}
    d = {}
    for n in layout:
        if n + 1 not in layout:
            continue
        cols = []
        for v in _std_basis(C.field, dims[n]):
            f = unflatten_map(C, D, n, v)
            cols.append(flatten_map(f.differential()))
        d[n] = Matrix.from_columns(C.field, cols, dims[n + 1])
    return CochainComplex(C.field, dims, d)


def _std_basis(field, n):
    return [tuple(field.one if i == j else field.zero for i in range(n)) for j in range(n)]


def _hom_layout(C: CochainComplex, D: CochainComplex) -> dict[int, list]:
    layout: dict[int, list] = {}
    for m in C.degrees:
        for p in D.degrees:
            layout.setdefault(p - m, []).append((m, D.dim(p), C.dim(m)))
    for n in layout:
        layout[n].sort()
    return layout


def flatten_map(f: ChainMap) -> tuple:
    out = []
    k = f.shift_degree
    for m in f.source.degrees:
        if f.target.dim(m + k):
            for row in f.component(m).rows:
                out.extend(row)
    return tuple(out)


def unflatten_map(C: CochainComplex, D: CochainComplex, k: int, v: Sequence) -> ChainMap:
    comps = {}
    pos = 0
    for m in C.degrees:
        r, c = D.dim(m + k), C.dim(m)
        if not r:
            continue
        entries = v[pos: pos + r * c]
        pos += r * c
        comps[m] = Matrix(C.field, [entries[i * c:(i + 1) * c] for i in range(r)], c)
    if pos != len(v):
        raise InvalidComplex("vector length does not match the hom layout")
    return ChainMap(C, D, k, comps)


def solve_null_homotopy(f: ChainMap) -> ChainMap:
    """Find ``h`` of degree ``k - 1`` with ``d(h) = f``; for ``k = 0`` this is
    ``d h + h d = f``.

    Raises ``NotNullHomotopic`` whose ``certificate`` is a linear functional on
    ``Hom^k(C, D)`` that kills every boundary but not ``f``.
    """
    if not f.is_closed:
        raise NotClosed("null-homotopy requested for a non-closed map")
    C, D, k = f.source, f.target, f.shift_degree
    H = hom_complex(C, D)
    target = flatten_map(f)
    if not any(target):
        return ChainMap.zero(C, D, k - 1)
    x, cert = solve_with_certificate(H.differential(k - 1), target)
    if x is None:
        raise NotNullHomotopic("map represents a nonzero cohomology class", certificate=cert)
    return unflatten_map(C, D, k - 1, x)
