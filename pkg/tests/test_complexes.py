import random

import pytest
from hypothesis import given, strategies as st

from scalext.complexes import (
    ChainMap,
    CochainComplex,
    InvalidComplex,
    NotNullHomotopic,
    cohomology,
    cohomology_dims,
    hom_complex,
    is_acyclic,
    shift_complex,
    solve_null_homotopy,
)
from scalext.fields import GF, QQ
from scalext.linalg import Matrix


def K2_to_K2(field, rows):
    return CochainComplex(field, {0: 2, 1: 2}, {0: Matrix.from_values(field, rows)})


def test_cohomology_of_rank_one_map():
    # oracle (sympy): H^0 = H^1 = 1 for [[1,1],[1,1]]
    C = K2_to_K2(QQ, [[1, 1], [1, 1]])
    assert cohomology(C, 0)[0] == 1
    assert cohomology(C, 1)[0] == 1
    assert cohomology(C, 0)[1] == [(1, -1)]


def test_d_squared_rejected():
    with pytest.raises(InvalidComplex):
        CochainComplex(QQ, {0: 1, 1: 1, 2: 1}, {0: Matrix.from_values(QQ, [[1]]), 1: Matrix.from_values(QQ, [[1]])})


def test_shift_signs():
    C = K2_to_K2(QQ, [[1, 0], [0, 1]])
    D = shift_complex(C, 1)
    assert D.dim(-1) == 2
    assert D.differential(-1) == Matrix.from_values(QQ, [[-1, 0], [0, -1]])
    assert shift_complex(C, 2).differential(-2) == C.differential(0)


def test_identity_of_acyclic_is_null_homotopic():
    C = K2_to_K2(QQ, [[1, 0], [0, 1]])
    assert is_acyclic(C)
    h = solve_null_homotopy(ChainMap.identity(C))
    assert h.differential() == ChainMap.identity(C)


def test_identity_of_point_not_null_homotopic():
    C = CochainComplex(QQ, {0: 1})
    with pytest.raises(NotNullHomotopic) as exc:
        solve_null_homotopy(ChainMap.identity(C))
    assert exc.value.certificate is not None


def random_complex(field, rng, length=3):
    """Random complex built as a direct sum of shifted two-term pieces."""
    dims, d = {}, {}
    n0 = rng.randint(-1, 1)
    for n in range(n0, n0 + length):
        dims[n] = rng.randint(0, 2)
    C = CochainComplex(field, dims)
    # compose d^n = i o p with p: V^n -> W surjective and i: W -> V^(n+1) with d^(n+1) i = 0
    for n in range(n0, n0 + length - 1):
        a, b = dims[n], dims[n + 1]
        if not a or not b:
            continue
        prev = d.get(n - 1)
        # avoid d^n d^(n-1) != 0 by using zero where necessary
        m = Matrix.from_values(field, [[rng.randint(-1, 1) for _ in range(a)] for _ in range(b)])
        if prev is not None and not (m @ prev).is_zero():
            continue
        d[n] = m
    return CochainComplex(field, dims, d)


@pytest.mark.parametrize("field", [QQ, GF(2), GF(3)])
@given(seed=st.integers(0, 10**6))
def test_hom_complex_squares_to_zero_and_euler(field, seed):
    rng = random.Random(seed)
    C, D = random_complex(field, rng), random_complex(field, rng)
    H = hom_complex(C, D)  # checks d^2 = 0 on construction
    euler = lambda X: sum((-1) ** n * X.dim(n) for n in X.degrees)
    hc = lambda X: sum((-1) ** n * k for n, k in cohomology_dims(X).items())
    assert euler(H) == euler(C) * euler(D)
    assert hc(H) == euler(H)
    assert hc(C) == euler(C)


@pytest.mark.parametrize("field", [QQ, GF(3)])
@given(seed=st.integers(0, 10**6), k=st.integers(-2, 2))
def test_shift_preserves_cohomology(field, seed, k):
    C = random_complex(field, random.Random(seed))
    S = shift_complex(C, k)
    assert cohomology_dims(S) == {n - k: v for n, v in cohomology_dims(C).items()}


@given(seed=st.integers(0, 10**6))
def test_boundaries_are_null_homotopic(seed):
    rng = random.Random(seed)
    C, D = random_complex(QQ, rng), random_complex(QQ, rng)
    H = hom_complex(C, D)
    from scalext.complexes import unflatten_map

    for n in H.degrees:
        if not H.dim(n - 1):
            continue
        v = tuple(QQ(rng.randint(-2, 2)) for _ in range(H.dim(n - 1)))
        f = unflatten_map(C, D, n - 1, v).differential()
        h = solve_null_homotopy(f)
        assert h.differential() == f


def test_cohomology_spec_examples():
    iso = CochainComplex(QQ, {0: 1, 1: 1}, {0: Matrix.from_values(QQ, [[1]])})
    assert cohomology_dims(iso) == {}
    zero = CochainComplex(QQ, {0: 1, 1: 1})
    assert cohomology_dims(zero) == {0: 1, 1: 1}
    C = K2_to_K2(QQ, [[1, 0], [0, 0]])
    assert cohomology_dims(C) == {0: 1, 1: 1}


def test_null_homotopy_of_identity_on_acyclic_line():
    C = CochainComplex(QQ, {0: 1, 1: 1}, {0: Matrix.from_values(QQ, [[1]])})
    h = solve_null_homotopy(ChainMap.identity(C))
    assert h.component(1) == Matrix.from_values(QQ, [[1]])
    assert h.component(0).is_zero()


def test_null_homotopy_of_zero_map():
    C = K2_to_K2(QQ, [[1, 0], [0, 0]])
    assert solve_null_homotopy(ChainMap.zero(C, C)).components == {}


@given(seed=st.integers(0, 10**6), k=st.integers(-3, 3))
def test_shift_roundtrip(seed, k):
    C = random_complex(QQ, random.Random(seed))
    assert shift_complex(shift_complex(C, k), -k) == C
    assert shift_complex(C, 0) == C
