from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from scalext.fields import GF, QQ
from scalext.linalg import (
    LinAlgError,
    Matrix,
    SubspaceCoordinates,
    inverse,
    kernel_basis,
    rank,
    rref,
    solve,
    solve_with_certificate,
)

F2, F3 = GF(2), GF(3)


def matrices(field, max_rows=4, max_cols=4):
    if field is QQ:
        entry = st.fractions(min_value=-3, max_value=3, max_denominator=3)
    else:
        entry = st.integers(0, field.characteristic - 1)

    @st.composite
    def build(draw):
        r = draw(st.integers(1, max_rows))
        c = draw(st.integers(1, max_cols))
        rows = draw(st.lists(st.lists(entry, min_size=c, max_size=c), min_size=r, max_size=r))
        return Matrix.from_values(field, rows)

    return build()


def test_kernel_of_all_ones():
    m = Matrix.from_values(QQ, [[1, 1], [1, 1]])
    assert kernel_basis(m) == [(Fraction(1), Fraction(-1))]


def test_kernel_over_f2():
    m = Matrix.from_values(F2, [[1, 1], [1, 1]])
    assert kernel_basis(m) == [(F2(1), F2(1))]


def test_kernel_of_empty_rows_is_everything():
    m = Matrix.zeros(QQ, 0, 3)
    assert len(kernel_basis(m)) == 3


def test_rank_and_rref():
    m = Matrix.from_values(QQ, [[1, 2, 3], [2, 4, 6], [1, 0, 1]])
    assert rank(m) == 2
    r, piv = rref(m)
    assert piv == [0, 1]


def test_singular_inverse():
    with pytest.raises(LinAlgError):
        inverse(Matrix.from_values(QQ, [[1, 2], [2, 4]]))


def test_ragged_rows():
    with pytest.raises(LinAlgError):
        Matrix(QQ, [[1, 2], [3]])


def test_inconsistent_system_has_certificate():
    a = Matrix.from_values(QQ, [[1, 1], [2, 2]])
    b = (QQ(1), QQ(3))
    x, y = solve_with_certificate(a, b)
    assert x is None
    assert all(v == 0 for v in Matrix(QQ, [y], 2).__matmul__(a).rows[0])
    assert sum(yi * bi for yi, bi in zip(y, b)) != 0


@pytest.mark.parametrize("field", [QQ, F2, F3])
@given(data=st.data())
def test_kernel_vectors_are_killed_and_normalized(field, data):
    m = data.draw(matrices(field))
    ker = kernel_basis(m)
    assert len(ker) + rank(m) == m.ncols
    for v in ker:
        assert not any(m.apply(v))
        assert next(c for c in v if c) == field.one


@pytest.mark.parametrize("field", [QQ, F3])
@given(data=st.data())
def test_solve_roundtrip(field, data):
    m = data.draw(matrices(field))
    x = data.draw(st.lists(st.integers(-2, 2), min_size=m.ncols, max_size=m.ncols))
    x = tuple(field(v) for v in x)
    b = m.apply(x)
    sol = solve(m, b)
    assert sol is not None and m.apply(sol) == b


@pytest.mark.parametrize("field", [QQ, F2])
@given(data=st.data())
def test_inverse_property(field, data):
    m = data.draw(matrices(field, 3, 3))
    if m.nrows != m.ncols or rank(m) < m.nrows:
        return
    I = Matrix.identity(field, m.nrows)
    assert inverse(m) @ m == I and m @ inverse(m) == I


def test_subspace_coordinates():
    basis = Matrix.from_values(QQ, [[1, 0], [1, 1], [0, 2]])
    sc = SubspaceCoordinates(basis)
    v = basis.apply((QQ(3), QQ(-1)))
    assert sc.coords(v) == (3, -1)
    assert sc.projector().apply(v) == (3, -1)
    with pytest.raises(LinAlgError):
        sc.coords((QQ(1), QQ(0), QQ(0)))
