"""Independent oracles for values frozen into the test-suite.

Uses sympy over Q and brute-force enumeration over F_2; shares no code with
the package. Run with ``python tools/oracles.py``; not part of the tests.
"""

import itertools

import sympy as sp


def commutant_dim_q(phi, psi):
    """dim {X : X phi = psi X} over Q for square sympy matrices."""
    n = phi.shape[0]
    xs = sp.symbols(f"x0:{n * n}")
    X = sp.Matrix(n, n, xs)
    eqs = list(X * phi - psi * X)
    A, _ = sp.linear_eq_to_matrix(eqs, xs)
    return n * n - A.rank()


def count_f2(n, pred):
    return sum(1 for bits in itertools.product((0, 1), repeat=n) if pred(bits))


def main():
    r2 = sp.sqrt(2)
    print("inverse of 1+sqrt2:", sp.nsimplify(1 / (1 + r2)))
    y = sp.Symbol("y")
    factors = sp.factor_list(y ** 3 - 2, extension=sp.root(2, 3))[1]
    print("roots of x^3-2 in Q(2^(1/3)):", sum(1 for f, _ in factors if sp.degree(f, y) == 1))
    phi = sp.Matrix([[0, 2], [1, 0]])
    print("End p*(pt) over Q(sqrt2):", commutant_dim_q(phi, phi))
    print("Hom((pt2,phi),(pt2,-phi)):", commutant_dim_q(phi, -phi))
    print("Hom(pt^2, pt^2) without condition:", 4)
    print("projection formula sizes:", 4, 4)

    # F4 = F2[a]/(a^2+a+1); multiplication by a is [[0,1],[1,1]]
    A = ((0, 1), (1, 1))

    def mul(X, Y):
        return tuple(tuple(sum(X[i][k] * Y[k][j] for k in range(2)) % 2 for j in range(2)) for i in range(2))

    def commutes(bits):
        X = (bits[0:2], bits[2:4])
        return mul(X, A) == mul(A, X)

    c = count_f2(4, commutes)
    print("End p*(pt) over F4/F2: 2^%d" % (c.bit_length() - 1))

    # dual numbers: End(pt) = F2[e]; End(pt^2) = M_2(F2[e]) = X + Y e
    def commutes_dual(bits):
        X = (bits[0:2], bits[2:4])
        Y = (bits[4:6], bits[6:8])
        return mul(X, A) == mul(A, X) and mul(Y, A) == mul(A, Y)

    c = count_f2(8, commutes_dual)
    print("End p*(pt) over dual numbers F4/F2: 2^%d" % (c.bit_length() - 1))

    # fixed points of id (x) sigma^{-1} on F4 as F2-space: sigma(a) = a+1
    S = ((1, 1), (0, 1))  # columns: sigma(1) = 1, sigma(a) = 1 + a
    fixed = count_f2(2, lambda v: tuple(sum(S[i][j] * v[j] for j in range(2)) % 2 for i in range(2)) == tuple(v))
    print("Galois fixed space of F4 over F2: 2^%d" % (fixed.bit_length() - 1))

    # cohomology of K^2 -[[1,0],[0,0]]-> K^2
    d = sp.Matrix([[1, 0], [0, 0]])
    print("H0, H1:", 2 - d.rank(), 2 - d.rank())

    # End complex of cone(id_pt) in the point category: entries (pt,0),(pt,1),
    # q_01 = 1. Degree -1: f_10; degree 0: f_00, f_11; degree 1: f_01.
    # d(f) = q f - (-1)^l f q with q = E01.
    def dmat(l, basis_in, basis_out):
        cols = []
        for (i, j) in basis_in:
            F = sp.zeros(2, 2)
            F[i, j] = 1
            q = sp.Matrix([[0, 1], [0, 0]])
            D = q * F - (-1) ** l * F * q
            cols.append([D[a, b] for (a, b) in basis_out])
        return sp.Matrix(cols).T
    dm1 = dmat(-1, [(1, 0)], [(0, 0), (1, 1)])
    d0 = dmat(0, [(0, 0), (1, 1)], [(0, 1)])
    print("End cone(id) H^0:", 2 - d0.rank() - dm1.rank())


if __name__ == "__main__":
    main()
