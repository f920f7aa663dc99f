"""Shared helpers: independent brute-force oracles and random data.

Oracles here deliberately avoid the library's own code paths wherever
they exist to check one (recursive determinants for rank, monomial
counting for dimensions, direct shifted intersections for Koszul
spaces), so an engine bug cannot hide behind itself.
"""

from fractions import Fraction
import itertools
import random

import pytest

from orenaka import (
    Matrix,
    QuadraticAlgebra,
    Subspace,
    make_jordan_plane,
    make_polynomial,
    make_quantum_plane,
    subspace_intersect,
)


def frac(a, b=1) -> Fraction:
    return Fraction(a, b)


def rand_frac(rng: random.Random, span=4, nonzero=False) -> Fraction:
    while True:
        x = Fraction(rng.randint(-span, span), rng.randint(1, 3))
        if x or not nonzero:
            return x


def rand_matrix(rng, n, span=4) -> Matrix:
    return Matrix([[rand_frac(rng, span) for _ in range(n)] for _ in range(n)])


def rand_invertible(rng, n, span=4) -> Matrix:
    while True:
        m = rand_matrix(rng, n, span)
        if minor_det(m.rows):
            return m


def minor_det(rows) -> Fraction:
    """Determinant by recursive cofactor expansion (oracle)."""
    n = len(rows)
    if n == 1:
        return rows[0][0]
    total = Fraction(0)
    for j in range(n):
        if rows[0][j]:
            minor = [
                [rows[i][k] for k in range(n) if k != j] for i in range(1, n)
            ]
            sign = 1 if j % 2 == 0 else -1
            total += sign * rows[0][j] * minor_det(minor)
    return total


def minor_rank(m: Matrix) -> int:
    """Largest size of a nonsingular square minor (oracle)."""
    best = 0
    for size in range(1, min(m.nrows, m.ncols) + 1):
        found = False
        for rset in itertools.combinations(range(m.nrows), size):
            for cset in itertools.combinations(range(m.ncols), size):
                sub = [[m.rows[i][j] for j in cset] for i in rset]
                if minor_det(sub):
                    found = True
                    break
            if found:
                break
        if found:
            best = size
        else:
            break
    return best


def commutative_monomial_count(n: int, m: int) -> int:
    """Number of degree-m monomials in n commuting variables (oracle)."""
    return sum(
        1
        for c in itertools.combinations_with_replacement(range(n), m)
    ) if m >= 0 else 0


def shifted_relation_space(r: Subspace, nv: int, left: int, right: int) -> Subspace:
    """V^(x)left (x) R (x) V^(x)right, built longhand for oracles."""
    rows = []
    for b in r.basis():
        for lf in range(nv**left):
            for rf in range(nv**right):
                base = lf * nv ** (2 + right)
                rows.append({base + p * nv**right + rf: c for p, c in b.items()})
    return Subspace(nv ** (left + 2 + right), rows)


def direct_koszul(alg: QuadraticAlgebra, i: int) -> Subspace:
    """W_i from the defining intersection, via shifted copies of R."""
    acc = None
    for s in range(i - 1):
        block = shifted_relation_space(alg.R, alg.nv, s, i - s - 2)
        acc = block if acc is None else subspace_intersect(acc, block)
    return acc


def tensor_of_gamma(gamma) -> list:
    from orenaka import gamma_images

    return gamma_images(gamma)


CATALOG_QS = (frac(-1), frac(2), frac(3), frac(1, 2))


def catalog_algebras():
    """The structural-test roster: polynomials, quantum planes, Jordan."""
    algs = [
        ("poly2", make_polynomial(2)),
        ("poly3", make_polynomial(3)),
        ("poly4", make_polynomial(4)),
        ("jordan", make_jordan_plane()),
    ]
    algs += [(f"quantum({q})", make_quantum_plane(q)) for q in CATALOG_QS]
    return algs


@pytest.fixture(scope="session")
def rng():
    return random.Random(20260810)
