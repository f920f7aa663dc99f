import random
from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from orenaka import (
    Matrix,
    NoSolutionError,
    Subspace,
    Tensor,
    apply_at_slot,
    rref,
    scalar,
    solve_affine,
    subspace_intersect,
    subspace_sum,
    tau_shift,
)

from conftest import minor_rank, rand_frac, rand_matrix

fractions_st = st.fractions(
    min_value=-6, max_value=6, max_denominator=4
)


def test_scalar_parsing():
    assert scalar("3/4") == Fraction(3, 4)
    assert scalar("-2") == Fraction(-2)
    assert scalar("0.25") == Fraction(1, 4)
    assert scalar(7) == Fraction(7)
    with pytest.raises(TypeError):
        scalar(0.25)


@given(fractions_st.filter(lambda x: x != 0))
def test_scalar_exact_inverse(a):
    assert a * (1 / a) == 1
    assert Fraction(1) / a * a == 1


def test_rref_identity():
    m = Matrix.identity(2)
    r, piv, rank = rref(m)
    assert r == m and piv == [0, 1] and rank == 2


def test_rref_dependent_rows():
    r, piv, rank = rref(Matrix([[1, 2], [2, 4]]))
    assert r == Matrix([[1, 2], [0, 0]])
    assert rank == 1 and piv == [0]


def test_rref_rank_vs_minor_oracle():
    rng = random.Random(11)
    for _ in range(6):
        m = rand_matrix(rng, 6, span=3)
        _, _, rank = rref(m)
        assert rank == minor_rank(m)


def test_rref_random_rectangular_vs_minor_oracle():
    rng = random.Random(12)
    for _ in range(4):
        rows = [[rand_frac(rng, 3) for _ in range(5)] for _ in range(3)]
        m = Matrix(rows)
        _, _, rank = rref(m)
        assert rank == minor_rank(m)


def _space(rows, n):
    return Subspace(n, rows)


def test_subspace_self_intersection():
    s = _space([{0: 1, 2: 2}, {1: 3}], 4)
    assert subspace_intersect(s, s) == s
    assert subspace_sum(s, s) == s


def test_subspace_disjoint_lines():
    e1 = _space([{0: 1}], 2)
    e2 = _space([{1: 1}], 2)
    meet = subspace_intersect(e1, e2)
    assert meet.dim == 0


def test_subspace_ambient_mismatch():
    with pytest.raises(ValueError):
        subspace_sum(_space([], 2), _space([], 3))
    with pytest.raises(ValueError):
        subspace_intersect(_space([], 2), _space([], 3))


def test_grassmann_dimension_formula():
    rng = random.Random(13)
    for _ in range(60):
        def rnd():
            rows = [
                {i: rand_frac(rng, 3) for i in rng.sample(range(8), rng.randint(1, 4))}
                for _ in range(rng.randint(0, 4))
            ]
            return _space(rows, 8)

        s, t = rnd(), rnd()
        su, meet = subspace_sum(s, t), subspace_intersect(s, t)
        assert s.dim + t.dim == su.dim + meet.dim
        for b in meet.basis():
            assert s.contains(b) and t.contains(b)


@settings(max_examples=40, deadline=None)
@given(st.data())
def test_rref_canonicity(data):
    # same span from a rescaled, shuffled spanning set -> identical object
    n = 6
    rows = data.draw(
        st.lists(
            st.dictionaries(
                st.integers(0, n - 1), fractions_st.filter(lambda x: x != 0), max_size=4
            ),
            max_size=5,
        )
    )
    s = Subspace(n, rows)
    scales = data.draw(
        st.lists(
            fractions_st.filter(lambda x: x != 0), min_size=s.dim, max_size=s.dim
        )
    )
    doubled = [
        {k: c * v for k, v in b.items()} for b, c in zip(s.basis(), scales)
    ] + s.basis()[::-1]
    assert Subspace(n, doubled) == s


def test_solve_affine_identity():
    x, ker = solve_affine(Matrix.identity(3), [1, 2, 3])
    assert x == [1, 2, 3]
    assert ker.dim == 0


def test_solve_affine_no_solution():
    with pytest.raises(NoSolutionError):
        solve_affine(Matrix.zero(2, 2), [1, 0])


def test_solve_affine_substitute_back():
    rng = random.Random(14)
    for _ in range(10):
        m = Matrix([[rand_frac(rng, 3) for _ in range(7)] for _ in range(5)])
        x0 = [rand_frac(rng, 3) for _ in range(7)]
        b = m.mul_vec(x0)
        x, ker = solve_affine(m, b)
        assert m.mul_vec(x) == b
        # canonical particular solution zeroes the free coordinates
        free = [i for i in range(7) if i in ker.pivots]
        for kb in ker.basis():
            kv = [kb.get(i, Fraction(0)) for i in range(7)]
            assert all(v == 0 for v in m.mul_vec(kv))
        assert 5 >= 7 - ker.dim  # rank bound


def test_apply_at_slot_identity():
    t = Tensor(2, 3, {(0, 1, 0): 2, (1, 1, 1): -1})
    assert apply_at_slot(t, Matrix.identity(2), 2) == t


def test_apply_at_slot_swap_hand_case():
    swap = Matrix([[0, 1], [1, 0]])
    t = Tensor.word(2, (0, 1))  # x1 (x) x2
    assert apply_at_slot(t, swap, 1) == Tensor.word(2, (1, 1))
    assert apply_at_slot(t, swap, 2) == Tensor.word(2, (0, 0))


def test_apply_at_slot_out_of_range():
    with pytest.raises(ValueError):
        apply_at_slot(Tensor.word(2, (0,)), Matrix.identity(2), 2)


def test_apply_at_slot_linearity():
    rng = random.Random(15)
    for _ in range(10):
        def rnd_tensor():
            return Tensor(
                3,
                3,
                {
                    tuple(rng.randrange(3) for _ in range(3)): rand_frac(rng, 3)
                    for _ in range(4)
                },
            )

        t1, t2 = rnd_tensor(), rnd_tensor()
        f = rand_matrix(rng, 3)
        slot = rng.randint(1, 3)
        assert apply_at_slot(t1 + t2, f, slot) == apply_at_slot(t1, f, slot) + apply_at_slot(t2, f, slot)


def test_tau_zero_is_identity():
    t = Tensor(2, 4, {(0, 1, 1, 0): 5})
    assert tau_shift(t, 0) == t


def test_tau_hand_case():
    t = Tensor.word(3, (0, 1, 2))
    assert tau_shift(t, 2) == Tensor.word(3, (1, 2, 0))
    assert tau_shift(t, 1) == Tensor.word(3, (1, 0, 2))


def _adjacent_swap(t: Tensor, j: int) -> Tensor:
    """Transpose tensor slots j and j+1 (1-based), entrywise."""
    es = {}
    for w, c in t.entries.items():
        w2 = w[: j - 1] + (w[j], w[j - 1]) + w[j + 1 :]
        es[w2] = es.get(w2, 0) + c
    return Tensor(t.nv, t.degree, es)


def test_tau_matches_adjacent_transposition_recursion():
    # the staircase maps are defined by composing adjacent swaps at
    # positions (1,2), (2,3), ...; the one-shot permutation must agree
    rng = random.Random(18)
    for _ in range(10):
        d = rng.randint(2, 5)
        t = Tensor(
            3,
            d,
            {tuple(rng.randrange(3) for _ in range(d)): rand_frac(rng, 3) for _ in range(4)},
        )
        staircase = t
        for i in range(1, d):
            staircase = _adjacent_swap(staircase, i)
            assert staircase == tau_shift(t, i), (d, i)


def test_scalar_rejects_zero_denominator_and_bools():
    with pytest.raises(ValueError):
        scalar("1/0")
    with pytest.raises(TypeError):
        scalar(True)


def test_tau_full_rotation_cycles():
    rng = random.Random(16)
    for _ in range(10):
        d = rng.randint(2, 5)
        t = Tensor(
            2,
            d,
            {tuple(rng.randrange(2) for _ in range(d)): rand_frac(rng, 3) for _ in range(3)},
        )
        out = t
        for _ in range(d):
            out = tau_shift(out, d - 1)
        assert out == t


def test_matrix_inverse_roundtrip():
    rng = random.Random(17)
    for _ in range(10):
        n = rng.randint(1, 4)
        while True:
            m = rand_matrix(rng, n)
            if m.det():
                break
        assert m * m.inverse() == Matrix.identity(n)
        assert m.inverse() * m == Matrix.identity(n)
