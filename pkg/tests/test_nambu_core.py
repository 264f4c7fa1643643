import itertools

import numpy as np
import pytest
from hypothesis import given, strategies as st
from hypothesis.extra.numpy import arrays

from nambu.exterior import TOL_FD, FormField, KForm, ScalarField, exterior_derivative, fd_jacobian
from nambu.nambu_core import (
    HamiltonianPair,
    NambuChart,
    annihilation_residual,
    bracket_2forms,
    bracket_closed_shortcut,
    flat,
    hypothesis_defect,
    is_strictly_nondegenerate,
    levi_civita,
    nambu_vector_field,
    sharp,
)

N1 = NambuChart(1)
finite = st.floats(-10, 10, allow_nan=False, allow_infinity=False)


def two_form(x, y, z, kind):
    entries = {
        1: {(0, 1): 2 * y, (0, 2): 2 * z},
        2: {(0, 1): -2 * x, (1, 2): 2 * z},
        3: {(0, 2): -2 * x, (1, 2): -2 * y},
    }[kind]
    return KForm.from_dict(2, 3, entries)


def s_field(kind, analytic=True):
    derivs = {
        1: {(0, 1): 2.0, (1, 2): 2.0},  # (component row, coordinate) -> value
        2: {(0, 0): -2.0, (2, 2): 2.0},
        3: {(1, 0): -2.0, (2, 1): -2.0},
    }[kind]

    def deriv(p):
        D = np.zeros((3, 3))
        for ij, v in derivs.items():
            D[ij] = v
        return D

    return FormField(2, 3, lambda p: two_form(*p, kind), deriv if analytic else None)


def test_levi_civita():
    assert levi_civita(1, 2, 3) == 1
    assert levi_civita(3, 1, 2) == 1
    assert levi_civita(2, 1, 3) == -1
    assert levi_civita(1, 1, 3) == 0


def test_omega_is_constant_and_closed(rng):
    for n in (1, 2, 3):
        chart = NambuChart(n)
        w = chart.omega3
        p = rng.normal(size=chart.dim)
        assert np.all(w.derivatives(p) == 0)
        if chart.dim > 3:
            assert exterior_derivative(w, p).norm() == 0.0
    assert NambuChart(2).omega3_value.to_dict()[(3, 4, 5)] == 1.0


def test_sharp_basis_and_chart_formulas(rng):
    assert np.array_equal(sharp(KForm.basis(3, 0, 1), N1), [0, 0, 1])
    for x, y, z in rng.uniform(-3, 3, (20, 3)):
        np.testing.assert_array_equal(sharp(two_form(x, y, z, 1), N1), [0, -2 * z, 2 * y])
        np.testing.assert_array_equal(sharp(two_form(x, y, z, 3), N1), [-2 * y, 2 * x, 0])


def test_sharp_errors():
    with pytest.raises(ValueError):
        sharp(KForm.basis(3, 0), N1)
    with pytest.raises(ValueError):
        sharp(KForm.basis(6, 0, 1), N1)


def test_sharp_ignores_cross_block_components():
    chart = NambuChart(2)
    a = KForm.basis(6, 0, 4)
    assert np.all(sharp(a, chart) == 0)
    assert (flat(sharp(a, chart), chart) - a).norm() == 1.0


def test_flat_basis_and_zero():
    assert flat([0, 0, 1], N1).allclose(KForm.basis(3, 0, 1))
    assert flat(np.zeros(3), N1).norm() == 0.0
    with pytest.raises(ValueError):
        flat(np.zeros(4), N1)


def test_flat_sharp_s2_by_basis_enumeration(rng):
    E = np.eye(3)
    for x, y, z in rng.uniform(-3, 3, (10, 3)):
        X = np.array([2 * z, 0, -2 * x])
        # oracle: (i_X dx^dy^dz)(e_i, e_j) = det[X, e_i, e_j]
        oracle = {(i, j): np.linalg.det(np.array([X, E[i], E[j]])) for i, j in itertools.combinations(range(3), 2)}
        got = flat(sharp(two_form(x, y, z, 2), N1), N1)
        for ij, v in oracle.items():
            assert got[ij] == pytest.approx(v, abs=1e-12)
        assert got.allclose(two_form(x, y, z, 2))


@given(st.integers(1, 4).flatmap(lambda n: st.tuples(st.just(n), arrays(float, 3 * n, elements=finite))))
def test_sharp_flat_roundtrip(nX):
    n, X = nX
    chart = NambuChart(n)
    np.testing.assert_array_equal(sharp(flat(X, chart), chart), X)


@given(arrays(float, 3, elements=finite))
def test_flat_sharp_roundtrip_n1(c):
    a = KForm(2, 3, c)
    assert flat(sharp(a, N1), N1).allclose(a)


@given(st.integers(2, 3).flatmap(lambda n: st.tuples(st.just(n), st.data())))
def test_flat_sharp_roundtrip_block_supported(nd):
    n, data = nd
    chart = NambuChart(n)
    entries = {}
    for i in range(n):
        for l, m in itertools.combinations(range(3), 2):
            entries[(3 * i + l, 3 * i + m)] = data.draw(finite)
    a = KForm.from_dict(2, chart.dim, entries)
    assert flat(sharp(a, chart), chart).allclose(a)


# --------------------------------------------------------------------------- Nambu fields


def linear_field(c):
    c = np.asarray(c, dtype=float)
    return ScalarField(c.size, lambda p: float(c @ p), lambda p: c, lambda p: np.zeros((c.size, c.size)))


def quadratic_field(Q):
    Q = np.asarray(Q, dtype=float)
    S = Q + Q.T
    return ScalarField(len(Q), lambda p: float(p @ Q @ p), lambda p: S @ p, lambda p: S)


def test_nambu_field_examples(rng):
    e = np.eye(3)
    X = nambu_vector_field(HamiltonianPair(linear_field(e[0]), linear_field(e[1]), N1))
    np.testing.assert_array_equal(X(rng.normal(size=3)), [0, 0, 1])
    pair = HamiltonianPair(linear_field(e[0]), quadratic_field(np.diag([0, 1.0, 1.0])), N1)
    X = nambu_vector_field(pair)
    for x, y, z in rng.normal(size=(10, 3)):
        np.testing.assert_allclose(X([x, y, z]), [0, -2 * z, 2 * y], atol=1e-14)
    f = quadratic_field(rng.normal(size=(3, 3)))
    assert np.all(nambu_vector_field(HamiltonianPair(f, f, N1))(rng.normal(size=3)) == 0)


def test_nambu_field_analytic_jacobian_matches_fd(rng):
    pair = HamiltonianPair(quadratic_field(rng.normal(size=(3, 3))), quadratic_field(rng.normal(size=(3, 3))), N1)
    X = nambu_vector_field(pair)
    p = rng.normal(size=3)
    np.testing.assert_allclose(X.jac(p), fd_jacobian(X.value, p), atol=1e-6)


@pytest.mark.parametrize("n", [1, 2])
def test_annihilation(rng, n):
    chart = NambuChart(n)
    for _ in range(100):
        pair = HamiltonianPair(
            quadratic_field(rng.normal(size=(chart.dim,) * 2)),
            quadratic_field(rng.normal(size=(chart.dim,) * 2)),
            chart,
        )
        assert annihilation_residual(pair, rng.uniform(-1, 1, chart.dim)) <= 1e-9


def test_hypothesis_defect(rng):
    pair = HamiltonianPair(quadratic_field(rng.normal(size=(3, 3))), linear_field(rng.normal(size=3)), N1)
    assert hypothesis_defect(pair, rng.normal(size=3)) <= 1e-12
    chart = NambuChart(2)
    e = np.eye(6)
    # dx^1 ^ dx^4 straddles two blocks
    straddle = HamiltonianPair(linear_field(e[0]), linear_field(e[3]), chart)
    assert hypothesis_defect(straddle, np.zeros(6)) == 1.0


# --------------------------------------------------------------------------- brackets


@pytest.mark.parametrize("i,j,k", [(1, 2, 3), (2, 3, 1), (3, 1, 2)])
@pytest.mark.parametrize("analytic", [True, False])
def test_s_algebra(rng, i, j, k, analytic):
    tol = 1e-12 if analytic else 10 * TOL_FD
    for p in rng.uniform(-2, 2, (20, 3)):
        target = -2.0 * two_form(*p, k)
        assert bracket_2forms(s_field(i, analytic), s_field(j, analytic), N1, p).allclose(target, atol=tol)
        assert bracket_closed_shortcut(s_field(i, analytic), s_field(j, analytic), N1, p).allclose(target, atol=tol)


def test_bracket_antisymmetric_and_self(rng):
    a, b = s_field(1), s_field(3)
    for p in rng.normal(size=(5, 3)):
        assert bracket_2forms(a, a, N1, p).norm() == 0.0
        assert bracket_closed_shortcut(a, a, N1, p).norm() == 0.0
        assert bracket_2forms(a, b, N1, p).allclose(-bracket_2forms(b, a, N1, p), atol=1e-12)


def test_shortcut_disagrees_on_non_closed_forms(rng):
    # a = x y dx^dy is not closed; the shortcut is not the bracket there
    a = FormField(2, 3, lambda p: KForm.from_dict(2, 3, {(0, 1): p[0] * p[1], (1, 2): p[0]}))
    b = s_field(1, analytic=False)
    p = np.array([0.7, -1.1, 0.4])
    diff = (bracket_2forms(a, b, N1, p) - bracket_closed_shortcut(a, b, N1, p)).norm()
    assert diff > 1e-3


def test_nondegeneracy():
    assert is_strictly_nondegenerate(N1.omega3_value, N1)
    assert not is_strictly_nondegenerate(KForm.zero(3, 3), N1)
    with pytest.raises(NotImplementedError):
        is_strictly_nondegenerate(NambuChart(2).omega3_value, NambuChart(2))
