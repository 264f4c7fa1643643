"""Acceptance criteria C1-C9, one summary line each (see the terminal summary)."""
import time

import numpy as np

from nambu import lie_su2 as su2
from nambu import s3_nambu as s3
from nambu.exterior import (
    FormField,
    KForm,
    ScalarField,
    derivative_field,
    differential,
    exterior_derivative,
)
from nambu.flow import (
    IntegratorConfig,
    SpinSimConfig,
    compare_spin_vs_nambu,
    nambu_flow_s3,
    noether_check,
    richardson_order,
)
from nambu.nambu_core import sharp

E = np.eye(3)
N_POINTS = 100


class Timer:
    def __enter__(self):
        self.t0 = time.perf_counter()
        return self

    def __exit__(self, *exc):
        self.elapsed = time.perf_counter() - self.t0


def test_c1_su2_structure_constants(record):
    with Timer() as t:
        exact = max(
            float(np.max(np.abs(su2.algebra_bracket(E[i - 1], E[j - 1]) - 2 * E[k - 1])))
            for i, j, k in s3.PAIRS
        )
        M = su2.BASIS_MATRICES
        comm = max(
            float(np.max(np.abs(M[i - 1] @ M[j - 1] - M[j - 1] @ M[i - 1] - 2 * M[k - 1])))
            for i, j, k in s3.PAIRS
        )
    assert record("C1 su(2) algebra", [("structure", exact, 0.0), ("commutator", comm, 1e-14)], t.elapsed, 1)


def test_c2_sharp_of_s_forms(record, rng):
    expected = (
        lambda x, y, z: (0, -2 * z, 2 * y),
        lambda x, y, z: (2 * z, 0, -2 * x),
        lambda x, y, z: (-2 * y, 2 * x, 0),
    )
    with Timer() as t:
        err = 0.0
        for p in rng.uniform(-3, 3, (N_POINTS, 3)):
            for k in (1, 2, 3):
                got = sharp(s3.s_form(k)(p), s3.CHART)
                err = max(err, float(np.max(np.abs(got - np.array(expected[k - 1](*p))))))
    assert record("C2 sharp/flat fidelity", [("componentwise", err, 0.0)], t.elapsed, 1)


def test_c3_s_algebra(record, rng):
    with Timer() as t:
        br = sc = 0.0
        for p in rng.uniform(-2, 2, (N_POINTS, 3)):
            r = s3.s_algebra_check(p)
            br = max(br, *r.bracket_residuals.values())
            sc = max(sc, *r.shortcut_residuals.values())
    assert record("C3 S-algebra", [("bracket", br, 1e-9), ("shortcut", sc, 1e-9)], t.elapsed, 5)


def test_c4_generator_consistency(record, rng):
    with Timer() as t:
        err = 0.0
        for p in rng.uniform(-2, 2, (N_POINTS, 3)):
            for i, j, _ in s3.PAIRS:
                lhs = s3.generator_bracket(i, j, p)
                rhs = s3.generator_field_chart(su2.algebra_bracket(E[j - 1], E[i - 1]))(p)
                err = max(err, float(np.max(np.abs(lhs - rhs))))
    assert record("C4 [S_i#,S_j#] = gen([e_j,e_i])", [("residual", err, 1e-9)], t.elapsed, 5)


def test_c5_invariant_form_and_nambu_action(record, rng):
    with Timer() as t:
        ident = su2.Versor.identity()
        eps = abs(s3.invariant_three_form(ident, *(su2.algebra_quaternion(v) for v in E)) - 1.0)
        for a, b, c in rng.normal(size=(N_POINTS, 3, 3)):
            lifted = [su2.algebra_quaternion(v) for v in (a, b, c)]
            eps = max(eps, abs(s3.invariant_three_form(ident, *lifted) - s3.epsilon_form(a, b, c)))
        defect = 0.0
        for _ in range(N_POINTS):
            h = su2.Versor.from_array(rng.normal(size=4))
            g = su2.Versor.from_array(rng.normal(size=4))
            vs = [s3.random_tangent(g, rng) for _ in range(3)]
            defect = max(defect, s3.nambu_action_defect(h, g, *vs))
    assert record("C5 invariant 3-form", [("eps at e", eps, 0.0), ("action defect", defect, 1e-12)], t.elapsed, 5)


def test_c6_equivariance(record, rng):
    draws = rng.normal(size=(1000, 2, 4))
    with Timer() as t:
        err = 0.0
        for u, g in draws:
            U, G = su2.Versor.from_array(u), su2.Versor.from_array(g)
            lhs = su2.h_map(su2.group_mul(U, G)).array
            rhs = su2.spinor_action(U, su2.h_map(G)).array
            err = max(err, float(np.max(np.abs(lhs - rhs))))
    assert record("C6 h o L_U = Phi_U o h", [("componentwise", err, 1e-15)], t.elapsed, 1)


def test_c7_noether(record):
    cfg = IntegratorConfig(dt=1e-3, t_end=1.0)
    p0 = np.array([0.3, 1.0, -0.5])
    with Timer() as t:
        good = noether_check(E[0], 1, p0, cfg)
        bad = noether_check(E[1], 1, p0, cfg)
    # negative control: L_{S1#} S2 = -2 S3 must be seen at the start point
    control = (bad.lie_at_start - (-2.0) * s3.noether_two_form(E[2], p0)).norm()
    detected = 0.0 if not bad.passed else 1.0
    checks = [
        ("lie", good.lie_residual, 1e-5),
        ("pullback", good.pullback_residual, 1e-5),
        ("L S2 + 2 S3", control, 1e-9),
        ("control missed", detected, 0.0),
    ]
    assert record("C7 Noether conservation", checks, t.elapsed, 30)


def test_c8_spin_demo(record):
    up = su2.Spinor(1, 0, 0, 0)

    def cfg(t_end, renormalize=False):
        return SpinSimConfig((0, 0, 1), 1.0, up, IntegratorConfig(1e-3, t_end, renormalize))

    with Timer() as t:
        r = compare_spin_vs_nambu(cfg(10.0))
        half = nambu_flow_s3(cfg(2 * np.pi)).final
        full = nambu_flow_s3(cfg(4 * np.pi)).final
    period = max(float(np.max(np.abs(half + up.array))), float(np.max(np.abs(full - up.array))))
    checks = [("deviation", r.max_deviation, 1e-6), ("norm drift", r.norm_drift, 1e-9), ("period", period, 1e-6)]
    assert record("C8 spin demo", checks, t.elapsed, 10)


def _zero_form(f: ScalarField) -> FormField:
    return FormField(0, f.dim, lambda p: KForm.scalar(f(p), f.dim))


def test_c9_numerical_hygiene(record, rng):
    with Timer() as t:
        fd = analytic = 0.0
        for xi in [*E, *rng.normal(size=(3, 3))]:
            j1, j2 = s3.j_hat_field(1, xi), s3.j_hat_field(2, xi)
            theta = FormField(1, 3, lambda p, a=j1, b=j2: KForm.one_form(a(p) * b.grad(p)))
            s_fd = FormField(2, 3, s3.noether_form_field(xi).value)
            for p in rng.uniform(-1, 1, (5, 3)):
                for f in (j1, j2):
                    fd = max(fd, derivative_field(derivative_field(_zero_form(f)))(p).norm())
                    analytic = max(analytic, exterior_derivative(differential(f), p).norm())
                fd = max(fd, derivative_field(derivative_field(theta))(p).norm())
                fd = max(fd, exterior_derivative(s_fd, p).norm())
                analytic = max(analytic, s3.closedness_residual(xi, p))

        def run(dt):
            return nambu_flow_s3(
                SpinSimConfig((0, 0, 1), 10.0, su2.Spinor(1, 0, 0, 0), IntegratorConfig(dt, 10.0))
            ).final

        order = richardson_order(run, dts=(4e-3, 2e-3, 1e-3))
    checks = [("dd FD", fd, 1e-5), ("dd analytic", analytic, 1e-12), ("3.9 - order", 3.9 - order, 0.0)]
    assert record("C9 numerical hygiene", checks, t.elapsed, 30)
