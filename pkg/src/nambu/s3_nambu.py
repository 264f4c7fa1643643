"""The Nambu structure on S^3 and the SU(2) momentum maps.

Group-level objects (the left-invariant 3-form) work on versors and tangent
4-vectors. Chart-level objects (momentum maps, the 2-forms S_k and their
sharps) live on a Nambu-Darboux chart (x, y, z) with omega = dx^dy^dz.
"""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .exterior import (
    FormField,
    KForm,
    ScalarField,
    VectorField,
    differential,
    exterior_derivative,
    lie_bracket,
    wedge,
    wedge_field,
)
from .lie_su2 import Versor, algebra_bracket, group_mul, inverse, left_translate
from .nambu_core import (
    HamiltonianPair,
    NambuChart,
    bracket_2forms,
    bracket_closed_shortcut,
    sharp,
)

CHART = NambuChart(1)
TANGENT_TOL = 1e-6
BASIS = np.eye(3)


def epsilon_form(a, b, c) -> float:
    """(a, b x c)."""
    return float(np.dot(a, np.cross(b, c)))


def to_algebra(v) -> np.ndarray:
    """Coordinates in (e1, e2, e3) of a 4-vector tangent at the identity.

    The real part is dropped; e1 -> (0,0,0,-1), e2 -> (0,0,1,0), e3 -> (0,-1,0,0).
    """
    return np.array([-v[3], v[2], -v[1]])


def _check_tangent(g: Versor, vs) -> None:
    for v in vs:
        defect = abs(float(np.dot(g.array, v)))
        if defect > TANGENT_TOL:
            raise ValueError(f"vector is not tangent at the base point (|<g, v>| = {defect:.3e})")


def invariant_three_form(g: Versor, v1, v2, v3) -> float:
    """omega(g)(v1, v2, v3) = eps(g^{-1} v1, g^{-1} v2, g^{-1} v3)."""
    vs = [np.asarray(v, dtype=float) for v in (v1, v2, v3)]
    _check_tangent(g, vs)
    gi = inverse(g)
    return epsilon_form(*(to_algebra(left_translate(gi, v)) for v in vs))


def nambu_action_defect(h: Versor, g: Versor, v1, v2, v3) -> float:
    """|(L_h^* omega)(g)(v) - omega(g)(v)|, with (L_h^* omega)(g)(v) = omega(hg)(dL_h v)."""
    vs = [np.asarray(v, dtype=float) for v in (v1, v2, v3)]
    pulled = invariant_three_form(group_mul(h, g), *(left_translate(h, v) for v in vs))
    return abs(pulled - invariant_three_form(g, *vs))


def random_tangent(g: Versor, rng: np.random.Generator) -> np.ndarray:
    v = rng.normal(size=4)
    return v - np.dot(v, g.array) * g.array


# ---------------------------------------------------------------------------
# chart-level momentum maps


def momentum_j1(p) -> np.ndarray:
    x, y, z = p
    return np.array([x, y, z], dtype=float)


def momentum_j2(p) -> np.ndarray:
    x, y, z = p
    return np.array([y * y + z * z, x * x + z * z, y * y + x * x], dtype=float)


def j_hat(which: int, xi, p) -> float:
    """Pairing of J_which(p) with the algebra element ``xi``."""
    J = {1: momentum_j1, 2: momentum_j2}[which]
    return float(np.dot(J(np.asarray(p, dtype=float)), xi))


def j_hat_field(which: int, xi) -> ScalarField:
    xi = np.asarray(xi, dtype=float)
    if which == 1:
        return ScalarField(
            3, lambda p: j_hat(1, xi, p), lambda p: xi.copy(), lambda p: np.zeros((3, 3))
        )
    if which == 2:
        # d/dx of xi.rho is 2x(xi2 + xi3), and cyclic
        diag = 2.0 * np.array([xi[1] + xi[2], xi[0] + xi[2], xi[0] + xi[1]])
        return ScalarField(3, lambda p: j_hat(2, xi, p), lambda p: diag * p, lambda p: np.diag(diag))
    raise ValueError("which must be 1 or 2")


def momentum_pair(xi) -> HamiltonianPair:
    return HamiltonianPair(j_hat_field(1, xi), j_hat_field(2, xi), CHART)


def noether_form_field(xi) -> FormField:
    """p -> dJ1(xi) ^ dJ2(xi) with analytic coefficient derivatives."""
    return wedge_field(differential(j_hat_field(1, xi)), differential(j_hat_field(2, xi)))


def noether_two_form(xi, p) -> KForm:
    xi = np.asarray(xi, dtype=float)
    p = np.asarray(p, dtype=float)
    return wedge(
        KForm.one_form(j_hat_field(1, xi).grad(p)), KForm.one_form(j_hat_field(2, xi).grad(p))
    )


def s_form(k: int) -> FormField:
    """S_k = dJ1(e_k) ^ dJ2(e_k), k in {1, 2, 3}."""
    return noether_form_field(BASIS[k - 1])


def generator_field_chart(xi) -> VectorField:
    """Chart generator xi -> sum_k xi_k S_k#, extended linearly from the basis."""
    xi = np.asarray(xi, dtype=float)
    forms = [s_form(k) for k in (1, 2, 3)]

    def value(p):
        return sum((c * sharp(f(p), CHART) for c, f in zip(xi, forms)), np.zeros(3))

    def jac(p):
        return sum(
            (
                c * np.stack([sharp(f.partial(p, j), CHART) for j in range(3)], axis=-1)
                for c, f in zip(xi, forms)
            ),
            np.zeros((3, 3)),
        )

    return VectorField(3, value, jac)


def momentum_linearity_defect(xi, p) -> float:
    """|sharp(dJ1(xi) ^ dJ2(xi)) - generator_field_chart(xi)| at ``p``.

    Zero on basis elements; nonzero in general because the 2-form is quadratic in xi.
    """
    return float(np.max(np.abs(sharp(noether_two_form(xi, p), CHART) - generator_field_chart(xi)(p))))


@dataclass
class SAlgebraReport:
    point: np.ndarray
    bracket_residuals: dict = field(default_factory=dict)
    shortcut_residuals: dict = field(default_factory=dict)
    consistency_residuals: dict = field(default_factory=dict)
    convention: str = "[S_i#, S_j#] = generator_field_chart([e_j, e_i])"

    @property
    def max_residual(self) -> float:
        vals = [
            *self.bracket_residuals.values(),
            *self.shortcut_residuals.values(),
            *self.consistency_residuals.values(),
        ]
        return max(vals, default=0.0)


PAIRS = ((1, 2, 3), (2, 3, 1), (3, 1, 2))


def s_algebra_check(p) -> SAlgebraReport:
    """Residuals of {S_i, S_j} = -2 S_k over the cyclic pairs, plus the consistency diagram."""
    p = np.asarray(p, dtype=float)
    report = SAlgebraReport(point=p)
    for i, j, k in PAIRS:
        Si, Sj, Sk = s_form(i), s_form(j), s_form(k)
        target = -2.0 * Sk(p)
        br = bracket_2forms(Si, Sj, CHART, p)
        sc = bracket_closed_shortcut(Si, Sj, CHART, p)
        key = f"{{S{i},S{j}}}"
        report.bracket_residuals[key] = (br - target).norm()
        report.shortcut_residuals[key] = (sc - br).norm()
        lhs = generator_bracket(i, j, p)
        rhs = generator_field_chart(algebra_bracket(BASIS[j - 1], BASIS[i - 1]))(p)
        report.consistency_residuals[f"[S{i}#,S{j}#]"] = float(np.max(np.abs(lhs - rhs)))
    return report


def generator_bracket(i: int, j: int, p) -> np.ndarray:
    """[S_i#, S_j#] at ``p``."""
    return lie_bracket(generator_field_chart(BASIS[i - 1]), generator_field_chart(BASIS[j - 1]), p)


def closedness_residual(xi, p) -> float:
    return exterior_derivative(noether_form_field(xi), p).norm()
