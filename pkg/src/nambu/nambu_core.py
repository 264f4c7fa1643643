"""Nambu-Darboux structure on R^{3n}: sharp/flat maps, Nambu fields, 2-form bracket."""
from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property

import numpy as np

from .exterior import (
    FormField,
    KForm,
    ScalarField,
    VectorField,
    exterior_derivative,
    interior,
    interior_field,
    lie_bracket,
    wedge,
)

TOL_DEGENERATE = 1e-12


def levi_civita(p: int, l: int, m: int) -> int:
    """Permutation symbol on 1-based indices {1, 2, 3}."""
    return (p - l) * (l - m) * (m - p) // 2


@dataclass(frozen=True)
class NambuChart:
    """Chart with the canonical 3-form sum_i dx^{3i+1} ^ dx^{3i+2} ^ dx^{3i+3}."""

    n: int = 1

    def __post_init__(self):
        if self.n < 1:
            raise ValueError("a Nambu chart needs n >= 1 blocks")

    @property
    def dim(self) -> int:
        return 3 * self.n

    @cached_property
    def omega3_value(self) -> KForm:
        return KForm.from_dict(
            3, self.dim, {(3 * i, 3 * i + 1, 3 * i + 2): 1.0 for i in range(self.n)}
        )

    @property
    def omega3(self) -> FormField:
        return FormField.constant(self.omega3_value)


def sharp(a: KForm, chart: NambuChart) -> np.ndarray:
    """Blockwise contraction ``a#^{3i+p} = 1/2 sum_{l,m} eps_{plm} a_{3i+l, 3i+m}``.

    Cross-block components are not read, so for n > 1 sharp is not injective.
    """
    if a.degree != 2 or a.dim != chart.dim:
        raise ValueError(f"sharp needs a 2-form on dim {chart.dim}, got degree {a.degree}, dim {a.dim}")
    out = np.zeros(chart.dim)
    for i in range(chart.n):
        for p in (1, 2, 3):
            s = 0.0
            for l in (1, 2, 3):
                for m in (1, 2, 3):
                    eps = levi_civita(p, l, m)
                    if eps:
                        # 1-based index 3i+l -> 0-based 3i+l-1
                        s += eps * a[(3 * i + l - 1, 3 * i + m - 1)]
            out[3 * i + p - 1] = 0.5 * s
    return out


def flat(X, chart: NambuChart) -> KForm:
    """``X -> i_X omega3``."""
    X = np.asarray(X, dtype=float)
    if X.shape != (chart.dim,):
        raise ValueError(f"vector of shape {X.shape} on a {chart.dim}-dimensional chart")
    return interior(X, chart.omega3_value)


def sharp_field(a: FormField, chart: NambuChart) -> VectorField:
    jac = None
    if a.coefficient_derivative is not None:
        # sharp is linear, so it commutes with partial derivatives
        jac = lambda p: np.stack([sharp(a.partial(p, j), chart) for j in range(chart.dim)], axis=-1)
    return VectorField(chart.dim, lambda p: sharp(a(p), chart), jac)


@dataclass(frozen=True)
class HamiltonianPair:
    h1: ScalarField
    h2: ScalarField
    chart: NambuChart

    def __post_init__(self):
        if self.h1.dim != self.chart.dim or self.h2.dim != self.chart.dim:
            raise ValueError("Hamiltonians must live on the chart's coordinates")

    def two_form(self, p) -> KForm:
        return wedge(KForm.one_form(self.h1.grad(p)), KForm.one_form(self.h2.grad(p)))


def nambu_vector_field(pair: HamiltonianPair) -> VectorField:
    """``X = (dH1 ^ dH2)#``. Analytic Jacobian when both Hessians are supplied."""
    chart = pair.chart

    def value(p):
        return sharp(pair.two_form(p), chart)

    jac = None
    if pair.h1.hessian is not None and pair.h2.hessian is not None:
        def jac(p):
            g1, g2 = KForm.one_form(pair.h1.grad(p)), KForm.one_form(pair.h2.grad(p))
            H1, H2 = np.asarray(pair.h1.hessian(p)), np.asarray(pair.h2.hessian(p))
            cols = [
                sharp(wedge(KForm.one_form(H1[:, j]), g2) + wedge(g1, KForm.one_form(H2[:, j])), chart)
                for j in range(chart.dim)
            ]
            return np.stack(cols, axis=-1)

    return VectorField(chart.dim, value, jac)


def annihilation_residual(pair: HamiltonianPair, p) -> float:
    """max_i |dH_i(X)| at ``p``; zero for any Nambu field."""
    X = nambu_vector_field(pair)(p)
    return max(abs(float(pair.h1.grad(p) @ X)), abs(float(pair.h2.grad(p) @ X)))


def hypothesis_defect(pair: HamiltonianPair, p) -> float:
    """Residual of ``dH1 ^ dH2 = ((dH1 ^ dH2)#)b``; vanishes identically for n = 1."""
    a = pair.two_form(p)
    return (a - flat(sharp(a, pair.chart), pair.chart)).norm()


def bracket_2forms(a: FormField, b: FormField, chart: NambuChart, p) -> KForm:
    """``{a, b} = [a#, b#]b``."""
    _check_two_forms(a, b, chart)
    return flat(lie_bracket(sharp_field(a, chart), sharp_field(b, chart), p), chart)


def bracket_closed_shortcut(a: FormField, b: FormField, chart: NambuChart, p) -> KForm:
    """``d(i_{a#} b)``; equals ``{a, b}`` when ``a`` and ``b`` are closed."""
    _check_two_forms(a, b, chart)
    return exterior_derivative(interior_field(sharp_field(a, chart), b), p)


def _check_two_forms(a: FormField, b: FormField, chart: NambuChart) -> None:
    for f in (a, b):
        if f.degree != 2 or f.dim != chart.dim:
            raise ValueError("bracket is defined on 2-form fields over the chart")


def is_strictly_nondegenerate(a: KForm, chart: NambuChart) -> bool:
    if a.degree != 3 or a.dim != chart.dim:
        raise ValueError("expected a 3-form on the chart")
    if chart.n > 1:
        raise NotImplementedError(
            "strict non-degeneracy for 3n > 3 has no definition implemented here"
        )
    return abs(a.components[0]) > TOL_DEGENERATE
