"""Exterior algebra and calculus on low-dimensional coordinate charts.

A k-form at a point is stored by its components on strictly increasing
multi-indices (0-based, lexicographic order), so that

    a = sum_I a_I dx^{I_1} ^ ... ^ dx^{I_k}

and evaluation on vectors is ``a(v_1, .., v_k) = sum_I a_I det(v_r[I_s])``.

Fields carry optional analytic derivative oracles. When an oracle is missing
the derivative is taken by central finite differences.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass
from functools import lru_cache
from math import comb
from typing import Callable, Optional

import numpy as np

MAX_DIM = 12
FD_REL_STEP = 1e-6
TOL_FD = 1e-6

Point = np.ndarray


@lru_cache(maxsize=None)
def multi_indices(dim: int, degree: int) -> tuple[tuple[int, ...], ...]:
    """Strictly increasing index tuples of length ``degree`` from ``range(dim)``."""
    return tuple(itertools.combinations(range(dim), degree))


@lru_cache(maxsize=None)
def _position(dim: int, degree: int) -> dict[tuple[int, ...], int]:
    return {idx: i for i, idx in enumerate(multi_indices(dim, degree))}


def sort_sign(idx) -> tuple[int, tuple[int, ...]]:
    """Sign of the permutation sorting ``idx`` and the sorted tuple.

    Returns sign 0 when an index repeats.
    """
    idx = list(idx)
    if len(set(idx)) != len(idx):
        return 0, tuple(sorted(idx))
    sign = 1
    # insertion sort, counting transpositions
    for i in range(1, len(idx)):
        j = i
        while j > 0 and idx[j - 1] > idx[j]:
            idx[j - 1], idx[j] = idx[j], idx[j - 1]
            sign = -sign
            j -= 1
    return sign, tuple(idx)


def _det(M: np.ndarray) -> float:
    # explicit small cases keep exact inputs exact
    k = M.shape[0]
    if k == 1:
        return float(M[0, 0])
    if k == 2:
        return float(M[0, 0] * M[1, 1] - M[0, 1] * M[1, 0])
    if k == 3:
        return float(
            M[0, 0] * (M[1, 1] * M[2, 2] - M[1, 2] * M[2, 1])
            - M[0, 1] * (M[1, 0] * M[2, 2] - M[1, 2] * M[2, 0])
            + M[0, 2] * (M[1, 0] * M[2, 1] - M[1, 1] * M[2, 0])
        )
    return float(np.linalg.det(M))


def _check_dim(dim: int) -> None:
    if not 1 <= dim <= MAX_DIM:
        raise ValueError(f"chart dimension must be in [1, {MAX_DIM}], got {dim}")


@dataclass(frozen=True, eq=False)
class KForm:
    """Value of an alternating k-form at a point of an m-dimensional chart."""

    degree: int
    dim: int
    components: np.ndarray

    def __post_init__(self):
        _check_dim(self.dim)
        if not 0 <= self.degree <= self.dim:
            raise ValueError(f"degree {self.degree} outside [0, {self.dim}]")
        comps = np.array(self.components, dtype=float).reshape(-1)
        if comps.size != comb(self.dim, self.degree):
            raise ValueError(
                f"expected {comb(self.dim, self.degree)} components, got {comps.size}"
            )
        comps.setflags(write=False)
        object.__setattr__(self, "components", comps)

    @classmethod
    def zero(cls, degree: int, dim: int) -> "KForm":
        return cls(degree, dim, np.zeros(comb(dim, degree)))

    @classmethod
    def scalar(cls, value: float, dim: int) -> "KForm":
        return cls(0, dim, [value])

    @classmethod
    def from_dict(cls, degree: int, dim: int, entries: dict) -> "KForm":
        """Build from ``{index_tuple: value}``; unsorted tuples are antisymmetrized."""
        comps = np.zeros(comb(dim, degree))
        pos = _position(dim, degree)
        for idx, val in entries.items():
            if len(idx) != degree or any(not 0 <= i < dim for i in idx):
                raise ValueError(f"bad multi-index {idx} for degree {degree}, dim {dim}")
            sign, key = sort_sign(idx)
            if sign:
                comps[pos[key]] += sign * val
        return cls(degree, dim, comps)

    @classmethod
    def basis(cls, dim: int, *idx: int) -> "KForm":
        """``dx^{i_1} ^ ... ^ dx^{i_k}`` (0-based indices)."""
        return cls.from_dict(len(idx), dim, {tuple(idx): 1.0})

    @classmethod
    def one_form(cls, covector) -> "KForm":
        covector = np.asarray(covector, dtype=float)
        return cls(1, covector.size, covector)

    def __getitem__(self, idx) -> float:
        """Component on an arbitrary index tuple, with antisymmetry applied."""
        if isinstance(idx, (int, np.integer)):
            idx = (int(idx),)
        idx = tuple(idx)
        if len(idx) != self.degree:
            raise ValueError(f"index {idx} has wrong length for degree {self.degree}")
        sign, key = sort_sign(idx)
        if sign == 0:
            return 0.0
        return sign * self.components[_position(self.dim, self.degree)[key]]

    def items(self):
        return zip(multi_indices(self.dim, self.degree), self.components)

    def to_dict(self) -> dict[tuple[int, ...], float]:
        return {idx: float(c) for idx, c in self.items()}

    def __call__(self, *vectors) -> float:
        if len(vectors) != self.degree:
            raise ValueError(f"{self.degree}-form needs {self.degree} vectors")
        if self.degree == 0:
            return float(self.components[0])
        vs = np.array([np.asarray(v, dtype=float) for v in vectors])
        if vs.shape[1] != self.dim:
            raise ValueError("vector dimension does not match form dimension")
        total = 0.0
        for idx, c in self.items():
            if c != 0.0:
                total += c * _det(vs[:, idx])
        return float(total)

    def _same_space(self, other: "KForm") -> None:
        if (self.degree, self.dim) != (other.degree, other.dim):
            raise ValueError(
                f"form spaces differ: ({self.degree},{self.dim}) vs ({other.degree},{other.dim})"
            )

    def __add__(self, other: "KForm") -> "KForm":
        self._same_space(other)
        return KForm(self.degree, self.dim, self.components + other.components)

    def __sub__(self, other: "KForm") -> "KForm":
        self._same_space(other)
        return KForm(self.degree, self.dim, self.components - other.components)

    def __neg__(self) -> "KForm":
        return KForm(self.degree, self.dim, -self.components)

    def __mul__(self, s: float) -> "KForm":
        return KForm(self.degree, self.dim, s * self.components)

    __rmul__ = __mul__

    def norm(self) -> float:
        """Max-abs component; the componentwise residual used throughout."""
        return float(np.max(np.abs(self.components), initial=0.0))

    def allclose(self, other: "KForm", atol: float = 0.0) -> bool:
        self._same_space(other)
        return bool(np.all(np.abs(self.components - other.components) <= atol))

    def __repr__(self) -> str:
        terms = [f"{c:+.6g}*d{''.join(str(i + 1) for i in idx)}" for idx, c in self.items() if c]
        return f"KForm(degree={self.degree}, dim={self.dim}, {' '.join(terms) or '0'})"


def wedge(a: KForm, b: KForm) -> KForm:
    if a.dim != b.dim:
        raise ValueError(f"dimension mismatch: {a.dim} vs {b.dim}")
    k = a.degree + b.degree
    if k > a.dim:
        raise ValueError(f"degree {k} exceeds dimension {a.dim}")
    out = np.zeros(comb(a.dim, k))
    pos = _position(a.dim, k)
    for I, ca in a.items():
        if ca == 0.0:
            continue
        for J, cb in b.items():
            if cb == 0.0:
                continue
            sign, key = sort_sign(I + J)
            if sign:
                out[pos[key]] += sign * ca * cb
    return KForm(k, a.dim, out)


def interior(X, a: KForm) -> KForm:
    """Contraction ``i_X a``, inserting X into the first slot."""
    X = np.asarray(X, dtype=float)
    if X.shape != (a.dim,):
        raise ValueError(f"vector of shape {X.shape} does not match dim {a.dim}")
    if a.degree < 1:
        raise ValueError("interior product of a 0-form is undefined")
    k = a.degree - 1
    out = np.zeros(comb(a.dim, k))
    for n, J in enumerate(multi_indices(a.dim, k)):
        out[n] = sum(X[i] * a[(i,) + J] for i in range(a.dim) if i not in J)
    return KForm(k, a.dim, out)


# ---------------------------------------------------------------------------
# fields


def fd_steps(p: Point) -> np.ndarray:
    return FD_REL_STEP * np.maximum(1.0, np.abs(p))


def fd_jacobian(f: Callable[[Point], np.ndarray], p: Point) -> np.ndarray:
    """Central-difference Jacobian, shape ``f(p).shape + (len(p),)``."""
    p = np.asarray(p, dtype=float)
    h = fd_steps(p)
    cols = []
    for j in range(p.size):
        e = np.zeros_like(p)
        e[j] = h[j]
        cols.append((np.asarray(f(p + e), dtype=float) - np.asarray(f(p - e), dtype=float)) / (2 * h[j]))
    return np.stack(cols, axis=-1)


@dataclass(frozen=True)
class ScalarField:
    dim: int
    value: Callable[[Point], float]
    gradient: Optional[Callable[[Point], np.ndarray]] = None
    hessian: Optional[Callable[[Point], np.ndarray]] = None

    def __call__(self, p) -> float:
        return float(self.value(np.asarray(p, dtype=float)))

    def grad(self, p) -> np.ndarray:
        p = np.asarray(p, dtype=float)
        if self.gradient is not None:
            return np.asarray(self.gradient(p), dtype=float)
        return fd_jacobian(lambda q: np.array(self.value(q)), p)


@dataclass(frozen=True)
class FormField:
    """A k-form field; ``coefficient_derivative(p)[n, j]`` is d(component n)/dx^j."""

    degree: int
    dim: int
    value: Callable[[Point], KForm]
    coefficient_derivative: Optional[Callable[[Point], np.ndarray]] = None

    def __call__(self, p) -> KForm:
        a = self.value(np.asarray(p, dtype=float))
        if (a.degree, a.dim) != (self.degree, self.dim):
            raise ValueError("field value has wrong degree or dimension")
        return a

    def derivatives(self, p) -> np.ndarray:
        p = np.asarray(p, dtype=float)
        if self.coefficient_derivative is not None:
            return np.asarray(self.coefficient_derivative(p), dtype=float)
        return fd_jacobian(lambda q: self.value(q).components, p)

    def partial(self, p, j: int) -> KForm:
        return KForm(self.degree, self.dim, self.derivatives(p)[:, j])

    @classmethod
    def constant(cls, a: KForm) -> "FormField":
        zeros = np.zeros((a.components.size, a.dim))
        return cls(a.degree, a.dim, lambda p: a, lambda p: zeros)


@dataclass(frozen=True)
class VectorField:
    dim: int
    value: Callable[[Point], np.ndarray]
    jacobian: Optional[Callable[[Point], np.ndarray]] = None

    def __call__(self, p) -> np.ndarray:
        v = np.asarray(self.value(np.asarray(p, dtype=float)), dtype=float)
        if v.shape != (self.dim,):
            raise ValueError(f"field value of shape {v.shape}, expected ({self.dim},)")
        return v

    def jac(self, p) -> np.ndarray:
        p = np.asarray(p, dtype=float)
        if self.jacobian is not None:
            return np.asarray(self.jacobian(p), dtype=float)
        return fd_jacobian(self.value, p)


@dataclass(frozen=True)
class ChartMap:
    source_dim: int
    target_dim: int
    value: Callable[[Point], np.ndarray]
    jacobian: Optional[Callable[[Point], np.ndarray]] = None

    def __call__(self, p) -> np.ndarray:
        return np.asarray(self.value(np.asarray(p, dtype=float)), dtype=float)

    def jac(self, p) -> np.ndarray:
        p = np.asarray(p, dtype=float)
        if self.jacobian is not None:
            J = np.asarray(self.jacobian(p), dtype=float)
        else:
            J = fd_jacobian(self.value, p)
        return J.reshape(self.target_dim, self.source_dim)

    @classmethod
    def linear(cls, A) -> "ChartMap":
        A = np.asarray(A, dtype=float)
        return cls(A.shape[1], A.shape[0], lambda p: A @ p, lambda p: A)

    def compose(self, inner: "ChartMap") -> "ChartMap":
        """``self o inner``."""
        if inner.target_dim != self.source_dim:
            raise ValueError("cannot compose: dimension mismatch")
        jac = None
        if self.jacobian is not None and inner.jacobian is not None:
            jac = lambda p: self.jac(inner(p)) @ inner.jac(p)
        return ChartMap(inner.source_dim, self.target_dim, lambda p: self(inner(p)), jac)


# ---------------------------------------------------------------------------
# calculus


def _d_from_derivatives(D: np.ndarray, degree: int, dim: int) -> KForm:
    # (da)_K = sum_r (-1)^r d_{K_r} a_{K without K_r}
    pos = _position(dim, degree)
    out = np.zeros(comb(dim, degree + 1))
    for n, K in enumerate(multi_indices(dim, degree + 1)):
        s = 0.0
        for r, j in enumerate(K):
            s += (-1) ** r * D[pos[K[:r] + K[r + 1:]], j]
        out[n] = s
    return KForm(degree + 1, dim, out)


def exterior_derivative(a: FormField, p) -> KForm:
    p = np.asarray(p, dtype=float)
    if p.shape != (a.dim,):
        raise ValueError(f"point of shape {p.shape} for a {a.dim}-dimensional chart")
    if a.degree >= a.dim:
        raise ValueError(f"d of a degree-{a.degree} form on a {a.dim}-chart is not representable")
    return _d_from_derivatives(a.derivatives(p), a.degree, a.dim)


def lie_bracket(X: VectorField, Y: VectorField, p) -> np.ndarray:
    """``[X, Y](p) = DY X - DX Y``."""
    if X.dim != Y.dim:
        raise ValueError(f"dimension mismatch: {X.dim} vs {Y.dim}")
    p = np.asarray(p, dtype=float)
    return Y.jac(p) @ X(p) - X.jac(p) @ Y(p)


def pullback(phi: ChartMap, a: KForm, p) -> KForm:
    """``(phi^* a)(p)`` where ``a`` is the value of the form at ``phi(p)``."""
    if a.dim != phi.target_dim:
        raise ValueError(f"form dim {a.dim} does not match map target dim {phi.target_dim}")
    if a.degree > phi.source_dim:
        raise ValueError("form degree exceeds source dimension")
    return pullback_linear(phi.jac(p), a)


def pullback_linear(J: np.ndarray, a: KForm) -> KForm:
    """Pullback of a form value along a linear map with matrix ``J`` (target x source)."""
    J = np.asarray(J, dtype=float)
    m2, m1 = J.shape
    if a.dim != m2:
        raise ValueError("dimension mismatch")
    k = a.degree
    out = np.zeros(comb(m1, k))
    if k == 0:
        out[0] = a.components[0]
        return KForm(0, m1, out)
    for n, I in enumerate(multi_indices(m1, k)):
        cols = J[:, I]
        out[n] = sum(c * _det(cols[K, :]) for K, c in a.items() if c != 0.0)
    return KForm(k, m1, out)


# ---------------------------------------------------------------------------
# field constructors


def differential(f: ScalarField) -> FormField:
    """``df`` as a 1-form field, with analytic derivatives when ``f`` has a Hessian."""
    deriv = None
    if f.hessian is not None:
        deriv = lambda p: np.asarray(f.hessian(p), dtype=float)
    return FormField(1, f.dim, lambda p: KForm.one_form(f.grad(p)), deriv)


def wedge_field(a: FormField, b: FormField) -> FormField:
    """Pointwise wedge; product-rule derivatives when both factors have oracles."""
    if a.dim != b.dim:
        raise ValueError("dimension mismatch")
    deriv = None
    if a.coefficient_derivative is not None and b.coefficient_derivative is not None:
        def deriv(p):
            av, bv = a(p), b(p)
            return np.stack(
                [
                    (wedge(a.partial(p, j), bv) + wedge(av, b.partial(p, j))).components
                    for j in range(a.dim)
                ],
                axis=-1,
            )
    return FormField(a.degree + b.degree, a.dim, lambda p: wedge(a(p), b(p)), deriv)


def interior_field(X: VectorField, a: FormField) -> FormField:
    """Pointwise ``i_X a``; product-rule derivatives when both have oracles."""
    if X.dim != a.dim:
        raise ValueError("dimension mismatch")
    deriv = None
    if X.jacobian is not None and a.coefficient_derivative is not None:
        def deriv(p):
            DX, Xv, av = X.jac(p), X(p), a(p)
            return np.stack(
                [
                    (interior(DX[:, j], av) + interior(Xv, a.partial(p, j))).components
                    for j in range(a.dim)
                ],
                axis=-1,
            )
    return FormField(a.degree - 1, a.dim, lambda p: interior(X(p), a(p)), deriv)


def derivative_field(a: FormField) -> FormField:
    """``da`` as a field. Its own derivatives are finite differences."""
    return FormField(a.degree + 1, a.dim, lambda p: exterior_derivative(a, p))


def lie_derivative_form(X: VectorField, a: FormField, p) -> KForm:
    """``L_X a`` at ``p`` by Cartan's formula ``i_X da + d i_X a``."""
    if X.dim != a.dim:
        raise ValueError("dimension mismatch")
    p = np.asarray(p, dtype=float)
    out = KForm.zero(a.degree, a.dim)
    if a.degree < a.dim:
        out = out + interior(X(p), exterior_derivative(a, p))
    if a.degree >= 1:
        out = out + exterior_derivative(interior_field(X, a), p)
    return out
