"""SU(2) as unit 4-vectors (x, y, z, w) with matrix [[x+iy, -z+iw], [z+iw, x-iy]].

The su(2) basis is e_k = -i sigma_k, which gives [e1, e2] = 2 e3 and cyclic.
Its image in the (x, y, z, w) coordinates is e1 -> (0,0,0,-1), e2 -> (0,0,1,0),
e3 -> (0,-1,0,0).
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

RENORM_TOL = 1e-12
UNIT_TOL = 1e-9

SIGMA = np.array(
    [
        [[0, 1], [1, 0]],
        [[0, -1j], [1j, 0]],
        [[1, 0], [0, -1]],
    ],
    dtype=complex,
)
BASIS_MATRICES = -1j * SIGMA
IDENTITY4 = np.array([1.0, 0.0, 0.0, 0.0])


def qmul(a, b) -> np.ndarray:
    """Product of raw 4-vectors under the matrix correspondence (bilinear, no renorm)."""
    a1, b1 = complex(a[0], a[1]), complex(a[2], a[3])
    a2, b2 = complex(b[0], b[1]), complex(b[2], b[3])
    # [[a, -conj(b)], [b, conj(a)]] times the same pattern
    top = a1 * a2 - b1.conjugate() * b2
    bot = b1 * a2 + a1.conjugate() * b2
    return np.array([top.real, top.imag, bot.real, bot.imag])


def as_matrix(q) -> np.ndarray:
    x, y, z, w = q
    return np.array([[x + 1j * y, -z + 1j * w], [z + 1j * w, x - 1j * y]])


@dataclass(frozen=True)
class Versor:
    x: float
    y: float
    z: float
    w: float

    def __post_init__(self):
        v = np.array([self.x, self.y, self.z, self.w], dtype=float)
        if not np.all(np.isfinite(v)):
            raise ValueError("versor components must be finite")
        nrm = float(np.linalg.norm(v))
        if nrm == 0.0:
            raise ValueError("zero vector is not a versor")
        if abs(nrm - 1.0) > RENORM_TOL:
            v = v / nrm
        for name, c in zip("xyzw", v):
            object.__setattr__(self, name, float(c))

    @classmethod
    def from_array(cls, q) -> "Versor":
        return cls(*np.asarray(q, dtype=float))

    @classmethod
    def identity(cls) -> "Versor":
        return cls(1.0, 0.0, 0.0, 0.0)

    @property
    def array(self) -> np.ndarray:
        return np.array([self.x, self.y, self.z, self.w])

    def matrix(self) -> np.ndarray:
        return as_matrix(self.array)

    def __matmul__(self, other: "Versor") -> "Versor":
        return group_mul(self, other)


@dataclass(frozen=True)
class Spinor:
    """Normalized spinor (x + iy, z + iw)."""

    x: float
    y: float
    z: float
    w: float

    def __post_init__(self):
        nrm = float(np.sqrt(self.x**2 + self.y**2 + self.z**2 + self.w**2))
        if abs(nrm - 1.0) > UNIT_TOL:
            raise ValueError(f"spinor is not normalized (norm {nrm!r})")

    @classmethod
    def from_complex(cls, c) -> "Spinor":
        c = np.asarray(c, dtype=complex)
        return cls(c[0].real, c[0].imag, c[1].real, c[1].imag)

    @property
    def array(self) -> np.ndarray:
        return np.array([self.x, self.y, self.z, self.w])

    def complex(self) -> np.ndarray:
        return np.array([complex(self.x, self.y), complex(self.z, self.w)])


def group_mul(g: Versor, p: Versor) -> Versor:
    return Versor.from_array(qmul(g.array, p.array))


def inverse(g: Versor) -> Versor:
    return Versor(g.x, -g.y, -g.z, -g.w)


def u_axis_angle(nvec, theta: float) -> Versor:
    """exp(-i theta/2 n.sigma) = cos(theta/2) I - i sin(theta/2) n.sigma."""
    n = np.asarray(nvec, dtype=float)
    if n.shape != (3,) or abs(np.linalg.norm(n) - 1.0) > UNIT_TOL:
        raise ValueError(f"axis must be a unit 3-vector, got {nvec!r}")
    c, s = np.cos(theta / 2), np.sin(theta / 2)
    return Versor(c, -s * n[2], s * n[1], -s * n[0])


def versor_to_matrix(g: Versor) -> np.ndarray:
    return g.matrix()


def matrix_to_versor(M, tol: float = UNIT_TOL) -> Versor:
    M = np.asarray(M, dtype=complex)
    if M.shape != (2, 2):
        raise ValueError("expected a 2x2 matrix")
    q = np.array([M[0, 0].real, M[0, 0].imag, M[1, 0].real, M[1, 0].imag])
    defect = max(
        float(np.max(np.abs(M.conj().T @ M - np.eye(2)))),
        abs(np.linalg.det(M) - 1.0),
        float(np.max(np.abs(as_matrix(q) - M))),
    )
    if defect > tol:
        raise ValueError(f"matrix is not in SU(2) (defect {defect:.3e})")
    return Versor.from_array(q)


def h_map(g: Versor) -> Spinor:
    """First column of the matrix of ``g``; the identity on components."""
    return Spinor(g.x, g.y, g.z, g.w)


def spinor_action(U: Versor, s: Spinor) -> Spinor:
    """U s as a complex 2-vector (the first column of U times the matrix of s)."""
    c = qmul(U.array, s.array)
    nrm = float(np.linalg.norm(c))
    if abs(nrm - 1.0) > RENORM_TOL:
        c = c / nrm
    return Spinor(*c)


def versor_from_spinor(s: Spinor) -> Versor:
    return Versor(s.x, s.y, s.z, s.w)


# ---------------------------------------------------------------------------
# su(2)


def algebra_bracket(a, b) -> np.ndarray:
    """[a, b]_k = 2 sum eps_ijk a_i b_j."""
    return 2.0 * np.cross(np.asarray(a, dtype=float), np.asarray(b, dtype=float))


def algebra_matrix(a) -> np.ndarray:
    return np.tensordot(np.asarray(a, dtype=float), BASIS_MATRICES, axes=1)


def algebra_quaternion(a) -> np.ndarray:
    """4-vector whose matrix pattern equals sum_k a_k e_k."""
    a1, a2, a3 = np.asarray(a, dtype=float)
    return np.array([0.0, -a3, a2, -a1])


def exp_algebra(a) -> Versor:
    a = np.asarray(a, dtype=float)
    r = float(np.linalg.norm(a))
    if r == 0.0:
        return Versor.identity()
    return u_axis_angle(a / r, 2.0 * r)


def infinitesimal_generator(a, p: Versor) -> np.ndarray:
    """d/dt at 0 of exp(t a) p, i.e. the left-action generator at ``p``."""
    return qmul(algebra_quaternion(a), p.array)


def left_translate(h: Versor, v) -> np.ndarray:
    """Differential of left translation by ``h`` applied to a 4-vector."""
    return qmul(h.array, v)
