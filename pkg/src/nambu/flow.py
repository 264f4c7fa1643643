"""Fixed-step RK4 flows, the Noether check and the spin-1/2 precession comparison."""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable, Optional, Union

import numpy as np

from .exterior import KForm, VectorField, lie_derivative_form, pullback_linear
from .lie_su2 import (
    Spinor,
    Versor,
    algebra_quaternion,
    qmul,
    u_axis_angle,
)
from .nambu_core import nambu_vector_field
from .s3_nambu import BASIS, momentum_pair, noether_form_field

TOL_TRAJ = 1e-6
TOL_NOETHER = 1e-5
FLOW_FD_STEP = 1e-5


class IntegrationError(RuntimeError):
    def __init__(self, step: int, state):
        super().__init__(f"non-finite state at step {step}: {state}")
        self.step = step


@dataclass(frozen=True)
class IntegratorConfig:
    dt: float
    t_end: float
    renormalize: bool = False
    scheme: str = "rk4"

    def __post_init__(self):
        if not (self.dt > 0 and math.isfinite(self.dt)):
            raise ValueError(f"dt must be positive, got {self.dt}")
        if not (self.t_end > 0 and math.isfinite(self.t_end)):
            raise ValueError(f"t_end must be positive, got {self.t_end}")
        if self.dt > self.t_end:
            raise ValueError("dt must not exceed t_end")
        if self.scheme != "rk4":
            raise ValueError(f"unknown scheme {self.scheme!r}")

    @property
    def steps(self) -> int:
        # the grid is uniform and lands on t_end exactly; dt is shrunk if needed
        return max(1, math.ceil(self.t_end / self.dt - 1e-9))

    @property
    def step(self) -> float:
        return self.t_end / self.steps


@dataclass
class Trajectory:
    times: np.ndarray
    states: np.ndarray
    diagnostics: dict = field(default_factory=dict)

    def __len__(self) -> int:
        return len(self.times)

    @property
    def final(self) -> np.ndarray:
        return self.states[-1]


def _rhs(f) -> Callable[[np.ndarray], np.ndarray]:
    if isinstance(f, VectorField):
        return f.value
    return f


def rk4_step(f, y: np.ndarray, h: float) -> np.ndarray:
    k1 = f(y)
    k2 = f(y + 0.5 * h * k1)
    k3 = f(y + 0.5 * h * k2)
    k4 = f(y + h * k3)
    return y + (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4)


def integrate(
    field: Union[VectorField, Callable],
    y0,
    cfg: IntegratorConfig,
    diagnostics: Optional[dict] = None,
) -> Trajectory:
    """Integrate an autonomous field with classical RK4 on a uniform grid."""
    f = _rhs(field)
    y = np.array(y0, dtype=float)
    if isinstance(field, VectorField) and y.shape != (field.dim,):
        raise ValueError(f"initial state of shape {y.shape} for a {field.dim}-dimensional field")
    n, h = cfg.steps, cfg.step
    renorm = cfg.renormalize and y.size == 4
    states = np.empty((n + 1, y.size))
    states[0] = y
    for i in range(1, n + 1):
        y = rk4_step(f, y, h)
        if renorm:
            y = y / np.linalg.norm(y)
        if not np.all(np.isfinite(y)):
            raise IntegrationError(i, y)
        states[i] = y
    times = np.arange(n + 1) * h
    diag = {name: np.array([fn(s) for s in states]) for name, fn in (diagnostics or {}).items()}
    return Trajectory(times, states, diag)


# ---------------------------------------------------------------------------
# Noether check on the S^3 chart


def flow_jacobians(field, p0, cfg: IntegratorConfig, h: float = FLOW_FD_STEP) -> np.ndarray:
    """D(flow_t)(p0) at every sample time, by re-integrating perturbed initial states."""
    p0 = np.asarray(p0, dtype=float)
    m = p0.size
    J = np.empty((cfg.steps + 1, m, m))
    for j in range(m):
        e = np.zeros(m)
        e[j] = h
        plus = integrate(field, p0 + e, cfg).states
        minus = integrate(field, p0 - e, cfg).states
        J[:, :, j] = (plus - minus) / (2 * h)
    return J


@dataclass
class NoetherReport:
    xi: np.ndarray
    flow: int
    lie_residual: float
    pullback_residual: float
    h1_drift: float
    h2_drift: float
    lie_at_start: KForm
    tol: float
    trajectory: Trajectory

    @property
    def passed(self) -> bool:
        return self.lie_residual <= self.tol and self.pullback_residual <= self.tol


def noether_check(
    xi,
    flow: int,
    p0,
    cfg: IntegratorConfig,
    tol: float = TOL_NOETHER,
    stride: int = 10,
) -> NoetherReport:
    """Is dJ1(xi) ^ dJ2(xi) conserved by the Nambu flow of (J1(e_flow), J2(e_flow))?

    The Lie-derivative residual is sampled every ``stride`` steps along the
    trajectory; the flow-pullback residual is taken at every sample.
    """
    xi = np.asarray(xi, dtype=float)
    p0 = np.asarray(p0, dtype=float)
    pair = momentum_pair(BASIS[flow - 1])
    X = nambu_vector_field(pair)
    sigma = noether_form_field(xi)
    traj = integrate(X, p0, cfg, diagnostics={"h1": pair.h1, "h2": pair.h2})
    jacs = flow_jacobians(X, p0, cfg)

    sigma0 = sigma(p0)
    pull = max(
        (pullback_linear(J, sigma(q)) - sigma0).norm() for J, q in zip(jacs, traj.states)
    )
    idx = sorted(set(range(0, len(traj), max(1, stride))) | {len(traj) - 1})
    lie = max(lie_derivative_form(X, sigma, traj.states[i]).norm() for i in idx)
    h1, h2 = traj.diagnostics["h1"], traj.diagnostics["h2"]
    return NoetherReport(
        xi=xi,
        flow=flow,
        lie_residual=lie,
        pullback_residual=pull,
        h1_drift=float(np.max(np.abs(h1 - h1[0]))),
        h2_drift=float(np.max(np.abs(h2 - h2[0]))),
        lie_at_start=lie_derivative_form(X, sigma, p0),
        tol=tol,
        trajectory=traj,
    )


# ---------------------------------------------------------------------------
# spin-1/2 precession


@dataclass(frozen=True)
class SpinSimConfig:
    axis: tuple
    omega_l: float
    initial: Spinor
    integrator: IntegratorConfig

    def __post_init__(self):
        n = np.asarray(self.axis, dtype=float)
        if n.shape != (3,) or abs(np.linalg.norm(n) - 1.0) > 1e-9:
            raise ValueError(f"axis must be a unit 3-vector, got {self.axis!r}")
        if not math.isfinite(self.omega_l):
            raise ValueError("omega_l must be finite")

    @property
    def generator(self) -> np.ndarray:
        """Algebra element (omega_l / 2) n, whose flow is left translation by U_n(omega_l t)."""
        return 0.5 * self.omega_l * np.asarray(self.axis, dtype=float)

    def exact_operator(self, t: float) -> Versor:
        return u_axis_angle(self.axis, self.omega_l * t)


def larmor_field(cfg: SpinSimConfig) -> Callable[[np.ndarray], np.ndarray]:
    aq = algebra_quaternion(cfg.generator)
    return lambda q: qmul(aq, q)


def nambu_flow_s3(cfg: SpinSimConfig) -> Trajectory:
    return integrate(
        larmor_field(cfg),
        cfg.initial.array,
        cfg.integrator,
        diagnostics={"norm": np.linalg.norm},
    )


def exact_versor_path(cfg: SpinSimConfig, times) -> np.ndarray:
    q0 = cfg.initial.array
    return np.array([qmul(cfg.exact_operator(t).array, q0) for t in times])


def exact_spinor_path(cfg: SpinSimConfig, times) -> np.ndarray:
    """U(t) xi0 by complex 2x2 arithmetic, as (re1, im1, re2, im2) rows."""
    s0 = cfg.initial.complex()
    rows = []
    for t in times:
        c = cfg.exact_operator(t).matrix() @ s0
        rows.append([c[0].real, c[0].imag, c[1].real, c[1].imag])
    return np.array(rows)


@dataclass
class ComparisonReport:
    times: np.ndarray
    versors: np.ndarray
    spinors: np.ndarray
    deviations: np.ndarray
    max_deviation: float
    norm_drift: float
    tol: float

    @property
    def passed(self) -> bool:
        return self.max_deviation <= self.tol


def compare_spin_vs_nambu(cfg: SpinSimConfig, tol: float = TOL_TRAJ) -> ComparisonReport:
    traj = nambu_flow_s3(cfg)
    spinors = exact_spinor_path(cfg, traj.times)
    # h is the identity on (x, y, z, w) components
    dev = np.max(np.abs(traj.states - spinors), axis=1)
    return ComparisonReport(
        times=traj.times,
        versors=traj.states,
        spinors=spinors,
        deviations=dev,
        max_deviation=float(np.max(dev)),
        norm_drift=float(np.max(np.abs(traj.diagnostics["norm"] - 1.0))),
        tol=tol,
    )


def richardson_order(run: Callable[[float], np.ndarray], dts=(4e-3, 2e-3, 1e-3)) -> float:
    """Observed order from final states at three step sizes halving each time."""
    a, b, c = (np.asarray(run(dt)) for dt in dts)
    ratio = np.linalg.norm(a - b) / np.linalg.norm(b - c)
    return float(np.log(ratio) / np.log(dts[0] / dts[1]))
