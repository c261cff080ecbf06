"""Uncoupled, linear, bound-aware semi-implicit time stepper.

One step advances the three fields in a fixed order:

1. Freeze the vascular fraction P and the diffusivity D = kappa1 * P + 1 at
   the old state.
2. Tumor: one linear solve of (M/dt + A(D) + M c) T_new = M (T_old/dt + g),
   where the implicit sink c collects the hypoxia rate, destruction by
   necrosis, and the negative part of the logistic factor, while the explicit
   gain g = T_old * P * (1 - S)_+ is nonnegative.  M is the lumped mass
   matrix and A(D) the stiffness matrix, an M-matrix on the structured mesh,
   so nonnegative input yields nonnegative output.
3. Vasculature: a pointwise linear update with the same implicit-sink /
   explicit-gain split, using the freshly solved tumor field.
4. Necrosis: gains exactly what the other fields lost, making the discrete
   mass exchange identity hold by construction.

Fields are never clamped.  A monitor flags excursions outside
[-1e-9, 1 + 1e-6] (and negative necrosis) after every accepted step;
violations are logged and reported, not repaired, so scheme defects stay
visible.
"""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass

import numpy as np

from .errors import InvalidParameterError, SolverFailure
from .kinetics import DimensionlessParameters, FieldTriple, vascular_fraction
from .mesh import StructuredTriMesh, assemble_stiffness, stiffness_diag_slots
from .metrics import DEFAULT_THRESHOLD, MetricsSample, compute_sample

__all__ = [
    "SolverConfig",
    "SimulationState",
    "BoundViolation",
    "RunResult",
    "HomogeneousTrajectory",
    "solve_spd",
    "step",
    "run",
    "run_homogeneous",
]

logger = logging.getLogger(__name__)

# Monitor tolerances for the theoretical bounds 0 <= T, Phi <= 1 and N >= 0.
LOWER_BOUND_TOL = 1e-9
UPPER_BOUND_TOL = 1e-6


@dataclass(frozen=True)
class SolverConfig:
    """Time-integration settings.

    ``t_final`` may be zero (the run then only reports the initial state).
    Cadences are in steps; metrics are additionally sampled at t = 0 and at
    the final step.
    """

    dt: float = 1e-3
    t_final: float = 500.0
    cg_tolerance: float = 1e-10
    cg_max_iterations: int = 500
    snapshot_every: int = 50_000
    metrics_every: int = 1_000

    def __post_init__(self):
        if not self.dt > 0.0:
            raise InvalidParameterError(f"dt must be positive, got {self.dt!r}")
        if not self.t_final >= 0.0:
            raise InvalidParameterError(
                f"t_final must be nonnegative, got {self.t_final!r}"
            )
        if not 0.0 < self.cg_tolerance < 1.0:
            raise InvalidParameterError(
                f"cg_tolerance must lie in (0, 1), got {self.cg_tolerance!r}"
            )
        if self.cg_max_iterations < 1:
            raise InvalidParameterError("cg_max_iterations must be >= 1")
        if self.snapshot_every < 1 or self.metrics_every < 1:
            raise InvalidParameterError("cadences must be >= 1")


@dataclass
class SimulationState:
    """Per-vertex fields at one instant."""

    time: float
    t_field: np.ndarray
    n_field: np.ndarray
    phi_field: np.ndarray

    def copy(self) -> "SimulationState":
        return SimulationState(
            time=self.time,
            t_field=self.t_field.copy(),
            n_field=self.n_field.copy(),
            phi_field=self.phi_field.copy(),
        )


@dataclass(frozen=True)
class BoundViolation:
    """One monitor hit: which field left its admissible range, and by how much."""

    step_index: int
    time: float
    field: str
    value: float
    bound: str


@dataclass
class RunResult:
    """Output of :func:`run`: sampled metrics, field snapshots, monitor log."""

    mesh: StructuredTriMesh
    metrics: list[MetricsSample]
    snapshots: list[SimulationState]
    bound_violations: list[BoundViolation]


@dataclass
class HomogeneousTrajectory:
    """Spatially homogeneous trajectory, sampled at every step."""

    times: np.ndarray
    t_density: np.ndarray
    n_density: np.ndarray
    phi_density: np.ndarray

    def __len__(self) -> int:
        return int(self.times.size)

    def state_at(self, index: int) -> FieldTriple:
        return FieldTriple(
            t_density=float(self.t_density[index]),
            n_density=float(self.n_density[index]),
            phi_density=float(self.phi_density[index]),
        )


def solve_spd(matrix, rhs, tol: float = 1e-10, max_iter: int = 500, x0=None):
    """Jacobi-preconditioned conjugate gradients for an SPD sparse system.

    Guarantees ||A x - b|| / ||b|| <= tol on return (the true residual is
    re-checked, and the iteration restarted if the recurrence drifted).
    Deterministic for fixed inputs.  Raises :class:`SolverFailure` when the
    iteration budget is exhausted.

    The system is normalized by ||b|| internally; the tumor field decays to
    the denormal range during long runs and unscaled CG dot products would
    underflow to zero there.
    """
    rhs = np.asarray(rhs, dtype=float)
    b_norm = float(np.linalg.norm(rhs))
    if b_norm == 0.0:
        return np.zeros_like(rhs)

    inv_diag = 1.0 / matrix.diagonal()
    b = rhs / b_norm
    x = np.zeros_like(rhs) if x0 is None else np.asarray(x0, dtype=float) / b_norm

    iterations = 0
    r = b - matrix.dot(x)
    while True:
        # r holds the true residual of the normalized system at this point.
        if float(np.linalg.norm(r)) <= tol:
            return x * b_norm
        if iterations >= max_iter:
            break

        z = inv_diag * r
        rz = float(np.dot(r, z))
        p = z
        stalled = False
        while iterations < max_iter:
            ap = matrix.dot(p)
            pap = float(np.dot(p, ap))
            if not pap > 0.0 or not rz > 0.0:
                stalled = True
                break
            alpha = rz / pap
            x = x + alpha * p
            r = r - alpha * ap
            iterations += 1
            if float(np.linalg.norm(r)) <= tol:
                break
            z = inv_diag * r
            rz_new = float(np.dot(r, z))
            p = z + (rz_new / rz) * p
            rz = rz_new

        # Re-derive the true residual before accepting or retrying; the
        # recurrence residual can drift.
        r = b - matrix.dot(x)
        if stalled:
            if float(np.linalg.norm(r)) <= tol:
                return x * b_norm
            break

    residual = float(np.linalg.norm(b - matrix.dot(x)))
    raise SolverFailure(
        f"conjugate gradients stalled at relative residual {residual:.3e} "
        f"after {iterations} iterations",
        residual=residual,
        iterations=iterations,
    )


def step(
    state: SimulationState,
    params: DimensionlessParameters,
    mesh: StructuredTriMesh,
    dt: float,
    cg_tolerance: float = 1e-10,
    cg_max_iterations: int = 500,
) -> SimulationState:
    """Advance the state by one time step (see module docstring for the
    splitting)."""
    t_old = state.t_field
    n_old = state.n_field
    phi_old = state.phi_field
    if not (
        t_old.shape == n_old.shape == phi_old.shape == (mesh.num_vertices,)
    ):
        raise InvalidParameterError("state field lengths do not match the mesh")

    p = vascular_fraction(phi_old, t_old)
    lack = np.sqrt(1.0 - p * p)
    crowding = 1.0 - (t_old + n_old + phi_old)
    crowd_pos = np.maximum(crowding, 0.0)
    crowd_neg = np.maximum(-crowding, 0.0)

    diffusivity = params.kappa1 * p + 1.0
    system = assemble_stiffness(mesh, diffusivity)
    weights = mesh.lumped_weights

    sink = params.alpha * lack + params.beta1 * n_old + p * crowd_neg
    gain = t_old * p * crowd_pos
    system.data[stiffness_diag_slots(mesh)] += weights * (1.0 / dt + sink)
    rhs = weights * (t_old / dt + gain)
    t_new = solve_spd(
        system, rhs, tol=cg_tolerance, max_iter=cg_max_iterations, x0=t_old
    )

    growth = params.gamma * t_new * lack
    phi_new = (phi_old + dt * growth * phi_old * crowd_pos) / (
        1.0
        + dt * (params.delta * t_new + params.beta2 * n_old + growth * crowd_neg)
    )

    transfer = (
        params.alpha * lack * t_new
        + params.beta1 * n_old * t_new
        + params.delta * t_new * phi_new
        + params.beta2 * n_old * phi_new
    )
    n_new = n_old + dt * transfer

    return SimulationState(
        time=state.time + dt, t_field=t_new, n_field=n_new, phi_field=phi_new
    )


def _check_bounds(
    state: SimulationState, step_index: int, violations: list[BoundViolation]
) -> None:
    checks = (
        ("T", float(state.t_field.min()), float(state.t_field.max()), True),
        ("Phi", float(state.phi_field.min()), float(state.phi_field.max()), True),
        ("N", float(state.n_field.min()), float(state.n_field.max()), False),
    )
    for name, lo, hi, has_upper in checks:
        if lo < -LOWER_BOUND_TOL:
            violations.append(
                BoundViolation(step_index, state.time, name, lo, "lower")
            )
            logger.warning(
                "bound violation at step %d (t=%.6g): %s min = %.3e",
                step_index, state.time, name, lo,
            )
        if has_upper and hi > 1.0 + UPPER_BOUND_TOL:
            violations.append(
                BoundViolation(step_index, state.time, name, hi, "upper")
            )
            logger.warning(
                "bound violation at step %d (t=%.6g): %s max = %.6g",
                step_index, state.time, name, hi,
            )


def run(scenario, config: SolverConfig | None = None,
        theta: float = DEFAULT_THRESHOLD) -> RunResult:
    """Integrate a scenario from t = 0 to t_final.

    Metrics are sampled every ``metrics_every`` steps plus at t = 0 and the
    final step; snapshots every ``snapshot_every`` steps plus the final step.
    Deterministic: identical inputs produce bit-identical outputs.
    """
    if config is None:
        config = scenario.solver
    mesh = scenario.build_mesh()
    state = scenario.initial_state(mesh)

    n_steps = int(round(config.t_final / config.dt))
    violations: list[BoundViolation] = []
    metrics = [compute_sample(state, mesh, theta)]
    snapshots = [state.copy()]

    for k in range(1, n_steps + 1):
        try:
            state = step(
                state,
                scenario.params,
                mesh,
                config.dt,
                cg_tolerance=config.cg_tolerance,
                cg_max_iterations=config.cg_max_iterations,
            )
        except SolverFailure as exc:
            raise SolverFailure(
                f"step {k} (t={k * config.dt:.6g}): {exc}",
                residual=exc.residual,
                iterations=exc.iterations,
                step_index=k,
            ) from exc
        state.time = k * config.dt
        _check_bounds(state, k, violations)
        if k % config.metrics_every == 0 or k == n_steps:
            metrics.append(compute_sample(state, mesh, theta))
        if k % config.snapshot_every == 0 or k == n_steps:
            snapshots.append(state.copy())

    return RunResult(
        mesh=mesh,
        metrics=metrics,
        snapshots=snapshots,
        bound_violations=violations,
    )


def run_homogeneous(
    initial: FieldTriple,
    params: DimensionlessParameters,
    dt: float,
    t_final: float,
) -> HomogeneousTrajectory:
    """Integrate the space-free system with the same semi-implicit update as
    :func:`step`, minus diffusion.

    The trajectory is sampled at every step.  Raises :class:`SolverFailure`
    on numeric overflow.
    """
    if not dt > 0.0:
        raise InvalidParameterError(f"dt must be positive, got {dt!r}")
    n_steps = int(round(t_final / dt))
    times = dt * np.arange(n_steps + 1)
    t_out = np.empty(n_steps + 1)
    n_out = np.empty(n_steps + 1)
    phi_out = np.empty(n_steps + 1)

    t = float(initial.t_density)
    n = float(initial.n_density)
    phi = float(initial.phi_density)
    alpha, beta1, beta2, gamma, delta = (
        params.alpha, params.beta1, params.beta2, params.gamma, params.delta,
    )
    t_out[0] = t
    n_out[0] = n
    phi_out[0] = phi

    for k in range(1, n_steps + 1):
        phi_pos = phi if phi > 0.0 else 0.0
        t_pos = t if t > 0.0 else 0.0
        p = phi_pos / ((phi_pos + 1.0) / 2.0 + t_pos)
        if p > 1.0:
            p = 1.0
        lack = math.sqrt(1.0 - p * p)
        crowding = 1.0 - (t + n + phi)
        crowd_pos = crowding if crowding > 0.0 else 0.0
        crowd_neg = -crowding if crowding < 0.0 else 0.0

        sink = alpha * lack + beta1 * n + p * crowd_neg
        t_new = (t + dt * t * p * crowd_pos) / (1.0 + dt * sink)
        growth = gamma * t_new * lack
        phi_new = (phi + dt * growth * phi * crowd_pos) / (
            1.0 + dt * (delta * t_new + beta2 * n + growth * crowd_neg)
        )
        n_new = n + dt * (
            alpha * lack * t_new
            + beta1 * n * t_new
            + delta * t_new * phi_new
            + beta2 * n * phi_new
        )
        if not (
            math.isfinite(t_new) and math.isfinite(n_new) and math.isfinite(phi_new)
        ):
            raise SolverFailure(
                f"homogeneous trajectory overflowed at step {k}", step_index=k
            )
        t, n, phi = t_new, n_new, phi_new
        t_out[k] = t
        n_out[k] = n
        phi_out[k] = phi

    return HomogeneousTrajectory(
        times=times, t_density=t_out, n_density=n_out, phi_density=phi_out
    )
