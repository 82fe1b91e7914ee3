"""
One-excitation amplitude equations and their fixed-step RK4 integration.

State vector layout used throughout (and by the dense oracle):
    [alpha, b_0 .. b_{n_k-1}, c_{0,0} .. c_{0,n_w-1}, c_{1,0} .. ]
"""
import time
from dataclasses import dataclass, field
from typing import Callable, List, Tuple
import numpy as np
from utils import logger, IntegrationError
from constants import STABILITY_LIMIT, NORM_DRIFT_LIMIT
from .s04_assemble_model import SystemModel


@dataclass(frozen=True)
class SystemState:
    alpha: complex
    b: np.ndarray = field(repr=False, compare=False)
    c: np.ndarray = field(repr=False, compare=False)
    t: float = 0.0


@dataclass(frozen=True)
class Trajectory:
    """
    Result of one integration.

    Populations and the norm are recorded at every integrator step (step_times);
    full states only every sample_stride steps plus the final step (times).
    """
    times: np.ndarray = field(repr=False)
    states: Tuple[SystemState, ...] = field(repr=False)
    step_times: np.ndarray = field(repr=False)
    excited: np.ndarray = field(repr=False)
    photon: np.ndarray = field(repr=False)
    detector: np.ndarray = field(repr=False)
    norms: np.ndarray = field(repr=False)
    dt: float
    scenario: str = ""

    @property
    def final_state(self) -> SystemState:
        return self.states[-1]

    @property
    def norm_drift(self) -> float:
        return float(np.max(np.abs(self.norms - 1.0)))


def state_to_vector(state: SystemState) -> np.ndarray:
    return np.concatenate(([state.alpha], state.b, state.c.ravel()))


def state_from_vector(vector: np.ndarray, model: SystemModel, t: float = 0.0) -> SystemState:
    """
    Split a flat amplitude vector into a SystemState.

    Raises:
        ValueError: if the vector length does not match the model dimension
    """
    if vector.shape != (model.dimension,):
        raise ValueError(f"State vector has shape {vector.shape}, model expects ({model.dimension},)")
    n_k = model.n_k
    return SystemState(
        alpha=complex(vector[0]),
        b=vector[1:1 + n_k].copy(),
        c=vector[1 + n_k:].reshape(model.shape).copy(),
        t=float(t),
    )


def init_state(model: SystemModel) -> SystemState:
    """Excited atom, empty field, unexcited detector."""
    return SystemState(
        alpha=1.0 + 0.0j,
        b=np.zeros(model.n_k, dtype=complex),
        c=np.zeros(model.shape, dtype=complex),
        t=0.0,
    )


def norm(state: SystemState) -> float:
    return float(abs(state.alpha) ** 2 + np.sum(np.abs(state.b) ** 2) + np.sum(np.abs(state.c) ** 2))


def _derivative(y: np.ndarray, model: SystemModel, include_diagonal: bool = True) -> np.ndarray:
    """
    dy/dt = -i H y using the factorized couplings.

    The detector block is only touched through its row sums s = sum_omega c and the
    broadcast drive M^T b, so the cost is O(n_k^2 + n_k n_w).
    """
    n_k = model.n_k
    xi = model.coupling.xi
    coupling = model.detector_coupling

    alpha = y[0]
    b = y[1:1 + n_k]
    c = y[1 + n_k:].reshape(model.shape)

    out = np.empty_like(y)
    row_sums = c.sum(axis=1)
    drive = coupling.T @ b

    if include_diagonal:
        out[0] = -1j * (model.atom_frequency * alpha + np.vdot(xi, b))
        out[1:1 + n_k] = -1j * (model.photon_grid.values * b + xi * alpha + coupling @ row_sums)
        out[1 + n_k:] = (-1j * (model.omega_grid.values[None, :] * c + drive[:, None])).ravel()
    else:
        out[0] = -1j * np.vdot(xi, b)
        out[1:1 + n_k] = -1j * (xi * alpha + coupling @ row_sums)
        out[1 + n_k:] = np.repeat(-1j * drive, model.n_w)
    return out


def rhs(state: SystemState, model: SystemModel) -> SystemState:
    """
    Time derivative of every amplitude under the one-excitation equations of motion.

    Args:
        state: Current amplitudes
        model: Assembled model

    Returns:
        A SystemState holding d(alpha)/dt, db/dt and dc/dt at state.t

    Raises:
        ValueError: if the state dimensions do not match the model
    """
    if state.b.shape != (model.n_k,) or state.c.shape != model.shape:
        raise ValueError(
            f"State shapes b{state.b.shape}, c{state.c.shape} do not match model "
            f"({model.n_k},), {model.shape}"
        )
    derivative = _derivative(state_to_vector(state).astype(complex), model)
    return state_from_vector(derivative, model, state.t)


def _rk4_step(y: np.ndarray, t: float, dt: float, f: Callable[[np.ndarray, float], np.ndarray]) -> np.ndarray:
    half = 0.5 * dt
    k1 = f(y, t)
    k2 = f(y + half * k1, t + half)
    k3 = f(y + half * k2, t + half)
    k4 = f(y + dt * k3, t + dt)
    return y + (dt / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4)


def integrate(model: SystemModel, t_end: float, dt: float, sample_stride: int,
              interaction_picture: bool = False, scenario: str = "") -> Trajectory:
    """
    Integrate from the excited initial state with classical fixed-step RK4.

    Args:
        model: Assembled model
        t_end: Final time (rounded to a whole number of steps)
        dt: Step size
        sample_stride: Store the full state every this many steps
        interaction_picture: Rotate out the bare energies analytically and
            integrate only the couplings
        scenario: Name carried into the trajectory

    Returns:
        Trajectory with per-step populations and thinned states

    Raises:
        ValueError: on invalid step parameters or a violated stability guard
        IntegrationError: if the norm drifts by more than 1e-6 or amplitudes become non-finite
    """
    if not dt > 0:
        raise ValueError(f"dt must be positive, got {dt}")
    if not t_end > 0:
        raise ValueError(f"t_end must be positive, got {t_end}")
    if int(sample_stride) != sample_stride or sample_stride < 1:
        raise ValueError(f"sample_stride must be a positive integer, got {sample_stride}")
    if dt * model.max_frequency >= STABILITY_LIMIT:
        raise ValueError(
            f"dt = {dt} violates the stability guard dt * {model.max_frequency:g} < {STABILITY_LIMIT}; "
            f"use dt <= {0.5 * STABILITY_LIMIT / model.max_frequency:.4g}"
        )

    n_steps = max(1, int(round(t_end / dt)))
    sample_stride = int(sample_stride)
    n_k = model.n_k
    diagonal = model.diagonal

    def f(y: np.ndarray, t: float) -> np.ndarray:
        if not interaction_picture:
            return _derivative(y, model)
        phase = np.exp(-1j * diagonal * t)
        return np.conj(phase) * _derivative(phase * y, model, include_diagonal=False)

    def physical(y: np.ndarray, t: float) -> np.ndarray:
        return np.exp(-1j * diagonal * t) * y if interaction_picture else y

    y = state_to_vector(init_state(model)).astype(complex)
    step_times = dt * np.arange(n_steps + 1)
    excited = np.empty(n_steps + 1)
    photon = np.empty(n_steps + 1)
    detector = np.empty(n_steps + 1)
    norms = np.empty(n_steps + 1)

    sample_times: List[float] = []
    states: List[SystemState] = []

    def record(step: int) -> None:
        weights = np.abs(y) ** 2
        excited[step] = weights[0]
        photon[step] = weights[1:1 + n_k].sum()
        detector[step] = weights[1 + n_k:].sum()
        norms[step] = excited[step] + photon[step] + detector[step]
        if step % sample_stride == 0 or step == n_steps:
            t = float(step_times[step])
            sample_times.append(t)
            states.append(state_from_vector(physical(y, t), model, t))

    logger.info(
        f"Integrating {n_steps} steps of dt = {dt:g} to t = {n_steps * dt:g} "
        f"({'interaction' if interaction_picture else 'Schrodinger'} picture, dimension {model.dimension})..."
    )
    started = time.perf_counter()
    record(0)
    progress_every = max(1, n_steps // 10)
    for step in range(1, n_steps + 1):
        y = _rk4_step(y, float(step_times[step - 1]), dt, f)
        record(step)

        drift = abs(norms[step] - 1.0)
        if not np.isfinite(norms[step]):
            raise IntegrationError(f"Non-finite amplitudes at step {step} (t = {step_times[step]:g})", step=step)
        if drift > NORM_DRIFT_LIMIT:
            raise IntegrationError(
                f"Norm drifted by {drift:.3e} at step {step} (t = {step_times[step]:g}); reduce dt",
                step=step, drift=float(drift),
            )
        if step % progress_every == 0:
            logger.debug(f"Step {step}/{n_steps}: P_e = {excited[step]:.6g}, norm drift {drift:.2e}")

    trajectory = Trajectory(
        times=np.array(sample_times),
        states=tuple(states),
        step_times=step_times,
        excited=excited,
        photon=photon,
        detector=detector,
        norms=norms,
        dt=float(dt),
        scenario=scenario,
    )
    logger.info(
        f"Integration finished in {time.perf_counter() - started:.1f}s: P_e(end) = {excited[-1]:.6g}, "
        f"max norm drift {trajectory.norm_drift:.2e}"
    )
    return trajectory
