"""Stateful first-order optimizers.

The centerpiece is the LyAm step: Adam-style exponential moments with a
per-parameter learning rate eta_i = eta0 / (1 + v_hat_i), so the effective
rate shrinks wherever the squared-gradient estimate is large and never
exceeds eta0. The denominator is bounded below by 1, so LyAm needs no
epsilon. Baselines (SGD, AdaGrad, Adam, AdamW, AdaBelief, Adan) are
implemented with their standard published update rules for comparison.

Every step function returns a :class:`StepOutput` whose ``eta`` and
``m_hat`` factor the realized update exactly:

    new_params[i] == params[i] - eta[i] * m_hat[i]

For LyAm, Adam, and AdaBelief ``m_hat`` is the bias-corrected first moment;
for SGD and AdaGrad it is the raw gradient; for AdamW (weight decay > 0) and
Adan it is the effective descent direction including the decay/difference
terms. ``v_hat`` is the second-moment estimate feeding the denominator.

All accumulators are float64. Decay powers beta^t are tracked by repeated
multiplication in the state rather than pow(), so long trajectories agree
bit-for-bit with a plain scripted recurrence.
"""

from __future__ import annotations

from dataclasses import dataclass, field, replace

import numpy as np

LYAM = "lyam"
BASELINE_KINDS = ("sgd", "adagrad", "adam", "adamw", "adabelief", "adan")
OPTIMIZER_KINDS = (LYAM,) + BASELINE_KINDS
#: The six optimizers compared head-to-head in benchmark runs.
BENCH_KINDS = ("adagrad", "adam", "adamw", "adabelief", "adan", "lyam")


@dataclass(frozen=True)
class HyperParams:
    """Optimizer hyperparameters.

    eta0 is the base learning rate, beta1/beta2 the first/second moment
    decay rates. epsilon and weight_decay only affect baselines: LyAm's
    denominator 1 + v_hat >= 1 needs no epsilon, and LyAm applies no decay.
    """

    eta0: float
    beta1: float = 0.9
    beta2: float = 0.99
    weight_decay: float = 0.0
    epsilon: float = 1e-8

    def __post_init__(self) -> None:
        if not self.eta0 > 0:
            raise ValueError(f"eta0 must be positive, got {self.eta0}")
        if not 0.0 <= self.beta1 < 1.0:
            raise ValueError(f"beta1 must be in [0, 1), got {self.beta1}")
        if not 0.0 <= self.beta2 < 1.0:
            raise ValueError(f"beta2 must be in [0, 1), got {self.beta2}")
        if not self.epsilon > 0:
            raise ValueError(f"epsilon must be positive, got {self.epsilon}")
        if self.weight_decay < 0:
            raise ValueError(f"weight_decay must be >= 0, got {self.weight_decay}")


def default_hyper(kind: str, eta0: float, beta1: float = 0.9, beta2: float = 0.99,
                  weight_decay: float | None = None, epsilon: float = 1e-8) -> HyperParams:
    """HyperParams with community defaults per optimizer (AdamW decay 0.01)."""
    if weight_decay is None:
        weight_decay = 0.01 if kind == "adamw" else 0.0
    return HyperParams(eta0=eta0, beta1=beta1, beta2=beta2,
                       weight_decay=weight_decay, epsilon=epsilon)


@dataclass
class MomentState:
    """Per-parameter accumulators plus the step counter.

    ``m`` and ``v`` are the first/second moment buffers (AdaGrad stores its
    squared-gradient sum in ``v``; AdaBelief stores its belief accumulator
    there). ``beta1_pow``/``beta2_pow`` cache beta^t. ``diff`` and
    ``prev_grad`` are Adan's gradient-difference moment and last gradient;
    they stay None for every other optimizer.
    """

    m: np.ndarray
    v: np.ndarray
    t: int = 0
    beta1_pow: float = 1.0
    beta2_pow: float = 1.0
    diff: np.ndarray | None = None
    prev_grad: np.ndarray | None = None

    @property
    def dim(self) -> int:
        return self.m.shape[0]


@dataclass(frozen=True)
class StepOutput:
    """Result of one optimizer step, with per-parameter telemetry."""

    new_params: np.ndarray
    new_state: MomentState
    eta: np.ndarray
    m_hat: np.ndarray
    v_hat: np.ndarray


def init_state(dim: int) -> MomentState:
    """Zero moments, step counter at 0."""
    if dim < 1:
        raise ValueError(f"parameter dimension must be >= 1, got {dim}")
    return MomentState(m=np.zeros(dim), v=np.zeros(dim))


def _check_gradient(g: np.ndarray, dim: int) -> np.ndarray:
    g = np.asarray(g, dtype=np.float64)
    if g.shape != (dim,):
        raise ValueError(f"gradient shape {g.shape} does not match state dimension {dim}")
    bad = np.flatnonzero(~np.isfinite(g))
    if bad.size:
        raise ValueError(f"non-finite gradient entry at index {bad[0]}: {g[bad[0]]}")
    return g


def update_moments(state: MomentState, g: np.ndarray, hyper: HyperParams) -> MomentState:
    """Exponential moving averages: m <- b1*m + (1-b1)*g, v <- b2*v + (1-b2)*g^2."""
    g = _check_gradient(g, state.dim)
    b1, b2 = hyper.beta1, hyper.beta2
    m = b1 * state.m + (1.0 - b1) * g
    v = b2 * state.v + (1.0 - b2) * (g * g)
    return replace(state, m=m, v=v, t=state.t + 1,
                   beta1_pow=state.beta1_pow * b1, beta2_pow=state.beta2_pow * b2)


def bias_correct(state: MomentState, hyper: HyperParams) -> tuple[np.ndarray, np.ndarray]:
    """Undo the zero-initialization bias: m_hat = m/(1-b1^t), v_hat = v/(1-b2^t)."""
    if state.t < 1:
        raise ValueError("bias correction is undefined at t=0 (division by 1 - beta^0)")
    m_hat = state.m / (1.0 - state.beta1_pow)
    v_hat = state.v / (1.0 - state.beta2_pow)
    return m_hat, v_hat


def adaptive_lr(v_hat: np.ndarray, eta0: float) -> np.ndarray:
    """Per-parameter rate eta0 / (1 + v_hat); always in (0, eta0]."""
    v_hat = np.asarray(v_hat, dtype=np.float64)
    if np.any(v_hat < 0):
        i = int(np.flatnonzero(v_hat < 0)[0])
        raise ValueError(f"negative second-moment entry at index {i}: {v_hat[i]}")
    return eta0 / (1.0 + v_hat)


def lyam_step(params: np.ndarray, state: MomentState, g: np.ndarray,
              hyper: HyperParams) -> StepOutput:
    """One LyAm update: moments, bias correction, rate scaling, descent."""
    params = np.asarray(params, dtype=np.float64)
    new_state = update_moments(state, g, hyper)
    m_hat, v_hat = bias_correct(new_state, hyper)
    eta = adaptive_lr(v_hat, hyper.eta0)
    new_params = params - eta * m_hat
    return StepOutput(new_params, new_state, eta, m_hat, v_hat)


def _advance_counter(state: MomentState, hyper: HyperParams, **changes) -> MomentState:
    return replace(state, t=state.t + 1,
                   beta1_pow=state.beta1_pow * hyper.beta1,
                   beta2_pow=state.beta2_pow * hyper.beta2, **changes)


def _sgd_step(params, state, g, hyper):
    eta = np.full_like(g, hyper.eta0)
    new_state = _advance_counter(state, hyper)
    return StepOutput(params - eta * g, new_state, eta, g, np.zeros_like(g))


def _adagrad_step(params, state, g, hyper):
    acc = state.v + g * g
    eta = hyper.eta0 / (np.sqrt(acc) + hyper.epsilon)
    new_state = _advance_counter(state, hyper, v=acc)
    return StepOutput(params - eta * g, new_state, eta, g, acc)


def _adam_step(params, state, g, hyper):
    new_state = update_moments(state, g, hyper)
    m_hat, v_hat = bias_correct(new_state, hyper)
    denom = np.sqrt(v_hat) + hyper.epsilon
    eta = hyper.eta0 / denom
    if hyper.weight_decay > 0.0:
        # Decoupled decay folded into the direction so eta * m_hat stays the
        # exact realized update.
        m_hat = m_hat + hyper.weight_decay * denom * params
    return StepOutput(params - eta * m_hat, new_state, eta, m_hat, v_hat)


def _adamw_step(params, state, g, hyper):
    return _adam_step(params, state, g, hyper)


def _adabelief_step(params, state, g, hyper):
    g = _check_gradient(g, state.dim)
    b1, b2 = hyper.beta1, hyper.beta2
    m = b1 * state.m + (1.0 - b1) * g
    resid = g - m
    # Belief accumulator tracks deviation of the gradient from its EMA; the
    # added epsilon keeps the denominator away from zero when they agree.
    s = b2 * state.v + (1.0 - b2) * (resid * resid) + hyper.epsilon
    new_state = replace(state, m=m, v=s, t=state.t + 1,
                        beta1_pow=state.beta1_pow * b1, beta2_pow=state.beta2_pow * b2)
    m_hat, s_hat = bias_correct(new_state, hyper)
    eta = hyper.eta0 / (np.sqrt(s_hat) + hyper.epsilon)
    return StepOutput(params - eta * m_hat, new_state, eta, m_hat, s_hat)


def _adan_step(params, state, g, hyper):
    g = _check_gradient(g, state.dim)
    b1, b2 = hyper.beta1, hyper.beta2
    prev = state.prev_grad if state.prev_grad is not None else g
    d_prev = state.diff if state.diff is not None else np.zeros_like(g)
    gd = g - prev
    m = b1 * state.m + (1.0 - b1) * g
    d = b2 * d_prev + (1.0 - b2) * gd
    u = g + b2 * gd
    n = b2 * state.v + (1.0 - b2) * (u * u)
    new_state = replace(state, m=m, v=n, t=state.t + 1,
                        beta1_pow=state.beta1_pow * b1, beta2_pow=state.beta2_pow * b2,
                        diff=d, prev_grad=g.copy())
    bc1 = 1.0 - new_state.beta1_pow
    bc2 = 1.0 - new_state.beta2_pow
    m_hat = m / bc1
    d_hat = d / bc2
    n_hat = n / bc2
    denom = np.sqrt(n_hat) + hyper.epsilon
    eta = hyper.eta0 / denom
    direction = m_hat + b2 * d_hat
    if hyper.weight_decay > 0.0:
        direction = direction + hyper.weight_decay * denom * params
    return StepOutput(params - eta * direction, new_state, eta, direction, n_hat)


_BASELINE_STEPS = {
    "sgd": _sgd_step,
    "adagrad": _adagrad_step,
    "adam": _adam_step,
    "adamw": _adamw_step,
    "adabelief": _adabelief_step,
    "adan": _adan_step,
}


def baseline_step(kind: str, params: np.ndarray, state: MomentState,
                  g: np.ndarray, hyper: HyperParams) -> StepOutput:
    """One update of the named baseline optimizer."""
    try:
        fn = _BASELINE_STEPS[kind]
    except KeyError:
        raise ValueError(
            f"unknown baseline optimizer {kind!r}; valid kinds: {', '.join(BASELINE_KINDS)}"
        ) from None
    params = np.asarray(params, dtype=np.float64)
    return fn(params, state, g, hyper)


def step(kind: str, params: np.ndarray, state: MomentState,
         g: np.ndarray, hyper: HyperParams) -> StepOutput:
    """Dispatch one optimizer step by kind ('lyam' or a baseline name)."""
    if kind == LYAM:
        return lyam_step(params, state, g, hyper)
    if kind in _BASELINE_STEPS:
        return baseline_step(kind, params, state, g, hyper)
    raise ValueError(
        f"unknown optimizer {kind!r}; valid kinds: {', '.join(OPTIMIZER_KINDS)}"
    )
