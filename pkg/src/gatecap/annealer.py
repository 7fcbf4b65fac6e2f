"""Stochastic maximizers for the four capacity objectives.

Two regimes share one proposal language (complex Gaussian increments with
uniform random phases, scaled by a step size sigma):

* zero temperature, for the entanglement capacities: only strict
  improvements are accepted; sigma halves after `stall_window` consecutive
  rejections and the climb stops once sigma < sigma_min.
* finite temperature, for the Holevo capacities: a worse proposal is
  accepted with probability exp(delta/tau).  tau starts tiny and adapts
  every `tau_check_every` steps: multiplied by tau_down if the running
  value dropped since the last checkpoint, by tau_up if it rose.  sigma
  follows one of two schemes, stall-halving (as above) or, after a
  stall-halving warmup, multiplicative feedback that steers the acceptance
  rate toward roughly 20%.

Each restart owns an independent PRNG stream derived from (seed, restart
index), so results are reproducible and independent of how restarts are
scheduled.  The best configuration ever visited is returned along with its
value, and the witness is re-evaluated through the public objective path
before anything is reported.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import _kernels
from .gates import CanonicalParams, GateFamily, embedded_family_gate
from .linalg import StateVector, SubsystemLayout, gram_schmidt_unitarize
from .objectives import (ENTANGLEMENT_KINDS, HOLEVO_KINDS, KIND_CHI, KIND_DCHI,
                         KIND_DE, KIND_E, KINDS, EncodedEnsemble, FreeEnsemble,
                         ProductInput, objective_value)

SCHEME_STALL = "stall-halving"
SCHEME_RATE20 = "acceptance-rate-20pct"
_SCHEME_ALIASES = {
    "stall": SCHEME_STALL,
    "rate20": SCHEME_RATE20,
    SCHEME_STALL: SCHEME_STALL,
    SCHEME_RATE20: SCHEME_RATE20,
}

ENCODER_SCOPES = ("full", "gate")

WITNESS_TOL = 1e-12


@dataclass(frozen=True)
class AnnealConfig:
    """Schedule parameters; the defaults are the reference desk settings.

    Entanglement climbs conventionally use stall_window=1000 and Holevo
    anneals 10000; the two classmethod constructors encode that.
    """

    seed: int = 0
    sigma0: float = 1.0
    sigma_min: float = 1e-9
    stall_window: int = 10000
    tau0: float = 1e-6
    tau_check_every: int = 10000
    tau_down: float = 0.5
    tau_up: float = 1.1
    sigma_scheme: str = SCHEME_STALL
    warmup_steps: int = 1_000_000
    max_steps: int = 2_000_000
    restarts: int = 5
    record_trace: bool = False
    trace_every: int = 1000

    def __post_init__(self) -> None:
        scheme = _SCHEME_ALIASES.get(self.sigma_scheme)
        if scheme is None:
            raise ValueError(f"unknown sigma_scheme {self.sigma_scheme!r}")
        object.__setattr__(self, "sigma_scheme", scheme)
        if not self.sigma0 > self.sigma_min > 0:
            raise ValueError("need sigma0 > sigma_min > 0")
        if not self.tau_down < 1 < self.tau_up:
            raise ValueError("need tau_down < 1 < tau_up")
        if self.tau0 <= 0:
            raise ValueError("tau0 must be positive")
        if self.stall_window < 1 or self.tau_check_every < 1 or self.trace_every < 1:
            raise ValueError("window lengths must be >= 1")
        if self.max_steps < 1 or self.restarts < 1 or self.warmup_steps < 0:
            raise ValueError("step and restart budgets must be positive")
        if not isinstance(self.seed, (int, np.integer)) or self.seed < 0:
            raise ValueError("seed must be a nonnegative integer")

    @classmethod
    def for_entanglement(cls, **kw) -> "AnnealConfig":
        kw.setdefault("stall_window", 1000)
        return cls(**kw)

    @classmethod
    def for_holevo(cls, **kw) -> "AnnealConfig":
        return cls(**kw)


@dataclass(frozen=True)
class OptProblem:
    """What to maximize: objective kind, gate, layout and ensemble shape."""

    kind: str
    gate: GateFamily | CanonicalParams
    layout: SubsystemLayout
    ensemble_size: int = 1
    equal_probs: bool = False
    encoder_scope: str = "full"

    def __post_init__(self) -> None:
        if self.kind not in KINDS:
            raise ValueError(f"unknown kind {self.kind!r}, expected one of {KINDS}")
        if self.layout.d_AU != 2 or self.layout.d_BU != 2:
            raise ValueError("gate subsystems must be qubits")
        if self.ensemble_size < 1:
            raise ValueError("ensemble_size must be >= 1")
        if self.encoder_scope not in ENCODER_SCOPES:
            raise ValueError(f"encoder_scope must be one of {ENCODER_SCOPES}")

    def operator(self) -> np.ndarray:
        return embedded_family_gate(self.gate, self.layout)


@dataclass(frozen=True, eq=False)
class OptResult:
    """Outcome of one multi-restart optimization.

    best_value always re-evaluates on the witness through the public
    objective functions to within 1e-12; steps_taken and the schedule
    fields describe the winning restart, total_steps sums all restarts.
    """

    best_value: float
    witness: object
    steps_taken: int
    final_sigma: float
    final_tau: float
    accepted_count: int
    seed: int
    restart_index: int
    total_steps: int
    degenerate_count: int
    trace: np.ndarray | None = None


def gaussian_complex(sigma: float, rng: np.random.Generator) -> complex:
    """One complex increment: a real N(0, sigma) draw times a uniform phase."""
    if sigma < 0:
        raise ValueError("sigma must be nonnegative")
    g = rng.normal(0.0, sigma)
    th = rng.uniform(0.0, 2.0 * np.pi)
    return complex(g * np.cos(th), g * np.sin(th))


def _random_unit_vector(rng: np.random.Generator, n: int) -> np.ndarray:
    while True:
        v = rng.normal(0.0, 1.0, n) * np.exp(1j * rng.uniform(0.0, 2.0 * np.pi, n))
        nrm = np.linalg.norm(v)
        if nrm > 1e-14:
            return v / nrm


def _random_unitary(rng: np.random.Generator, n: int) -> np.ndarray:
    g = rng.normal(0.0, 1.0, (n, n)) * np.exp(1j * rng.uniform(0.0, 2.0 * np.pi, (n, n)))
    q, _ = gram_schmidt_unitarize(g)
    return q


def _trace_buffers(cfg: AnnealConfig):
    if cfg.record_trace:
        n = cfg.max_steps // cfg.trace_every + 2
        return cfg.trace_every, np.zeros(n, np.int64), np.zeros(n, np.float64)
    return 0, np.zeros(1, np.int64), np.zeros(1, np.float64)


def _finish(problem: OptProblem, cfg: AnnealConfig, u: np.ndarray, winner: dict,
            total_steps: int) -> OptResult:
    value = objective_value(problem.kind, u, winner["witness"])
    if abs(value - winner["value"]) > WITNESS_TOL:
        raise RuntimeError(
            f"witness desync: optimizer reported {winner['value']!r}, "
            f"re-evaluation gives {value!r}")
    return OptResult(
        best_value=winner["value"],
        witness=winner["witness"],
        steps_taken=winner["steps"],
        final_sigma=winner["sigma"],
        final_tau=winner["tau"],
        accepted_count=winner["accepted"],
        seed=cfg.seed,
        restart_index=winner["restart"],
        total_steps=total_steps,
        degenerate_count=winner["degen"],
        trace=winner["trace"],
    )


def _pack_trace(cfg: AnnealConfig, tr_steps, tr_vals, ntr):
    if not cfg.record_trace:
        return None
    out = np.empty((ntr, 2), np.float64)
    out[:, 0] = tr_steps[:ntr]
    out[:, 1] = tr_vals[:ntr]
    return out


def maximize_entanglement(problem: OptProblem, cfg: AnnealConfig) -> OptResult:
    """Zero-temperature hill climb for the E (product input) and dE kinds."""
    if problem.kind not in ENTANGLEMENT_KINDS:
        raise ValueError(f"maximize_entanglement cannot handle kind {problem.kind!r}")
    u = problem.operator()
    layout = problem.layout
    winner = None
    total_steps = 0
    for r in range(cfg.restarts):
        rng = np.random.default_rng([cfg.seed, r])
        trace_every, tr_steps, tr_vals = _trace_buffers(cfg)
        if problem.kind == KIND_E:
            a = _random_unit_vector(rng, layout.dim_A)
            b = _random_unit_vector(rng, layout.dim_B)
            val, steps, sigma, acc, deg, ntr = _kernels.climb_product(
                rng, u, a, b, cfg.sigma0, cfg.sigma_min, cfg.stall_window,
                cfg.max_steps, trace_every, tr_steps, tr_vals)
            witness = ProductInput(
                StateVector(SubsystemLayout(2, layout.d_Aanc, 1, 1), a),
                StateVector(SubsystemLayout(1, 1, 2, layout.d_Banc), b))
        else:
            psi = _random_unit_vector(rng, layout.dim)
            val, steps, sigma, acc, deg, ntr = _kernels.climb_state(
                rng, u, psi, layout.dim_A, layout.dim_B, cfg.sigma0, cfg.sigma_min,
                cfg.stall_window, cfg.max_steps, trace_every, tr_steps, tr_vals)
            witness = StateVector(layout, psi)
        total_steps += steps
        if winner is None or val > winner["value"]:
            winner = {"value": val, "witness": witness, "steps": steps, "sigma": sigma,
                      "tau": 0.0, "accepted": acc, "degen": deg, "restart": r,
                      "trace": _pack_trace(cfg, tr_steps, tr_vals, ntr)}
    return _finish(problem, cfg, u, winner, total_steps)


def maximize_chi(problem: OptProblem, cfg: AnnealConfig) -> OptResult:
    """Finite-temperature anneal of the encoded-ensemble Holevo information."""
    if problem.kind != KIND_CHI:
        raise ValueError(f"maximize_chi cannot handle kind {problem.kind!r}")
    u = problem.operator()
    layout = problem.layout
    k = problem.ensemble_size
    d_a, d_b = layout.dim_A, layout.dim_B
    d_v = d_a if problem.encoder_scope == "full" else 2
    rate = cfg.sigma_scheme == SCHEME_RATE20
    winner = None
    total_steps = 0
    for r in range(cfg.restarts):
        rng = np.random.default_rng([cfg.seed, r])
        psi = _random_unit_vector(rng, layout.dim)
        vs = np.stack([_random_unitary(rng, d_v) for _ in range(k)])
        if problem.equal_probs:
            p = np.full(k, 1.0 / k)
        else:
            w = rng.uniform(0.0, 1.0, k)
            p = w / w.sum()
        best_psi = np.empty_like(psi)
        best_vs = np.empty_like(vs)
        best_p = np.empty_like(p)
        trace_every, tr_steps, tr_vals = _trace_buffers(cfg)
        val, steps, sigma, tau, acc, deg, ntr = _kernels.anneal_chi(
            rng, u, psi, vs, p, d_a, d_b, problem.equal_probs,
            cfg.sigma0, cfg.sigma_min, cfg.stall_window, cfg.tau0,
            cfg.tau_check_every, cfg.tau_down, cfg.tau_up, rate,
            cfg.warmup_steps, cfg.max_steps, best_psi, best_vs, best_p,
            trace_every, tr_steps, tr_vals)
        total_steps += steps
        if winner is None or val > winner["value"]:
            if d_v == d_a:
                encoders = tuple(best_vs[i].copy() for i in range(k))
            else:
                eye = np.eye(layout.d_Aanc)
                encoders = tuple(np.kron(best_vs[i], eye) for i in range(k))
            witness = EncodedEnsemble(StateVector(layout, best_psi), encoders, best_p)
            winner = {"value": val, "witness": witness, "steps": steps, "sigma": sigma,
                      "tau": tau, "accepted": acc, "degen": deg, "restart": r,
                      "trace": _pack_trace(cfg, tr_steps, tr_vals, ntr)}
    return _finish(problem, cfg, u, winner, total_steps)


def maximize_delta_chi(problem: OptProblem, cfg: AnnealConfig) -> OptResult:
    """Finite-temperature anneal of the Holevo gain over free ensembles."""
    if problem.kind != KIND_DCHI:
        raise ValueError(f"maximize_delta_chi cannot handle kind {problem.kind!r}")
    u = problem.operator()
    layout = problem.layout
    k = problem.ensemble_size
    rate = cfg.sigma_scheme == SCHEME_RATE20
    winner = None
    total_steps = 0
    for r in range(cfg.restarts):
        rng = np.random.default_rng([cfg.seed, r])
        cmat = np.stack([_random_unit_vector(rng, layout.dim) for _ in range(k)])
        best_c = np.empty_like(cmat)
        trace_every, tr_steps, tr_vals = _trace_buffers(cfg)
        val, steps, sigma, tau, acc, deg, ntr = _kernels.anneal_dchi(
            rng, u, cmat, layout.dim_A, layout.dim_B,
            cfg.sigma0, cfg.sigma_min, cfg.stall_window, cfg.tau0,
            cfg.tau_check_every, cfg.tau_down, cfg.tau_up, rate,
            cfg.warmup_steps, cfg.max_steps, best_c,
            trace_every, tr_steps, tr_vals)
        total_steps += steps
        if winner is None or val > winner["value"]:
            members = tuple(StateVector(layout, best_c[i], normalized=False)
                            for i in range(k))
            witness = FreeEnsemble(members)
            winner = {"value": val, "witness": witness, "steps": steps, "sigma": sigma,
                      "tau": tau, "accepted": acc, "degen": deg, "restart": r,
                      "trace": _pack_trace(cfg, tr_steps, tr_vals, ntr)}
    return _finish(problem, cfg, u, winner, total_steps)


def maximize(problem: OptProblem, cfg: AnnealConfig) -> OptResult:
    """Dispatch to the maximizer matching the problem kind."""
    if problem.kind in ENTANGLEMENT_KINDS:
        return maximize_entanglement(problem, cfg)
    if problem.kind == KIND_CHI:
        return maximize_chi(problem, cfg)
    return maximize_delta_chi(problem, cfg)


def evaluate_witness(problem: OptProblem, witness) -> float:
    """Value of a stored witness under the problem's objective."""
    return objective_value(problem.kind, problem.operator(), witness)


def default_config(kind: str, **kw) -> AnnealConfig:
    """Reference config for a kind: stall_window 1000 for E/dE, 10000 otherwise."""
    if kind in ENTANGLEMENT_KINDS:
        return AnnealConfig.for_entanglement(**kw)
    if kind in HOLEVO_KINDS:
        return AnnealConfig.for_holevo(**kw)
    raise ValueError(f"unknown kind {kind!r}")
