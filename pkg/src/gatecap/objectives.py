"""The four scalar objectives maximized by the optimizer.

E: final entanglement of a product input pushed through the gate.
dE: entanglement gain of an arbitrary pure input.
chi: Holevo information of Bob's reduced ensemble after Alice encodes a
     classical index with local unitaries and the gate acts.
dchi: gain in Holevo information of an arbitrary ensemble, parametrized by
      unnormalized member vectors whose squared norms carry the weights.

All values are in bits (ebits for the entanglement pair).
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .linalg import (DensityMatrix, DimensionError, InvalidStateError, StateVector,
                     entanglement_entropy, partial_trace, tensor_product,
                     von_neumann_entropy)

KIND_E = "E"
KIND_DE = "dE"
KIND_CHI = "chi"
KIND_DCHI = "dchi"
KINDS = (KIND_E, KIND_DE, KIND_CHI, KIND_DCHI)
ENTANGLEMENT_KINDS = (KIND_E, KIND_DE)
HOLEVO_KINDS = (KIND_CHI, KIND_DCHI)

PROB_FLOOR = 1e-12      # members below this weight contribute no entropy term
PROB_SUM_TOL = 1e-12
ENCODER_TOL = 1e-10
INITIAL_CHI_TOL = 1e-10


def _check_operator(u_emb: np.ndarray, dim: int) -> np.ndarray:
    u = np.asarray(u_emb, dtype=np.complex128)
    if u.shape != (dim, dim):
        raise DimensionError(f"operator shape {u.shape} does not match state dimension {dim}")
    return u


@dataclass(frozen=True, eq=False)
class ProductInput:
    """Unentangled input: Alice's state on (A_U, A_anc) times Bob's on (B_U, B_anc)."""

    phi_A: StateVector
    chi_B: StateVector

    def __post_init__(self) -> None:
        if self.phi_A.layout.d_BU != 1 or self.phi_A.layout.d_Banc != 1:
            raise DimensionError("phi_A must be trivial on Bob's slots")
        if self.chi_B.layout.d_AU != 1 or self.chi_B.layout.d_Aanc != 1:
            raise DimensionError("chi_B must be trivial on Alice's slots")
        if not (self.phi_A.normalized and self.chi_B.normalized):
            raise InvalidStateError("product input factors must be normalized")

    def joint(self) -> StateVector:
        return tensor_product(self.phi_A, self.chi_B)


@dataclass(frozen=True, eq=False)
class EncodedEnsemble:
    """Shared state psi, Alice-side encoding unitaries V_i, and weights p_i.

    Every member is (V_i x I_B) psi, so before the gate acts Bob's reduced
    state does not depend on i and the ensemble carries zero Holevo
    information by construction.  Encoders act on Alice's full space
    (A_U x A_anc); optimizers restricted to the gate qubit embed their 2x2
    blocks before building one of these.
    """

    psi: StateVector
    encoders: tuple[np.ndarray, ...]
    probs: np.ndarray

    def __post_init__(self) -> None:
        if not self.psi.normalized:
            raise InvalidStateError("ensemble base state must be normalized")
        d_a = self.psi.layout.dim_A
        encs = tuple(np.ascontiguousarray(v, dtype=np.complex128) for v in self.encoders)
        if not encs:
            raise InvalidStateError("ensemble needs at least one member")
        for v in encs:
            if v.shape != (d_a, d_a):
                raise DimensionError(f"encoder shape {v.shape} does not match Alice dimension {d_a}")
            if np.abs(v @ v.conj().T - np.eye(d_a)).max() > ENCODER_TOL:
                raise InvalidStateError("encoder is not unitary within tolerance")
        p = np.asarray(self.probs, dtype=np.float64).ravel()
        if p.size != len(encs):
            raise DimensionError("one probability per encoder required")
        if p.min() < 0 or abs(p.sum() - 1.0) > PROB_SUM_TOL:
            raise InvalidStateError(f"probabilities must be nonnegative and sum to 1, got {p}")
        object.__setattr__(self, "encoders", encs)
        object.__setattr__(self, "probs", p)

    @property
    def size(self) -> int:
        return len(self.encoders)

    def members(self) -> list[StateVector]:
        """The encoded joint states (V_i x I_B) psi."""
        m = self.psi.matrix()
        return [StateVector(self.psi.layout, (v @ m).ravel()) for v in self.encoders]


@dataclass(frozen=True, eq=False)
class FreeEnsemble:
    """Ensemble of unnormalized joint states; weights are relative squared norms."""

    states: tuple[StateVector, ...]

    def __post_init__(self) -> None:
        states = tuple(self.states)
        if not states:
            raise InvalidStateError("ensemble needs at least one member")
        layout = states[0].layout
        for s in states:
            if s.layout != layout:
                raise DimensionError("all ensemble members must share one layout")
        total = sum(s.norm**2 for s in states)
        if total <= 1e-24:
            raise InvalidStateError("all member norms underflow; ensemble carries no weight")
        object.__setattr__(self, "states", states)

    @property
    def size(self) -> int:
        return len(self.states)

    @property
    def probs(self) -> np.ndarray:
        n2 = np.array([s.norm**2 for s in self.states])
        return n2 / n2.sum()


@dataclass(frozen=True, eq=False)
class EnsembleReduced:
    """Bob-side ensemble {p_i, rho_i} ready for the Holevo quantity."""

    probs: np.ndarray
    rhos: tuple[DensityMatrix, ...]

    def __post_init__(self) -> None:
        p = np.asarray(self.probs, dtype=np.float64).ravel()
        rhos = tuple(self.rhos)
        if p.size != len(rhos) or not rhos:
            raise DimensionError("need one probability per density matrix")
        if p.min() < 0 or abs(p.sum() - 1.0) > 1e-10:
            raise InvalidStateError(f"probabilities must be nonnegative and sum to 1, got {p}")
        dim = rhos[0].dim
        if any(r.dim != dim for r in rhos):
            raise DimensionError("all density matrices must share one dimension")
        object.__setattr__(self, "probs", p)
        object.__setattr__(self, "rhos", rhos)


def final_entanglement(u_emb: np.ndarray, inp: ProductInput) -> float:
    """Entanglement across Alice|Bob after the gate acts on a product input."""
    joint = inp.joint()
    u = _check_operator(u_emb, joint.layout.dim)
    return entanglement_entropy(StateVector(joint.layout, u @ joint.amplitudes))


def entanglement_gain(u_emb: np.ndarray, psi: StateVector) -> float:
    """E(U psi) - E(psi); negative values are possible away from the optimum."""
    u = _check_operator(u_emb, psi.layout.dim)
    after = StateVector(psi.layout, u @ psi.amplitudes)
    return entanglement_entropy(after) - entanglement_entropy(psi)


def holevo_information(e: EnsembleReduced) -> float:
    """chi = S(sum_i p_i rho_i) - sum_i p_i S(rho_i), in bits.

    Members with weight below PROB_FLOOR are skipped in the entropy sum;
    their 0 * S term would only contribute rounding noise.
    """
    rho_bar = np.zeros_like(e.rhos[0].entries)
    for p, r in zip(e.probs, e.rhos):
        rho_bar = rho_bar + p * r.entries
    chi = von_neumann_entropy(DensityMatrix(rho_bar))
    for p, r in zip(e.probs, e.rhos):
        if p >= PROB_FLOOR:
            chi -= p * von_neumann_entropy(r)
    return chi


def _reduced_after(u: np.ndarray | None, members, probs) -> EnsembleReduced:
    # only exactly weightless members may be dropped: a tiny p still shifts
    # the average state by p * rho, and S(rho_bar) must not notice the cut
    kept_p, kept_r = [], []
    for p, m in zip(probs, members):
        if p == 0.0:
            continue
        amps = m.amplitudes if m.normalized else m.amplitudes / m.norm
        if u is not None:
            amps = u @ amps
        kept_p.append(p)
        kept_r.append(partial_trace(StateVector(m.layout, amps), "bob"))
    return EnsembleReduced(np.array(kept_p), tuple(kept_r))


def chi_u_objective(u_emb: np.ndarray, e: EncodedEnsemble, check_initial: bool = True) -> float:
    """Holevo information Bob can read out after the gate couples him to Alice.

    With check_initial the pre-gate ensemble is evaluated too and must carry
    zero Holevo information (it always does for this parametrization, up to
    rounding); a violation means the ensemble was built inconsistently.
    """
    u = _check_operator(u_emb, e.psi.layout.dim)
    members = e.members()
    if check_initial:
        chi0 = holevo_information(_reduced_after(None, members, e.probs))
        if abs(chi0) > INITIAL_CHI_TOL:
            raise InvalidStateError(f"initial ensemble carries chi={chi0!r}, expected 0")
    return holevo_information(_reduced_after(u, members, e.probs))


def delta_chi_objective(u_emb: np.ndarray, e: FreeEnsemble) -> float:
    """Holevo information gained by the ensemble when the gate acts on every member."""
    u = _check_operator(u_emb, e.states[0].layout.dim)
    probs = e.probs
    before = holevo_information(_reduced_after(None, e.states, probs))
    after = holevo_information(_reduced_after(u, e.states, probs))
    return after - before


def objective_value(kind: str, u_emb: np.ndarray, witness) -> float:
    """Re-evaluate any optimizer witness through the public objective path."""
    if kind == KIND_E:
        return final_entanglement(u_emb, witness)
    if kind == KIND_DE:
        return entanglement_gain(u_emb, witness)
    if kind == KIND_CHI:
        return chi_u_objective(u_emb, witness)
    if kind == KIND_DCHI:
        return delta_chi_objective(u_emb, witness)
    raise ValueError(f"unknown objective kind {kind!r}")
