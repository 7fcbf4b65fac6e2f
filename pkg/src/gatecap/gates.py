"""Canonical two-qubit gates and their embedding alongside local ancillas.

The nonlocal core of any two-qubit unitary is
U_d(a1, a2, a3) = exp(-i sum_k a_k s_k x s_k) with s_k the Pauli matrices.
Three one-parameter slices cover the interesting families: (a, 0, 0) is the
CNOT family, (a, a, 0) the DCNOT family and (a, a, a) the SWAP family, each
reaching its namesake (up to local unitaries) at a = pi/4.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .linalg import ComplexMatrix, DimensionError, SubsystemLayout

PAULI = (
    np.array([[0, 1], [1, 0]], dtype=np.complex128),
    np.array([[0, -1j], [1j, 0]], dtype=np.complex128),
    np.array([[1, 0], [0, -1]], dtype=np.complex128),
)

FAMILY_TAGS = ("u1", "u2", "u3")

_UNITARY_TOL = 1e-10


@dataclass(frozen=True)
class CanonicalParams:
    """Exponents (alpha1, alpha2, alpha3) of the canonical gate, in radians.

    Any real triple is accepted; a triple outside the canonical region
    pi/4 >= a1 >= a2 >= a3 >= 0 is merely redundant (some other canonical
    triple gives a locally equivalent gate), so leaving it draws a warning
    rather than an error.
    """

    alpha1: float
    alpha2: float
    alpha3: float

    def __post_init__(self) -> None:
        if not all(np.isfinite(a) for a in self.alphas):
            raise ValueError(f"non-finite canonical parameters {self.alphas}")
        if not self.in_canonical_region:
            warnings.warn(f"parameters {self.alphas} lie outside the canonical region "
                          "pi/4 >= a1 >= a2 >= a3 >= 0", stacklevel=2)

    @property
    def alphas(self) -> tuple[float, float, float]:
        return (self.alpha1, self.alpha2, self.alpha3)

    @property
    def in_canonical_region(self) -> bool:
        a1, a2, a3 = self.alphas
        return np.pi / 4 + 1e-12 >= a1 >= a2 >= a3 >= 0


@dataclass(frozen=True)
class GateFamily:
    """One-parameter gate family: tag u1, u2 or u3, plus the angle alpha."""

    tag: str
    alpha: float

    def __post_init__(self) -> None:
        if self.tag not in FAMILY_TAGS:
            raise ValueError(f"unknown family tag {self.tag!r}, expected one of {FAMILY_TAGS}")
        if not np.isfinite(self.alpha):
            raise ValueError("alpha must be finite")


def family_params(f: GateFamily) -> CanonicalParams:
    """Canonical parameters of a family member: u1 (a,0,0), u2 (a,a,0), u3 (a,a,a)."""
    n = FAMILY_TAGS.index(f.tag) + 1
    alphas = [f.alpha] * n + [0.0] * (3 - n)
    return CanonicalParams(*alphas)


def canonical_gate(p: CanonicalParams) -> ComplexMatrix:
    """The 4x4 canonical gate as a product of three commuting exponentials.

    Because (s_k x s_k)^2 = I, each factor is exactly
    cos(a_k) I - i sin(a_k) (s_k x s_k); no general matrix exponential is
    needed and the result is unitary to machine precision.
    """
    u = np.eye(4, dtype=np.complex128)
    for alpha, s in zip(p.alphas, PAULI):
        ss = np.kron(s, s)
        u = u @ (np.cos(alpha) * np.eye(4) - 1j * np.sin(alpha) * ss)
    return u


def gate_matrix(gate: GateFamily | CanonicalParams) -> ComplexMatrix:
    """4x4 matrix for either a family member or explicit canonical parameters."""
    if isinstance(gate, GateFamily):
        return canonical_gate(family_params(gate))
    return canonical_gate(gate)


def embed_gate(u4: ComplexMatrix, layout: SubsystemLayout) -> ComplexMatrix:
    """Promote a 4x4 gate on (A_U, B_U) to the full layout, identity on ancillas.

    Alice's gate qubit is the left tensor factor of u4.  The embedded
    operator is dense, cached per (gate, layout) and marked read-only, so
    repeated objective evaluations share one array.
    """
    m = np.ascontiguousarray(u4, dtype=np.complex128)
    if m.shape != (4, 4):
        raise DimensionError(f"expected a 4x4 gate, got shape {m.shape}")
    if layout.d_AU != 2 or layout.d_BU != 2:
        raise DimensionError(f"gate subsystems must be qubits, layout has "
                             f"d_AU={layout.d_AU}, d_BU={layout.d_BU}")
    if np.abs(m @ m.conj().T - np.eye(4)).max() > _UNITARY_TOL:
        raise ValueError("gate matrix is not unitary within tolerance")
    return _embed_cached(m.tobytes(), layout)


@lru_cache(maxsize=128)
def _embed_cached(u4_bytes: bytes, layout: SubsystemLayout) -> np.ndarray:
    u4 = np.frombuffer(u4_bytes, dtype=np.complex128).reshape(4, 4)
    # rows (a_u, b_u), cols (a_u', b_u')
    t = u4.reshape(2, 2, 2, 2)
    ia = np.eye(layout.d_Aanc)
    ib = np.eye(layout.d_Banc)
    full = np.einsum("ikjl,ab,cd->iakcjbld", t, ia, ib).reshape(layout.dim, layout.dim)
    full = np.ascontiguousarray(full)
    full.flags.writeable = False
    return full


def embedded_family_gate(gate: GateFamily | CanonicalParams, layout: SubsystemLayout) -> ComplexMatrix:
    """Convenience wrapper: build the 4x4 gate and embed it in one call."""
    return embed_gate(gate_matrix(gate), layout)
