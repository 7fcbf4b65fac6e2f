"""Dense complex linear algebra for small multipartite Hilbert spaces.

All states live on a four-part tensor factorization (A_U, A_anc, B_U, B_anc)
described by a SubsystemLayout.  Dimensions stay below ~100 in practice, so
everything is dense numpy and entropies are computed by full Hermitian
eigendecomposition.  Logarithms are base 2 throughout: entropies in bits,
entanglement in ebits.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

# Alias for readability in signatures; any dense complex ndarray qualifies.
ComplexMatrix = np.ndarray

DIM_CAP = 4096

HERMITIAN_TOL = 1e-12
TRACE_TOL = 1e-10
EIG_FLOOR = -1e-10      # more negative than this fails DensityMatrix validation
EIG_FATAL = -1e-6       # more negative than this is rejected by entropy routines
NORM_TOL = 1e-12        # tolerance on squared norm for normalized states
DEGENERATE_NORM = 1e-14  # vectors at or below this norm cannot be normalized
GS_RESIDUAL = 1e-12     # residual below which a Gram-Schmidt row is dependent


class DimensionError(ValueError):
    """Operand dimensions are inconsistent, unsupported, or above the cap."""


class NotHermitianError(ValueError):
    """A matrix required to be Hermitian is not, beyond tolerance."""


class InvalidStateError(ValueError):
    """A state or density matrix violates normalization or positivity."""


class DegenerateStateError(ValueError):
    """Vector norm too small to normalize; the caller should re-sample."""


@dataclass(frozen=True)
class SubsystemLayout:
    """Subsystem dimensions in the fixed order (A_U, A_anc, B_U, B_anc).

    Basis state (a_u, a_anc, b_u, b_anc) maps to the composite index
    ((a_u*d_Aanc + a_anc)*d_BU + b_u)*d_Banc + b_anc, i.e. mixed-radix
    with Alice's factors leading.  Alice's full space is A_U x A_anc and
    Bob's is B_U x B_anc, so a flat amplitude vector reshapes to
    (dim_A, dim_B) with no permutation.
    """

    d_AU: int
    d_Aanc: int
    d_BU: int
    d_Banc: int

    def __post_init__(self) -> None:
        for d in (self.d_AU, self.d_Aanc, self.d_BU, self.d_Banc):
            if not isinstance(d, (int, np.integer)) or d < 1:
                raise DimensionError(f"subsystem dimensions must be positive integers, got {self.dims}")
        if self.dim > DIM_CAP:
            raise DimensionError(f"total dimension {self.dim} exceeds cap {DIM_CAP}")

    @property
    def dims(self) -> tuple[int, int, int, int]:
        return (self.d_AU, self.d_Aanc, self.d_BU, self.d_Banc)

    @property
    def dim_A(self) -> int:
        return self.d_AU * self.d_Aanc

    @property
    def dim_B(self) -> int:
        return self.d_BU * self.d_Banc

    @property
    def dim(self) -> int:
        return self.dim_A * self.dim_B

    def index(self, a_u: int, a_anc: int, b_u: int, b_anc: int) -> int:
        """Composite index of a basis state; validates each digit's range."""
        digits = (a_u, a_anc, b_u, b_anc)
        for x, d in zip(digits, self.dims):
            if not 0 <= x < d:
                raise DimensionError(f"basis index {digits} out of range for {self.dims}")
        return ((a_u * self.d_Aanc + a_anc) * self.d_BU + b_u) * self.d_Banc + b_anc


@dataclass(frozen=True, eq=False)
class StateVector:
    """Pure joint state over a SubsystemLayout.

    `normalized=True` asserts unit norm (checked to NORM_TOL on the squared
    norm).  Unnormalized vectors are permitted for free-ensemble members,
    whose squared norms carry probability weight; they must still be nonzero.
    """

    layout: SubsystemLayout
    amplitudes: np.ndarray
    normalized: bool = True

    def __post_init__(self) -> None:
        amps = np.ascontiguousarray(self.amplitudes, dtype=np.complex128).ravel()
        object.__setattr__(self, "amplitudes", amps)
        if amps.size != self.layout.dim:
            raise DimensionError(
                f"amplitude count {amps.size} does not match layout dimension {self.layout.dim}")
        if not np.all(np.isfinite(amps.view(np.float64))):
            raise InvalidStateError("non-finite amplitudes")
        n2 = float(np.vdot(amps, amps).real)
        if self.normalized:
            if abs(n2 - 1.0) > NORM_TOL:
                raise InvalidStateError(f"squared norm {n2!r} is not 1 within {NORM_TOL}")
        elif n2 == 0.0:
            raise InvalidStateError("zero state vector")

    @property
    def norm(self) -> float:
        return float(np.linalg.norm(self.amplitudes))

    def matrix(self) -> np.ndarray:
        """Amplitudes reshaped to (dim_A, dim_B)."""
        return self.amplitudes.reshape(self.layout.dim_A, self.layout.dim_B)


@dataclass(frozen=True, eq=False)
class DensityMatrix:
    """Hermitian, positive semidefinite, unit-trace matrix.

    Validation runs one eigendecomposition; the (ascending) eigenvalues are
    cached so entropy evaluations do not repeat it.
    """

    entries: np.ndarray

    def __post_init__(self) -> None:
        h = np.ascontiguousarray(self.entries, dtype=np.complex128)
        if h.ndim != 2 or h.shape[0] != h.shape[1]:
            raise DimensionError(f"density matrix must be square, got shape {h.shape}")
        if not np.all(np.isfinite(h.view(np.float64))):
            raise InvalidStateError("non-finite entries")
        if np.abs(h - h.conj().T).max() > HERMITIAN_TOL:
            raise NotHermitianError("matrix is not Hermitian within tolerance")
        tr = float(np.trace(h).real)
        if abs(tr - 1.0) > TRACE_TOL:
            raise InvalidStateError(f"trace {tr!r} is not 1 within {TRACE_TOL}")
        w = np.linalg.eigvalsh(h)
        if w[0] < EIG_FLOOR:
            raise InvalidStateError(f"negative eigenvalue {w[0]!r} below {EIG_FLOOR}")
        object.__setattr__(self, "entries", h)
        object.__setattr__(self, "_eigs_ascending", w)

    @property
    def dim(self) -> int:
        return self.entries.shape[0]


def _as_square_matrix(m) -> np.ndarray:
    a = np.ascontiguousarray(m, dtype=np.complex128)
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        raise DimensionError(f"expected a square matrix, got shape {a.shape}")
    return a


def tensor_product(a, b):
    """Kronecker product of two matrices or two state vectors.

    For StateVector operands the layouts are merged slotwise, which is only
    well defined when every nontrivial slot of `a` precedes every nontrivial
    slot of `b` in the (A_U, A_anc, B_U, B_anc) order; then np.kron produces
    exactly the merged mixed-radix ordering.  Typical use is Alice-side
    times Bob-side.
    """
    if isinstance(a, StateVector) and isinstance(b, StateVector):
        da, db = a.layout.dims, b.layout.dims
        last_a = max((i for i in range(4) if da[i] > 1), default=-1)
        first_b = min((i for i in range(4) if db[i] > 1), default=4)
        if last_a >= first_b:
            raise DimensionError(
                f"cannot merge layouts {da} x {db}: subsystem slots interleave")
        merged = SubsystemLayout(*(da[i] * db[i] for i in range(4)))
        return StateVector(merged, np.kron(a.amplitudes, b.amplitudes),
                           normalized=a.normalized and b.normalized)
    if isinstance(a, StateVector) or isinstance(b, StateVector):
        raise TypeError("tensor_product operands must be the same kind")
    am = np.asarray(a, dtype=np.complex128)
    bm = np.asarray(b, dtype=np.complex128)
    if am.ndim != 2 or bm.ndim != 2:
        raise DimensionError("matrix tensor_product expects 2-d arrays")
    rows = am.shape[0] * bm.shape[0]
    cols = am.shape[1] * bm.shape[1]
    if max(rows, cols) > DIM_CAP:
        raise DimensionError(f"product dimension {rows}x{cols} exceeds cap {DIM_CAP}")
    return np.kron(am, bm)


def partial_trace(psi: StateVector, keep: str) -> DensityMatrix:
    """Reduced density matrix of a normalized pure state.

    keep='bob' traces out Alice (A_U, A_anc) and returns Bob's state;
    keep='alice' the converse.
    """
    if not psi.normalized:
        raise InvalidStateError("partial_trace expects a normalized state")
    which = keep.lower()
    m = psi.matrix()
    if which == "bob":
        rho = np.einsum("ab,ac->bc", m, m.conj())
    elif which == "alice":
        rho = np.einsum("ab,cb->ac", m, m.conj())
    else:
        raise ValueError(f"keep must be 'alice' or 'bob', got {keep!r}")
    return DensityMatrix(rho)


def hermitian_eigenvalues(rho) -> np.ndarray:
    """Real eigenvalues of a Hermitian matrix, sorted descending.

    Accepts a DensityMatrix (cached spectrum) or any square ndarray, which
    is checked for Hermiticity to HERMITIAN_TOL first.
    """
    if isinstance(rho, DensityMatrix):
        return rho._eigs_ascending[::-1].copy()
    h = _as_square_matrix(rho)
    if np.abs(h - h.conj().T).max() > HERMITIAN_TOL:
        raise NotHermitianError("matrix is not Hermitian within tolerance")
    return np.linalg.eigvalsh(h)[::-1]


def von_neumann_entropy(rho) -> float:
    """S(rho) = -Tr(rho log2 rho) in bits, with 0*log(0) taken as 0.

    Eigenvalues in [EIG_FATAL, 0) are treated as rounding noise and clamped
    to zero; anything below EIG_FATAL raises InvalidStateError.
    """
    w = hermitian_eigenvalues(rho)
    if w[-1] < EIG_FATAL:
        raise InvalidStateError(f"eigenvalue {w[-1]!r} below {EIG_FATAL}")
    s = 0.0
    for lam in w:
        if lam > 0.0:
            s -= lam * np.log2(lam)
    return max(s, 0.0)


def entanglement_entropy(psi: StateVector) -> float:
    """Entropy of entanglement across the Alice|Bob cut, in ebits."""
    return von_neumann_entropy(partial_trace(psi, "bob"))


def gram_schmidt_unitarize(m) -> tuple[np.ndarray, tuple[int, ...]]:
    """Classical Gram-Schmidt on the rows of a square matrix, in row order.

    Returns (q, replaced) where q is unitary and row j of q lies in the span
    of rows 0..j of the input.  A row whose orthogonal residual falls below
    GS_RESIDUAL is numerically dependent on its predecessors; it is replaced
    by the first canonical basis vector outside the current span, and its
    index reported in `replaced`.
    """
    a = _as_square_matrix(m)
    if not np.all(np.isfinite(a.view(np.float64))):
        raise InvalidStateError("non-finite entries")
    n = a.shape[0]
    q = np.empty_like(a)
    replaced = []
    for j in range(n):
        v = a[j].copy()
        if j:
            # classical variant: project the original row, not the running v
            coef = q[:j].conj() @ a[j]
            v -= coef @ q[:j]
        nrm = np.linalg.norm(v)
        if nrm < GS_RESIDUAL:
            v = _fresh_basis_row(q[:j], n)
            nrm = np.linalg.norm(v)
            replaced.append(j)
        q[j] = v / nrm
    return q, tuple(replaced)


def _fresh_basis_row(prior: np.ndarray, n: int) -> np.ndarray:
    # first canonical basis vector with a substantial component outside
    # span(prior); with j < n orthonormal rows at least one e_t has
    # residual norm >= sqrt(1 - j/n) about 1/sqrt(n), far above 1e-3
    for t in range(n):
        e = np.zeros(n, dtype=np.complex128)
        e[t] = 1.0
        if prior.shape[0]:
            e -= (prior.conj() @ e) @ prior
        if np.linalg.norm(e) > 1e-3:
            return e
    raise InvalidStateError("no canonical basis vector outside span")  # pragma: no cover


def normalize_state(psi: StateVector) -> StateVector:
    """Scale to unit norm, preserving direction.

    Raises DegenerateStateError at or below DEGENERATE_NORM so stochastic
    callers can re-sample instead of dividing by almost zero.
    """
    nrm = psi.norm
    if nrm <= DEGENERATE_NORM:
        raise DegenerateStateError(f"norm {nrm!r} too small to normalize")
    return StateVector(psi.layout, psi.amplitudes / nrm, normalized=True)
