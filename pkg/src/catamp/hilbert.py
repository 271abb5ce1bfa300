"""Truncated Fock-space linear algebra for a qubit coupled to a cavity.

Basis ordering is fixed as qubit-major (qubit (x) cavity): index
``q * cavity_dim + n`` holds the amplitude of ``|q, n>`` with qubit levels
ordered ``|g> = 0``, ``|e> = 1``.  The sigma-z convention is
``sz|e> = +|e>``, ``sz|g> = -|g>``.

All values are immutable after construction and every operation is pure, so
objects can be shared freely across parallel workers.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

HERMITIAN_TOL = 1e-10
TRACE_TOL = 1e-8
EIGVAL_TOL = 1e-8


class DimensionError(ValueError):
    """Operator or state dimensions are invalid or incompatible."""


class StateInvariantError(ValueError):
    """A state object violates one of its structural invariants."""


def _as_dims(basis_dims) -> tuple[int, int]:
    qubit_dim, cavity_dim = basis_dims
    if qubit_dim < 1 or cavity_dim < 1:
        raise DimensionError(f"invalid basis dims {basis_dims!r}")
    return int(qubit_dim), int(cavity_dim)


@dataclass(frozen=True)
class FockKet:
    """Pure state on the qubit (x) cavity tensor basis."""

    amplitudes: np.ndarray
    basis_dims: tuple[int, int]

    def __post_init__(self):
        amps = np.asarray(self.amplitudes, dtype=complex)
        amps.setflags(write=False)
        object.__setattr__(self, "amplitudes", amps)
        dims = _as_dims(self.basis_dims)
        object.__setattr__(self, "basis_dims", dims)
        if amps.ndim != 1 or amps.size != dims[0] * dims[1]:
            raise DimensionError(
                f"ket length {amps.size} != product of dims {dims}")

    @property
    def dim(self) -> int:
        return self.amplitudes.size

    def norm(self) -> float:
        return float(np.linalg.norm(self.amplitudes))

    def normalized(self) -> "FockKet":
        n = self.norm()
        if n == 0.0:
            raise StateInvariantError("cannot normalize the zero vector")
        return FockKet(self.amplitudes / n, self.basis_dims)

    def projector(self) -> "DensityOp":
        a = self.amplitudes
        return DensityOp(np.outer(a, a.conj()), self.basis_dims)


@dataclass(frozen=True)
class DensityOp:
    """Hermitian unit-trace operator on the qubit (x) cavity basis."""

    matrix: np.ndarray
    basis_dims: tuple[int, int]

    def __post_init__(self):
        m = np.asarray(self.matrix, dtype=complex)
        m.setflags(write=False)
        object.__setattr__(self, "matrix", m)
        dims = _as_dims(self.basis_dims)
        object.__setattr__(self, "basis_dims", dims)
        d = dims[0] * dims[1]
        if m.shape != (d, d):
            raise DimensionError(f"matrix shape {m.shape} != ({d}, {d})")

    @property
    def dim(self) -> int:
        return self.matrix.shape[0]

    def validate(self, trace_tol: float = TRACE_TOL,
                 herm_tol: float = HERMITIAN_TOL,
                 eig_tol: float = EIGVAL_TOL) -> "DensityOp":
        """Check Hermiticity, unit trace and positivity; return self."""
        m = self.matrix
        if np.max(np.abs(m - m.conj().T)) > herm_tol:
            raise StateInvariantError("density operator is not Hermitian")
        tr = np.trace(m)
        if abs(tr - 1.0) > trace_tol:
            raise StateInvariantError(f"trace {tr} deviates from 1")
        w = np.linalg.eigvalsh(0.5 * (m + m.conj().T))
        if w.min() < -eig_tol:
            raise StateInvariantError(f"negative eigenvalue {w.min():.3e}")
        return self


@dataclass(frozen=True)
class OpMatrix:
    """Dense operator with an optional Hermiticity tag."""

    matrix: np.ndarray
    hermitian_flag: bool = field(default=False)

    def __post_init__(self):
        m = np.asarray(self.matrix, dtype=complex)
        m.setflags(write=False)
        object.__setattr__(self, "matrix", m)
        if m.ndim != 2 or m.shape[0] != m.shape[1]:
            raise DimensionError(f"operator must be square, got {m.shape}")
        if self.hermitian_flag and np.max(np.abs(m - m.conj().T)) > HERMITIAN_TOL:
            raise StateInvariantError("hermitian_flag set on non-Hermitian matrix")

    @property
    def dim(self) -> int:
        return self.matrix.shape[0]

    def dag(self) -> "OpMatrix":
        return OpMatrix(self.matrix.conj().T, self.hermitian_flag)


def annihilation_op(cavity_dim: int) -> OpMatrix:
    """Ladder operator with <n-1|a|n> = sqrt(n) on the superdiagonal."""
    if cavity_dim < 2:
        raise DimensionError(f"cavity_dim must be >= 2, got {cavity_dim}")
    m = np.diag(np.sqrt(np.arange(1, cavity_dim, dtype=float)), k=1)
    return OpMatrix(m.astype(complex))


def creation_op(cavity_dim: int) -> OpMatrix:
    return annihilation_op(cavity_dim).dag()


def number_op(cavity_dim: int) -> OpMatrix:
    if cavity_dim < 1:
        raise DimensionError(f"cavity_dim must be >= 1, got {cavity_dim}")
    return OpMatrix(np.diag(np.arange(cavity_dim, dtype=complex)),
                    hermitian_flag=True)


def parity_op(cavity_dim: int) -> OpMatrix:
    """Photon-number parity (-1)^n, diagonal in the Fock basis."""
    if cavity_dim < 1:
        raise DimensionError(f"cavity_dim must be >= 1, got {cavity_dim}")
    signs = (-1.0) ** np.arange(cavity_dim)
    return OpMatrix(np.diag(signs.astype(complex)), hermitian_flag=True)


def identity_op(dim: int) -> OpMatrix:
    return OpMatrix(np.eye(dim, dtype=complex), hermitian_flag=True)


# Qubit operators in the |g>, |e> ordering with sz|e> = +|e>.
def sigma_z() -> OpMatrix:
    return OpMatrix(np.diag([-1.0 + 0j, 1.0]), hermitian_flag=True)


def sigma_x() -> OpMatrix:
    return OpMatrix(np.array([[0, 1], [1, 0]], dtype=complex),
                    hermitian_flag=True)


def sigma_minus() -> OpMatrix:
    """|g><e|."""
    return OpMatrix(np.array([[0, 1], [0, 0]], dtype=complex))


def sigma_plus() -> OpMatrix:
    """|e><g|."""
    return OpMatrix(np.array([[0, 0], [1, 0]], dtype=complex))


def basis_ket(basis_dims: tuple[int, int], qubit_index: int,
              fock_index: int) -> FockKet:
    """|qubit_index, fock_index> under qubit-major ordering (g=0, e=1)."""
    qd, cd = _as_dims(basis_dims)
    if not (0 <= qubit_index < qd and 0 <= fock_index < cd):
        raise DimensionError(
            f"basis index ({qubit_index}, {fock_index}) outside dims {basis_dims}")
    amps = np.zeros(qd * cd, dtype=complex)
    amps[qubit_index * cd + fock_index] = 1.0
    return FockKet(amps, (qd, cd))


def cavity_ket(amplitudes: np.ndarray) -> FockKet:
    """Wrap a bare cavity vector as a (1, N_c) ket for cavity-only work."""
    a = np.asarray(amplitudes, dtype=complex)
    return FockKet(a, (1, a.size))


def tensor_product(a, b):
    """Kronecker product, fixed qubit (x) cavity ordering.

    Accepts two OpMatrix or two FockKet values; mixing kinds is a type error.
    """
    if isinstance(a, OpMatrix) and isinstance(b, OpMatrix):
        return OpMatrix(np.kron(a.matrix, b.matrix),
                        hermitian_flag=a.hermitian_flag and b.hermitian_flag)
    if isinstance(a, FockKet) and isinstance(b, FockKet):
        qd = a.basis_dims[0] * a.basis_dims[1]
        cd = b.basis_dims[0] * b.basis_dims[1]
        return FockKet(np.kron(a.amplitudes, b.amplitudes), (qd, cd))
    raise TypeError(
        f"tensor_product requires two OpMatrix or two FockKet, "
        f"got {type(a).__name__} and {type(b).__name__}")


def partial_trace_qubit(rho: DensityOp) -> DensityOp:
    """Trace out the qubit, returning the cavity-only density operator."""
    qd, cd = rho.basis_dims
    if qd != 2:
        raise DimensionError(f"expected qubit_dim 2, got basis dims {rho.basis_dims}")
    blocks = rho.matrix.reshape(qd, cd, qd, cd)
    reduced = np.einsum("qnqm->nm", blocks)
    return DensityOp(reduced, (1, cd))


def expectation(state, op: OpMatrix) -> complex:
    """<psi|O|psi> for kets or Tr[rho O] for density operators."""
    if isinstance(state, FockKet):
        if state.dim != op.dim:
            raise DimensionError(
                f"state dim {state.dim} != operator dim {op.dim}")
        val = np.vdot(state.amplitudes, op.matrix @ state.amplitudes)
    elif isinstance(state, DensityOp):
        if state.dim != op.dim:
            raise DimensionError(
                f"state dim {state.dim} != operator dim {op.dim}")
        val = np.trace(state.matrix @ op.matrix)
    else:
        raise TypeError(f"unsupported state type {type(state).__name__}")
    if op.hermitian_flag:
        return complex(val.real)
    return complex(val)
