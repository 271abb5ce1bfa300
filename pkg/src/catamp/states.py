"""Coherent and cat states, the Fock shift operator, fidelity and gain.

Cat states are equal-weight superpositions of |alpha> and |-alpha>.  The
even (+) combination has support only on even Fock states and the odd (-)
only on odd ones; the constructors below enforce those zeros exactly rather
than relying on floating-point cancellation.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.special import gammaln

from .hilbert import DensityOp, DimensionError, FockKet, OpMatrix, cavity_ket

THEORY_CAVITY_DIM = 40     # ample for alpha' up to ~3 at tail < 1e-10
TAIL_TOL = 1e-8


class TruncationError(ValueError):
    """Requested state does not fit the Fock truncation."""

    def __init__(self, message: str, required_dim: int | None = None):
        super().__init__(message)
        self.required_dim = required_dim


@dataclass(frozen=True)
class CatSpec:
    """Coherent amplitude and parity of a cat state."""

    alpha: complex
    parity: str  # "even" or "odd"

    def __post_init__(self):
        if self.parity not in ("even", "odd"):
            raise ValueError(f"parity must be 'even' or 'odd', got {self.parity!r}")
        if self.parity == "odd" and self.alpha == 0:
            raise ValueError("odd cat state is undefined at alpha = 0")


@dataclass(frozen=True)
class GainResult:
    """Best-fit amplification factor and the fidelity achieved there."""

    gain: float
    fidelity: float
    alpha_prime: float


def _coherent_amplitudes(alpha: complex, cavity_dim: int) -> np.ndarray:
    n = np.arange(cavity_dim)
    log_mag = -0.5 * abs(alpha) ** 2 + n * np.log(abs(alpha)) - 0.5 * gammaln(n + 1) \
        if alpha != 0 else np.where(n == 0, 0.0, -np.inf)
    phase = np.exp(1j * n * np.angle(alpha)) if alpha != 0 else np.ones(cavity_dim)
    return np.exp(log_mag) * phase


def coherent_tail(alpha: complex, cavity_dim: int) -> float:
    """Probability weight of |alpha> on Fock states n >= cavity_dim."""
    from scipy.stats import poisson
    if alpha == 0:
        return 0.0
    return float(poisson.sf(cavity_dim - 1, abs(alpha) ** 2))


def required_dim(alpha: complex, tol: float = TAIL_TOL) -> int:
    """Smallest truncation whose Poissonian tail weight is below tol."""
    d = max(4, int(abs(alpha) ** 2) + 2)
    while coherent_tail(alpha, d) >= tol:
        d += 1
    return d


def coherent_ket(alpha: complex, cavity_dim: int) -> FockKet:
    """Truncated coherent state |alpha>, renormalized after truncation."""
    if cavity_dim < 1:
        raise DimensionError(f"cavity_dim must be >= 1, got {cavity_dim}")
    tail = coherent_tail(alpha, cavity_dim)
    if tail >= TAIL_TOL:
        need = required_dim(alpha)
        raise TruncationError(
            f"truncation {cavity_dim} too small for |alpha|={abs(alpha):.3g} "
            f"(tail {tail:.2e}); need cavity_dim >= {need}",
            required_dim=need)
    amps = _coherent_amplitudes(alpha, cavity_dim)
    amps = amps / np.linalg.norm(amps)
    return cavity_ket(amps)


def cat_ket(spec: CatSpec, cavity_dim: int) -> FockKet:
    """Even/odd cat state with exact zeros on the wrong-parity Fock states."""
    base = coherent_ket(spec.alpha, cavity_dim)
    amps = np.array(base.amplitudes)
    keep = np.arange(cavity_dim) % 2 == (0 if spec.parity == "even" else 1)
    amps[~keep] = 0.0
    norm = np.linalg.norm(amps)
    if norm == 0.0:
        raise ValueError(f"cat state {spec} has no support at truncation {cavity_dim}")
    return cavity_ket(amps / norm)


def shift_op(cavity_dim: int, k: int) -> OpMatrix:
    """k-photon shift sum_m |m+k><m|, an isometry below the truncation edge."""
    if k < 1:
        raise ValueError(f"shift power k must be positive, got {k}")
    if k >= cavity_dim:
        raise DimensionError(f"k={k} must be < cavity_dim={cavity_dim}")
    m = np.zeros((cavity_dim, cavity_dim), dtype=complex)
    idx = np.arange(cavity_dim - k)
    m[idx + k, idx] = 1.0
    return OpMatrix(m)


def apply_shift(ket: FockKet, k: int) -> FockKet:
    """Shift a cavity ket up by k Fock levels (no renormalization)."""
    op = shift_op(ket.dim, k)
    return FockKet(op.matrix @ ket.amplitudes, ket.basis_dims)


def fidelity(a, b: FockKet) -> float:
    """|<b|a>|^2 for a ket, or <b|rho|b> for a density operator."""
    if isinstance(a, FockKet):
        if a.dim != b.dim:
            raise DimensionError(f"dimension mismatch {a.dim} != {b.dim}")
        return float(abs(np.vdot(b.amplitudes, a.amplitudes)) ** 2)
    if isinstance(a, DensityOp):
        if a.dim != b.dim:
            raise DimensionError(f"dimension mismatch {a.dim} != {b.dim}")
        v = b.amplitudes
        return float(np.real(np.vdot(v, a.matrix @ v)))
    raise TypeError(f"unsupported state type {type(a).__name__}")


def shifted_parity(parity: str, k: int) -> str:
    """Fock-support parity after a k-photon shift."""
    if k % 2 == 0:
        return parity
    return "odd" if parity == "even" else "even"


class BracketError(RuntimeError):
    """Gain search failed to bracket an interior maximum."""

    def __init__(self, message: str, curve: list[tuple[float, float]]):
        super().__init__(message)
        self.curve = curve


def _golden_max(f, lo: float, hi: float, tol: float = 1e-4) -> tuple[float, float]:
    invphi = (np.sqrt(5.0) - 1.0) / 2.0
    a, b = lo, hi
    c = b - invphi * (b - a)
    d = a + invphi * (b - a)
    fc, fd = f(c), f(d)
    while b - a > tol:
        if fc > fd:
            b, d, fd = d, c, fc
            c = b - invphi * (b - a)
            fc = f(c)
        else:
            a, c, fc = c, d, fd
            d = a + invphi * (b - a)
            fd = f(d)
    x = 0.5 * (a + b)
    return x, f(x)


def optimal_gain(spec: CatSpec, k: int,
                 cavity_dim: int | None = None) -> GainResult:
    """Gain G maximizing fidelity of the k-shifted cat against |SC_{G alpha}>.

    Coarse 0.01 grid over G' in [1, 3] followed by golden-section refinement
    to absolute tolerance 1e-4.  The truncation is grown automatically so
    target cats up to alpha' = 3 alpha fit with negligible tail.
    """
    alpha = abs(spec.alpha)
    if cavity_dim is None:
        cavity_dim = max(THEORY_CAVITY_DIM, required_dim(3.0 * alpha) + k)
    shifted = apply_shift(cat_ket(spec, cavity_dim), k)
    target_parity = shifted_parity(spec.parity, k)

    def fid_at(gain: float) -> float:
        target = cat_ket(CatSpec(gain * alpha, target_parity), cavity_dim)
        return fidelity(shifted, target)

    grid = np.arange(1.0, 3.0 + 1e-12, 0.01)
    vals = [fid_at(g) for g in grid]
    i = int(np.argmax(vals))
    if i == 0 or i == len(grid) - 1:
        raise BracketError(
            f"fidelity maximum at bracket edge G'={grid[i]:.2f}",
            curve=list(zip(grid.tolist(), vals)))
    g, f = _golden_max(fid_at, grid[i - 1], grid[i + 1])
    return GainResult(gain=g, fidelity=f, alpha_prime=g * alpha)


def theory_curve(spec: CatSpec, k: int, alpha_prime_grid,
                 cavity_dim: int = THEORY_CAVITY_DIM) -> list[tuple[float, float]]:
    """Pointwise fidelity of the k-shifted cat vs target cats at each alpha'."""
    grid = np.asarray(alpha_prime_grid, dtype=float)
    if grid.size > 1 and np.any(np.diff(grid) <= 0):
        raise ValueError("alpha_prime_grid must be sorted ascending")
    shifted = apply_shift(cat_ket(spec, cavity_dim), k)
    target_parity = shifted_parity(spec.parity, k)
    out = []
    for ap in grid:
        target = cat_ket(CatSpec(ap, target_parity), cavity_dim)
        out.append((float(ap), fidelity(shifted, target)))
    return out
