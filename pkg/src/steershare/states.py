"""Qubit-register density matrices, the GHZ state, and Bloch decomposition.

Qubit order is fixed as A (leftmost) then B then Charlie; computational
basis labels are bit strings "abc".  A three-qubit state whose A,B pair
lives in a two-dimensional subspace can be compressed to an effective
two-qubit state (compressed AB qubit tensor Charlie) for ellipsoid
analysis.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from . import linalg
from .errors import NotCompressibleError, ShapeError
from .linalg import I2, PAULIS, dagger, kron, partial_trace

DENSITY_HERM_TOL = 1e-10
DENSITY_TRACE_TOL = 1e-10
DENSITY_EIG_FLOOR = -1e-9
COMPRESS_TOL = 1e-9


@dataclass(frozen=True)
class DensityMatrix:
    """Validated density matrix over 1-3 qubits."""

    qubits: int
    mat: np.ndarray = field(repr=False)

    def __post_init__(self):
        d = 2 ** self.qubits
        if not 1 <= self.qubits <= 3:
            raise ShapeError(f"qubits={self.qubits} outside supported range 1..3")
        if self.mat.shape != (d, d):
            raise ShapeError(f"matrix shape {self.mat.shape}, expected ({d}, {d})")
        if not linalg.is_hermitian(self.mat, DENSITY_HERM_TOL):
            raise ShapeError("density matrix is not Hermitian")
        if abs(np.trace(self.mat) - 1) > DENSITY_TRACE_TOL:
            raise ShapeError(f"trace {np.trace(self.mat):.12f} != 1")
        w = np.linalg.eigvalsh((self.mat + dagger(self.mat)) / 2)
        if w[0] < DENSITY_EIG_FLOOR:
            raise ShapeError(f"negative eigenvalue {w[0]:.3e}")
        self.mat.setflags(write=False)

    @property
    def dim(self) -> int:
        return 2 ** self.qubits

    def purity(self) -> float:
        return float(np.trace(self.mat @ self.mat).real)

    def expectation(self, op: np.ndarray) -> float:
        return float(np.trace(self.mat @ op).real)

    def reduced(self, keep: set[int] | tuple[int, ...]) -> "DensityMatrix":
        keep = sorted(set(keep))
        sub = partial_trace(self.mat, keep, [2] * self.qubits)
        return DensityMatrix(len(keep), sub)

    def to_json(self) -> dict:
        return {
            "qubits": self.qubits,
            "re": self.mat.real.tolist(),
            "im": self.mat.imag.tolist(),
        }

    @classmethod
    def from_json(cls, obj: dict) -> "DensityMatrix":
        mat = np.array(obj["re"], dtype=float) + 1j * np.array(obj["im"], dtype=float)
        return cls(int(obj["qubits"]), mat)


@dataclass(frozen=True)
class BlochForm:
    """Bloch vectors and correlation matrix of a two-qubit state."""

    m_tilde: np.ndarray  # Bloch vector of the compressed AB qubit
    n_vec: np.ndarray    # Bloch vector of Charlie
    T: np.ndarray        # 3x3 correlation matrix


@dataclass(frozen=True)
class CompressionBasis:
    """Which two AB computational basis kets span the compressed qubit."""

    zero_ket: str = "00"
    one_ket: str = "11"

    def __post_init__(self):
        valid = {"00", "01", "10", "11"}
        if self.zero_ket not in valid or self.one_ket not in valid:
            raise ShapeError(f"kets must come from {sorted(valid)}")
        if self.zero_ket == self.one_ket:
            raise ShapeError("zero_ket and one_ket must differ")

    @classmethod
    def parse(cls, text: str) -> "CompressionBasis":
        zero, one = (s.strip() for s in text.split(","))
        return cls(zero, one)


def ket(label: str) -> np.ndarray:
    """Computational basis column vector from a bit-string label."""
    n = len(label)
    v = np.zeros(2 ** n, dtype=complex)
    v[int(label, 2)] = 1.0
    return v


def ghz() -> DensityMatrix:
    """The three-qubit state (|000> + |111>)/sqrt(2) as a projector."""
    psi = (ket("000") + ket("111")) / np.sqrt(2)
    return DensityMatrix(3, np.outer(psi, psi.conj()))


def compress(rho: DensityMatrix, basis: CompressionBasis = CompressionBasis()
             ) -> tuple[DensityMatrix, float]:
    """Project a 3-qubit state onto span{zero_ket, one_ket} x C2 and relabel.

    Returns the renormalized 4x4 density matrix (compressed AB qubit tensor
    Charlie) together with the renormalization factor (the weight retained
    by the projection).  Raises NotCompressibleError if more than
    COMPRESS_TOL of the AB marginal lies outside the two chosen kets.
    """
    if rho.qubits != 3:
        raise ShapeError("compression expects a 3-qubit state")
    # Isometry mapping |0~,c> <- |zero_ket,c>, |1~,c> <- |one_ket,c>.
    v = np.zeros((8, 4), dtype=complex)
    for tilde, label in enumerate((basis.zero_ket, basis.one_ket)):
        for c in range(2):
            v[int(label + str(c), 2), 2 * tilde + c] = 1.0
    small = dagger(v) @ rho.mat @ v
    weight = float(np.trace(small).real)
    if weight < 1 - COMPRESS_TOL:
        raise NotCompressibleError(
            f"only {weight:.12f} of the state lies in span{{|{basis.zero_ket}>, "
            f"|{basis.one_ket}>}} x C2"
        )
    return DensityMatrix(2, small / weight), weight


def bloch_form(rho4: DensityMatrix) -> BlochForm:
    """Pauli decomposition (m~, n, T) of a (compressed) two-qubit state."""
    if rho4.qubits != 2:
        raise ShapeError("bloch_form expects a 2-qubit state")
    m = np.array([rho4.expectation(kron(p, I2)) for p in PAULIS])
    n = np.array([rho4.expectation(kron(I2, p)) for p in PAULIS])
    T = np.array([[rho4.expectation(kron(pm, pn)) for pn in PAULIS] for pm in PAULIS])
    return BlochForm(m, n, T)


def reconstruct(b: BlochForm) -> DensityMatrix:
    """Inverse of bloch_form: rebuild the 4x4 state from (m~, n, T)."""
    mat = kron(I2, I2).astype(complex)
    for mu, p in enumerate(PAULIS):
        mat += b.m_tilde[mu] * kron(p, I2)
        mat += b.n_vec[mu] * kron(I2, p)
    for mu, pm in enumerate(PAULIS):
        for nu, pn in enumerate(PAULIS):
            mat += b.T[mu, nu] * kron(pm, pn)
    return DensityMatrix(2, mat / 4)
