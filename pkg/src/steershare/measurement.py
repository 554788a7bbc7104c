"""Unsharp dichotomic measurements and the averaged sequential state update.

A measurement setting is a unit-involution direction operator (a signed
Pauli product) with a strength in [0, 1].  Its instrument has effects
E_pm = (I +/- strength * direction)/2 and Hermitian PSD Kraus operators
K_pm = sqrt(E_pm); the averaged non-selective update sums K rho K over
outcomes and averages uniformly over the settings of a pair.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import ConfigError, ShapeError
from .linalg import dagger, embed, is_hermitian, psd_sqrt
from .states import DensityMatrix

INVOLUTION_TOL = 1e-10


@dataclass(frozen=True)
class UnsharpSetting:
    """A dichotomic direction operator with a measurement strength."""

    direction: np.ndarray = field(repr=False)
    strength: float
    acts_on: tuple[int, ...] = (0, 1)

    def __post_init__(self):
        d = self.direction.shape[0]
        if self.direction.shape != (d, d) or d != 2 ** len(self.acts_on):
            raise ShapeError(
                f"direction shape {self.direction.shape} does not match "
                f"acts_on={self.acts_on}"
            )
        if not is_hermitian(self.direction, INVOLUTION_TOL):
            raise ShapeError("direction must be Hermitian")
        if np.max(np.abs(self.direction @ self.direction - np.eye(d))) > INVOLUTION_TOL:
            raise ShapeError("direction must square to the identity")
        if not 0.0 <= self.strength <= 1.0:
            raise ConfigError(f"strength {self.strength} outside [0, 1]")


@dataclass(frozen=True)
class Instrument:
    """Effects and Kraus operators of one unsharp dichotomic measurement."""

    effects: tuple[np.ndarray, np.ndarray]
    kraus: tuple[np.ndarray, np.ndarray]


def make_instrument(s: UnsharpSetting) -> Instrument:
    d = s.direction.shape[0]
    eye = np.eye(d, dtype=complex)
    e_plus = (eye + s.strength * s.direction) / 2
    e_minus = (eye - s.strength * s.direction) / 2
    return Instrument((e_plus, e_minus), (psd_sqrt(e_plus), psd_sqrt(e_minus)))


def _apply_kraus_set(rho: DensityMatrix, kraus_sets: list[list[np.ndarray]]
                     ) -> DensityMatrix:
    """Average rho over the per-setting Kraus branches, 1/n per setting."""
    n = len(kraus_sets)
    out = np.zeros_like(rho.mat)
    for branch in kraus_sets:
        for k in branch:
            out += k @ rho.mat @ dagger(k)
    return DensityMatrix(rho.qubits, out / n)


def luders_update(rho: DensityMatrix, settings: list[UnsharpSetting]) -> DensityMatrix:
    """Averaged post-measurement state for one pair's nonlocal settings.

    Applies (1/n) sum_k sum_pm K_pm^(k) rho K_pm^(k)dag with each Kraus
    operator identity-padded onto the full register.
    """
    if not settings:
        raise ConfigError("at least one setting is required")
    branches = []
    for s in settings:
        if any(q >= rho.qubits for q in s.acts_on):
            raise ShapeError(f"setting acts on {s.acts_on}, state has {rho.qubits} qubits")
        inst = make_instrument(s)
        branches.append([embed(k, s.acts_on, rho.qubits) for k in inst.kraus])
    return _apply_kraus_set(rho, branches)


def local_pair_update(rho: DensityMatrix, a_settings: list[UnsharpSetting],
                      b_settings: list[UnsharpSetting]) -> DensityMatrix:
    """Averaged update when A and B measure locally, aligned by setting index.

    For setting k both parties' Kraus operators act jointly (they commute,
    living on different qubits), giving four outcome branches per setting.
    """
    if len(a_settings) != len(b_settings) or not a_settings:
        raise ConfigError(
            f"need equally many A and B settings, got {len(a_settings)} and "
            f"{len(b_settings)}"
        )
    branches = []
    for sa, sb in zip(a_settings, b_settings):
        ka = [embed(k, sa.acts_on, rho.qubits) for k in make_instrument(sa).kraus]
        kb = [embed(k, sb.acts_on, rho.qubits) for k in make_instrument(sb).kraus]
        branches.append([a @ b for a in ka for b in kb])
    return _apply_kraus_set(rho, branches)
