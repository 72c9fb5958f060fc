"""
Laboratorio de compuertas del qubit de localización
|0⟩ = perfil a la derecha de la barrera, |1⟩ = su espejo a la izquierda.
"""

import numpy as np
from dataclasses import dataclass
from enum import Enum
from typing import Optional, Tuple, Union

from app.physics.barrier import HADAMARD, IDENTITY, SIGMA_1, SIGMA_3
from app.physics.oracle import Grid, GridState
from app.physics.spectral import (
    Envelope,
    HalfLineGrid,
    HalfLineState,
    OscCoeffs,
    Side,
    expand_localized,
    half_line_grid,
)

QUBIT_TOL = 1e-10
LEAKAGE_FLOOR = -1e-9


class Basis(str, Enum):
    LOCATIONAL = "locational"
    SYM_ANTISYM = "sym_antisym"


@dataclass(frozen=True, eq=False)
class QubitState:
    """α₀|0⟩ + α₁|1⟩ sobre una envolvente fija"""
    alpha0: complex
    alpha1: complex
    envelope: Envelope

    def __post_init__(self):
        weight = abs(self.alpha0) ** 2 + abs(self.alpha1) ** 2
        if abs(weight - 1.0) > QUBIT_TOL:
            raise ValueError(f"|α₀|² + |α₁|² = {weight:.12f} ≠ 1")

    @property
    def amplitudes(self) -> np.ndarray:
        return np.array([self.alpha0, self.alpha1], dtype=complex)


@dataclass(frozen=True, eq=False)
class GateMatrix:
    """Compuerta de 2x2 extraída en la base de localización, con su fuga"""
    matrix: np.ndarray
    leakage: float = 0.0

    def __post_init__(self):
        matrix = np.asarray(self.matrix, dtype=complex)
        if matrix.shape != (2, 2):
            raise ValueError("Una compuerta de un qubit es de 2x2")
        object.__setattr__(self, "matrix", matrix)
        defect = self.unitarity_defect()
        if defect > max(3.0 * self.leakage, 1e-8):
            raise ValueError(f"‖G†G − I‖ = {defect:.3e} incompatible con fuga {self.leakage:.3e}")

    def unitarity_defect(self) -> float:
        return float(np.max(np.abs(self.matrix.conj().T @ self.matrix - IDENTITY)))


# ===================================
# CODIFICACIÓN
# ===================================
def encode_half_line(q: QubitState, grid: Optional[HalfLineGrid] = None) -> HalfLineState:
    return HalfLineState.localized(q.alpha0, q.alpha1, q.envelope, grid)


def encode_coeffs(q: QubitState, lam: complex) -> OscCoeffs:
    """ψ = α₀·Θ(x)S + α₁·Θ(−x)S en la base χ^λ_n"""
    right = expand_localized(q.envelope, Side.RIGHT, lam)
    left = expand_localized(q.envelope, Side.LEFT, lam)
    return OscCoeffs(q.alpha0 * right.coefficients + q.alpha1 * left.coefficients,
                     right.basis, right.lam)


def envelope_on_grid(envelope: Envelope, grid: Grid) -> np.ndarray:
    """S(|x|) muestreada y normalizada con la norma discreta de cada lado"""
    x = grid.x
    profile = envelope(np.abs(x))
    side_norm = np.sqrt(grid.h * np.sum(profile[x > 0.0] ** 2))
    return profile / side_norm


def encode_grid(q: QubitState, grid: Grid) -> GridState:
    profile = envelope_on_grid(q.envelope, grid)
    values = np.where(grid.x > 0.0, q.alpha0, q.alpha1) * profile
    return GridState(values.astype(complex), grid)


def encode(q: QubitState, target: Union[Grid, HalfLineGrid, complex, None] = None):
    """
    Construir ψ en la representación pedida

    target: Grid → GridState; HalfLineGrid o None → HalfLineState;
    número complejo λ → OscCoeffs sobre la base χ^λ_n
    """
    if isinstance(target, Grid):
        return encode_grid(q, target)
    if target is None or isinstance(target, HalfLineGrid):
        return encode_half_line(q, target)
    return encode_coeffs(q, complex(target))


# ===================================
# DECODIFICACIÓN
# ===================================
def decode(psi: Union[GridState, HalfLineState, OscCoeffs],
           envelope: Envelope) -> Tuple[complex, complex, float]:
    """
    Amplitudes del qubit y fuga 1 − |α₀|² − |α₁|²

    Returns:
        (alpha0, alpha1, leakage)
    """
    if isinstance(psi, GridState):
        x = psi.grid.x
        profile = envelope_on_grid(envelope, psi.grid)
        h = psi.grid.h
        alpha0 = complex(h * np.sum(profile[x > 0.0] * psi.values[x > 0.0]))
        alpha1 = complex(h * np.sum(profile[x < 0.0] * psi.values[x < 0.0]))
    else:
        if isinstance(psi, OscCoeffs):
            psi = psi.to_half_line(half_line_grid(envelope.omega))
        alpha0, alpha1 = psi.overlaps(envelope)

    leakage = 1.0 - abs(alpha0) ** 2 - abs(alpha1) ** 2
    if leakage < LEAKAGE_FLOOR:
        raise ValueError(f"Fuga negativa {leakage:.3e}: estado no normalizado")
    return alpha0, alpha1, float(max(leakage, 0.0))


# ===================================
# FIDELIDAD Y BASES
# ===================================
def _as_matrix(g: Union[GateMatrix, np.ndarray]) -> np.ndarray:
    return g.matrix if isinstance(g, GateMatrix) else np.asarray(g, dtype=complex)


def gate_fidelity(g1: Union[GateMatrix, np.ndarray], g2: Union[GateMatrix, np.ndarray]) -> float:
    """|Tr(G1†G2)|/2, invariante ante fases globales"""
    a, b = _as_matrix(g1), _as_matrix(g2)
    return float(min(abs(np.trace(a.conj().T @ b)) / 2.0, 1.0))


def average_fidelity(g1: Union[GateMatrix, np.ndarray], g2: Union[GateMatrix, np.ndarray]) -> float:
    """Fidelidad promedio sobre estados puros: (2F² + 1)/3"""
    return (2.0 * gate_fidelity(g1, g2) ** 2 + 1.0) / 3.0


def change_basis(g: Union[GateMatrix, np.ndarray], to: Basis = Basis.SYM_ANTISYM,
                 source: Basis = Basis.LOCATIONAL) -> GateMatrix:
    """Conjugación por Hadamard entre las bases izquierda/derecha y simétrica/antisimétrica"""
    leakage = g.leakage if isinstance(g, GateMatrix) else 0.0
    matrix = _as_matrix(g)
    if Basis(to) is Basis(source):
        return GateMatrix(matrix, leakage)
    return GateMatrix(HADAMARD @ matrix @ HADAMARD, leakage)


NAMED_GATES = {
    "I": IDENTITY,
    "X": SIGMA_1,
    "H": HADAMARD,
    "Z": SIGMA_3,
    "S": np.diag([1.0, 1j]).astype(complex),
    "T": np.diag([1.0, np.exp(0.25j * np.pi)]).astype(complex),
}


def named_gate(name: str) -> np.ndarray:
    try:
        return NAMED_GATES[name.upper()].copy()
    except KeyError:
        raise ValueError(f"Compuerta desconocida '{name}' (disponibles: {', '.join(NAMED_GATES)})")
