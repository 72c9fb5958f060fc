"""
Oráculo de malla
Propagador de Crank–Nicolson y autosolver estacionario sobre una malla
centrada en celdas, con la condición U(2) impuesta en el origen mediante
nodos fantasma. Es independiente de las fórmulas analíticas de `evolve`.
"""

import io
import numpy as np
import pandas as pd
from dataclasses import dataclass, replace
from loguru import logger
from scipy.linalg import LinAlgError, eigh_tridiagonal
from scipy.sparse import csc_matrix, diags, identity
from scipy.sparse.linalg import splu
from typing import Callable, List, Optional, Sequence, Tuple

from app.physics.barrier import BoundaryData, as_unitary
from app.physics.errors import ConvergenceError, LinearSolveError, ResolutionError
from app.physics.spectral import PotentialSpec

NORM_TOL = 1e-9
RESOLUTION_LIMIT = 0.5
MAX_STATIONARY_LEVELS = 12
LAUNCH_WIDTHS = 12.0
PACKET_KH = 0.25
MAX_PACKET_NODES = 32768


# ===================================
# MALLA Y ESTADOS
# ===================================
@dataclass(frozen=True)
class Grid:
    """
    Malla simétrica x_j = −L + (j + 1/2)h, j = 0..n−1, h = 2L/n

    Con n par el origen cae entre los nodos n/2 − 1 (x = −h/2) y n/2 (x = h/2).
    """
    half_width: float
    n: int

    def __post_init__(self):
        if self.n < 4 or self.n % 2:
            raise ResolutionError(f"n = {self.n}: la malla necesita un número par de nodos")
        if self.half_width <= 0.0:
            raise ResolutionError("La semianchura debe ser positiva")

    @classmethod
    def for_oscillator(cls, omega: float, n: int = 2048, half_width: float = 10.0) -> "Grid":
        """Malla por defecto; half_width en unidades de 1/√ω"""
        return cls(half_width / np.sqrt(omega), n)

    @property
    def h(self) -> float:
        return 2.0 * self.half_width / self.n

    @property
    def x(self) -> np.ndarray:
        return -self.half_width + (np.arange(self.n) + 0.5) * self.h

    @property
    def origin(self) -> Tuple[int, int]:
        """Índices (izquierda, derecha) de los nodos adyacentes al origen"""
        return self.n // 2 - 1, self.n // 2

    def refined(self, factor: int = 2) -> "Grid":
        return Grid(self.half_width, self.n * factor)

    def check(self, pot: PotentialSpec) -> None:
        """
        El término g/x² queda fuera de h·√max|V|: en x = h/2 vale 4g/h² para
        cualquier h.

        Raises:
            ResolutionError: colas no contenidas (L < 8/√ω) o h·√max|V| ≥ 0.5
        """
        if pot.omega > 0.0 and self.half_width < 8.0 / np.sqrt(pot.omega) - 1e-12:
            raise ResolutionError(
                f"L = {self.half_width:.4g} no contiene las colas (mínimo {8.0 / np.sqrt(pot.omega):.4g})"
            )
        v_max = float(np.max(np.abs(pot.smooth(self.x))))
        if self.h * np.sqrt(v_max) >= RESOLUTION_LIMIT:
            raise ResolutionError(
                f"h·√max|V| = {self.h * np.sqrt(v_max):.3f} ≥ {RESOLUTION_LIMIT}: malla demasiado gruesa"
            )


@dataclass(frozen=True, eq=False)
class GridState:
    """Muestras complejas de ψ sobre la malla, norma discreta unidad"""
    values: np.ndarray
    grid: Grid
    t: float = 0.0

    def __post_init__(self):
        if self.values.shape != (self.grid.n,):
            raise ValueError("Número de muestras incompatible con la malla")
        drift = abs(self.norm() - 1.0)
        if drift > NORM_TOL:
            raise ValueError(f"GridState sin normalizar (|‖ψ‖ − 1| = {drift:.3e})")

    @classmethod
    def from_function(cls, func: Callable[[np.ndarray], np.ndarray], grid: Grid) -> "GridState":
        values = np.asarray(func(grid.x), dtype=complex)
        norm = np.sqrt(grid.h * np.sum(np.abs(values) ** 2))
        if norm == 0.0:
            raise ResolutionError("La función muestreada es nula sobre la malla")
        return cls(values / norm, grid)

    def norm(self) -> float:
        return float(np.sqrt(self.grid.h * np.sum(np.abs(self.values) ** 2)))

    def probabilities(self) -> Tuple[float, float]:
        """(P(x > 0), P(x < 0))"""
        right = self.grid.x > 0.0
        weights = self.grid.h * np.abs(self.values) ** 2
        return float(weights[right].sum()), float(weights[~right].sum())

    def mean_position(self) -> float:
        return float(self.grid.h * np.sum(self.grid.x * np.abs(self.values) ** 2))

    def to_frame(self) -> pd.DataFrame:
        return pd.DataFrame({
            "x": self.grid.x,
            "re_psi": self.values.real,
            "im_psi": self.values.imag,
        })

    def to_csv(self, path: Optional[str] = None) -> str:
        """Instantánea (x, Re ψ, Im ψ) con 17 cifras significativas"""
        buffer = io.StringIO()
        self.to_frame().to_csv(buffer, index=False, float_format="%.17g", lineterminator="\n")
        text = buffer.getvalue()
        if path is not None:
            with open(path, "w", encoding="utf-8") as f:
                f.write(text)
        return text


# ===================================
# HAMILTONIANO DISCRETO
# ===================================
def interface_coupling(u, h: float) -> np.ndarray:
    """
    Matriz C que da los valores fantasma G = C·(ψ(h/2), ψ(−h/2))

    Se discretiza (U − I)Ψ + i(U + I)Ψ' = 0 en la cara x = 0 con
    Ψ = (P + G)/2, Ψ' = (P − G)/h. Para cada fase propia φ de U el factor
    es c = −(h·sin(φ/2) + 2cos(φ/2)) / (h·sin(φ/2) − 2cos(φ/2)), real, así
    que C es hermítica.
    """
    u = as_unitary(u, tol=1e-10)
    phases, vectors = np.linalg.eig(u)
    phi = np.angle(phases)
    denominator = h * np.sin(phi / 2.0) - 2.0 * np.cos(phi / 2.0)
    if np.any(np.abs(denominator) < 1e-12):
        raise ResolutionError("La condición de frontera es singular para este h")
    factors = -(h * np.sin(phi / 2.0) + 2.0 * np.cos(phi / 2.0)) / denominator

    # U es normal: ortonormalizar por si hay autovalores casi degenerados
    q, _ = np.linalg.qr(vectors)
    if abs(phases[0] - phases[1]) < 1e-12:
        return factors.mean() * np.eye(2, dtype=complex)
    return q @ np.diag(factors) @ q.conj().T


def build_hamiltonian(grid: Grid, pot: PotentialSpec, u) -> csc_matrix:
    """
    H = −½∂² + V con la interacción U en el origen

    Diferencias centrales de segundo orden; Dirichlet en ±L. Los dos nodos
    adyacentes al origen usan los fantasmas de `interface_coupling`, lo que
    deja H tridiagonal y exactamente hermítica.
    """
    grid.check(pot)
    h = grid.h
    kinetic = 0.5 / h ** 2
    left, right = grid.origin

    diagonal = (2.0 * kinetic + pot(grid.x)).astype(complex)
    upper = np.full(grid.n - 1, -kinetic, dtype=complex)
    lower = upper.copy()

    c = interface_coupling(u, h)
    # fila derecha: vecino fantasma = C00·ψ_R + C01·ψ_L; fila izquierda: C10·ψ_R + C11·ψ_L
    diagonal[right] -= kinetic * c[0, 0]
    diagonal[left] -= kinetic * c[1, 1]
    upper[left] = -kinetic * c[1, 0]
    lower[left] = -kinetic * c[0, 1]

    logger.debug(f"🔧 Hamiltoniano n={grid.n}, h={h:.4g}, C={np.round(c, 6).tolist()}")
    return diags([lower, diagonal, upper], [-1, 0, 1], format="csc")


# ===================================
# PROPAGACIÓN
# ===================================
def propagate(state: GridState, ham: csc_matrix, t_total: float, dt: float) -> GridState:
    """
    Crank–Nicolson: (I + i·dt·H/2)ψ_{k+1} = (I − i·dt·H/2)ψ_k

    El número de pasos se redondea y dt se reajusta para terminar exactamente
    en t_total. La matriz implícita se factoriza una sola vez.
    """
    if t_total < 0.0 or dt <= 0.0:
        raise ValueError("t_total debe ser no negativo y dt positivo")
    steps = max(int(round(t_total / dt)), 1) if t_total > 0.0 else 0
    if steps == 0:
        return state
    dt = t_total / steps

    eye = identity(state.grid.n, dtype=complex, format="csc")
    implicit = csc_matrix(eye + 0.5j * dt * ham)
    explicit = eye - 0.5j * dt * ham
    try:
        solver = splu(implicit)
    except RuntimeError as e:
        raise LinearSolveError(f"Matriz de paso singular: {e}")

    psi = state.values.copy()
    for _ in range(steps):
        psi = solver.solve(explicit @ psi)

    result = replace(state, values=psi, t=state.t + t_total)
    logger.debug(f"⏱️  {steps} pasos CN, deriva de norma {abs(result.norm() - 1.0):.2e}")
    return result


# ===================================
# ESPECTRO ESTACIONARIO
# ===================================
def _real_tridiagonal(ham: csc_matrix) -> Tuple[np.ndarray, np.ndarray]:
    """Transformación de gauge diagonal que vuelve reales las subdiagonales"""
    diagonal = ham.diagonal().real
    off = ham.diagonal(1)
    return diagonal, np.abs(off)


def stationary_spectrum(grid: Grid, pot: PotentialSpec, u, count: int) -> np.ndarray:
    """Los `count` autovalores más bajos del Hamiltoniano discreto"""
    if not 1 <= count <= MAX_STATIONARY_LEVELS:
        raise ValueError(f"count debe estar entre 1 y {MAX_STATIONARY_LEVELS}")
    ham = build_hamiltonian(grid, pot, u)
    diagonal, off = _real_tridiagonal(ham)
    try:
        levels = eigh_tridiagonal(diagonal, off, eigvals_only=True,
                                  select="i", select_range=(0, count - 1))
    except LinAlgError as e:
        raise ConvergenceError(f"eigh_tridiagonal no convergió: {e}")
    return np.sort(levels)


def richardson_spectrum(grid: Grid, pot: PotentialSpec, u, count: int) -> np.ndarray:
    """Extrapolación (4·E(h/2) − E(h))/3 del esquema de segundo orden"""
    coarse = stationary_spectrum(grid, pot, u, count)
    fine = stationary_spectrum(grid.refined(), pot, u, count)
    return (4.0 * fine - coarse) / 3.0


# ===================================
# DATOS DE INTERFAZ
# ===================================
def interface_data(state: GridState) -> BoundaryData:
    """
    Extrapolantes laterales en 0± a partir de los tres nodos de cada lado

    Ajuste cuadrático en y = h/2, 3h/2, 5h/2: valor (15f₀ − 10f₁ + 3f₂)/8,
    derivada (−2f₀ + 3f₁ − f₂)/h.
    """
    left, right = state.grid.origin
    h = state.grid.h
    r = state.values[right:right + 3]
    l = state.values[left - 2:left + 1][::-1]

    def value(f):
        return (15.0 * f[0] - 10.0 * f[1] + 3.0 * f[2]) / 8.0

    def slope(f):
        return (-2.0 * f[0] + 3.0 * f[1] - f[2]) / h

    return BoundaryData(
        psi_plus=complex(value(r)),
        psi_minus=complex(value(l)),
        dpsi_plus=complex(slope(r)),
        dpsi_minus=complex(-slope(l)),
    )


# ===================================
# DISPERSIÓN DE PAQUETES
# ===================================
@dataclass(frozen=True)
class PacketSetup:
    """
    Geometría del paquete gaussiano |ψ|² ∝ exp(−(x − x0)²/2w²) con portadora k0

    Sale de x0 = −12w y corre t = 2|x0|/k0: al final el centro transmitido
    está en +|x0| y el reflejado en x0.
    """
    k0: float
    width: float
    half_width: float
    n: int
    dt: float

    @property
    def x0(self) -> float:
        return -LAUNCH_WIDTHS * self.width

    @property
    def t_total(self) -> float:
        return 2.0 * abs(self.x0) / self.k0

    @property
    def final_spread(self) -> float:
        """Anchura del paquete libre tras t_total"""
        return self.width * np.hypot(1.0, self.t_total / (2.0 * self.width ** 2))

    @classmethod
    def for_wavenumber(cls, k0: float, width: Optional[float] = None,
                       half_width: Optional[float] = None) -> "PacketSetup":
        """
        Raises:
            ResolutionError: k0 ≤ 0, paquete estrecho (w·k0 < 5), malla mayor
                que MAX_PACKET_NODES o paquete que alcanza ±L
        """
        if k0 <= 0.0:
            raise ResolutionError("El número de onda debe ser positivo")
        width = width or max(3.0, 8.0 / k0)
        if width * k0 < 5.0:
            raise ResolutionError(f"w·k0 = {width * k0:.3f} < 5: el paquete debe cumplir ancho ≫ 1/k0")
        half_width = half_width or 3.0 * LAUNCH_WIDTHS * width

        h = min(PACKET_KH / k0, width / 10.0)
        n = 2 * int(np.ceil(half_width / h))
        if n > MAX_PACKET_NODES:
            raise ResolutionError(f"k0 = {k0}: harían falta {n} nodos (máximo {MAX_PACKET_NODES})")
        setup = cls(k0=k0, width=width, half_width=half_width, n=n, dt=0.2 / k0 ** 2)

        reach = abs(setup.x0) + 6.0 * setup.final_spread
        if reach > half_width:
            raise ResolutionError(f"El paquete alcanza las paredes: {reach:.4g} > L = {half_width:.4g}")
        return setup

    def initial_state(self, grid: Grid) -> GridState:
        return GridState.from_function(
            lambda x: np.exp(-0.25 * ((x - self.x0) / self.width) ** 2 + 1j * self.k0 * x), grid
        )


def wavepacket_scatter(u, k0: float, width: Optional[float] = None,
                       half_width: Optional[float] = None) -> Tuple[float, float]:
    """
    Paquete gaussiano libre contra la barrera U

    La anchura por defecto es max(3, 8/k0); el dominio, la malla (h·k0 ≤ 1/4),
    el paso dt = 0.2/k0² y la duración se derivan de k0.

    Returns:
        (probabilidad transmitida, probabilidad reflejada)
    """
    setup = PacketSetup.for_wavenumber(k0, width, half_width)
    grid = Grid(setup.half_width, setup.n)
    pot = PotentialSpec(omega=0.0)

    final = propagate(setup.initial_state(grid), build_hamiltonian(grid, pot, u), setup.t_total, setup.dt)
    transmitted, reflected = final.probabilities()
    logger.info(f"🎯 Paquete k0={k0} (n={grid.n}, t={setup.t_total:.4g}): "
                f"T={transmitted:.6f}, R={reflected:.6f}")
    return transmitted, reflected


# ===================================
# CONVERGENCIA
# ===================================
def observed_orders(errors: Sequence[float]) -> List[float]:
    """log2 del cociente de errores consecutivos al reducir h a la mitad"""
    errors = np.asarray(errors, dtype=float)
    with np.errstate(divide="ignore", invalid="ignore"):
        orders = np.log2(errors[:-1] / errors[1:])
    return [float("nan")] + [float(o) for o in orders]


def convergence_report(scenario: Callable[[Grid], float], grids: Sequence[Grid],
                       reference: Optional[float] = None) -> pd.DataFrame:
    """
    Tabla error-frente-a-h para un escenario escalar

    `scenario` recibe una malla y devuelve la magnitud observada; con
    `reference` el error es absoluto frente a ella, sin ella se usa la
    autoconvergencia respecto de la malla más fina.
    """
    if len(grids) < 3:
        raise ValueError("Se necesitan al menos tres mallas")
    spacings = [g.h for g in grids]
    if not all(np.isclose(a / b, 2.0) for a, b in zip(spacings[:-1], spacings[1:])):
        raise ValueError("Las mallas deben reducir h a la mitad sucesivamente")

    values = [scenario(g) for g in grids]
    if reference is None:
        reference = values[-1]
        values, spacings, grids = values[:-1], spacings[:-1], grids[:-1]
    errors = [abs(v - reference) for v in values]

    report = pd.DataFrame({
        "n": [g.n for g in grids],
        "h": spacings,
        "value": values,
        "error": errors,
        "order": observed_orders(errors),
    })
    logger.info(f"📈 Convergencia:\n{report.to_string(index=False)}")
    return report
