"""
Espectros del oscilador armónico con barrera puntual
Base del oscilador, autofunciones de la barrera σ, expansión de estados
localizados y espectro de la semirrecta con condición de Robin.
"""

import numpy as np
from dataclasses import dataclass
from enum import Enum
from functools import lru_cache
from joblib import Parallel, delayed
from loguru import logger
from scipy.integrate import solve_ivp
from scipy.optimize import brentq
from scipy.special import gammaln, rgamma, roots_legendre
from typing import Callable, Iterable, List, Optional, Tuple

from app.physics.barrier import wrap_angle
from app.physics.errors import ConvergenceError, TruncationError

DEFAULT_N_MAX = 64
TAIL_THRESHOLD = 1e-8
EXP_GUARD = 40.0
MAX_ROBIN_LEVELS = 64
ROOT_RTOL = 1e-13
ANGLE_TOL = 1e-14
FALL_TO_CENTER = -0.125


class Side(str, Enum):
    RIGHT = "right"
    LEFT = "left"


# ===================================
# POTENCIAL Y BASE
# ===================================
@dataclass(frozen=True)
class PotentialSpec:
    """
    V(x) = ω²x²/2 + g/x² más un desplazamiento constante por lado

    omega = 0 se admite como modo de recta libre (dispersión).
    """
    omega: float
    g: float = 0.0
    v_add_right: float = 0.0
    v_add_left: float = 0.0

    def __post_init__(self):
        if self.omega < 0.0:
            raise ValueError("omega no puede ser negativa")
        if self.g < FALL_TO_CENTER:
            raise ValueError(f"g = {self.g} < −1/8: el Hamiltoniano no está acotado inferiormente")

    @property
    def period(self) -> float:
        if self.omega <= 0.0:
            raise ValueError("La recta libre no tiene periodo")
        return 2.0 * np.pi / self.omega

    @property
    def half_period(self) -> float:
        return self.period / 2.0

    def smooth(self, x: np.ndarray) -> np.ndarray:
        """Parte regular: oscilador más desplazamientos laterales"""
        x = np.asarray(x, dtype=float)
        return 0.5 * self.omega ** 2 * x ** 2 + np.where(x > 0.0, self.v_add_right, self.v_add_left)

    def __call__(self, x: np.ndarray) -> np.ndarray:
        v = self.smooth(x)
        if self.g != 0.0:
            v = v + self.g / np.asarray(x, dtype=float) ** 2
        return v


@dataclass(frozen=True)
class HOBasisSpec:
    """Base truncada del oscilador, n = 0..n_max"""
    omega: float
    n_max: int = DEFAULT_N_MAX

    def __post_init__(self):
        if self.omega <= 0.0:
            raise ValueError("omega debe ser positiva")
        if self.n_max < 2 or self.n_max % 2:
            raise ValueError("n_max debe ser par (subespacios par/impar balanceados)")


def ho_basis(n_max: int, omega: float, x) -> np.ndarray:
    """
    χ_0..χ_{n_max} evaluadas en x, matriz (n_max + 1, len(x))

    Recurrencia de tres términos χ_{n+1} = √(2/(n+1))·ξ·χ_n − √(n/(n+1))·χ_{n−1}
    con ξ = √ω·x; para |ξ| > 40 la cola se toma como 0.
    """
    x = np.atleast_1d(np.asarray(x, dtype=float))
    xi = np.sqrt(omega) * x
    inside = np.abs(xi) <= EXP_GUARD
    table = np.zeros((n_max + 1, x.size))

    table[0] = np.where(inside, (omega / np.pi) ** 0.25 * np.exp(-0.5 * xi ** 2), 0.0)
    if n_max >= 1:
        table[1] = np.sqrt(2.0) * xi * table[0]
    for n in range(1, n_max):
        table[n + 1] = (np.sqrt(2.0 / (n + 1)) * xi * table[n]
                        - np.sqrt(n / (n + 1)) * table[n - 1])
    return table


def ho_eigenfunction(n: int, omega: float, x) -> np.ndarray:
    """χ_n(x) del oscilador libre (paridad (−1)ⁿ)"""
    if n < 0:
        raise ValueError("El índice debe ser no negativo")
    return ho_basis(max(n, 1), omega, x)[n]


def sigma_eigenfunction(lam: complex, n: int, omega: float, x) -> np.ndarray:
    """
    Autofunción χ^λ_n de la barrera σ, discontinua en el origen

    n par:   N[λ·χ_n(|x|)Θ(x) + χ_n(|x|)Θ(−x)]
    n impar: N[χ_n(|x|)Θ(x) − λ*·χ_n(|x|)Θ(−x)]
    con N = √(2/(|λ|² + 1)); la energía sigue siendo (n + 1/2)ω.
    """
    if lam == 0 or not np.isfinite(abs(lam)):
        raise ValueError("λ debe ser finito y no nulo")
    x = np.atleast_1d(np.asarray(x, dtype=float))
    norm = np.sqrt(2.0 / (abs(lam) ** 2 + 1.0))
    chi = ho_eigenfunction(n, omega, np.abs(x))
    if n % 2 == 0:
        return norm * np.where(x > 0.0, lam * chi, chi)
    return norm * np.where(x > 0.0, chi, -np.conj(lam) * chi)


# ===================================
# CUADRATURA DE LA SEMIRRECTA
# ===================================
@dataclass(frozen=True, eq=False)
class HalfLineGrid:
    """Cuadratura de Gauss–Legendre sobre [0, Y], y = distancia a la barrera"""
    omega: float
    nodes: np.ndarray
    weights: np.ndarray

    def inner(self, f: np.ndarray, g: np.ndarray) -> complex:
        """⟨f, g⟩ = ∫ f* g dy"""
        return complex(np.sum(self.weights * np.conj(f) * g))

    def norm(self, f: np.ndarray) -> float:
        return float(np.sqrt(np.sum(self.weights * np.abs(f) ** 2)))


@lru_cache(maxsize=16)
def half_line_grid(omega: float, n_nodes: int = 1200, extent: float = 24.0) -> HalfLineGrid:
    """Cuadratura cacheada; extent en unidades de 1/√ω"""
    t, w = roots_legendre(n_nodes)
    span = extent / np.sqrt(omega)
    nodes = 0.5 * span * (t + 1.0)
    weights = 0.5 * span * w
    nodes.setflags(write=False)
    weights.setflags(write=False)
    return HalfLineGrid(omega=omega, nodes=nodes, weights=weights)


def half_line_basis(n_max: int, omega: float, y: np.ndarray) -> np.ndarray:
    """e_k(y) = √2·χ_k(y): ortonormales en la semirrecta dentro de cada paridad"""
    return np.sqrt(2.0) * ho_basis(n_max, omega, y)


# ===================================
# ENVOLVENTES
# ===================================
@dataclass(frozen=True, eq=False)
class Envelope:
    """
    Perfil S(y) del qubit sobre la semirrecta, como coeficientes sobre
    e_{2m}(y) = √2·χ_{2m}(y), m = 0..n_max/2. Norma unidad.
    """
    coefficients: np.ndarray
    omega: float
    label: str = "custom"

    def __post_init__(self):
        norm = np.linalg.norm(self.coefficients)
        if abs(norm - 1.0) > 1e-10:
            raise ValueError(f"La envolvente debe tener norma 1 (norma = {norm:.12f})")

    @property
    def n_max(self) -> int:
        return 2 * (len(self.coefficients) - 1)

    def __call__(self, y) -> np.ndarray:
        y = np.atleast_1d(np.asarray(y, dtype=float))
        even = half_line_basis(max(self.n_max, 1), self.omega, y)[0::2]
        return self.coefficients @ even[: len(self.coefficients)]

    @classmethod
    def ground(cls, omega: float, n_max: int = DEFAULT_N_MAX) -> "Envelope":
        """Gaussiana fundamental restringida a la semirrecta (perfil por defecto)"""
        coefficients = np.zeros(n_max // 2 + 1)
        coefficients[0] = 1.0
        return cls(coefficients, omega, "ground")

    @classmethod
    def from_profile(cls, profile: Callable[[np.ndarray], np.ndarray], omega: float,
                     n_max: int = DEFAULT_N_MAX, label: str = "custom",
                     grid: Optional[HalfLineGrid] = None) -> "Envelope":
        """
        Proyectar un perfil arbitrario sobre la base par de la semirrecta

        Raises:
            TruncationError: si la proyección pierde más de 1e-8 de la norma
        """
        grid = grid or half_line_grid(omega)
        values = np.asarray(profile(grid.nodes), dtype=float)
        values = values / grid.norm(values)
        even = half_line_basis(n_max, omega, grid.nodes)[0::2]
        coefficients = even @ (grid.weights * values)

        lost = 1.0 - float(np.sum(coefficients ** 2))
        if lost > TAIL_THRESHOLD or coefficients[-1] ** 2 > TAIL_THRESHOLD:
            raise TruncationError(
                f"Envolvente '{label}' no cabe en n_max={n_max}: norma perdida {lost:.3e}"
            )
        return cls(coefficients / np.linalg.norm(coefficients), omega, label)

    @classmethod
    def polynomial(cls, omega: float, power: int = 4, n_max: int = DEFAULT_N_MAX) -> "Envelope":
        """y^k·e^{−ωy²/2}: se anula hasta orden k en la barrera"""
        if power % 2:
            raise ValueError("La potencia debe ser par para una expansión par finita")
        return cls.from_profile(lambda y: y ** power * np.exp(-0.5 * omega * y ** 2),
                                omega, n_max, label=f"polynomial{power}")

    @classmethod
    def coherent(cls, omega: float, offset: Optional[float] = None,
                 n_max: int = DEFAULT_N_MAX) -> "Envelope":
        """Gaussiana fundamental desplazada a y0 (6/√ω por defecto)"""
        y0 = 6.0 / np.sqrt(omega) if offset is None else offset
        return cls.from_profile(lambda y: np.exp(-0.5 * omega * (y - y0) ** 2),
                                omega, n_max, label="coherent")


def named_envelope(name: str, omega: float, n_max: int = DEFAULT_N_MAX) -> Envelope:
    """Envolventes disponibles desde la línea de comandos"""
    factories = {
        "ground": lambda: Envelope.ground(omega, n_max),
        "polynomial": lambda: Envelope.polynomial(omega, 4, n_max),
        "coherent": lambda: Envelope.coherent(omega, None, n_max),
    }
    if name not in factories:
        raise ValueError(f"Envolvente desconocida: {name}")
    return factories[name]()


# ===================================
# ESTADOS RESUELTOS POR LADO
# ===================================
@dataclass(frozen=True, eq=False)
class HalfLineState:
    """
    ψ descrito por sus dos lados: right(y) = ψ(y), left(y) = ψ(−y), y > 0.
    El qubit |0⟩ vive a la derecha y |1⟩ a la izquierda.
    """
    right: np.ndarray
    left: np.ndarray
    grid: HalfLineGrid

    @classmethod
    def localized(cls, alpha0: complex, alpha1: complex, envelope: Envelope,
                  grid: Optional[HalfLineGrid] = None) -> "HalfLineState":
        grid = grid or half_line_grid(envelope.omega)
        profile = envelope(grid.nodes).astype(complex)
        profile /= grid.norm(profile)
        return cls(alpha0 * profile, alpha1 * profile, grid)

    def norm(self) -> float:
        return float(np.hypot(self.grid.norm(self.right), self.grid.norm(self.left)))

    def mix(self, matrix: np.ndarray) -> "HalfLineState":
        """Aplicar una matriz de 2x2 sobre el par (derecha, izquierda) punto a punto"""
        right = matrix[0, 0] * self.right + matrix[0, 1] * self.left
        left = matrix[1, 0] * self.right + matrix[1, 1] * self.left
        return HalfLineState(right, left, self.grid)

    def overlaps(self, envelope: Envelope) -> Tuple[complex, complex]:
        """Amplitudes del qubit: proyección de cada lado sobre la envolvente"""
        profile = envelope(self.grid.nodes)
        profile = profile / self.grid.norm(profile)
        return self.grid.inner(profile, self.right), self.grid.inner(profile, self.left)


# ===================================
# COEFICIENTES EN LA BASE σ
# ===================================
@dataclass(frozen=True, eq=False)
class OscCoeffs:
    """ψ = Σ A_n χ^λ_n con dependencia temporal e^{−i(n+1/2)ωt}"""
    coefficients: np.ndarray
    basis: HOBasisSpec
    lam: complex

    def __post_init__(self):
        if len(self.coefficients) != self.basis.n_max + 1:
            raise ValueError("Número de coeficientes incompatible con la base")
        weight = float(np.sum(np.abs(self.coefficients) ** 2))
        if weight > 1.0 + 1e-10:
            raise ValueError(f"Σ|A_n|² = {weight:.12f} supera 1")

    @property
    def weight(self) -> float:
        return float(np.sum(np.abs(self.coefficients) ** 2))

    def evolved(self, t: float) -> "OscCoeffs":
        n = np.arange(self.basis.n_max + 1)
        phases = np.exp(-1j * (n + 0.5) * self.basis.omega * t)
        return OscCoeffs(self.coefficients * phases, self.basis, self.lam)

    def side_functions(self, y) -> Tuple[np.ndarray, np.ndarray]:
        """(ψ(y), ψ(−y)) para y > 0"""
        a = 1.0 / np.sqrt(abs(self.lam) ** 2 + 1.0)
        e = half_line_basis(self.basis.n_max, self.basis.omega, np.asarray(y, dtype=float))
        even = self.coefficients[0::2] @ e[0::2]
        odd = self.coefficients[1::2] @ e[1::2]
        right = a * (self.lam * even + odd)
        left = a * (even - np.conj(self.lam) * odd)
        return right, left

    def reconstruct(self, x) -> np.ndarray:
        x = np.atleast_1d(np.asarray(x, dtype=float))
        right, left = self.side_functions(np.abs(x))
        return np.where(x > 0.0, right, left)

    def to_half_line(self, grid: HalfLineGrid) -> HalfLineState:
        right, left = self.side_functions(grid.nodes)
        return HalfLineState(right, left, grid)


def expand_localized(env: Envelope, side: Side, lam: complex,
                     grid: Optional[HalfLineGrid] = None) -> OscCoeffs:
    """
    Coeficientes A_n de Θ(±x)·S(|x|) en la base χ^λ_n

    El sector par usa directamente los coeficientes de la envolvente y el
    impar su proyección sobre e_{2m+1}; a la derecha A_{2m} = aλ*p_m,
    A_{2m+1} = a·q_m, a la izquierda A_{2m} = a·p_m, A_{2m+1} = −aλ·q_m,
    con a = 1/√(|λ|² + 1).

    Raises:
        TruncationError: si |A_n|² en el borde de la truncación supera 1e-8
    """
    if lam == 0 or not np.isfinite(abs(lam)):
        raise ValueError("λ debe ser finito y no nulo")
    side = Side(side)
    grid = grid or half_line_grid(env.omega)
    n_max = env.n_max
    basis = HOBasisSpec(env.omega, n_max)

    profile = env(grid.nodes)
    odd = half_line_basis(n_max, env.omega, grid.nodes)[1::2]
    q = odd @ (grid.weights * profile)

    a = 1.0 / np.sqrt(abs(lam) ** 2 + 1.0)
    coefficients = np.zeros(n_max + 1, dtype=complex)
    if side is Side.RIGHT:
        coefficients[0::2] = a * np.conj(lam) * env.coefficients
        coefficients[1::2] = a * q
    else:
        coefficients[0::2] = a * env.coefficients
        coefficients[1::2] = -a * lam * q

    edge = max(abs(coefficients[-1]) ** 2, abs(coefficients[-2]) ** 2)
    if edge >= TAIL_THRESHOLD:
        raise TruncationError(
            f"Cola |A|² = {edge:.3e} en n_max={n_max} para la envolvente '{env.label}'"
        )
    return OscCoeffs(coefficients, basis, complex(lam))


# ===================================
# ESPECTRO DE ROBIN
# ===================================
@dataclass(frozen=True, eq=False)
class RobinSpectrum:
    """Niveles de la semirrecta con ψ'(0) = tan(θ/2)ψ(0)"""
    theta: float
    omega: float
    levels: np.ndarray

    def __post_init__(self):
        if np.any(np.diff(self.levels) <= 0.0):
            raise ValueError("Los niveles de Robin deben ser estrictamente crecientes")

    @property
    def gaps(self) -> np.ndarray:
        return np.diff(self.levels)


def _is_angle(theta: float, target: float) -> bool:
    return abs(theta - target) < ANGLE_TOL


def _characteristic(energy: float, theta: float, omega: float) -> float:
    """
    sin(θ/2)ψ(0) − cos(θ/2)ψ'(0) para la solución decreciente U(−E/ω, √(2ω)y),
    escalada por 2^{a/2}/√π para quedar entera en E.
    """
    a = -energy / omega
    return (np.sin(theta / 2.0) * 2.0 ** -0.25 * rgamma(0.75 + 0.5 * a)
            + np.cos(theta / 2.0) * np.sqrt(2.0 * omega) * 2.0 ** 0.25 * rgamma(0.25 + 0.5 * a))


def _characteristic_deep(energy: float, theta: float, omega: float) -> float:
    """Misma raíz para E < ω/2, con el cociente de Gammas en escala logarítmica"""
    a = -energy / omega
    ratio = np.exp(gammaln(0.75 + 0.5 * a) - gammaln(0.25 + 0.5 * a))
    return (np.sin(theta / 2.0) * 2.0 ** -0.25
            + np.cos(theta / 2.0) * np.sqrt(2.0 * omega) * 2.0 ** 0.25 * ratio)


def _solve_root(func: Callable[[float], float], lo: float, hi: float) -> float:
    try:
        root, info = brentq(func, lo, hi, xtol=1e-15 * max(1.0, abs(hi)),
                            rtol=ROOT_RTOL, maxiter=500, full_output=True)
    except ValueError as e:
        raise ConvergenceError(f"Intervalo sin cambio de signo [{lo}, {hi}]: {e}")
    if not info.converged:
        raise ConvergenceError(f"brentq no convergió en [{lo}, {hi}]")
    return float(root)


def robin_spectrum(theta: float, omega: float, count: int) -> RobinSpectrum:
    """
    Primeros `count` niveles de la semirrecta armónica con condición de Robin

    θ ∈ (0, π): cada nivel queda entre Neumann ω(2n+1/2) y Dirichlet
    ω(2n+3/2). θ ∈ (π, 2π) es la rama atractiva: E_0 < ω/2 (estado
    ligado profundo cerca de θ = π⁺) y E_n ∈ (ω(2n−1/2), ω(2n+1/2)).
    """
    if not 1 <= count <= MAX_ROBIN_LEVELS:
        raise ValueError(f"count debe estar entre 1 y {MAX_ROBIN_LEVELS}")
    theta = wrap_angle(theta)
    n = np.arange(count)

    if _is_angle(theta, 0.0):
        return RobinSpectrum(theta, omega, omega * (2.0 * n + 0.5))
    if _is_angle(theta, np.pi):
        return RobinSpectrum(theta, omega, omega * (2.0 * n + 1.5))

    def char(e: float) -> float:
        return _characteristic(e, theta, omega)

    levels = np.empty(count)
    if theta < np.pi:
        for k in range(count):
            levels[k] = _solve_root(char, omega * (2 * k + 0.5), omega * (2 * k + 1.5))
    else:
        def deep(e: float) -> float:
            return _characteristic_deep(e, theta, omega)

        lo = -omega
        for _ in range(200):
            if deep(lo) < 0.0:
                break
            lo = 2.0 * lo
        else:
            raise ConvergenceError("No se encontró cota inferior para el estado ligado")
        levels[0] = _solve_root(deep, lo, 0.5 * omega)
        for k in range(1, count):
            levels[k] = _solve_root(char, omega * (2 * k - 0.5), omega * (2 * k + 0.5))

    logger.debug(f"🔍 Robin θ={theta:.6f}: E_0={levels[0]:.12f}")
    return RobinSpectrum(theta, omega, levels)


def eta_of_theta(theta: float, omega: float) -> float:
    """
    η(θ) = ε(θ)/ω con ε medido desde el nivel fundamental de Neumann:
    η = (E_0(θ) − ω/2)/ω, η(0) = 0, η(π) = 1, creciente.
    """
    if not -ANGLE_TOL <= theta <= np.pi + ANGLE_TOL:
        raise ValueError("η(θ) sólo está definido para θ en [0, π]")
    theta = float(np.clip(theta, 0.0, np.pi))
    e0 = robin_spectrum(theta, omega, 1).levels[0]
    return float((e0 - 0.5 * omega) / omega)


def robin_sweep(thetas: Iterable[float], omega: float, count: int,
                n_jobs: int = 1) -> List[RobinSpectrum]:
    """Espectros para una rejilla de θ; cada punto es independiente"""
    thetas = list(thetas)
    logger.info(f"📊 Barrido de Robin: {len(thetas)} ángulos, {count} niveles")
    return Parallel(n_jobs=n_jobs)(delayed(robin_spectrum)(t, omega, count) for t in thetas)


# ===================================
# AUTOFUNCIONES DE ROBIN
# ===================================
def _shoot_inward(energy: float, omega: float, nodes: np.ndarray) -> np.ndarray:
    """Solución decreciente integrada desde la región prohibida hacia y = 0"""
    turning = np.sqrt(2.0 * max(energy, 0.0)) / omega
    depth = 10.0 / np.sqrt(omega)
    if energy < 0.0:
        depth = min(depth, 30.0 / np.sqrt(-2.0 * energy))
    start = min(turning + depth, nodes[-1])
    if start <= turning:
        raise ConvergenceError("La cuadratura no contiene la cola clásicamente prohibida")

    def rhs(y, u):
        return [u[1], 2.0 * (0.5 * omega ** 2 * y ** 2 - energy) * u[0]]

    kappa = np.sqrt(2.0 * (0.5 * omega ** 2 * start ** 2 - energy))
    inside = nodes <= start
    t_eval = nodes[inside][::-1]
    solution = solve_ivp(rhs, (start, 0.0), [1.0, -kappa], method="DOP853",
                         t_eval=t_eval, rtol=1e-11, atol=1e-14)
    if not solution.success:
        raise ConvergenceError(f"Disparo hacia adentro falló en E={energy}: {solution.message}")

    values = np.zeros_like(nodes)
    values[inside] = solution.y[0][::-1]
    return values


@lru_cache(maxsize=32)
def robin_eigenfunctions(theta: float, grid: HalfLineGrid,
                         count: int = MAX_ROBIN_LEVELS) -> Tuple[RobinSpectrum, np.ndarray]:
    """
    Niveles y autofunciones normalizadas sobre la cuadratura de la semirrecta

    Returns:
        (espectro, matriz (count, nodos) de autofunciones reales)
    """
    omega = grid.omega
    spectrum = robin_spectrum(theta, omega, count)
    theta = spectrum.theta

    if _is_angle(theta, 0.0) or _is_angle(theta, np.pi):
        offset = 0 if _is_angle(theta, 0.0) else 1
        table = half_line_basis(2 * count + 1, omega, grid.nodes)[offset::2][:count]
    else:
        logger.info(f"🎓 Autofunciones de Robin θ={theta:.4f} ({count} niveles)")
        table = np.array([_shoot_inward(e, omega, grid.nodes) for e in spectrum.levels])
        table /= np.sqrt(table ** 2 @ grid.weights)[:, None]

    table.setflags(write=False)
    return spectrum, table


def robin_evolve(profile: np.ndarray, theta: float, grid: HalfLineGrid,
                 duration: float, levels: int = MAX_ROBIN_LEVELS) -> np.ndarray:
    """
    Evolucionar un lado bajo la pared de Robin durante `duration`

    Fases relativas al nivel fundamental del oscilador libre (e^{−iωt/2}).
    La parte del perfil fuera de los `levels` niveles calculados conserva la
    fase de referencia de Neumann, a la que tienden los niveles altos.
    """
    omega = grid.omega
    reference = np.exp(-0.5j * omega * duration)
    theta = wrap_angle(theta)
    if _is_angle(theta, 0.0):
        return profile.copy()
    if _is_angle(theta, np.pi):
        return profile * np.exp(-1j * omega * duration)

    spectrum, table = robin_eigenfunctions(theta, grid, levels)
    coefficients = table @ (grid.weights * profile)
    captured = float(np.sum(np.abs(coefficients) ** 2))
    total = grid.norm(profile) ** 2
    if total > 0.0 and total - captured > 1e-3 * total:
        logger.warning(f"⚠️  Cola de Robin no resuelta: {(total - captured) / total:.3e} de la norma")

    phases = np.exp(-1j * spectrum.levels * duration) / reference
    return profile + (coefficients * (phases - 1.0)) @ table
