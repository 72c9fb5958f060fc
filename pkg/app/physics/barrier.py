"""
Álgebra de la interacción puntual U(2)
Parametrización U = σDσ (toro espectral x esfera isoespectral), residuos de
la condición de frontera, parámetro de conexión λ y dispersión de ondas planas.

Convención de unidades: ħ = m = 1 y una longitud unidad implícita en la
condición (U − I)Ψ + i(U + I)Ψ' = 0 (que suma ψ y ψ'); los ángulos
θ₊, θ₋, μ, ν son adimensionales.
"""

import numpy as np
from dataclasses import dataclass
from scipy.linalg import schur
from loguru import logger
from typing import Optional, Tuple

from app.physics.errors import DegenerateDecoupled

TWO_PI = 2.0 * np.pi
UNITARITY_TOL = 1e-12
DEGENERACY_TOL = 1e-12

# ===================================
# MATRICES DE REFERENCIA
# ===================================
IDENTITY = np.eye(2, dtype=complex)
MINUS_IDENTITY = -IDENTITY
SIGMA_1 = np.array([[0, 1], [1, 0]], dtype=complex)
SIGMA_3 = np.array([[1, 0], [0, -1]], dtype=complex)
HADAMARD = (SIGMA_1 + SIGMA_3) / np.sqrt(2.0)


def wrap_angle(angle: float) -> float:
    """Reducir un ángulo a [0, 2π)"""
    reduced = float(np.mod(angle, TWO_PI))
    return 0.0 if reduced >= TWO_PI else reduced


def as_unitary(matrix, tol: float = UNITARITY_TOL) -> np.ndarray:
    """
    Validar y devolver una matriz unitaria de 2x2 (UnitaryMatrix2)

    Raises:
        ValueError: si la forma no es 2x2 o si ‖U†U − I‖_max supera tol
    """
    u = np.asarray(matrix, dtype=complex)
    if u.shape != (2, 2):
        raise ValueError(f"Se esperaba una matriz 2x2, se recibió {u.shape}")
    defect = np.max(np.abs(u.conj().T @ u - IDENTITY))
    if defect >= tol:
        raise ValueError(f"Matriz no unitaria: ‖U†U − I‖ = {defect:.3e}")
    return u


@dataclass(frozen=True)
class BarrierParams:
    """Punto (θ₊, θ₋, μ, ν) del toro espectral por la esfera isoespectral"""
    theta_plus: float
    theta_minus: float
    mu: float
    nu: float

    @classmethod
    def canonical(cls, theta_plus: float, theta_minus: float,
                  mu: float = 0.0, nu: float = 0.0) -> "BarrierParams":
        """
        Forma canónica: ángulos módulo 2π, μ recortado a [0, π] y
        D ∝ I (θ₊ == θ₋) llevado a μ = ν = 0.
        """
        tp, tm = wrap_angle(theta_plus), wrap_angle(theta_minus)
        m = float(np.clip(mu, 0.0, np.pi))
        n = wrap_angle(nu)
        if tp == tm or m == 0.0:
            n = 0.0
        if tp == tm:
            m = 0.0
        return cls(tp, tm, m, n)


@dataclass(frozen=True)
class BoundaryData:
    """Valores y derivadas laterales de ψ en 0₊ y 0₋"""
    psi_plus: complex
    psi_minus: complex
    dpsi_plus: complex
    dpsi_minus: complex

    @property
    def values(self) -> np.ndarray:
        """Ψ = (ψ(0₊), ψ(0₋))"""
        return np.array([self.psi_plus, self.psi_minus], dtype=complex)

    @property
    def derivatives(self) -> np.ndarray:
        """Ψ' = (ψ'(0₊), −ψ'(0₋)); el signo del lado izquierdo es parte de la definición"""
        return np.array([self.dpsi_plus, -self.dpsi_minus], dtype=complex)


@dataclass(frozen=True)
class ScatterCoeffs:
    """Amplitudes de reflexión y transmisión para incidencia por cada lado"""
    r_left: complex
    t_left: complex
    r_right: complex
    t_right: complex
    k: float

    @property
    def transmission(self) -> float:
        """|t|² para incidencia desde la izquierda"""
        return float(abs(self.t_left) ** 2)

    @property
    def reflection(self) -> float:
        return float(abs(self.r_left) ** 2)

    def unitarity_defect(self) -> float:
        left = abs(self.r_left) ** 2 + abs(self.t_left) ** 2
        right = abs(self.r_right) ** 2 + abs(self.t_right) ** 2
        return float(max(abs(left - 1.0), abs(right - 1.0)))


# ===================================
# PARAMETRIZACIÓN σDσ
# ===================================
def sigma_matrix(mu: float, nu: float) -> np.ndarray:
    """σ(μ, ν): reflexión hermítica con σ² = I"""
    c, s = np.cos(mu / 2.0), np.sin(mu / 2.0)
    return np.array([
        [c, np.exp(1j * nu) * s],
        [np.exp(-1j * nu) * s, -c],
    ], dtype=complex)


def wall_matrix(theta_plus: float, theta_minus: float) -> np.ndarray:
    """
    Pared impenetrable con ángulos de Robin (θ₊, θ₋).

    θ = 0 es Neumann y θ = π es Dirichlet; los valores intermedios son la
    rama repulsiva ψ'(0) = tan(θ/2)ψ(0) (derivada hacia el interior de cada
    lado), que en la condición de frontera corresponde a
    U = diag(e^{−iθ₊}, e^{−iθ₋}).
    """
    return np.diag([np.exp(-1j * theta_plus), np.exp(-1j * theta_minus)]).astype(complex)


def compose_u(params: BarrierParams) -> np.ndarray:
    """U = σ(μ,ν)·diag(e^{iθ₊}, e^{iθ₋})·σ(μ,ν)"""
    sigma = sigma_matrix(params.mu, params.nu)
    d = np.diag([np.exp(1j * params.theta_plus), np.exp(1j * params.theta_minus)])
    return sigma @ d @ sigma


def decompose_u(u) -> BarrierParams:
    """
    Descomponer U en (θ₊, θ₋, μ, ν)

    Desempate: θ₊ es la menor de las dos fases propias en [0, 2π); su
    vector propio, con la primera componente llevada a real no negativa,
    es la primera columna de σ y fija (μ, ν). U = e^{iθ}I devuelve
    (θ, θ, 0, 0); si ese vector propio es (0, 1), μ = π y ν = 0.
    """
    u = as_unitary(u, tol=1e-10)
    t, z = schur(u, output="complex")
    eigenvalues = np.diag(t)

    if abs(eigenvalues[0] - eigenvalues[1]) < DEGENERACY_TOL:
        theta = wrap_angle(np.angle(eigenvalues.mean()))
        return BarrierParams(theta, theta, 0.0, 0.0)

    phases = np.array([wrap_angle(np.angle(e)) for e in eigenvalues])
    first = int(np.argmin(phases))
    theta_plus, theta_minus = phases[first], phases[1 - first]

    v = z[:, first]
    if abs(v[0]) > 1e-15:
        v = v * np.conj(v[0]) / abs(v[0])
        mu = 2.0 * np.arctan2(abs(v[1]), v[0].real)
        nu = wrap_angle(-np.angle(v[1])) if abs(v[1]) > 1e-15 else 0.0
    else:
        mu, nu = np.pi, 0.0

    return BarrierParams(float(theta_plus), float(theta_minus), float(mu), float(nu))


def reflection_params(g, tol: float = 1e-10) -> Optional[Tuple[float, float, float]]:
    """
    Reconocer G = e^{iγ}·σ(μ, ν)

    Returns:
        (μ, ν, γ) si G es, salvo fase global, una reflexión σ; None si no
    """
    g = np.asarray(g, dtype=complex)
    if abs(np.trace(g)) > tol:
        return None

    gamma = np.angle(-np.linalg.det(g)) / 2.0
    k = np.exp(-1j * gamma) * g
    if np.max(np.abs(k - k.conj().T)) > tol:
        return None
    if k[0, 0].real < 0.0:
        k = -k
        gamma += np.pi

    mu = 2.0 * np.arctan2(abs(k[0, 1]), k[0, 0].real)
    nu = wrap_angle(np.angle(k[0, 1])) if abs(k[0, 1]) > tol else 0.0
    return float(mu), float(nu), wrap_angle(gamma)


# ===================================
# CONDICIONES DE CONEXIÓN
# ===================================
def boundary_residual(u, bd: BoundaryData) -> np.ndarray:
    """(U − I)Ψ + i(U + I)Ψ'; se anula sii bd cumple la condición de U"""
    u = np.asarray(u, dtype=complex)
    return (u - IDENTITY) @ bd.values + 1j * (u + IDENTITY) @ bd.derivatives


def lambda_param(mu: float, nu: float) -> complex:
    """
    λ = e^{iν}·√((1 + cos(μ/2)) / (1 − cos(μ/2))) = e^{iν}·cot(μ/4)

    Se lee el coseno como cos(μ/2); la lectura (cos μ)/2 no reproduce los
    coeficientes cos(μ/2), sin(μ/2) del mapa de medio periodo.
    """
    if mu <= 0.0:
        raise DegenerateDecoupled("μ = 0: λ diverge y las semirrectas se desacoplan")
    half = np.cos(mu / 2.0)
    return complex(np.exp(1j * nu) * np.sqrt((1.0 + half) / (1.0 - half)))


def lambda_to_sphere(lam: complex) -> Tuple[float, float]:
    """Inversa de lambda_param: (μ, ν) a partir de λ"""
    if lam == 0:
        raise ValueError("λ = 0 no pertenece a la familia σ")
    return float(4.0 * np.arctan(1.0 / abs(lam))), wrap_angle(np.angle(lam))


# ===================================
# DISPERSIÓN EN LA RECTA LIBRE
# ===================================
def scattering_matrix(u, k: float) -> np.ndarray:
    """
    Matriz S en el orden (derecha, izquierda) para ondas planas de número k

    Con ondas entrantes de amplitud unidad por cada lado, la condición de
    frontera da [(U − I) − k(U + I)]·S = −(U − I) − k(U + I).
    """
    if k <= 0.0:
        raise ValueError("El número de onda debe ser positivo")
    u = as_unitary(u, tol=1e-10)
    a = (u - IDENTITY) - k * (u + IDENTITY)
    b = -(u - IDENTITY) - k * (u + IDENTITY)
    return np.linalg.solve(a, b)


def scattering_coefficients(u, k: float) -> ScatterCoeffs:
    """Coeficientes de reflexión y transmisión de la barrera U a número de onda k"""
    s = scattering_matrix(u, k)
    coeffs = ScatterCoeffs(
        r_left=complex(s[1, 1]),
        t_left=complex(s[0, 1]),
        r_right=complex(s[0, 0]),
        t_right=complex(s[1, 0]),
        k=float(k),
    )
    logger.debug(f"🎯 Dispersión k={k:.4g}: |t|²={coeffs.transmission:.12f}")
    return coeffs
