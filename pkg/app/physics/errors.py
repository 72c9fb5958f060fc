"""
Errores del dominio numérico
"""


class QAbacusError(Exception):
    """Error base de la biblioteca (se traduce a código de salida 1)"""


class DegenerateDecoupled(QAbacusError):
    """lambda diverge: con mu = 0 la barrera desacopla las dos semirrectas"""


class TruncationError(QAbacusError):
    """La cola de la expansión truncada supera el umbral admitido"""


class ConvergenceError(QAbacusError):
    """Un buscador de raíces o autovalores no alcanzó la tolerancia"""


class ResolutionError(QAbacusError):
    """La malla no resuelve el potencial o no contiene las colas del estado"""


class LinearSolveError(QAbacusError):
    """Matriz de paso singular en la propagación implícita"""


class LeakageOverflow(QAbacusError):
    """La fuga acumulada supera el límite: el estado ya no es un qubit"""

    def __init__(self, leakage: float, limit: float):
        self.leakage = leakage
        self.limit = limit
        super().__init__(f"Fuga {leakage:.6g} supera el límite {limit:.3g}")


class NotQubitExact(QAbacusError):
    """El pulso no se representa como compuerta ideal de 2x2"""


class UsageError(Exception):
    """Error de uso de la línea de comandos (código de salida 2)"""
