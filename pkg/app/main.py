"""
QAbacus - Laboratorio numérico del qubit de localización
Oscilador armónico cortado por una interacción puntual U(2) programable
"""
import argparse
import sys
from loguru import logger
from pydantic import TypeAdapter, ValidationError
from typing import List, Optional

from app.api.commands import RUNNERS
from app.api.schemas import Command
from app.config import get_settings
from app.physics.errors import QAbacusError, UsageError

# Configuración
settings = get_settings()

LOG_FORMAT = "<green>{time:HH:mm:ss}</green> | <level>{level: <8}</level> | <level>{message}</level>"
EXIT_OK, EXIT_FAILURE, EXIT_USAGE = 0, 1, 2


class CommandParser(argparse.ArgumentParser):
    """ArgumentParser que lanza UsageError en lugar de terminar el proceso"""

    def error(self, message):
        raise UsageError(message)


def configure_logging(level: str) -> None:
    """Sink único en stderr; stdout queda reservado para la salida del comando"""
    logger.remove()
    logger.add(sys.stderr, format=LOG_FORMAT, level=level.upper())


def build_parser() -> CommandParser:
    common = CommandParser(add_help=False)
    common.add_argument("--output", help="Archivo de salida (por defecto stdout)")
    common.add_argument("--format", choices=["json", "csv"],
                        help="Formato de salida (spectrum/scatter: csv; resto: json). CSV con 17 cifras "
                             "significativas; JSON con la representación más corta que "
                             "recupera el float exacto (como mucho 17 cifras)")
    common.add_argument("--log-level", dest="log_level",
                        help=f"Nivel de log en stderr (por defecto {settings.log_level})")
    common.add_argument("--omega", type=float, help=f"Frecuencia ω > 0 (por defecto {settings.omega})")

    parser = CommandParser(prog="qabacus", description=f"{settings.app_name} v{settings.app_version}")
    verbs = parser.add_subparsers(dest="verb", required=True, metavar="VERBO")

    spectrum = verbs.add_parser("spectrum", parents=[common], help="Niveles de Robin de la semirrecta")
    spectrum.add_argument("--theta", type=float, help="Ángulo de Robin θ en radianes (por defecto 0)")
    spectrum.add_argument("--levels", type=int, help="Número de niveles, 1..64 (por defecto 6)")
    spectrum.add_argument("--sweep", type=int, help="Barrido de N ángulos en [0, π] (ignora --theta)")

    gate = verbs.add_parser("gate", parents=[common], help="Compuerta efectiva de un pulso o programa")
    gate.add_argument("--mu", type=float, help="Barrera σ(μ, ν): μ en [0, π]")
    gate.add_argument("--nu", type=float, help="Fase ν de la barrera σ (por defecto 0)")
    gate.add_argument("--theta-plus", dest="theta_plus", type=float, help="Pared: ángulo de Robin derecho")
    gate.add_argument("--theta-minus", dest="theta_minus", type=float, help="Pared: ángulo de Robin izquierdo")
    gate.add_argument("--v-plus", dest="v_plus", type=float, help="Pared: potencial añadido a la derecha")
    gate.add_argument("--v-minus", dest="v_minus", type=float, help="Pared: potencial añadido a la izquierda")
    gate.add_argument("--half-periods", dest="half_periods", type=int, help="Duración en T/2 (por defecto 1)")
    gate.add_argument("--schedule", help="Programa de pulsos en JSON")
    gate.add_argument("--envelope", choices=["ground", "polynomial", "coherent"],
                      help="Envolvente del qubit (por defecto ground)")

    compile_ = verbs.add_parser("compile", parents=[common], help="Compilar una compuerta a pulsos")
    compile_.add_argument("--target", required=True,
                          help="I, X, H, Z, S, T o matriz 2x2 JSON (entradas reales o [re, im])")

    verify = verbs.add_parser("verify", parents=[common], help="Comparar un programa con el oráculo de malla")
    verify.add_argument("--schedule", required=True, help="Programa de pulsos en JSON")
    verify.add_argument("--grid-points", dest="grid_points", type=int,
                        help=f"Nodos de la malla (por defecto {settings.grid_points})")
    verify.add_argument("--steps-per-period", dest="steps_per_period", type=int,
                        help=f"Pasos de tiempo por periodo (por defecto {settings.steps_per_period})")
    verify.add_argument("--envelope", choices=["ground", "polynomial", "coherent"],
                        help="Envolvente del qubit (por defecto polynomial)")

    scatter = verbs.add_parser("scatter", parents=[common], help="Transmisión de ondas planas")
    scatter.add_argument("--mu", type=float, help="Barrera σ(μ, ν)")
    scatter.add_argument("--nu", type=float, help="Fase ν (por defecto 0)")
    scatter.add_argument("--u", help="Matriz U en JSON")
    scatter.add_argument("--k", type=float, nargs="+", help="Números de onda (por defecto 0.5 1 5 20)")
    scatter.add_argument("--oracle", action="store_true", default=None,
                         help="Añadir la transmisión del paquete de ondas en malla")
    return parser


def parse_args(argv: List[str]) -> Command:
    """
    Raises:
        UsageError: opción desconocida, valor mal formado o combinación inválida
    """
    namespace = build_parser().parse_args(argv)
    values = {key: value for key, value in vars(namespace).items() if value is not None}
    values.setdefault("omega", settings.omega)
    values.setdefault("log_level", settings.log_level)
    if values["verb"] == "verify":
        values.setdefault("grid_points", settings.grid_points)
        values.setdefault("steps_per_period", settings.steps_per_period)

    try:
        return TypeAdapter(Command).validate_python(values)
    except ValidationError as e:
        raise UsageError("; ".join(_describe(err) for err in e.errors()))


def _describe(err: dict) -> str:
    """Mensaje de validación con el nombre de la opción afectada"""
    fields = [str(part) for part in err["loc"][1:]]
    if not fields:
        return f"{err['loc'][0]}: {err['msg']}"
    return f"--{fields[0].replace('_', '-')}: {err['msg']}"


def execute(cmd: Command) -> int:
    """Ejecutar el verbo y escribir la salida; devuelve el código de salida"""
    configure_logging(cmd.log_level)
    logger.info(f"🚀 {settings.app_name} v{settings.app_version}: {cmd.verb}")

    try:
        text = RUNNERS[cmd.verb](cmd)
    except UsageError as e:
        logger.error(f"❌ Uso: {e}")
        return EXIT_USAGE
    except QAbacusError as e:
        logger.error(f"❌ {type(e).__name__}: {e}")
        return EXIT_FAILURE

    if cmd.output:
        with open(cmd.output, "w", encoding="utf-8") as f:
            f.write(text)
        logger.info(f"💾 Salida escrita en {cmd.output}")
    else:
        sys.stdout.write(text)
    return EXIT_OK


def main(argv: Optional[List[str]] = None) -> int:
    configure_logging(settings.log_level)
    try:
        cmd = parse_args(sys.argv[1:] if argv is None else argv)
    except UsageError as e:
        logger.error(f"❌ Uso: {e}")
        return EXIT_USAGE
    return execute(cmd)


if __name__ == "__main__":
    sys.exit(main())
