"""
Verbo compile: programa de pulsos para una compuerta objetivo
"""
import json

from app.api.schemas import CompileCommand, parse_matrix
from app.physics.barrier import as_unitary
from app.physics.compiler import compile_gate
from app.physics.errors import UsageError
from app.physics.gatelab import NAMED_GATES, named_gate


def resolve_target(target: str):
    """Nombre (I, X, H, Z, S, T) o matriz 2x2 en JSON"""
    if target.upper() in NAMED_GATES:
        return named_gate(target)
    try:
        return as_unitary(parse_matrix(json.loads(target)), tol=1e-10)
    except ValueError as e:
        raise UsageError(f"--target: {e}")


def run(cmd: CompileCommand) -> str:
    return compile_gate(resolve_target(cmd.target), cmd.omega).to_json()
