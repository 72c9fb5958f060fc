"""
Verbos de la línea de comandos: un módulo por verbo, cada uno con run(cmd) -> str
"""
from app.api.commands import gate, scatter, spectrum, synthesis, verify

RUNNERS = {
    "spectrum": spectrum.run,
    "gate": gate.run,
    "compile": synthesis.run,
    "verify": verify.run,
    "scatter": scatter.run,
}
