"""
Verbo scatter: transmisión y reflexión en la recta libre
"""
import json

from app.api.commands.output import emit_rows
from app.api.schemas import ScatterCommand, ScatterRow, parse_matrix
from app.physics.barrier import as_unitary, scattering_coefficients, sigma_matrix
from app.physics.errors import UsageError
from app.physics.oracle import wavepacket_scatter


def resolve_barrier(cmd: ScatterCommand):
    if cmd.u is None:
        return sigma_matrix(cmd.mu, cmd.nu)
    try:
        return as_unitary(parse_matrix(json.loads(cmd.u)), tol=1e-10)
    except ValueError as e:
        raise UsageError(f"--u: {e}")


def run(cmd: ScatterCommand) -> str:
    u = resolve_barrier(cmd)
    rows = []
    for k in cmd.k:
        coeffs = scattering_coefficients(u, k)
        row = ScatterRow(k=k, T=coeffs.transmission, R=coeffs.reflection)
        if cmd.oracle:
            row.T_oracle, row.R_oracle = wavepacket_scatter(u, k)
        rows.append(row)
    return emit_rows(rows, cmd.format)
