"""
Verbo spectrum: niveles de Robin de la semirrecta
"""
import numpy as np
from loguru import logger

from app.api.commands.output import emit_rows
from app.api.schemas import SpectrumCommand, SpectrumRow
from app.config import get_settings
from app.physics.spectral import robin_spectrum, robin_sweep


def run(cmd: SpectrumCommand) -> str:
    """Filas (θ, n, E_n, η_n) con η_n = (E_n − ω(2n + 1/2))/ω"""
    if cmd.sweep:
        thetas = np.linspace(0.0, np.pi, cmd.sweep)
        spectra = robin_sweep(thetas, cmd.omega, cmd.levels, n_jobs=get_settings().parallel_jobs)
    else:
        spectra = [robin_spectrum(cmd.theta, cmd.omega, cmd.levels)]

    rows = []
    for spectrum in spectra:
        for n, energy in enumerate(spectrum.levels):
            rows.append(SpectrumRow(
                theta=spectrum.theta,
                n=n,
                energy=float(energy),
                eta=float((energy - cmd.omega * (2 * n + 0.5)) / cmd.omega),
            ))

    logger.info(f"📊 {len(rows)} niveles de Robin")
    return emit_rows(rows, cmd.format)
