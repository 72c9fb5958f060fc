"""
Serialización determinista de la salida de los comandos
"""
import io
import json
import pandas as pd
from pydantic import BaseModel
from typing import Iterable, List, Union

from app.config import get_settings
from app.physics.errors import UsageError
from app.physics.pulses import PulseSchedule


def emit_json(document: Union[BaseModel, List[BaseModel]]) -> str:
    """JSON con repr de Python para los floats (ida y vuelta exacta)"""
    if isinstance(document, list):
        payload = [item.model_dump() for item in document]
    else:
        payload = document.model_dump()
    return json.dumps(payload, indent=2) + "\n"


def emit_csv(rows: Iterable[BaseModel]) -> str:
    """CSV con cabecera, separador coma y float_digits cifras significativas (17)"""
    frame = pd.DataFrame([row.model_dump(exclude_none=True) for row in rows])
    buffer = io.StringIO()
    frame.to_csv(buffer, index=False, float_format=f"%.{get_settings().float_digits}g", lineterminator="\n")
    return buffer.getvalue()


def emit_rows(rows: List[BaseModel], fmt: str) -> str:
    return emit_csv(rows) if fmt == "csv" else emit_json(rows)


def load_schedule(path: str) -> PulseSchedule:
    """
    Raises:
        UsageError: archivo inexistente o documento inválido
    """
    try:
        with open(path, encoding="utf-8") as f:
            return PulseSchedule.from_json(f.read())
    except OSError as e:
        raise UsageError(f"--schedule: no se pudo leer '{path}': {e}")
    except ValueError as e:
        raise UsageError(f"--schedule: programa inválido en '{path}': {e}")
