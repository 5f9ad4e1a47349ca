# apps/core/artifacts.py
"""
Escritura de artefactos de salida (JSON y CSV).

- JSON: claves ordenadas, indentación de 2 espacios, newline final.
- CSV: numpy.savetxt con delimitador coma y formato %.17g.

La salida es byte-determinista para una misma entrada.

Uso:
    path = write_json(out_dir, 'spectrum.json', serializer.data)
    path = write_csv(out_dir, 'gaps.csv', ['n', 'gamma'], np.column_stack([n, g]))
"""

import json
import logging
from pathlib import Path
from typing import Any, Sequence

import numpy as np

logger = logging.getLogger(__name__)


def _ensure_dir(out_dir) -> Path:
    path = Path(out_dir)
    path.mkdir(parents=True, exist_ok=True)
    return path


def dumps(data: Any) -> str:
    """JSON determinista (mismo formato que escribe write_json)."""
    return json.dumps(data, sort_keys=True, indent=2, ensure_ascii=False) + '\n'


def write_json(out_dir, filename: str, data: Any) -> Path:
    path = _ensure_dir(out_dir) / filename
    path.write_text(dumps(data), encoding='utf-8')
    logger.info(f"[Artifacts] JSON escrito: {path}")
    return path


def write_csv(out_dir, filename: str, columns: Sequence[str], rows: np.ndarray) -> Path:
    """
    Escribe una tabla numérica real.

    Args:
        columns: nombres de columna (header)
        rows: arreglo 2D (filas x columnas) de floats
    """
    rows = np.atleast_2d(np.asarray(rows, dtype=float))
    if rows.size and rows.shape[1] != len(columns):
        raise ValueError(f"{len(columns)} columnas declaradas, {rows.shape[1]} en los datos")
    path = _ensure_dir(out_dir) / filename
    np.savetxt(path, rows, delimiter=',', fmt='%.17g', header=','.join(columns), comments='')
    logger.info(f"[Artifacts] CSV escrito: {path} ({rows.shape[0]} filas)")
    return path
