# apps/core/run_config.py
"""
RunConfig: parámetros de una corrida del toolkit.

Se construye en tres capas (la última gana):
    1. settings ZSB_* (entorno / .env vía python-decouple)
    2. archivo --config, en texto key=value o JSON
    3. flags explícitos de la línea de comandos

Uso:
    config = load_run_config('corrida.cfg', overrides={'N': 16})
    config.validate()
"""

import json
import logging
from dataclasses import dataclass, fields, replace
from pathlib import Path
from typing import Any, Dict, Optional

from django.conf import settings

from .exceptions import ConfigError

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class RunConfig:
    """Parámetros de ventana, tolerancias, malla y salidas."""
    N: int
    M: int
    tol: float
    quad_tol: float
    newton_tol: float
    grid_size: int
    dt: float
    out_dir: str
    potential: Optional[str] = None
    threads: int = 1
    seed: int = 0

    @classmethod
    def from_settings(cls) -> 'RunConfig':
        n = settings.ZSB_DEFAULT_N
        return cls(
            N=n,
            M=4 * n,
            tol=settings.ZSB_DEFAULT_TOL,
            quad_tol=settings.ZSB_QUAD_TOL,
            newton_tol=settings.ZSB_NEWTON_TOL,
            grid_size=settings.ZSB_GRID_SIZE,
            dt=settings.ZSB_DT,
            out_dir=settings.ZSB_OUTPUT_DIR,
            threads=settings.ZSB_THREADS,
        )

    def validate(self) -> 'RunConfig':
        """Verifica invariantes; retorna self para encadenar."""
        if self.N < 1:
            raise ConfigError(f"N debe ser >= 1 (recibido {self.N})", details={'key': 'N'})
        if self.M < self.N:
            raise ConfigError(
                f"M={self.M} debe ser >= N={self.N}", details={'key': 'M'}
            )
        for key in ('tol', 'quad_tol', 'newton_tol', 'dt'):
            if not getattr(self, key) > 0:
                raise ConfigError(f"{key} debe ser > 0", details={'key': key})
        g = self.grid_size
        if g < 16 or g & (g - 1):
            raise ConfigError(
                f"grid_size={g} debe ser potencia de dos >= 16", details={'key': 'grid_size'}
            )
        if self.threads < 1:
            raise ConfigError("threads debe ser >= 1", details={'key': 'threads'})
        return self

    def with_overrides(self, **overrides) -> 'RunConfig':
        clean = {k: v for k, v in overrides.items() if v is not None}
        if 'N' in clean and 'M' not in clean:
            clean['M'] = max(self.M, 4 * clean['N'])
        return replace(self, **clean)


# =============================================================================
# PARSER
# =============================================================================

_INT_KEYS = {'N', 'M', 'grid_size', 'threads', 'seed'}
_FLOAT_KEYS = {'tol', 'quad_tol', 'newton_tol', 'dt'}
_KNOWN_KEYS = {f.name for f in fields(RunConfig)}


def _to_int(raw: Any) -> int:
    value = float(raw)
    if not value.is_integer():
        raise ValueError(raw)
    return int(value)


def _cast_value(key: str, raw: Any, line: int):
    if key not in _KNOWN_KEYS:
        raise ConfigError(
            f"línea {line}: clave desconocida '{key}'",
            details={'line': line, 'key': key},
        )
    try:
        if key in _INT_KEYS:
            return _to_int(raw)
        if key in _FLOAT_KEYS:
            return float(raw)
        return str(raw)
    except (TypeError, ValueError):
        raise ConfigError(
            f"línea {line}: valor inválido para '{key}': {raw!r}",
            details={'line': line, 'key': key},
        )


def parse_config_text(text: str) -> Dict[str, Any]:
    """
    Parsea texto key=value o JSON a un dict tipado.

    Líneas vacías y comentarios (#) se ignoran. Errores llevan número de línea.
    No usa decouple.Config: sus errores de formato no indican la línea.
    """
    stripped = text.lstrip()
    if stripped.startswith('{'):
        try:
            data = json.loads(text)
        except json.JSONDecodeError as e:
            raise ConfigError(
                f"línea {e.lineno}: JSON inválido ({e.msg})", details={'line': e.lineno}
            )
        lines = text.splitlines()
        result = {}
        for key, raw in data.items():
            line = next(
                (i for i, l in enumerate(lines, 1) if f'"{key}"' in l), 1
            )
            result[key] = _cast_value(key, raw, line)
        return result

    result = {}
    for number, line in enumerate(text.splitlines(), 1):
        content = line.split('#', 1)[0].strip()
        if not content:
            continue
        if '=' not in content:
            raise ConfigError(
                f"línea {number}: se esperaba 'clave = valor'", details={'line': number}
            )
        key, raw = (part.strip() for part in content.split('=', 1))
        result[key] = _cast_value(key, raw, number)
    return result


def load_run_config(path: Optional[str] = None, overrides: Optional[dict] = None) -> RunConfig:
    """
    Construye RunConfig desde settings + archivo + overrides y lo valida.

    Args:
        path: archivo key=value o JSON (opcional)
        overrides: valores de la línea de comandos; None = no especificado
    """
    config = RunConfig.from_settings()
    if path:
        file_path = Path(path)
        if not file_path.exists():
            raise ConfigError(f"No existe el archivo de configuración: {path}")
        values = parse_config_text(file_path.read_text(encoding='utf-8'))
        config = config.with_overrides(**values)
        logger.debug(f"[RunConfig] {len(values)} valores leídos de {path}")
    if overrides:
        config = config.with_overrides(**overrides)
    return config.validate()
