# =============================================================================
# apps/core/parallel.py
# =============================================================================
# Map paralelo con orden de salida determinista.
#
# USO:
#   from apps.core.parallel import ordered_map, chunked
#
#   results = ordered_map(solve_one, indices)          # threads = ZSB_THREADS
#   results = ordered_map(solve_one, indices, threads=4)
#
# Los resultados siempre vuelven en el orden de entrada, así que la salida
# de los comandos no depende del número de threads.
# =============================================================================

import logging
from concurrent.futures import ThreadPoolExecutor
from typing import Callable, Iterable, List, Optional, Sequence, TypeVar

import numpy as np
from django.conf import settings

logger = logging.getLogger(__name__)

T = TypeVar('T')
R = TypeVar('R')


def thread_count(threads: Optional[int] = None) -> int:
    """Threads efectivos: argumento explícito o settings.ZSB_THREADS."""
    value = threads if threads is not None else getattr(settings, 'ZSB_THREADS', 1)
    return max(1, int(value))


def ordered_map(func: Callable[[T], R], items: Iterable[T], threads: Optional[int] = None) -> List[R]:
    """
    Aplica func a cada item y retorna la lista de resultados en orden.

    Con un solo thread se evalúa en serie (sin executor), lo que mantiene
    los tracebacks simples al depurar.
    """
    items = list(items)
    workers = min(thread_count(threads), max(1, len(items)))
    if workers == 1:
        return [func(item) for item in items]

    logger.debug(f"[Parallel] {len(items)} tareas en {workers} threads")
    with ThreadPoolExecutor(max_workers=workers) as executor:
        return list(executor.map(func, items))


def chunked(values: np.ndarray, parts: int) -> Sequence[np.ndarray]:
    """Divide un arreglo 1D en `parts` bloques contiguos no vacíos."""
    parts = max(1, min(parts, len(values)))
    return np.array_split(values, parts)
