#!/usr/bin/env python
"""Entrada de los management commands del toolkit (zs, spectrum, freqs, validate, ...)."""
import os
import sys


def main():
    os.environ.setdefault('DJANGO_SETTINGS_MODULE', 'config.settings')
    try:
        from django.core.management import execute_from_command_line
    except ImportError as exc:
        raise ImportError(
            "No se pudo importar Django. Instala las dependencias con "
            "'pip install -r requirements.txt' dentro del virtualenv."
        ) from exc
    execute_from_command_line(sys.argv)


if __name__ == '__main__':
    main()
