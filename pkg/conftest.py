"""Configura Django para que pytest pueda recolectar los tests de las apps."""
import os

import django

os.environ.setdefault('DJANGO_SETTINGS_MODULE', 'config.settings')
django.setup()
