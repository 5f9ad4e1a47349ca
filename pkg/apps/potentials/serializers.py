# apps/potentials/serializers.py
"""
Serializers DRF del esquema JSON de potenciales.

Esquema (ver docs/SCHEMAS.md):
    {"kind": "real_u", "coeffs": [[n, re, im], ...], "name": "..."}
    {"kind": "pair",   "coeffs": [[n, re₋, im₋, re₊, im₊], ...]}

Uso:
    serializer = PotentialSerializer(data=json.load(fh))
    serializer.is_valid(raise_exception=True)
    phi = serializer.save()

    PotentialSerializer(phi).data   # modos ordenados
"""

import json
from pathlib import Path

from rest_framework import serializers

from apps.core.exceptions import ConfigError, DomainError

from .potential import Potential


class ComplexField(serializers.Field):
    """Número complejo codificado como [re, im] (acepta también un real)."""

    default_error_messages = {
        'invalid': 'Se esperaba un número o un par [re, im].',
    }

    def to_representation(self, value):
        value = complex(value)
        return [value.real, value.imag]

    def to_internal_value(self, data):
        if isinstance(data, (int, float)):
            return complex(data)
        if isinstance(data, (list, tuple)) and len(data) == 2:
            try:
                return complex(float(data[0]), float(data[1]))
            except (TypeError, ValueError):
                pass
        self.fail('invalid')


class PotentialSerializer(serializers.Serializer):
    """Valida y escribe el esquema de potenciales."""

    KIND_CHOICES = ('pair', 'real_u')
    ROW_LENGTH = {'real_u': 3, 'pair': 5}

    kind = serializers.ChoiceField(choices=KIND_CHOICES)
    coeffs = serializers.ListField(
        child=serializers.ListField(child=serializers.FloatField()),
        allow_empty=True,
    )
    name = serializers.CharField(required=False, allow_blank=True, default='')

    def validate(self, attrs):
        expected = self.ROW_LENGTH[attrs['kind']]
        seen = set()
        for i, row in enumerate(attrs['coeffs']):
            if len(row) != expected:
                raise serializers.ValidationError(
                    {'coeffs': f"fila {i}: se esperaban {expected} valores para kind={attrs['kind']}"}
                )
            if not float(row[0]).is_integer():
                raise serializers.ValidationError({'coeffs': f"fila {i}: el modo n debe ser entero"})
            n = int(row[0])
            if n in seen:
                raise serializers.ValidationError({'coeffs': f"fila {i}: modo {n} repetido"})
            seen.add(n)
        return attrs

    def create(self, validated_data):
        rows = validated_data['coeffs']
        name = validated_data.get('name', '')
        if validated_data['kind'] == 'real_u':
            coeffs = {int(r[0]): complex(r[1], r[2]) for r in rows}
            try:
                return Potential.from_real_u(coeffs, name=name)
            except DomainError as e:
                raise serializers.ValidationError({'coeffs': e.message})
        minus = {int(r[0]): complex(r[1], r[2]) for r in rows}
        plus = {int(r[0]): complex(r[3], r[4]) for r in rows}
        return Potential(minus, plus, name=name)

    def to_representation(self, instance: Potential):
        if instance.is_er():
            coeffs = [[int(n), c.real, c.imag] for n, c in zip(instance.modes, instance.cm)]
            kind = 'real_u'
        else:
            coeffs = [
                [int(n), m.real, m.imag, p.real, p.imag]
                for n, m, p in zip(instance.modes, instance.cm, instance.cp)
            ]
            kind = 'pair'
        return {'kind': kind, 'coeffs': coeffs, 'name': instance.name}


class HamiltonianSerializer(serializers.Serializer):
    h1 = ComplexField()
    h2 = ComplexField()
    h3 = ComplexField()
    h4 = ComplexField()


def load_potential(path) -> Potential:
    """Lee y valida un archivo JSON de potencial."""
    file_path = Path(path)
    if not file_path.exists():
        raise ConfigError(f"No existe el archivo de potencial: {path}")
    try:
        data = json.loads(file_path.read_text(encoding='utf-8'))
    except json.JSONDecodeError as e:
        raise ConfigError(
            f"línea {e.lineno}: JSON de potencial inválido ({e.msg})", details={'line': e.lineno}
        )
    serializer = PotentialSerializer(data=data)
    if not serializer.is_valid():
        raise ConfigError(f"Potencial inválido en {path}: {serializer.errors}")
    try:
        potential = serializer.save()
    except serializers.ValidationError as e:
        raise ConfigError(f"Potencial inválido en {path}: {e.detail}")
    if not potential.name:
        potential.name = file_path.stem
    return potential
