# apps/frequencies/serializers.py
"""
Serializers DRF (solo lectura) de acciones y frecuencias.

Esquema de `freqs` (ver docs/SCHEMAS.md):
    {"n": [...], "I": [[re, im], ...], "omega_star": [...], "omega_sharp": [...],
     "trunc_err": [...], "omega": [...] | null, "h1": [re, im], "h2": [re, im], ...}
"""

from rest_framework import serializers

from apps.potentials.serializers import ComplexField


class ActionSerializer(serializers.Serializer):
    n = serializers.IntegerField()
    value = ComplexField()
    alternative = ComplexField()
    discrepancy = serializers.FloatField()


class FrequencySpectrumSerializer(serializers.Serializer):
    n = serializers.ListField(child=serializers.IntegerField())
    I = serializers.ListField(child=ComplexField())
    omega_star = serializers.ListField(child=ComplexField())
    omega_sharp = serializers.ListField(child=ComplexField())
    omega = serializers.ListField(child=ComplexField(), allow_null=True)
    trunc_err = serializers.ListField(child=serializers.FloatField())
    h1 = ComplexField()
    h2 = ComplexField()
    open_k = serializers.ListField(child=serializers.IntegerField())
    psi_residual = serializers.ListField(child=serializers.FloatField())
    meta = serializers.DictField()
