# apps/spectral/serializers.py
"""
Serializers DRF (solo lectura) de los datos espectrales.

Los arreglos se emiten indexados por n = −N..N; los complejos como [re, im].

Uso:
    write_json(out_dir, 'spectrum.json', SpectralDataSerializer(sd).data)
"""

from rest_framework import serializers

from apps.potentials.serializers import ComplexField, HamiltonianSerializer, PotentialSerializer


class SpectralDataSerializer(serializers.Serializer):
    N = serializers.IntegerField()
    tol = serializers.FloatField()
    real_type = serializers.BooleanField()
    separation_constant = serializers.FloatField()
    potential = PotentialSerializer(source='phi')
    n = serializers.ListField(source='indices', child=serializers.IntegerField())
    lam_minus = serializers.ListField(child=ComplexField())
    lam_plus = serializers.ListField(child=ComplexField())
    lam_dot = serializers.ListField(child=ComplexField())
    tau = serializers.ListField(child=ComplexField())
    gamma = serializers.ListField(child=ComplexField())
    disc_radius = serializers.ListField(child=serializers.FloatField())
    collapsed = serializers.SerializerMethodField()
    open_gaps = serializers.SerializerMethodField()

    def get_collapsed(self, sd):
        return [bool(c) for c in sd.collapsed]

    def get_open_gaps(self, sd):
        return [int(n) for n in sd.open_gaps()]


class LaurentFitSerializer(serializers.Serializer):
    """Hamiltonianos extraídos del ajuste de Laurent de F."""
    hamiltonians = HamiltonianSerializer()
    residual = serializers.FloatField()
    condition = serializers.FloatField()
    jmin = serializers.IntegerField()
    jmax = serializers.IntegerField()
    quartic_check = ComplexField()
    quartic_target = ComplexField()
