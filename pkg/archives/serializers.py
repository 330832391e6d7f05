from rest_framework import serializers

from headers.header import Engine, Mode
from weights.trajectory import Variant


class CompressRequestSerializer(serializers.Serializer):
    text = serializers.CharField(trim_whitespace=False, allow_blank=True)
    engine = serializers.ChoiceField(choices=Engine.choices, default=Engine.HUFFMAN)
    variant = serializers.ChoiceField(choices=Variant.choices, default=Variant.WEIGHTED)
    g = serializers.CharField(required=False, allow_null=True, default=None)
    mode = serializers.ChoiceField(choices=Mode.choices, default=Mode.EXACT)
    fast_bits = serializers.IntegerField(required=False, allow_null=True, default=None, min_value=64)
    strip_punct = serializers.BooleanField(default=False)


class CompressStatsSerializer(serializers.Serializer):
    engine = serializers.CharField()
    variant = serializers.CharField()
    g = serializers.CharField()
    mode = serializers.CharField()
    n = serializers.IntegerField()
    net_bits = serializers.IntegerField()
    header_bits = serializers.IntegerField()
    frame_bits = serializers.IntegerField()
    net_ratio = serializers.FloatField()
    combined_ratio = serializers.FloatField()
