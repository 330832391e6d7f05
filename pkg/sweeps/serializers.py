from rest_framework import serializers
from .models import SweepResult, SweepRun


class SweepResultSerializer(serializers.ModelSerializer):
    class Meta:
        model = SweepResult
        exclude = ['run']


class SweepRunSerializer(serializers.ModelSerializer):
    result_count = serializers.SerializerMethodField()

    class Meta:
        model = SweepRun
        fields = '__all__'

    def get_result_count(self, obj):
        return obj.results.count()


class SweepRunDetailSerializer(SweepRunSerializer):
    results = SweepResultSerializer(many=True, read_only=True)
