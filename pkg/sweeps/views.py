from django.shortcuts import get_object_or_404
from rest_framework import permissions, status
from rest_framework.response import Response
from rest_framework.views import APIView

from .models import SweepRun
from .serializers import SweepRunDetailSerializer, SweepRunSerializer


class SweepRunListView(APIView):
    permission_classes = [permissions.AllowAny]

    def get(self, request):
        runs = SweepRun.objects.all()
        family = request.query_params.get('family')
        if family:
            runs = runs.filter(family=family)
        serializer = SweepRunSerializer(runs, many=True)
        return Response(serializer.data, status=status.HTTP_200_OK)


class SweepRunDetailView(APIView):
    permission_classes = [permissions.AllowAny]

    def get(self, request, run_id):
        run = get_object_or_404(SweepRun.objects.prefetch_related('results'), id=run_id)
        serializer = SweepRunDetailSerializer(run)
        return Response(serializer.data, status=status.HTTP_200_OK)
