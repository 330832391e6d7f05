import logging

from rest_framework import permissions, status
from rest_framework.response import Response
from rest_framework.views import APIView

from weights.exceptions import CodingError

from .serializers import CompressRequestSerializer, CompressStatsSerializer
from .service import CompressOptions, compress_bytes, strip_punctuation

logger = logging.getLogger(__name__)


class CompressStatsView(APIView):
    """Compress the posted text and report the same stats as the compress command."""

    permission_classes = [permissions.AllowAny]

    def post(self, request):
        serializer = CompressRequestSerializer(data=request.data)
        if not serializer.is_valid():
            return Response({"error": serializer.errors}, status=status.HTTP_400_BAD_REQUEST)
        data = dict(serializer.validated_data)
        text = data.pop('text').encode('utf-8')
        if data.pop('strip_punct'):
            text = strip_punctuation(text)
        try:
            _container, stats = compress_bytes(text, CompressOptions(**data))
        except CodingError as exc:
            logger.info("stats request rejected: %s", exc)
            return Response({"error": str(exc)}, status=status.HTTP_400_BAD_REQUEST)
        return Response(CompressStatsSerializer(stats).data, status=status.HTTP_200_OK)
