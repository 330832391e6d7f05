from django.urls import path

from . import views

urlpatterns = [
    path('stats/', views.CompressStatsView.as_view(), name='archive-stats'),
]
