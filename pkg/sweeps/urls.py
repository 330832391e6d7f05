from django.urls import path
from . import views

urlpatterns = [
    path('', views.SweepRunListView.as_view(), name='sweep-list'),
    path('<int:run_id>/', views.SweepRunDetailView.as_view(), name='sweep-detail'),
]
