from django.contrib import admin
from django.urls import path, include

urlpatterns = [
    path('admin/', admin.site.urls),
    path('api/archives/', include('archives.urls')),
    path('api/sweeps/', include('sweeps.urls')),
]
