from django.contrib import admin
from .models import SweepResult, SweepRun

# Register your models here.
admin.site.register(SweepRun)
admin.site.register(SweepResult)
