from django.apps import AppConfig


class HeadersConfig(AppConfig):
    default_auto_field = 'django.db.models.BigAutoField'
    name = 'headers'
