from django.apps import AppConfig


class HuffmanConfig(AppConfig):
    default_auto_field = 'django.db.models.BigAutoField'
    name = 'huffman'
