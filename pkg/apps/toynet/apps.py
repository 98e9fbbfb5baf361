from django.apps import AppConfig


class ToynetConfig(AppConfig):
    default_auto_field = 'django.db.models.BigAutoField'
    name = 'apps.toynet'
