from django.apps import AppConfig


class HypedConfig(AppConfig):
    default_auto_field = "django.db.models.BigAutoField"
    name = "hyped"
    verbose_name = "Hypergraph s-distance oracles"
