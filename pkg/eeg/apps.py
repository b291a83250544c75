from django.apps import AppConfig


class EegConfig(AppConfig):
    default_auto_field = 'django.db.models.BigAutoField'
    name = 'eeg'
    verbose_name = 'EEG recordings'
