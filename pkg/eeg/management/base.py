"""
Shared plumbing for the bts management commands.
"""
from pathlib import Path

from django.core.management.base import BaseCommand, CommandError

from eeg.exceptions import BtsError


class BtsCommand(BaseCommand):
    """
    Adds the common --config/--seed/--classes/--out options and turns
    structured pipeline errors into a one-line CommandError.
    """

    requires_system_checks = []
    requires_migrations_checks = False
    out_help = 'Output file path'

    def add_arguments(self, parser):
        parser.add_argument('--config', type=Path, help='Flat key = value config file')
        parser.add_argument('--seed', type=int, help='Random seed (overrides config)')
        parser.add_argument('--classes', help="Vocabulary: '13', '2' or a comma-separated label list")
        parser.add_argument('--out', type=Path, help=self.out_help)

    def execute(self, *args, **options):
        try:
            return super().execute(*args, **options)
        except BtsError as exc:
            raise CommandError(exc.one_line()) from exc

    def require(self, options, name):
        value = options.get(name)
        if value is None:
            raise CommandError(f'--{name.replace("_", "-")} is required')
        return value

    def success(self, message):
        self.stdout.write(self.style.SUCCESS(message))
