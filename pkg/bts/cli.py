"""Console entry point: `bts synth|train|eval|decode|report ...`.

Every subcommand is a Django management command, so `python manage.py train`
and `bts train` are the same thing.
"""
import os
import sys


def main(argv=None):
    """Dispatch `bts <command> [options]` to the management framework."""
    os.environ.setdefault('DJANGO_ENVIRONMENT', 'development')
    os.environ.setdefault('DJANGO_SETTINGS_MODULE', 'bts.settings')

    from django.core.management import execute_from_command_line

    args = sys.argv[1:] if argv is None else list(argv)
    execute_from_command_line(['bts', *args])


if __name__ == '__main__':
    main()
