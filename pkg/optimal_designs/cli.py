"""
Entry point of the ``optimal-designs`` console script.

Runs the management commands (``search``, ``evaluate``, ``robustness``,
``reproduce``) without a Django project:

    optimal-designs search --model M1 --criterion DP --n 16 --seed 1 --out results/
"""
import os
import sys


def main(argv=None):
    """
    Dispatch ``argv`` to the management command it names.
    """
    os.environ.setdefault("DJANGO_SETTINGS_MODULE", "optimal_designs.settings")
    from django.core.management import execute_from_command_line  # pylint: disable=import-outside-toplevel

    argv = sys.argv[1:] if argv is None else list(argv)
    execute_from_command_line(["optimal-designs", *argv])


if __name__ == "__main__":
    main()
