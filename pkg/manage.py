#!/usr/bin/env python
"""
HypED management entry point.

Runs the oracle commands by their module names (``python manage.py build``,
``python manage.py sample_queries``) and the test suite
(``python manage.py test hyped``). The ``hyped`` console script covers the
same commands with dashed names.
"""
import os
import sys


def main():
    os.environ.setdefault("DJANGO_SETTINGS_MODULE", "core.settings")
    try:
        from django.core.management import execute_from_command_line
    except ImportError as exc:
        raise ImportError(
            "Couldn't import Django. Install the requirements "
            "(pip install -r requirements.txt) into the active virtual environment."
        ) from exc
    execute_from_command_line(sys.argv)


if __name__ == "__main__":
    main()
