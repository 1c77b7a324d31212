"""Allow ``python -m sbgroups`` as an alias for the console script."""

from .cli import main

main()
