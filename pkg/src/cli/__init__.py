# This file intentionally left blank.
# It signifies that the 'cli' directory should be treated as a Python package,
# enabling `python -m src.cli.main`.
