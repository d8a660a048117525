# This file intentionally left blank.
# It signifies that the 'utils' directory should be treated as a Python package,
# enabling imports like 'from src.utils.logging import get_logger'.