# This file intentionally left blank.
# It signifies that the 'config' directory should be treated as a Python package,
# enabling imports like 'from src.config.settings import Settings'.