# This file intentionally left blank.
# It signifies that the 'algebra' directory should be treated as a Python package,
# enabling imports like 'from src.algebra.fpalg import make_algebra'.
