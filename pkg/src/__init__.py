# This file intentionally left blank.
# It signifies that the 'src' directory should be treated as a Python package,
# allowing for relative imports within the source code.