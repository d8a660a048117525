# This file intentionally left blank.
# It signifies that the 'geometry' directory should be treated as a Python package,
# enabling imports like 'from src.geometry.blowup import blowup_charts'.
