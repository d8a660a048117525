# This file intentionally left blank.
# It lets the test modules share helpers through imports like
# 'from tests.oracles import in_ideal_bounded'.
