"""
The simplex solver on its own
=============================

Every interval endpoint is an LP optimum; the solver is usable directly.
"""

import numpy as np

from shapeci import lp

# minimize b subject to 2 <= b <= 5
sol = lp.solve(lp.LpProblem("minimize", [1.0], [[-1.0], [1.0]], [-2.0, 5.0]))
print(sol.status, sol.objective, sol.beta)

# contradictory bounds
print(lp.solve(lp.LpProblem("minimize", [1.0], [[1.0], [-1.0]], [-1.0, -1.0])).status)

# a free direction
print(lp.solve(lp.LpProblem("maximize", [1.0, 1.0], [[1.0, -1.0]], [1.0])).status)

###############################################################################
# The same problems can be written in the plain-text format read by
# ``shapeci lp solve``.

text = """\
max 2 3
1 1
1 0 4
0 1 3
1 2 8
"""
print(lp.format_solution(lp.solve(lp.parse_problem(text))), end="")
