# ## Coupled colorings and flows against their polynomials

import itertools
import random

from chainpoly import (complete_graph, count_coupled_colorings, count_coupled_flows,
                       coupled_chromatic_poly, coupled_flow_poly, cycle_graph,
                       is_coupled_coloring)
from chainpoly.graph import random_orientation

k3 = complete_graph(3)

# ### A single coupled 2-multicoloring
#
# Colors are 0-based.  f1 agrees on vertices 0 and 1, and so does f2.

print(is_coupled_coloring(k3, [(0, 0, 1), (1, 1, 0)]))
print(is_coupled_coloring(k3, [(0, 0, 1), (0, 1, 0)]))

# ### Counting versus the polynomial
#
# Note the reversed variable order on the coloring side.

p = coupled_chromatic_poly(k3, 2)
print(p)
for pal in itertools.product(range(1, 4), repeat=2):
    print(pal, count_coupled_colorings(k3, pal), p(*pal))

# ### Flows with real group structure

k4 = complete_graph(4)
flow = coupled_flow_poly(k4, 2)
print(flow)
for groups in (["Z2", "Z2"], ["Z4", "Z3"], ["Z2xZ2", "Z3"]):
    print(groups, count_coupled_flows(k4, groups))
print("polynomial at (4, 3):", flow(4, 3))

# Z4 and Z2xZ2 give the same count: only the group order matters.

# ### Orientation does not matter

rng = random.Random(0)
c5 = cycle_graph(5)
print({count_coupled_flows(c5, ["Z3", "Z2"], random_orientation(c5, rng)) for _ in range(10)})
