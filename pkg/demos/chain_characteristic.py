# ## Chain characteristic polynomials of complete graphs

from chainpoly import (chain_characteristic, coefficients_by_total_degree, complete_graph,
                       is_log_concave, is_unimodal, make_graphic, make_uniform)
from chainpoly.chains import ROUTES
from chainpoly.polyring import MultiPoly

# ### The triangle, three ways

k3 = make_graphic(complete_graph(3))
for route in ROUTES:
    print(f"{route:>11}: {chain_characteristic(k3, 2, route)}")

# ### K4 and K5
#
# K5 has ten edges, so the defining sum runs over 3**10 chains.

for n in (4, 5):
    chi = chain_characteristic(make_graphic(complete_graph(n)), 2)
    print(f"K{n}: {chi}")
    print("  value at (-1, -1):", chi(-1, -1))

# Those values (13, 75, 541 with K3 included) are the ordered Bell numbers.

# ### Boolean matroids

for n in range(1, 4):
    for k in (1, 2, 3):
        chi = chain_characteristic(make_uniform(n, n), k)
        print(f"U({n},{n}) k={k}: value at -1 = {chi(*[-1] * k)}")

# The magnitude is always (1+k)**n; the sign is (-1)**(k*n).

# ### Collapsing to one variable

chi3 = chain_characteristic(make_graphic(complete_graph(4)), 3)
t = MultiPoly.var("t", ("t",))
diag = chi3.substitute({"t1": t, "t2": t, "t3": t}, vars=("t",))
seq = coefficients_by_total_degree(diag)
print(diag)
print("log-concave:", is_log_concave(seq), " unimodal:", is_unimodal(seq))
