# ## Chain Möbius functions and signs

from chainpoly import (chain_characteristic, chain_mobius_table, complete_graph, flats,
                       make_graphic, make_uniform, mobius_poly, verify_identities,
                       verify_sign_alternation)
from chainpoly.matroid import bits

m = make_graphic(complete_graph(4))
lat = flats(m)
print(len(lat), "flats, ranks", lat.ranks)

# ### Length-two chains reproduce the classical Möbius function

mu2 = chain_mobius_table(m, 2)
same = all(v == lat.mobius[lat.index[x], lat.index[y]] for (x, y), v in mu2.items())
print("mu^2 == mu:", same)

# ### Longer chains
#
# Every value is nonzero with sign prod (-1)**rk(X_i).

mu3 = chain_mobius_table(m, 3)
for chain, value in list(mu3.items())[:8]:
    print([bits(x) for x in chain], value)
print(verify_sign_alternation(m, 3).lines())

# ### The Möbius polynomial from chi^2

print(mobius_poly(m))
print(chain_characteristic(m, 2))

# ### Identity suite

for name, mat in (("K4", m), ("U(2,4)", make_uniform(2, 4))):
    rep = verify_identities(mat, 2)
    print(name, rep.lines())
