"""Bit operators on the four-element power set of a bit."""
# %%
from labstate.bits import (
    ABAR, BASIC_OPS, D, NAMED_OPS, A, PBitState, compose, complement,
    enumerate_bitops, format_table, union,
)

for s in PBitState:
    print(f"{s.name:<7} subset={set(s.subset) or '{}'}  complement={complement(s).name}")

print("ground u signal =", union(PBitState.GROUND, PBitState.SIGNAL).name)

# %%
# Named operators as image tables: image[j] is O|j).
for name, op in NAMED_OPS.items():
    print(f"{name:<5}", [PBitState(x).name[0] for x in op.image])

# %%
print(format_table(BASIC_OPS))

# %%
# Every map from four states to four states is a bit operator.
ops = enumerate_bitops()
print(len(ops), "operators")
print("A after Abar:", compose(A, ABAR).label(), "  Abar after A:", compose(ABAR, A).label())
print("D twice is D:", compose(D, D) == D)

# %%
# Matrices compose the same way the operators do.
print(A.matrix() @ ABAR.matrix())
print((A @ ABAR).matrix())
