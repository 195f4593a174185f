"""Electron and positron interferometers sharing an annihilation point."""
# %%
from labstate.network import hardy_scenario, run_hardy
from labstate.quantum import check_isometry, format_labstate

sc = hardy_scenario()
for smap in sc.stages:
    print(smap.name, "isometric:", check_isometry(smap))
    for key, image in sorted(smap.rules.items(), key=lambda kv: sorted(kv[0])):
        print("   ", sorted(s.id for s in key), "->", len(image), "terms")

# %%
for n, state in enumerate(sc.run()):
    print(f"stage {n}: {format_labstate(state)}")

# %%
p = run_hardy()
for name, v in p.items():
    print(f"P({name}) = {v}")
print("total", sum(p.values()))

# %%
# Relabelling electron and positron arms gives the same table.
print(run_hardy(swap_arms=True) == p)
