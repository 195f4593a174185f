"""Interaction-free bomb testing in a Mach-Zehnder interferometer."""
# %%
from fractions import Fraction

from labstate.network import Bomb, ev_network, ev_scenario, run_ev, stockpile_yield
from labstate.quantum import format_labstate

for bomb in Bomb:
    print(f"--- {bomb.value} bomb:", [type(c).__name__ for c in ev_network(bomb).components])
    sc = ev_scenario(bomb)
    for n, state in enumerate(sc.run()):
        print(f"  stage {n}: {format_labstate(state)}")
    for name, p in sc.probabilities().items():
        print(f"  P({name}) = {p}")

# %%
# A stockpile where a fraction w of the bombs is live.
for w in (Fraction(0), Fraction(1, 3), Fraction(1, 2), Fraction(1)):
    p = run_ev(w)
    print(f"w = {w}:", {k: str(v) for k, v in p.items()})

# %%
# Keep the detector-7 bombs, retest the detector-6 ones.
for n in (1, 2, 3, 5, 10):
    print(n, "sweeps:", stockpile_yield(n), f"({float(stockpile_yield(n)):.4f})")
print("limit:", stockpile_yield())
