"""Classical registers: vacuum, signality, permutation flows and mixtures."""
# %%
from fractions import Fraction

from labstate.bits import A
from labstate.register import (
    ClassicalMixture, ClassicalObservable, PermutationFlow, PhysicalRegister,
    apply_site_op, contextual_vacuum, count_dynamics, cycle_analysis,
    evolve_mixture, format_cycles, format_occupancy, mixture_expectation,
    parse_occupancy, signal_class, signality,
)

vac = contextual_vacuum(4)
print(vac)
print("remove detector 2:", apply_site_op(A, 2, vac))

# %%
k = parse_occupancy("|00101101)")
print("index", k, "signality", signality(k))
print("signality-2 states of rank 4:", [format_occupancy(j, 4) for j in signal_class(4, 2)])

# %%
# A state permutation and its cycles.
flow = PermutationFlow.from_cycles("(0 3 5)(1 2)", 3)
print(format_cycles(flow.perm), "order", flow.order())
for cyc in cycle_analysis(flow):
    print("  period", len(cyc), [format_occupancy(j, 3) for j in cyc])

# %%
# Moving signals between detectors keeps their number.
shift = PermutationFlow.from_sites([2, 3, 4, 1])
k = parse_occupancy("|0011)")
for _ in range(5):
    print(format_occupancy(k, 4), signality(k))
    k = shift(k)

# %%
print(count_dynamics(2), count_dynamics(3))

# %%
# A mixture evolves by carrying its weights along the flow.
reg = PhysicalRegister.of_rank(2)
mix = ClassicalMixture({0: Fraction(1, 4), 1: Fraction(3, 4)}, reg.rank)
signals = ClassicalObservable({j: signality(j) for j in range(reg.dim)}, reg.rank)
step = PermutationFlow.full_cycle(2)
for n in range(4):
    print(n, dict(mix.weights), "<signality> =", mixture_expectation(signals, mix))
    mix = evolve_mixture(mix, step)
