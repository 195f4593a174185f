"""Writing, running and rendering scenario files."""
# %%
from labstate.scenario import builtin_text, parse_scenario, render_scenario
from labstate.quantum import format_labstate

print(builtin_text("ev-active"))

# %%
# A lossless beamsplitter followed by a second one: a balanced interferometer.
text = """
esds 5
init A1
stage first
  map A1 -> (i/r2)*A2 + (-1/r2)*A3
stage second
  map A2 -> (i/r2)*A4 + (-1/r2)*A5
  map A3 -> (-1/r2)*A4 + (i/r2)*A5
outcome left : signal@4
outcome right : signal@5
"""
sc = parse_scenario(text)
print(format_labstate(sc.final_state()))
print(sc.probabilities())

# %%
print(render_scenario(sc))

# %%
try:
    parse_scenario("esds 2\ninit A1\nstage s\n  map A1 -> A7\n")
except Exception as e:
    print(type(e).__name__, "-", e)
