"""
Foot soles, shoe soles and hands
================================

One realizable, shock resistance, borne by three kinds of structure. The
foot sole gets it by descent, the shoe sole by design, and on the human hand
it is only a role because most humans do not walk on their hands.
"""

# %%
from funcrole import build_kb, classify, explain, parse_native, write_report

KB = """
species human
species chimp
related human chimp
structure human_foot_sole category organism-part in human
structure chimp_foot_sole category organism-part in chimp
structure human_hand category organism-part in human
structure chimp_hand category organism-part in chimp
structure shoe_sole category artifact
homolog human_foot_sole chimp_foot_sole
homolog human_hand chimp_hand
realizable shock_resistance
process absorbing_shock
realizes shock_resistance absorbing_shock
designed shoe_sole for absorbing_shock
bears human_foot_sole shock_resistance prevalence 0.99
bears chimp_foot_sole shock_resistance prevalence 0.99
bears human_hand shock_resistance prevalence 0.01
bears chimp_hand shock_resistance prevalence 0.95
bears shoe_sole shock_resistance
"""

kb = build_kb(parse_native(KB).records)
report = classify(kb)
print(write_report(report))

# %%
# The chimp hand has no homologous supporter that is itself prevalent: the
# human hand drops out, so mutual support between the two hands fails.
print(explain(kb, "chimp_hand", "shock_resistance").render())
print(explain(kb, "human_foot_sole", "shock_resistance").render())
