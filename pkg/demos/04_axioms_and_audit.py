"""
Exporting the axiomatisation and auditing an OBO file
=====================================================
"""

# %%
from funcrole import classify, export_axiomatisation, parse_obo, serialize_obo
from funcrole.obo_io import audit_obo
from funcrole.scenarios import get_scenario

kb = get_scenario("s35_label").build()
report = classify(kb)
print(serialize_obo(export_axiomatisation(kb, report)))

# %%
# An OBI-style placement of the label capability under the role branch.
obo = parse_obo("""
[Term]
id: OBI:role
name: role

[Term]
id: OBI:label_role
name: label role
is_a: OBI:role
""")
print(audit_obo(obo, kb, report).render())
