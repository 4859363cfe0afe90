"""
Drop-out and drop-in species
============================

Hand walking (drop-out) and speech (drop-in) are roles in humans. Adding an
extinct relative that spoke turns speech into a biological function.
"""

# %%
from funcrole import build_kb, classify, explain, parse_native
from funcrole.scenarios import get_scenario

larynx = get_scenario("larynx_speech")
kb = larynx.build()
print(explain(kb, "human_larynx", "speech").render())

# %%
hands = get_scenario("hand_walking").build()
print(explain(hands, "human_hand", "walking_on").render())

# %%
# A hypothetical speaking extinct relative supplies cross-species support.
extended = larynx.kb_source + """
species extinct_hominin extinct
related human extinct_hominin
structure hominin_larynx category organism-part in extinct_hominin
homolog human_larynx hominin_larynx
bears hominin_larynx speech prevalence 0.9
"""
kb2 = build_kb(parse_native(extended).records)
print(classify(kb2).label("human_larynx", "speech"))
