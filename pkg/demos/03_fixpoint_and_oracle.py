"""
Greatest fixpoint versus exhaustive enumeration
===============================================

The biological set is computed by shrinking the candidate set under the
support operator. On small knowledge bases this is checked against the union
of every post-fixpoint found by enumerating all subsets.
"""

# %%
import random
import sys
from pathlib import Path

sys.path.insert(0, str(Path(__file__).resolve().parent.parent / "tests"))
from kbgen import random_records  # noqa: E402

from funcrole import biological_functions, brute_force_biological, build_kb, candidate_set, greatest_fixpoint  # noqa: E402

agree = 0
for seed in range(100):
    kb = build_kb(random_records(random.Random(seed), dense=True))
    fast = set(biological_functions(kb))
    agree += fast == brute_force_biological(kb)
    if seed < 5:
        bio, rounds = greatest_fixpoint(kb)
        print(f"seed {seed}: {len(candidate_set(kb))} candidates, {len(bio)} biological, {rounds} shrinking round(s)")
print(f"{agree}/100 agree with enumeration")
