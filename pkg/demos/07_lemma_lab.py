"""Exhaustive lemma verification with deterministic, replayable reports.

Each verifier sweeps every instance under its caps and returns a report
whose canonical JSON is byte-stable for a given seed.  A counterexample, if
one ever appeared, would carry a certificate that replay() can re-check
from scratch.
"""

from forcelab.lemmalab import (
    replay,
    verify_amalgam_claims,
    verify_bcd,
    verify_embedding_criteria,
    verify_sweet_laws,
)

report = verify_bcd(3, budget_ms=0)
print("nested-subalgebra lifting:", report.verdict,
      f"({report.checked} instances)")
print("hypothesis statistics:", dict(report.hypothesis_stats))

embed = verify_embedding_criteria(4, budget_ms=0)
print("suborder criteria agree:", embed.verdict,
      f"({embed.checked} inclusions,",
      embed.hypothesis_stats["complete_suborders"], "complete)")

amalgam = verify_amalgam_claims(budget_ms=0)
print("amalgam claims:", amalgam.verdict,
      f"({amalgam.hypothesis_stats['membership_pairs']} membership pairs)")

sweet = verify_sweet_laws(count=100, seed=0, budget_ms=0)
print("sweetness laws on random chains:", sweet.verdict,
      f"({sweet.checked} triples)")

# a hand-made certificate for a model that genuinely fails validation
cert = {
    "schema": "forcelab/1",
    "kind": "sweet",
    "document": (
        "poset P { elements: a b bot; bottom: bot; covers: bot<a, bot<b; }\n"
        "sweet M on P { dense: a; E0: [a]; }\n"
    ),
    "data": {"law": "validate"},
}
print("replay confirms the crafted failure:", replay(cert))
