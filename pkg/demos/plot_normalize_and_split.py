"""
Cleaning Devanagari text and splitting sandhi
=============================================

Raw text is normalized first, then the shipped rule table splits the
common sandhi and samyoga patterns.
"""

from collections import Counter

from sanskrit_ats import default_rules, normalize, segment_sentences, split_sandhi
from sanskrit_ats.sandhi import audit_rules, split_report

raw = "तत्र गार्गी प्रसिद्धा इत्युच्यते!  किमस्ति (Sanskrit) तस्याः ज्ञानम्? नास्तिकः नास्ति।"
clean = normalize(raw)
print(clean)
print(segment_sentences(clean))

# one pass over the text, counting which rules fired
rules = default_rules()
fires = Counter()
split = split_sandhi(clean, rules, fires=fires)
print(split)
for rule, n in fires.items():
    print(f"  line {rule.line:3d}  {rule.pattern} -> {rule.replacement}  ({rule.anchor.value}) x{n}")

report = split_report(clean, split, fires)
print(f"tokens {report.total_before} -> {report.total_after}, unique {report.unique_before} -> {report.unique_after}")

# the table audit: shadowed rows, self-maps, rows that cleaning makes unreachable
audit = audit_rules(rules)
print(f"{len(rules)} rules, {len(audit.shadowed)} shadowed, {len(audit.identity)} identity, "
      f"{len(audit.unreachable)} unreachable, {len(audit.non_idempotent)} non-idempotent")
