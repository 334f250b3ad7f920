"""
ROUGE-1, ROUGE-2 and ROUGE-L
============================

Scores are computed on whitespace tokens and macro-averaged over pairs.
"""

from sanskrit_ats import rouge

ref = "a b c d"
for hyp in ("a b x", "a c d", "d c b a", ""):
    scores = {v: rouge.score(ref, hyp, v) for v in rouge.VARIANTS}
    print(f"{hyp!r:10}", "  ".join(f"R{v} f1={s.f1:.4f}" for v, s in scores.items()))

pairs = [("राम वनम् गच्छति", "राम गच्छति"), ("सा ग्रन्थम् पठति", "सा पठति ग्रन्थम्")]
print(rouge.format_table(rouge.rouge_batch(pairs)))
