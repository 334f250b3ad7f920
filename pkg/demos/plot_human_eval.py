"""
Aggregating human judgements
============================

Scaled ratings are counted as high (4 or 5) against the rest; best-worst
votes give each system best minus worst.
"""

from sanskrit_ats import human_eval

table = human_eval.published_table("best_worst")
votes = [human_eval.BWVote(f"e{i}", row["system"], kind)
         for row in table for kind in ("best", "worst") for i in range(row[kind])]
scores = human_eval.best_worst(votes)
print(human_eval.best_worst_table(scores))

# rows whose printed score disagrees with best minus worst
for row in table:
    if scores[row["system"]].score != row["score"]:
        print("inconsistent:", row)

ratings = [human_eval.Rating("e1", "a", "overall", s) for s in (5, 4, 3, 2)]
print(human_eval.scaled_counts(ratings, "overall"))
