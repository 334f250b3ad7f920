"""
Training ledgers, perplexity and early stopping
===============================================

Perplexity is the exponential of the evaluation loss.  Replaying early
stopping on a ledger shows which settings agree with the recorded run.
"""

from sanskrit_ats import ledger

bert = ledger.load_fixture("bert")
last = bert.records[-1]
print(f"epoch {last.epoch}: eval loss {last.eval_loss} -> perplexity {ledger.perplexity(last.eval_loss):.4f}"
      f" (printed {last.perplexity})")

for patience in (3, 6, 8):
    print(f"patience {patience}:", ledger.early_stop(bert.records, patience=patience))

# the labels follow the stated rule, which inverts the usual convention
first = ledger.load_fixture("bert2bert").records[0]
print(first, ledger.fit_class(first, epsilon=0.1))
