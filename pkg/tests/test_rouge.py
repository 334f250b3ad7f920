from __future__ import annotations

import itertools

import pytest
from hypothesis import given, strategies as st

from sanskrit_ats.rouge import (
    RougeScore, f_score, format_table, lcs_length, read_pairs_tsv, read_texts_tsv, rouge_batch, rouge_l,
    rouge_n, score,
)

SEQ = st.lists(st.sampled_from("abc"), max_size=8)


def brute_lcs(a, b):
    """Longest subsequence of ``a`` that is also a subsequence of ``b``."""
    def is_subseq(s, t):
        it = iter(t)
        return all(x in it for x in s)
    for k in range(len(a), -1, -1):
        if any(is_subseq(c, b) for c in itertools.combinations(a, k)):
            return k
    return 0


def naive_rouge_n(ref, hyp, n):
    rg = [tuple(ref[i:i + n]) for i in range(len(ref) - n + 1)]
    hg = [tuple(hyp[i:i + n]) for i in range(len(hyp) - n + 1)]
    if not rg or not hg:
        return (0.0, 0.0, 0.0)
    pool = list(rg)
    hits = 0
    for g in hg:
        if g in pool:
            pool.remove(g)
            hits += 1
    r, p = hits / len(rg), hits / len(hg)
    return (r, p, 0.0 if hits == 0 else 2 * r * p / (r + p))


def test_identity():
    assert rouge_n("a b c", "a b c", 1) == (1.0, 1.0, 1.0)
    assert rouge_l("a b c", "a b c") == (1.0, 1.0, 1.0)


def test_rouge1_hand_example():
    s = rouge_n("a b c d", "a b x", 1)
    assert s.recall == 0.5
    assert round(s.precision, 4) == 0.6667 and round(s.f1, 4) == 0.5714


def test_rouge_l_hand_example():
    s = rouge_l("a b c d", "a c d")
    assert lcs_length("a b c d".split(), "a c d".split()) == 3
    assert s.recall == 0.75 and s.precision == 1.0 and round(s.f1, 4) == 0.8571


def test_disjoint_and_empty():
    assert rouge_n("a b", "c d", 1) == (0, 0, 0)
    assert rouge_l("a b", "") == (0, 0, 0)
    assert rouge_n("a", "a", 2) == (0, 0, 0)


def test_bad_order():
    with pytest.raises(ValueError):
        rouge_n("a", "a", 0)
    with pytest.raises(ValueError):
        score("a", "a", "W")


def test_f_score_zero():
    assert f_score(0.0, 0.0) == 0.0


def test_batch_examples():
    assert rouge_batch([("a b c", "a b")])["1"] == rouge_n("a b c", "a b", 1)
    # F of 0.2 and 0.4 average to 0.3
    one = RougeScore.from_counts(1, 9, 1)
    assert round(one.f1, 10) == 0.2
    pairs = [(["x"] * 9, ["x"]), (["x"] * 4, ["x"])]
    assert rouge_batch(pairs, ["1"])["1"].f1 == pytest.approx(0.3)
    with pytest.raises(ValueError):
        rouge_batch([])


@given(st.lists(st.tuples(SEQ, SEQ), min_size=1, max_size=10))
def test_batch_matches_oracle_mean(pairs):
    table = rouge_batch(pairs)
    for v, n in (("1", 1), ("2", 2)):
        rows = [naive_rouge_n(a, b, n) for a, b in pairs]
        mean = [sum(col) / len(rows) for col in zip(*rows)]
        assert list(table[v]) == pytest.approx(mean)


@given(SEQ, SEQ)
def test_lcs_oracle(a, b):
    assert lcs_length(a, b) == brute_lcs(a, b)


@given(SEQ, SEQ, st.integers(1, 3))
def test_rouge_n_oracle(a, b, n):
    assert tuple(rouge_n(a, b, n)) == pytest.approx(naive_rouge_n(a, b, n))


@given(SEQ, SEQ)
def test_duality(a, b):
    for ab, ba in ((rouge_n(a, b, 1), rouge_n(b, a, 1)), (rouge_n(a, b, 2), rouge_n(b, a, 2)),
                   (rouge_l(a, b), rouge_l(b, a))):
        assert ab.recall == ba.precision and ab.precision == ba.recall
        assert ab.f1 == pytest.approx(ba.f1)


@given(SEQ, SEQ)
def test_ordering_and_ceiling(a, b):
    assert rouge_l(a, b).recall <= rouge_n(a, b, 1).recall
    for s in (rouge_n(a, b, 1), rouge_n(a, b, 2), rouge_l(a, b)):
        assert all(0.0 <= x <= 1.0 for x in s)


@given(SEQ.filter(bool), SEQ)
def test_appending_reference_gives_full_recall(a, b):
    assert rouge_l(a, b + a).recall == 1.0
    assert rouge_n(a, b + a, 1).recall == 1.0


def test_readers_and_table(tmp_path):
    p = tmp_path / "p.tsv"
    p.write_text("id\treference\thypothesis\n1\tअ ब\tअ\n", encoding="utf-8")
    assert read_pairs_tsv(p) == [("1", "अ ब", "अ")]
    t = tmp_path / "t.tsv"
    t.write_text("1\tअ ब\n2\tग\n", encoding="utf-8")
    assert read_texts_tsv(t) == {"1": "अ ब", "2": "ग"}
    t.write_text("1\tअ\tब\n", encoding="utf-8")
    with pytest.raises(ValueError, match=":1:"):
        read_texts_tsv(t)
    out = format_table({"1": RougeScore(1.0, 0.5, 2 / 3)})
    assert out == "variant\trecall\tprecision\tf1\n1\t1.000\t0.500\t0.667\n"
