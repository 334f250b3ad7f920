"""
Building the LM corpus and first-sentence pairs
===============================================

Paragraphs get source-prefixed ids, every sentence keeps the id of its
paragraph, and the first sentence of a paragraph can serve as a summary
of the rest.
"""

from sanskrit_ats import corpus, summetrics

article = ("रामः वनम् गच्छति । सीता अपि गच्छति ।\n\n"
           "लक्ष्मणः अनुगच्छति । भरतः राज्यम् न इच्छति । सः पादुके नयति ।")
mkb = corpus.SourceSpec("mkb", base_id=17680)
paras = corpus.source_paragraphs([article], mkb)
for rec in corpus.lm_records(paras):
    print(f"{rec.para_id}\t{rec.sentence}")

# a source without paragraph numbering shares one id per article
wiki = corpus.SourceSpec("wiki", base_id=900000, has_paragraph_ids=False)
print([pid for pid, _ in corpus.source_paragraphs([article, article], wiki)])

pairs = corpus.first_sentence_pairs(paras)
for p in pairs:
    print(p.id, "|", p.summary, "|", p.document)
    print("  compression", summetrics.compression_rate(p), "novel unigrams",
          summetrics.novel_ngram_pct(p, 1))

# train/test sizes use the floor of n * ratio
print(corpus.split_sizes(482517, 0.9))
train, test = corpus.shuffle_split(list(range(20)), 0.9, seed=42)
print(train, test)
