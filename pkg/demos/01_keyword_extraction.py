"""Keyword extraction walkthrough.

Scores adjacent word pairs as collocations, filters them to noun phrases,
adds proper-noun unigrams, and ranks everything by the harmonic mean of
strength (alpha) and position (beta).  Run directly:

    python demos/01_keyword_extraction.py
"""

from docfacets import kera, textproc

SAMPLE = """\
Stream data mining poses unique challenges for analysts. Data mining over
unbounded streams requires incremental algorithms, and the THOR system
demonstrates one such design. THOR combines data mining with adaptive
sampling. Adaptive sampling keeps memory bounded while stream data arrives
continuously. Evaluation shows data mining quality holds even when adaptive
sampling discards most records. THOR ships with tooling for replaying
streams, and analysts report the adaptive sampling design integrates well
with existing data mining dashboards.
"""

# --- tokenization and tagging ---------------------------------------------
tokens = textproc.analyze(SAMPLE)
print(f"{len(tokens)} tokens, {tokens[-1].sentence_id + 1} sentences")
print("first few tags:", [(t.surface, t.pos) for t in tokens[:6]])

# --- collocation scores (log-likelihood ratio) -----------------------------
print("\ncollocation scores (LLR, min_count=2):")
for pair, score in sorted(
    kera.extract_collocations(tokens).items(), key=lambda kv: -kv[1]
):
    print(f"  {' '.join(pair):24s} {score:8.3f}")

# --- the full ranking -------------------------------------------------------
print("\ntop 5 keywords:")
for cand in kera.extract_keywords_from_tokens(tokens, k=5):
    print(
        f"  {cand.text:24s} kind={cand.kind:14s} "
        f"alpha={cand.alpha:.3f} beta={cand.beta:.3f} score={cand.score:.3f}"
    )

# --- optional pruning variations -------------------------------------------
# Keep only upper-case proper-noun unigrams (system/program names), and
# drop unigrams that already appear inside an extracted bigram.
options = kera.KeraOptions(prune_upper_case=True, drop_embedded_unigrams=True)
print("\nwith pruning variations on:")
for cand in kera.extract_keywords_from_tokens(tokens, k=5, options=options):
    print(f"  {cand.text:24s} score={cand.score:.3f}")

# --- aggregating into a tag cloud -------------------------------------------
docs = [
    ("doc-1", [c.text for c in kera.extract_keywords(SAMPLE, k=5)]),
    ("doc-2", ["data mining", "adaptive sampling"]),
    ("doc-3", ["data mining"]),
]
print("\ntag cloud over three documents (tag, doc count):")
for tag, count in kera.build_tag_cloud(docs):
    print(f"  {tag:24s} {count}")
