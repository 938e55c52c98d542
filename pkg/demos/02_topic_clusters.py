"""Topic clustering walkthrough.

Fits LDA by collapsed Gibbs sampling on a corpus with two obvious themes,
assigns every document the topics whose proportion exceeds 0.3 (soft,
overlapping clusters), and contrasts raw topic tags with keyword-based
cluster labels.

    python demos/02_topic_clusters.py
"""

import random

from docfacets import textproc, topics

rng = random.Random(0)

SPACE = (
    "The orbiter telemetry shows stable thrust. Launch vehicles carry "
    "satellite payloads into transfer orbit while ground stations track "
    "telemetry downlink and orbit parameters."
)
KITCHEN = (
    "The recipe calls for fresh basil and garlic. Simmer the tomato sauce "
    "slowly, season the pasta water, and serve the sauce over warm plates "
    "with grated cheese."
)

# --- build a mixed corpus ---------------------------------------------------
# Documents need enough tokens for a topic proportion to clear the 0.3
# assignment threshold against the Dirichlet smoothing (alpha = 50/K).
texts = {}
for i in range(30):
    theme = SPACE if i < 15 else KITCHEN
    words = theme.split() * 2
    rng.shuffle(words)
    texts[f"doc{i:02d}"] = theme + " " + " ".join(words[:40])

tagged = {doc_id: textproc.analyze(text) for doc_id, text in texts.items()}
corpus = topics.prepare_corpus(tagged)
print(f"corpus: {len(corpus)} docs, choose_k -> {topics.choose_k(len(corpus))} topics")

# --- fit with a fixed seed: the run is exactly reproducible -----------------
state = topics.fit_lda(corpus, k=2, iterations=150, seed=42)
assignment = topics.assign_topics(state, threshold=0.3)
order = topics.rank_topics(state, assignment)
print(f"topic order by assigned documents: {order}")

for t in order:
    members = sorted(d for d, ts in assignment.items() if t in ts)
    print(f"\ntopic {t}: {len(members)} documents")
    print("  most probable words:", ", ".join(topics.topic_tags(state, t, n=8)))

    # KERA labels read far better than raw topic tags
    cluster = [(d, texts[d]) for d in members]
    cloud = topics.label_cluster_with_kera(cluster, k_tags=5)
    print("  keyword cloud:", ", ".join(f"{tag} ({n})" for tag, n in cloud))

# --- soft assignment: a blended document can join both clusters -------------
blend = SPACE + " " + KITCHEN
corpus["blend"] = [
    t.norm
    for t in textproc.analyze(blend)
    if t.pos not in (textproc.STOPWORD, textproc.NUMBER)
]
state2 = topics.fit_lda(corpus, k=2, iterations=150, seed=42)
blended = topics.assign_topics(state2)["blend"]
print(f"\nblended document topics (threshold 0.3): {sorted(blended)}")
