"""Classifier facet walkthrough.

Trains a binary linear SVM for a "critical technology" with the two-step
active-learning recipe (informative negatives near the hyperplane, then
1:1 balancing), tags unlabeled documents, and mines the most discriminative
terms by information gain.

    python demos/03_classifiers_active_learning.py
"""

import random

from docfacets import supervised

rng = random.Random(1)

# --- a corpus where the technology of interest is a small minority ----------
tech_words = ["railgun", "capacitor", "projectile", "muzzle", "armature"]
office_words = ["invoice", "meeting", "budget", "travel", "printer",
                "holiday", "policy", "lunch", "parking", "schedule"]

presence = {}
for i in range(12):  # only a few positives, as in real casework
    presence[f"tech{i:02d}"] = set(rng.sample(tech_words, 3)) | set(
        rng.sample(office_words, 2)
    )
for i in range(300):
    presence[f"office{i:03d}"] = set(rng.sample(office_words, 5))

vocab = supervised.Vocabulary.from_presence(presence)
positives = sorted(d for d in presence if d.startswith("tech"))[:8]
pool = sorted(d for d in presence if d not in positives)
print(f"{len(positives)} positives, pool of {len(pool)} unlabeled documents")

# --- two-step sampling + final fit ------------------------------------------
model = supervised.train_with_active_learning(
    "Technology-X", positives, pool, presence, vocab, seed=0
)
print(f"final training set: {len(model.training_manifest)} docs "
      f"(balanced), train accuracy {model.train_accuracy:.2f}")

# --- tag the rest of the collection -----------------------------------------
tags = {d: supervised.predict_tag([model], presence[d]) for d in presence}
found = sorted(d for d, t in tags.items() if t == "Technology-X")
print(f"tagged {len(found)} documents as Technology-X: {found[:6]} ...")
other = sum(1 for t in tags.values() if t == "other")
print(f"{other} documents fell back to the 'other' tag")

# --- information-gain term mining --------------------------------------------
labeled = supervised.LabeledSet.of(
    positives, rng.sample([d for d in pool if d.startswith("office")], 40)
)
print("\ntop discriminative terms (information gain):")
for word, gain in supervised.top_discriminative_terms(labeled, presence, n=5):
    print(f"  {word:12s} IG={gain:.3f}")

# These terms can seed a mention spec: write them out as category/term lines.
lines = [
    f"TECH-X\tterm\t{word}"
    for word, gain in supervised.top_discriminative_terms(labeled, presence, n=5)
    if gain > 0.1
]
print("\nmention spec seeded from the classifier training set:")
print("\n".join(lines))

# --- the report-type filter is the same machinery, one-vs-rest ---------------
report_presence = {
    "r1": {"experiment", "results", "method"},
    "r2": {"experiment", "analysis", "figure"},
    "t1": {"procedure", "checklist", "apparatus"},
    "t2": {"procedure", "verification", "apparatus"},
    "p1": {"milestone", "contract", "deliverable"},
    "p2": {"milestone", "funding", "deliverable"},
    "o1": {"lunch", "parking"},
    "o2": {"holiday", "travel"},
}
manifest = {
    "TECHNICAL": {"r1", "r2"},
    "TEST": {"t1", "t2"},
    "PROGRAMMATIC": {"p1", "p2"},
    "OTHER": {"o1", "o2"},
}
rvocab = supervised.Vocabulary.from_presence(report_presence)
models = []
for label in supervised.REPORT_TYPES:
    rest = {d for other_label, ids in manifest.items() if other_label != label for d in ids}
    balanced = supervised.balance_training_set(manifest[label], rest, seed=0)
    models.append(
        supervised.train_linear_svm(balanced, report_presence, rvocab, label, seed=0)
    )
probe = {"experiment", "figure", "results"}
print(f"\nreport type for {sorted(probe)}: "
      f"{supervised.classify_report_type(models, probe)}")
