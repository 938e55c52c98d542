"""End-to-end faceted search walkthrough, entirely through the library.

Builds a small directory tree, ingests it, tags documents with keywords and
mentions, indexes everything, and then refines a search facet by facet the
way the browser UI does.

    python demos/05_faceted_search.py
"""

import tempfile
from pathlib import Path

from docfacets import kera, mentions
from docfacets.facetindex import FacetIndex, FacetQuery
from docfacets.ingest import walk_and_extract

root = Path(tempfile.mkdtemp(prefix="facets-demo-"))

FILES = {
    "reports/alpha.txt": "Data mining results for the alpha trial. Data mining "
                         "converged quickly. Contact 123-45-6789 for records.",
    "reports/beta.txt": "Data mining results for the beta trial. Data mining "
                        "needs more samples.",
    "logs/run1.log": "job started. job finished. data mining pass complete. "
                     "data mining pass complete.",
    "web/index.html": "<html><body><p>Neural networks overview. Neural "
                      "networks generalize.</p></body></html>",
    "notes.md": "Neural networks reading list. Neural networks tutorials.",
}
for rel, content in FILES.items():
    path = root / rel
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(content, encoding="utf-8")

# --- ingest ------------------------------------------------------------------
docs = list(walk_and_extract(root))
print(f"ingested {len(docs)} documents from {root}")

# --- tag and index -----------------------------------------------------------
spec = mentions.parse_mention_spec("PII\tregex\t\\d{3}-\\d{2}-\\d{4}", is_text=True)
index = FacetIndex()
for doc in docs:
    keywords = [c.text for c in kera.extract_keywords(doc, k=5)]
    hits = mentions.scan_text(doc.text, spec)
    index.index_document(doc, {"keywords": keywords, "mentions": set(hits)})

# --- search, then refine like the UI does ------------------------------------
everything = index.search(FacetQuery())
print("\nfull corpus facet counts:")
print("  folders :", everything.facet_counts["folder"])
print("  keywords:", everything.facet_counts["keywords"])

narrowed = index.search(FacetQuery(filters={"folder": frozenset({"reports"})}))
print(f"\nfolder=reports -> {len(narrowed.doc_ids)} docs; keyword cloud "
      f"re-generates: {narrowed.facet_counts['keywords']}")

refined = index.search(
    FacetQuery(
        text_terms=("mining",),
        filters={"folder": frozenset({"reports"}), "mentions": frozenset({"PII"})},
    )
)
print(f"\nmining + folder=reports + mentions=PII -> {len(refined.doc_ids)} doc")

# --- quick view with marked spans ---------------------------------------------
doc_id = refined.doc_ids[0]
view = index.quick_view(doc_id, {"mining": "query", "data mining": "keyword"})
print("\nquick view:")
print(" ", view.marked)
print("  spans:", [(s.term, s.cls) for s in view.spans])
