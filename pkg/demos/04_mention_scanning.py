"""Mention facet walkthrough.

Mention specs are plain text files: one category<TAB>kind<TAB>pattern entry
per line, where kind is term, gazetteer (a path to a dictionary file) or
regex.  Documents are tagged with every category that matches.

    python demos/04_mention_scanning.py
"""

import tempfile
from pathlib import Path

from docfacets import mentions

workdir = Path(tempfile.mkdtemp(prefix="mentions-demo-"))

# --- a gazetteer of project names -------------------------------------------
gazetteer = workdir / "projects.txt"
gazetteer.write_text("Project Nightfall\nProject Harbor\n", encoding="utf-8")

spec_file = workdir / "interest.tsv"
spec_file.write_text(
    "\n".join(
        [
            "# expressions of interest",
            "PII\tregex\t\\d{3}-\\d{2}-\\d{4}",
            "SENSITIVE\tterm\tFor Official Use Only",
            "SENSITIVE\tterm\tFOUO",
            "PROJECT\tgazetteer\tprojects.txt",
            "IPADDR\tregex\t\\b(?:\\d{1,3}\\.){3}\\d{1,3}\\b",
        ]
    )
    + "\n",
    encoding="utf-8",
)

spec = mentions.parse_mention_spec(spec_file)
print(f"parsed {len(spec.entries)} entries, categories: {spec.categories}")

# --- scan a few documents ----------------------------------------------------
documents = {
    "hr-note": "Employee SSN 123-45-6789 was updated; marked FOUO.",
    "status": "Project Harbor slipped a week. For Official Use Only.",
    "syslog": "Login from 10.0.0.12 and 10.0.0.13 succeeded.",
    "lunch": "Team lunch moved to Thursday.",
}
for name, text in documents.items():
    hits = mentions.scan_text(text, spec)
    print(f"  {name:8s} -> {hits if hits else '(no mentions)'}")

# --- matching semantics detail -----------------------------------------------
# terms are whole-word and case-insensitive; regexes are raw and case-sensitive
print()
print("term  'FOUO' vs 'refouled':", mentions.scan_text("refouled", spec))
print("regex is case-sensitive   :",
      mentions.scan_text("ssn 123-45-6789", spec))  # regex still hits digits
