"""
Finding drug names in article text
==================================

A lexicon maps each drug id to its surface forms. All forms are matched in
one pass; overlaps resolve leftmost-longest, matches must sit on token
boundaries, and a surface shared by two drugs reports both.
"""

import io

from translag import article_mentions, find_mentions, load_lexicon
from translag.ingest import ArticleRecord
from translag.linker import normalize_text

lexicon = load_lexicon(io.StringIO(
    "ASA\taspirin|acetylsalicylic acid\n"
    "B12\tvitamin b12|b12\n"
    "SHARED\taspirin\n"          # same surface as ASA, different drug
    "IBU\tibuprofen\n"
))
for drug_id in sorted(lexicon.entries):
    print(f"{drug_id}: {', '.join(lexicon.forms(drug_id))}")
print()

texts = [
    "Aspirin and low-dose ASPIRIN were compared.",   # case folds away
    "Vitamin B12 deficiency responded to b12.",      # longest form wins
    "The aspirinate ester shows no aspirin activity.",   # no match inside words
    "Acetylsalicylic  acid, i.e. aspirin.",          # doubled space collapses
]
for text in texts:
    # the matcher works on normalized text; offsets refer to that form
    mentions = find_mentions(normalize_text(text), lexicon)
    found = ", ".join(f"{m.drug_id}@{m.offset}:{m.surface!r}" for m in mentions) or "-"
    print(f"{text!r}\n    {found}")

# title and abstract are scanned together per article
article = ArticleRecord(pmid=77, title="Ibuprofen versus placebo",
                        abstract="Patients received ibuprofen or aspirin.")
print()
for mention in article_mentions(article, lexicon):
    print(f"pmid {mention.pmid}: {mention.drug_id} in {mention.field} at {mention.offset}")
