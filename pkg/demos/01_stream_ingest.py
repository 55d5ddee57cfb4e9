"""
Streaming articles out of a gzipped baseline file
=================================================

Builds a tiny compressed corpus on disk, then streams it back record by
record. The parser never holds more than one citation in memory, so the
same loop works on multi-gigabyte annual files.
"""

import gzip
from pathlib import Path

from translag import IngestStats, parse_baseline_file, write_records

OUT = Path(__file__).parent / "output"
OUT.mkdir(exist_ok=True)

corpus = """<?xml version="1.0" encoding="UTF-8"?>
<PubmedArticleSet>
  <PubmedArticle><MedlineCitation>
    <PMID>11</PMID>
    <Article>
      <Journal><Title>Letters</Title>
        <JournalIssue><PubDate><Year>1988</Year></PubDate></JournalIssue></Journal>
      <ArticleTitle>Enzyme kinetics in liver slices</ArticleTitle>
      <Abstract><AbstractText>Rates were measured at 37C.</AbstractText></Abstract>
    </Article>
    <MeshHeadingList>
      <MeshHeading><DescriptorName UI="D000818">Animals</DescriptorName></MeshHeading>
    </MeshHeadingList>
  </MedlineCitation></PubmedArticle>
  <PubmedArticle><MedlineCitation>
    <PMID>12</PMID>
    <Article>
      <Journal><Title>Letters</Title>
        <JournalIssue><PubDate><MedlineDate>1991 Spring</MedlineDate></PubDate></JournalIssue></Journal>
      <ArticleTitle>A case series without an abstract</ArticleTitle>
    </Article>
  </MedlineCitation></PubmedArticle>
  <PubmedArticle><MedlineCitation>
    <PMID></PMID>
    <Article><ArticleTitle>Damaged record, no usable id</ArticleTitle></Article>
  </MedlineCitation></PubmedArticle>
</PubmedArticleSet>
"""

path = OUT / "mini_baseline.xml.gz"
path.write_bytes(gzip.compress(corpus.encode()))

# gzip is detected from the magic bytes; no flag needed
stats = IngestStats()
records = list(parse_baseline_file(path, stats=stats))

for record in records:
    print(f"pmid={record.pmid} year={record.year} mesh={len(record.mesh_descriptors)}"
          f" title={record.title!r}")
print(f"parsed {stats.parsed}, skipped without pmid: {stats.skipped_missing_pmid}")

# records serialize one JSON object per line for the later stages
with open(OUT / "mini_articles.jsonl", "w", encoding="utf-8") as sink:
    written = write_records(records, sink)
print(f"wrote {written} lines to {OUT / 'mini_articles.jsonl'}")
