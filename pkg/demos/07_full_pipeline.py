"""
The whole pipeline in one run
=============================

Writes a small baseline file, a descriptor file, and a drug lexicon, then
drives every stage through the command-line entry point. Each stage reads
the previous stage's artifact from the output directory, so the same run
can be resumed or repeated stage by stage.
"""

import json
from pathlib import Path

from translag.cli import main

OUT = Path(__file__).parent / "output" / "pipeline"
OUT.mkdir(parents=True, exist_ok=True)

baseline = OUT / "baseline.xml"
baseline.write_text("""<?xml version="1.0"?>
<PubmedArticleSet>
  <PubmedArticle><MedlineCitation>
    <PMID>501</PMID>
    <Article>
      <Journal><Title>J Fixture</Title>
        <JournalIssue><PubDate><Year>1969</Year></PubDate></JournalIssue></Journal>
      <ArticleTitle>Aspirin in rat models</ArticleTitle>
      <Abstract><AbstractText>Rats tolerated aspirin well.</AbstractText></Abstract>
    </Article>
    <MeshHeadingList>
      <MeshHeading><DescriptorName UI="D000818">Animals</DescriptorName></MeshHeading>
    </MeshHeadingList>
  </MedlineCitation></PubmedArticle>
  <PubmedArticle><MedlineCitation>
    <PMID>502</PMID>
    <Article>
      <Journal><Title>J Fixture</Title>
        <JournalIssue><PubDate><Year>1984</Year></PubDate></JournalIssue></Journal>
      <ArticleTitle>Aspirin after myocardial infarction</ArticleTitle>
      <Abstract><AbstractText>Patients received aspirin daily.</AbstractText></Abstract>
    </Article>
    <MeshHeadingList>
      <MeshHeading><DescriptorName UI="D006801">Humans</DescriptorName></MeshHeading>
    </MeshHeadingList>
  </MedlineCitation></PubmedArticle>
  <PubmedArticle><MedlineCitation>
    <PMID>503</PMID>
    <Article>
      <Journal><Title>J Fixture</Title>
        <JournalIssue><PubDate><Year>1992</Year></PubDate></JournalIssue></Journal>
      <ArticleTitle>Caffeine and cultured myocytes</ArticleTitle>
      <Abstract><AbstractText>Caffeine altered beat rates in vitro.</AbstractText></Abstract>
    </Article>
    <MeshHeadingList>
      <MeshHeading><DescriptorName UI="D002478">Cells, Cultured</DescriptorName></MeshHeading>
    </MeshHeadingList>
  </MedlineCitation></PubmedArticle>
</PubmedArticleSet>
""", encoding="utf-8")

mesh = OUT / "mesh.txt"
mesh.write_text("""*NEWRECORD
MH = Animals
MN = B01.050.150
UI = D000818

*NEWRECORD
MH = Humans
MN = B01.050.150.900.649.313.988.400.112.400.400
UI = D006801

*NEWRECORD
MH = Cells, Cultured
MN = A11.251
UI = D002478
""", encoding="utf-8")

lexicon = OUT / "lexicon.tsv"
lexicon.write_text("ASA\taspirin|acetylsalicylic acid\nCAF\tcaffeine\n", encoding="utf-8")

code = main([
    "pipeline",
    "--input", str(baseline),
    "--mesh-file", str(mesh),
    "--lexicon", str(lexicon),
    "--out-dir", str(OUT / "artifacts"),
    "--year-start", "1960", "--year-end", "2000",
])
print(f"\npipeline exit code: {code}")

summary = json.loads((OUT / "artifacts" / "summary.json").read_text())
print("drugs:", summary["drugs"])
print("translation rate:", summary["translation_rate"])
for line in (OUT / "artifacts" / "timelines.tsv").read_text().splitlines():
    print("  " + line)
