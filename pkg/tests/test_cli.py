"""End-to-end tests for the command-line pipeline.

A four-article corpus with one basic-to-clinical drug (ASA) and one
basic-only drug (IBU) exercises every stage. Expected artifact contents
were written down when the fixture was designed.
"""

import gzip
import json
import xml.etree.ElementTree as ET

import pytest

from translag.cli import EXIT_DATA, EXIT_IO, EXIT_OK, EXIT_USAGE, main

BASELINE_XML = """<?xml version="1.0" encoding="UTF-8"?>
<PubmedArticleSet>
  <PubmedArticle>
    <MedlineCitation>
      <PMID>201</PMID>
      <Article>
        <Journal>
          <Title>Cell Reports</Title>
          <JournalIssue><PubDate><Year>1970</Year></PubDate></JournalIssue>
        </Journal>
        <ArticleTitle>Aspirin uptake in cultured cells</ArticleTitle>
        <Abstract><AbstractText>Aspirin was added to the medium.</AbstractText></Abstract>
      </Article>
      <MeshHeadingList>
        <MeshHeading><DescriptorName UI="D002478">Cells, Cultured</DescriptorName></MeshHeading>
      </MeshHeadingList>
    </MedlineCitation>
  </PubmedArticle>
  <PubmedArticle>
    <MedlineCitation>
      <PMID>202</PMID>
      <Article>
        <Journal>
          <Title>Clinical Trials</Title>
          <JournalIssue><PubDate><Year>1980</Year></PubDate></JournalIssue>
        </Journal>
        <ArticleTitle>A trial of acetylsalicylic acid in patients</ArticleTitle>
        <Abstract><AbstractText>Outcomes after aspirin treatment.</AbstractText></Abstract>
      </Article>
      <MeshHeadingList>
        <MeshHeading><DescriptorName UI="D006801">Humans</DescriptorName></MeshHeading>
      </MeshHeadingList>
    </MedlineCitation>
  </PubmedArticle>
  <PubmedArticle>
    <MedlineCitation>
      <PMID>203</PMID>
      <Article>
        <Journal>
          <Title>Murine Methods</Title>
          <JournalIssue><PubDate><Year>1975</Year></PubDate></JournalIssue>
        </Journal>
        <ArticleTitle>Ibuprofen dosing in mice</ArticleTitle>
        <Abstract><AbstractText>Mice received ibuprofen daily.</AbstractText></Abstract>
      </Article>
      <MeshHeadingList>
        <MeshHeading><DescriptorName UI="D000818">Animals</DescriptorName></MeshHeading>
      </MeshHeadingList>
    </MedlineCitation>
  </PubmedArticle>
  <PubmedArticle>
    <MedlineCitation>
      <PMID>204</PMID>
      <Article>
        <ArticleTitle>An editorial without subject headings</ArticleTitle>
      </Article>
    </MedlineCitation>
  </PubmedArticle>
</PubmedArticleSet>
"""

MESH_ASCII = """*NEWRECORD
RECTYPE = D
MH = Animals
MN = B01.050.150
UI = D000818

*NEWRECORD
RECTYPE = D
MH = Humans
MN = B01.050.150.900.649.313.988.400.112.400.400
MN = M01.777
UI = D006801

*NEWRECORD
RECTYPE = D
MH = Cells, Cultured
MN = A11.251
UI = D002478
"""

LEXICON_TSV = "ASA\taspirin|acetylsalicylic acid\nIBU\tibuprofen\n"

# pmid -> expected label, from the descriptors planted above.
EXPECTED_LABELS = {201: "C", 202: "H", 203: "A", 204: "Other"}
EXPECTED_PAIRS = [(201, "ASA"), (202, "ASA"), (203, "IBU")]


@pytest.fixture
def workspace(tmp_path):
    baseline = tmp_path / "baseline.xml"
    baseline.write_text(BASELINE_XML, encoding="utf-8")
    mesh = tmp_path / "mesh.txt"
    mesh.write_text(MESH_ASCII, encoding="utf-8")
    lexicon = tmp_path / "lexicon.tsv"
    lexicon.write_text(LEXICON_TSV, encoding="utf-8")
    return {
        "baseline": baseline,
        "mesh": mesh,
        "lexicon": lexicon,
        "out": tmp_path / "out",
        "tmp": tmp_path,
    }


def common_args(ws):
    return [
        "--input", str(ws["baseline"]),
        "--mesh-file", str(ws["mesh"]),
        "--lexicon", str(ws["lexicon"]),
        "--out-dir", str(ws["out"]),
    ]


def read_artifacts(out_dir):
    return {path.name: path.read_bytes() for path in sorted(out_dir.iterdir())}


# --- argument handling --------------------------------------------------------


def test_no_subcommand_is_usage_error(capsys):
    assert main([]) == EXIT_USAGE
    assert "usage" in capsys.readouterr().err


def test_help_exits_zero():
    assert main(["--help"]) == EXIT_OK


def test_unknown_subcommand_is_usage_error():
    assert main(["transmogrify"]) == EXIT_USAGE


def test_bad_flag_value_is_usage_error(workspace, capsys):
    code = main(["analyze", "--out-dir", str(workspace["out"]), "--year-start", "soon"])
    assert code == EXIT_USAGE
    assert "config error" in capsys.readouterr().err


def test_missing_input_file_is_usage_error(workspace, capsys):
    code = main(["ingest", "--input", str(workspace["tmp"] / "ghost.xml"),
                 "--out-dir", str(workspace["out"])])
    assert code == EXIT_USAGE
    assert "no such file" in capsys.readouterr().err


def test_ingest_requires_inputs(workspace, capsys):
    assert main(["ingest", "--out-dir", str(workspace["out"])]) == EXIT_USAGE
    assert "inputs is required" in capsys.readouterr().err


def test_link_requires_lexicon(workspace, capsys):
    main(["ingest"] + common_args(workspace))
    code = main(["link", "--input", str(workspace["baseline"]),
                 "--out-dir", str(workspace["out"])])
    assert code == EXIT_USAGE
    assert "lexicon is required" in capsys.readouterr().err


# --- stage behaviour ----------------------------------------------------------


def test_ingest_writes_articles(workspace, capsys):
    assert main(["ingest"] + common_args(workspace)) == EXIT_OK
    lines = (workspace["out"] / "articles.jsonl").read_text().splitlines()
    assert [json.loads(line)["pmid"] for line in lines] == [201, 202, 203, 204]
    assert "ingest: 4 records" in capsys.readouterr().err


def test_ingest_reads_gzip(workspace):
    packed = workspace["tmp"] / "baseline.xml.gz"
    packed.write_bytes(gzip.compress(BASELINE_XML.encode()))
    plain_dir, packed_dir = workspace["tmp"] / "plain", workspace["tmp"] / "packed"
    assert main(["ingest", "--input", str(workspace["baseline"]), "--out-dir", str(plain_dir)]) == EXIT_OK
    assert main(["ingest", "--input", str(packed), "--out-dir", str(packed_dir)]) == EXIT_OK
    assert (plain_dir / "articles.jsonl").read_bytes() == (packed_dir / "articles.jsonl").read_bytes()


def test_workers_do_not_change_output(workspace):
    first = workspace["tmp"] / "part1.xml"
    second = workspace["tmp"] / "part2.xml"
    head, _, tail = BASELINE_XML.partition("  <PubmedArticle>\n    <MedlineCitation>\n      <PMID>203</PMID>")
    first.write_text(head + "</PubmedArticleSet>\n", encoding="utf-8")
    second.write_text(
        '<?xml version="1.0"?>\n<PubmedArticleSet>\n  <PubmedArticle>\n    <MedlineCitation>\n      <PMID>203</PMID>'
        + tail,
        encoding="utf-8",
    )
    serial_dir, parallel_dir = workspace["tmp"] / "serial", workspace["tmp"] / "parallel"
    inputs = ["--input", str(first), "--input", str(second)]
    assert main(["ingest"] + inputs + ["--out-dir", str(serial_dir)]) == EXIT_OK
    assert main(["ingest"] + inputs + ["--out-dir", str(parallel_dir), "--workers", "2"]) == EXIT_OK
    assert (serial_dir / "articles.jsonl").read_bytes() == (parallel_dir / "articles.jsonl").read_bytes()


def test_classify_without_ingest_names_missing_artifact(workspace, capsys):
    code = main(["classify"] + common_args(workspace))
    assert code == EXIT_DATA
    err = capsys.readouterr().err
    assert "articles.jsonl" in err
    assert "translag ingest" in err


def test_analyze_without_link_names_missing_artifact(workspace, capsys):
    main(["ingest"] + common_args(workspace))
    main(["classify"] + common_args(workspace))
    code = main(["analyze"] + common_args(workspace))
    assert code == EXIT_DATA
    err = capsys.readouterr().err
    assert "pairs.tsv" in err
    assert "translag link" in err


def test_malformed_xml_quarantines_partial_output(workspace, capsys):
    broken = workspace["tmp"] / "broken.xml"
    broken.write_text(BASELINE_XML.replace("</PubmedArticleSet>", ""), encoding="utf-8")
    code = main(["ingest", "--input", str(broken), "--out-dir", str(workspace["out"])])
    assert code == EXIT_DATA
    assert "data error" in capsys.readouterr().err
    assert not (workspace["out"] / "articles.jsonl").exists()
    assert (workspace["out"] / "articles.jsonl.tmp").exists()


def test_failed_rerun_preserves_previous_artifact(workspace):
    assert main(["ingest"] + common_args(workspace)) == EXIT_OK
    before = (workspace["out"] / "articles.jsonl").read_bytes()
    broken = workspace["tmp"] / "broken.xml"
    broken.write_text("<PubmedArticleSet><oops", encoding="utf-8")
    assert main(["ingest", "--input", str(broken), "--out-dir", str(workspace["out"])]) == EXIT_DATA
    assert (workspace["out"] / "articles.jsonl").read_bytes() == before


def test_unwritable_out_dir_is_io_error(workspace, capsys):
    blocker = workspace["tmp"] / "blocker"
    blocker.write_text("a regular file, not a directory")
    code = main(["ingest", "--input", str(workspace["baseline"]),
                 "--out-dir", str(blocker / "out")])
    assert code == EXIT_IO
    assert "I/O error" in capsys.readouterr().err


def test_link_adopts_external_pairs(workspace, capsys):
    external = workspace["tmp"] / "given_pairs.tsv"
    external.write_text("# extractor output\n202\tASA\n201\tASA\n", encoding="utf-8")
    code = main(["link", "--pairs", str(external), "--out-dir", str(workspace["out"])])
    assert code == EXIT_OK
    assert (workspace["out"] / "pairs.tsv").read_text() == "202\tASA\n201\tASA\n"
    assert "adopted 2 pairs" in capsys.readouterr().err


def test_link_rejects_bad_pairs_file(workspace, capsys):
    external = workspace["tmp"] / "given_pairs.tsv"
    external.write_text("not-a-pmid\tASA\n", encoding="utf-8")
    code = main(["link", "--pairs", str(external), "--out-dir", str(workspace["out"])])
    assert code == EXIT_DATA
    assert "data error" in capsys.readouterr().err


# --- full pipeline ------------------------------------------------------------


def test_pipeline_produces_expected_artifacts(workspace):
    assert main(["pipeline"] + common_args(workspace)) == EXIT_OK
    out = workspace["out"]
    expected_files = {
        "articles.jsonl", "classifications.jsonl", "pairs.tsv",
        "distribution.tsv", "annual_articles.tsv", "annual_drugs.tsv",
        "timelines.tsv", "summary.json", "triangle.svg",
    }
    assert {p.name for p in out.iterdir()} == expected_files

    classifications = [
        json.loads(line) for line in (out / "classifications.jsonl").read_text().splitlines()
    ]
    assert {c["pmid"]: c["label"] for c in classifications} == EXPECTED_LABELS

    pair_lines = (out / "pairs.tsv").read_text().splitlines()
    assert [tuple(line.split("\t")) for line in pair_lines] == [
        (str(pmid), drug) for pmid, drug in EXPECTED_PAIRS
    ]

    timeline_lines = (out / "timelines.tsv").read_text().splitlines()
    assert timeline_lines[0] == "drug_id\tt_eb\tt_ec\tlag\tstatus"
    assert timeline_lines[1] == "ASA\t1970\t1980\t11\ttranslated"
    assert timeline_lines[2] == "IBU\t1975\t\t\tnon_translated"

    summary = json.loads((out / "summary.json").read_text())
    assert summary["drugs"] == {
        "translated": 1, "non_translated": 1, "clinical_only": 0,
        "anomalous": 0, "total": 2,
    }
    assert summary["translation_rate"] == 0.5
    assert summary["lag"] is None
    assert summary["articles"] == {
        "classified": 4, "drug_related": 3, "whole_corpus_size": 4,
    }


def test_pipeline_distribution_rows(workspace):
    main(["pipeline"] + common_args(workspace))
    lines = (workspace["out"] / "distribution.tsv").read_text().splitlines()
    rows = {line.split("\t")[0]: line.split("\t")[1:] for line in lines[1:]}
    assert rows["A"] == ["1", "33.33", "25.00"]
    assert rows["C"] == ["1", "33.33", "25.00"]
    assert rows["H"] == ["1", "33.33", "25.00"]
    assert rows["Other"] == ["0", "0.00", "0.00"]
    assert rows["Total"] == ["3", "100.00", "75.00"]


def test_pipeline_svg_is_wellformed_and_binned(workspace):
    main(["pipeline"] + common_args(workspace))
    root = ET.fromstring((workspace["out"] / "triangle.svg").read_bytes())
    circles = [el for el in root.iter() if el.tag.rsplit("}", 1)[-1] == "circle"]
    # 201 C, 202 H, 203 A land on three distinct vertex cells; Other is skipped.
    assert len(circles) == 3


def test_pipeline_reruns_are_byte_identical(workspace):
    assert main(["pipeline"] + common_args(workspace)) == EXIT_OK
    first = read_artifacts(workspace["out"])
    assert main(["pipeline"] + common_args(workspace)) == EXIT_OK
    assert read_artifacts(workspace["out"]) == first


def test_flag_overrides_config_file(workspace):
    config = workspace["tmp"] / "run.conf"
    config.write_text(
        "\n".join(
            [
                f"inputs = {workspace['baseline']}",
                f"mesh_file = {workspace['mesh']}",
                f"lexicon = {workspace['lexicon']}",
                f"out_dir = {workspace['out']}",
                "basic_set = A, C, AC",
            ]
        )
        + "\n",
        encoding="utf-8",
    )
    # Narrowing the basic set on the command line must beat the file value:
    # with A excluded, IBU's only article stops counting as basic exposure.
    assert main(["pipeline", "--config", str(config), "--basic-set", "C,AC"]) == EXIT_OK
    summary = json.loads((workspace["out"] / "summary.json").read_text())
    assert summary["drugs"]["total"] == 1
    assert summary["drugs"]["translated"] == 1
    assert summary["dropped"]["drugs_without_dates"] == 1


def test_plot_dimensions_flags(workspace):
    main(["ingest"] + common_args(workspace))
    main(["classify"] + common_args(workspace))
    assert main(["plot", "--out-dir", str(workspace["out"]),
                 "--width", "400", "--height", "300"]) == EXIT_OK
    root = ET.fromstring((workspace["out"] / "triangle.svg").read_bytes())
    assert root.get("width") == "400"
    assert root.get("height") == "300"
