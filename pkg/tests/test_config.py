"""Config parsing, conversion, override precedence, and validation."""

import pytest

from translag.config import (
    CONFIG_KEYS,
    ConfigError,
    PipelineConfig,
    build_config,
    load_config_file,
    parse_config_text,
)
from translag.mesh import DEFAULT_RULES


# --- parse_config_text -------------------------------------------------------


def test_parse_basic_lines():
    text = "\n".join(
        [
            "# pipeline settings",
            "",
            "year_start = 1950",
            "out_dir = results",
            "basic_set = A, C, AC",
            "  # trailing comment line",
        ]
    )
    assert parse_config_text(text) == {
        "year_start": "1950",
        "out_dir": "results",
        "basic_set": "A, C, AC",
    }


def test_parse_value_may_contain_equals():
    assert parse_config_text("lexicon = dir=weird/lex.tsv") == {"lexicon": "dir=weird/lex.tsv"}


@pytest.mark.parametrize(
    "text,fragment",
    [
        ("year_start 1950", "line 1: expected key = value"),
        ("= 1950", "line 1: expected key = value"),
        ("# ok\nbogus_key = 3", "line 2: unknown key 'bogus_key'"),
        ("workers = 2\n\nworkers = 3", "line 3: duplicate key 'workers'"),
    ],
)
def test_parse_rejects_bad_lines(text, fragment):
    with pytest.raises(ConfigError, match=fragment):
        parse_config_text(text)


def test_load_config_file(tmp_path):
    path = tmp_path / "run.conf"
    path.write_text("workers = 4\nresolution = 50\n", encoding="utf-8")
    assert load_config_file(path) == {"workers": "4", "resolution": "50"}


def test_load_config_file_missing(tmp_path):
    with pytest.raises(ConfigError, match="cannot read config file"):
        load_config_file(tmp_path / "absent.conf")


# --- build_config ------------------------------------------------------------


def test_defaults():
    config = build_config()
    assert config.year_start == 1841
    assert config.year_end == 2018
    assert config.window == (1841, 2018)
    assert config.basic_set == frozenset({"A", "C", "AC"})
    assert config.clinical_set == frozenset({"H", "AH", "CH", "ACH"})
    assert config.workers == 1
    assert config.normalized_coords is True
    assert config.corpus_size is None
    assert config.rules is DEFAULT_RULES


def test_conversions():
    config = build_config(
        {
            "year_start": "1950",
            "r_min": "2.5",
            "normalized_coords": "false",
            "basic_set": "A,AC",
            "clinical_set": "H",
            "corpus_size": "9093936",
        }
    )
    assert config.year_start == 1950
    assert config.r_min == 2.5
    assert config.normalized_coords is False
    assert config.basic_set == frozenset({"A", "AC"})
    assert config.clinical_set == frozenset({"H"})
    assert config.corpus_size == 9093936


@pytest.mark.parametrize("raw,expected", [("true", True), ("YES", True), ("1", True), ("on", True),
                                          ("false", False), ("No", False), ("0", False), ("off", False)])
def test_bool_spellings(raw, expected):
    assert build_config({"normalized_coords": raw}).normalized_coords is expected


def test_overrides_win():
    config = build_config(
        {"year_start": "1950", "workers": "2"},
        {"year_start": "1980"},
    )
    assert config.year_start == 1980
    assert config.workers == 2


def test_none_overrides_are_skipped():
    config = build_config({"workers": "3"}, {"workers": None, "resolution": None})
    assert config.workers == 3
    assert config.resolution == 100


def test_inputs_are_comma_separated_paths(tmp_path):
    a = tmp_path / "a.xml"
    b = tmp_path / "b.xml"
    a.write_text("<x/>")
    b.write_text("<x/>")
    config = build_config({"inputs": f"{a}, {b}"})
    assert config.inputs == (a, b)


@pytest.mark.parametrize(
    "values,fragment",
    [
        ({"year_start": "soon"}, "year_start"),
        ({"r_max": "wide"}, "r_max"),
        ({"normalized_coords": "maybe"}, "normalized_coords"),
        ({"mesh_file": "  "}, "mesh_file"),
    ],
)
def test_conversion_errors_name_the_key(values, fragment):
    with pytest.raises(ConfigError, match=fragment):
        build_config(values)


def test_unknown_override_key():
    with pytest.raises(ConfigError, match="unknown key 'colour'"):
        build_config({}, {"colour": "red"})


# --- validation ---------------------------------------------------------------


def test_empty_year_window():
    with pytest.raises(ConfigError, match="year window is empty"):
        build_config({"year_start": "2000", "year_end": "1999"})


@pytest.mark.parametrize(
    "values,fragment",
    [
        ({"basic_set": ","}, "basic_set must not be empty"),
        ({"clinical_set": "H, Other"}, "clinical_set: unknown labels Other"),
        ({"basic_set": "A,Z"}, "basic_set: unknown labels Z"),
        ({"basic_set": "A,H", "clinical_set": "H,AH"}, "disjoint; both contain H"),
        ({"resolution": "0"}, "resolution must be positive"),
        ({"workers": "0"}, "workers must be at least 1"),
        ({"corpus_size": "-5"}, "corpus_size must be positive"),
    ],
)
def test_cross_field_invariants(values, fragment):
    with pytest.raises(ConfigError, match=fragment):
        build_config(values)


def test_missing_input_file(tmp_path):
    with pytest.raises(ConfigError, match="inputs: no such file"):
        build_config({"inputs": str(tmp_path / "ghost.xml")})


def test_missing_named_file(tmp_path):
    with pytest.raises(ConfigError, match="lexicon: no such file"):
        build_config({"lexicon": str(tmp_path / "ghost.tsv")})


def test_out_dir_need_not_exist(tmp_path):
    config = build_config({"out_dir": str(tmp_path / "not_yet")})
    assert config.out_dir == tmp_path / "not_yet"


# --- derived properties -------------------------------------------------------


def test_rules_partial_override_keeps_other_defaults():
    config = build_config({"c_prefixes": "A10, B05"})
    rules = config.rules
    assert rules.c_prefixes == ("A10", "B05")
    assert rules.h_prefixes == DEFAULT_RULES.h_prefixes
    assert rules.a_prefixes == DEFAULT_RULES.a_prefixes
    assert rules.a_exceptions == DEFAULT_RULES.a_exceptions


def test_rules_empty_override_disables_category():
    config = build_config({"a_exceptions": ""})
    assert config.rules.a_exceptions == ()


def test_rules_invalid_code_is_config_error():
    with pytest.raises(ConfigError, match="category rules"):
        build_config({"h_prefixes": "lowercase"})


def test_plot_options_carry_dimensions():
    options = build_config({"width": "400", "height": "300", "r_max": "9"}).plot_options
    assert (options.width, options.height, options.r_max) == (400, 300, 9.0)


def test_plot_options_errors_are_config_errors():
    with pytest.raises(ConfigError, match="plot options"):
        build_config({"margin": "10000"})


def test_config_is_frozen():
    config = build_config()
    with pytest.raises(AttributeError):
        config.workers = 5


def test_config_keys_cover_all_fields():
    assert "inputs" in CONFIG_KEYS
    assert len(CONFIG_KEYS) == len(PipelineConfig.__dataclass_fields__)
