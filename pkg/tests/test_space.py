"""Space files, presets and mixed-radix indexing."""

from __future__ import annotations

import numpy as np
import pytest

from errors import ConfigurationError, SpaceParseError
from space import PRESETS, Configuration, config_at, enumerate_configs, index_of, load_space, parse_space, preset_space


@pytest.mark.parametrize("preset,size", [("kripke", 216), ("lulesh", 120), ("clomp", 125), ("hypre", 9_216_000)])
def test_preset_sizes(preset, size):
    space = preset_space(preset)
    assert space.size == size
    assert space.name == preset
    assert space.command is not None


def test_preset_defaults():
    kripke = preset_space("kripke")
    assert kripke.tokens(kripke.default) == {"layout": "DGZ", "gset": "1", "dset": "8"}
    lulesh = preset_space("lulesh")
    assert lulesh.tokens(lulesh.default) == {"r": "11", "s": "8"}
    hypre = preset_space("hypre")
    assert hypre.tokens(hypre.default)["strong_threshold"] == "0.25"


def test_unknown_preset():
    with pytest.raises(ConfigurationError):
        preset_space("nekbone")
    assert "nekbone" not in PRESETS


def test_last_parameter_varies_fastest(grid_space):
    assert grid_space.dims == (3, 4)
    assert grid_space.config_at(0).assignment == (0, 0)
    assert grid_space.config_at(1).assignment == (0, 1)
    assert grid_space.config_at(4).assignment == (1, 0)
    assert grid_space.index_of((2, 3)) == 11


def test_kripke_index_round_trip():
    space = preset_space("kripke")
    configs = list(enumerate_configs(space))
    assert len(configs) == 216
    for i, c in enumerate(configs):
        assert c.index == i
        assert index_of(space, c.assignment) == i
        assert config_at(space, i) == c


def test_decode_matches_config_at():
    space = preset_space("clomp")
    idx = np.array([0, 7, 63, 124])
    digits = space.decode(idx)
    for i, row in zip(idx, digits):
        assert tuple(row) == space.config_at(int(i)).assignment


def test_hypre_last_index():
    space = preset_space("hypre")
    last = space.config_at(space.size - 1)
    assert last.assignment == tuple(d - 1 for d in space.dims)
    assert space.index_of(last.assignment) == space.size - 1


def test_out_of_range_index(toy_space):
    with pytest.raises(ConfigurationError):
        toy_space.config_at(3)
    with pytest.raises(ConfigurationError):
        toy_space.config_at(-1)
    with pytest.raises(ConfigurationError):
        toy_space.index_of((3,))


def test_single_value_parameter_contributes_nothing():
    space = parse_space("[space]\na = {a} | 1-3\nfixed = {fixed} | only\n")
    assert space.size == 3
    assert space.config_at(2).assignment == (2, 0)


def test_range_expansion_is_inclusive():
    space = parse_space("[space]\nr = {r} | 1-15\n")
    assert space.parameter("r").values == tuple(str(v) for v in range(1, 16))


def test_trailing_comments():
    space = parse_space(
        "[space]  # knobs\n"
        "r = r | 1-15              # inclusive integer range\n"
        "[default]\n"
        "r = 11   # fastest on the reference machine\n"
        "[command]\n"
        "template = ./app -r {r} --tag=#1\n"
    )
    assert space.parameter("r").values == tuple(str(v) for v in range(1, 16))
    assert space.default.assignment == (10,)
    assert space.command.template == "./app -r {r} --tag=#1"


def test_bare_token_is_braced():
    space = parse_space("[space]\nr = r | 1-2\n")
    assert space.parameter("r").substitution_token == "{r}"


def test_missing_default_section_uses_first_values(toy_space):
    assert toy_space.default == Configuration(index=0, assignment=(0,))


def test_default_by_numeric_value():
    space = parse_space("[space]\nt = {t} | 0.05, 0.25\n[default]\nt = 0.250\n")
    assert space.default.assignment == (1,)


def test_describe_and_tokens(grid_space):
    config = grid_space.config_at(5)
    assert grid_space.describe(config) == "p=2;r=mid"
    assert grid_space.config_from_tokens({"p": "2", "r": "mid"}) == config


def test_command_section():
    space = parse_space(
        "[space]\nr = {r} | 1-2\n[command]\ntemplate = ./app -r {r}\nprobe = constant:4.5\npoll_ms = 50\n"
    )
    assert space.command.template == "./app -r {r}"
    assert space.command.probe == "constant:4.5"
    assert space.command.poll_ms == 50


@pytest.mark.parametrize(
    "text,fragment",
    [
        ("[space]\nr = {r} | 1-2\nr = {r} | 3-4\n", "duplicate parameter"),
        ("[space]\nr = {r} | 5-1\n", "empty range"),
        ("[space]\nr = {r} | 1, 1\n", "duplicate value"),
        ("[space]\nr = {r} | \n", "empty"),
        ("[space]\nr = {r}\n", "token | values"),
        ("[stuff]\nr = 1\n", "unknown section"),
        ("r = {r} | 1-2\n", "outside any section"),
        ("[space]\nr = {r} | 1-2\n[default]\nr = 7\n", "not in range"),
        ("[space]\nr = {r} | 1-2\ns = {s} | 1-2\n[default]\nr = 1\n", "missing default"),
        ("[space]\n2r = {r} | 1-2\n", "identifier"),
        ("# nothing here\n", "no parameters"),
        ("[space]\nr = {r} | 1-2# range\n", "inside a value list"),
    ],
)
def test_parse_errors(text, fragment):
    with pytest.raises(SpaceParseError) as e:
        parse_space(text)
    assert fragment in str(e.value)


def test_parse_error_carries_line_context():
    with pytest.raises(SpaceParseError) as e:
        parse_space("[space]\n# comment\nr = {r} | 9-3\n")
    err = e.value
    assert err.line_no == 3
    assert err.parameter == "r"
    assert "line 3" in str(err)


def test_load_space_missing_file(tmp_path):
    with pytest.raises(ConfigurationError):
        load_space(tmp_path / "nope.space")


def test_load_space_names_from_stem(tmp_path):
    path = tmp_path / "myapp.space"
    path.write_text("[space]\nn = {n} | 1-4\n", encoding="utf-8")
    assert load_space(path).name == "myapp"
