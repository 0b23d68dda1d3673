import copy
import json

import pytest

from wwmctx import config, constructions


def square_config():
    """Four rays in dimension 2 forming two bases."""
    return {
        "name": "square",
        "dimension": 2,
        "rays": [[[1, 0], [0, 0]], [[0, 0], [1, 0]], [[1, 0], [1, 0]], [[1, 0], [-1, 0]]],
        "witness": {"kind": "sum_projectors", "parameters": {"indices": [0, 2]}},
        "states": [[[1, 0], [0, 0]]],
    }


def test_valid_config_builds():
    c = config.build_from_config(square_config())
    assert c.graph.basis_cliques == ((0, 1), (2, 3))
    assert c.classical_bound == 2.0
    assert c.kind == "qubit"


def test_builtin_configs_validate():
    for cfg in (constructions.kcsb_config(), constructions.yu_oh_config()):
        config.validate_config(json.loads(json.dumps(cfg)))


@pytest.mark.parametrize("mutate, fragment", [
    (lambda c: c.update(dimension=6), "$.dimension"),
    (lambda c: c["rays"].append([[1, 0]]), "$.rays[4]"),
    (lambda c: c["rays"].__setitem__(0, [[0, 0], [0, 0]]), "zero vector"),
    (lambda c: c.update(adjacency=[[0, 1], [1, 0]]), "$.adjacency"),
    (lambda c: c["witness"]["parameters"].update(indices=[9]), "indices[0]"),
    (lambda c: c.update(primary="missing"), "$.primary"),
    (lambda c: c.update(states="stabilizer_all"), "$.states"),
    (lambda c: c.update(extra=1), "extra"),
    (lambda c: c["witness"].update(kind="bogus"), "$.witness"),
    (lambda c: c["rays"][0].__setitem__(0, [1]), "$.rays[0][0]"),
])
def test_invalid_configs_are_reported(mutate, fragment):
    cfg = copy.deepcopy(square_config())
    mutate(cfg)
    with pytest.raises(config.ConfigError) as exc:
        config.validate_config(cfg)
    assert any(fragment in e for e in exc.value.errors), exc.value.errors


def test_too_many_rays():
    cfg = square_config()
    cfg["rays"] = cfg["rays"] * 7
    with pytest.raises(config.ConfigError) as exc:
        config.validate_config(cfg)
    assert any("enumeration limit" in e for e in exc.value.errors)


def test_load_reports_json_position(tmp_path):
    path = tmp_path / "bad.json"
    path.write_text('{\n  "name": "x",\n}\n')
    with pytest.raises(config.ConfigError) as exc:
        config.load_config(path)
    assert f"{path}:3:1" in exc.value.errors[0]


def test_load_from_file(tmp_path):
    path = tmp_path / "ok.json"
    path.write_text(json.dumps(square_config()))
    assert config.build_from_config(str(path)).name == "square"
