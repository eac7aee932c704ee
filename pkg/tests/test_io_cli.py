import json

import networkx as nx
import pytest

from siltkit.cli import main
from siltkit.constructions import build_nakayama_selfinjective, build_preprojective
from siltkit.io import (
    AlgebraFileError, emit_algebra_file, emit_dot, parse_algebra_text, spec_from_algebra, spec_to_json,
)
from siltkit.quiver import NotAdmissible

NAKAYAMA_FILE = """{
  "vertices": [1, 2],
  "arrows": [
    {"name": "a", "source": 1, "target": 2},
    {"name": "b", "source": 2, "target": 1}
  ],
  "relations": [
    [{"coefficient": 1, "path": ["a", "b", "a", "b"]}],
    [{"coefficient": 1, "path": ["b", "a", "b", "a"]}]
  ]
}
"""


@pytest.fixture
def nak_file(tmp_path):
    path = tmp_path / "nak.json"
    path.write_text(NAKAYAMA_FILE)
    return str(path)


@pytest.fixture
def a2pre_file(tmp_path):
    path = tmp_path / "a2pre.alg"
    path.write_text(emit_algebra_file(spec_from_algebra(build_preprojective("A", 2))))
    return str(path)


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def test_parse_nakayama_file():
    spec = parse_algebra_text(NAKAYAMA_FILE)
    assert len(spec.vertices) == 2 and len(spec.arrows) == 2 and len(spec.relations) == 2
    assert spec.build().dim == 8


def test_round_trip():
    spec = parse_algebra_text(NAKAYAMA_FILE)
    assert json.loads(emit_algebra_file(spec)) == json.loads(NAKAYAMA_FILE)
    again = parse_algebra_text(emit_algebra_file(spec))
    assert spec_to_json(again) == spec_to_json(spec)


def test_round_trip_tuple_labels():
    from siltkit.constructions import build_anm

    spec = spec_from_algebra(build_anm(3, 2))
    again = parse_algebra_text(emit_algebra_file(spec))
    assert again.vertices == spec.vertices
    assert again.build().dim == 20


def test_hereditary_cyclic_quiver_rejected():
    text = '{"vertices": [1], "arrows": [{"name": "x", "source": 1, "target": 1}], "relations": []}'
    with pytest.raises(NotAdmissible):
        parse_algebra_text(text).build(max_cap=8)
    acyclic = '{"vertices": [1, 2], "arrows": [{"name": "x", "source": 1, "target": 2}]}'
    assert parse_algebra_text(acyclic).build().dim == 3


def test_malformed_coefficient_located():
    bad = NAKAYAMA_FILE.replace('"coefficient": 1, "path": ["b"', '"coefficient": "two", "path": ["b"')
    with pytest.raises(AlgebraFileError) as exc:
        parse_algebra_text(bad)
    assert exc.value.line == 9 and exc.value.column is not None
    assert "coefficient" in str(exc.value)


def test_unknown_arrow_located():
    bad = NAKAYAMA_FILE.replace('["b", "a", "b", "a"]', '["b", "a", "c", "a"]')
    with pytest.raises(AlgebraFileError) as exc:
        parse_algebra_text(bad)
    assert exc.value.line == 9 and "unknown arrow" in str(exc.value)


def test_syntax_error_located():
    with pytest.raises(AlgebraFileError) as exc:
        parse_algebra_text('{"vertices": [1,,2]}')
    assert exc.value.line == 1 and exc.value.column == 17


def test_emit_dot_basic():
    G = nx.DiGraph()
    G.add_edge(0, 1, label="(0,)")
    dot = emit_dot(G)
    assert dot.startswith("digraph")
    assert dot.count("->") == 1
    assert emit_dot(nx.DiGraph()).count("->") == 0
    assert emit_dot(G) == dot


def test_cli_enumerate(capsys, a2pre_file):
    code, out, _ = run(capsys, "silting", "enumerate", "--cutoff", "100", a2pre_file)
    assert code == 0
    data = json.loads(out)
    assert data["result"]["nodes"] == 6 and data["result"]["complete"]
    manifest = data["manifest"]
    assert {"command", "inputs", "seed", "field_prime", "versions", "wall_time"} <= set(manifest)


def test_cli_hasse_dot(capsys, tmp_path, a2pre_file):
    dot_path = tmp_path / "h.dot"
    code, out, _ = run(capsys, "--dot", str(dot_path), "silting", "hasse", a2pre_file)
    assert code == 0
    dot = dot_path.read_text()
    assert dot.count("->") == json.loads(out)["result"]["arrows"] == 6
    assert json.loads(out)["result"]["nodes"] == 6


def test_cli_check_selfinjective(capsys, nak_file):
    code, out, _ = run(capsys, "algebra", "check-selfinjective", nak_file)
    res = json.loads(out)["result"]
    assert code == 0
    assert res["selfinjective"] and res["nu_cyclic"] and not res["weakly_symmetric"]
    assert res["permutation"] == {"1": 2, "2": 1}


def test_cli_json_file_and_field_prime(capsys, tmp_path, nak_file):
    target = tmp_path / "out.json"
    code, out, _ = run(capsys, "--field-prime", "101", "--json", str(target), "algebra", "info", nak_file)
    assert code == 0
    written = json.loads(target.read_text())
    assert written == json.loads(out)
    assert written["manifest"]["field_prime"] == 101 and written["result"]["dim"] == 8


def test_cli_verify_derived_class(capsys):
    code, out, _ = run(capsys, "verify", "derived-class", "--n", "3", "--m", "5")
    assert code == 0 and json.loads(out)["result"]["ok"]


def test_cli_verify_skew_and_tilde(capsys, nak_file):
    code, out, _ = run(capsys, "verify", "skew-iso", "--n", "3", "--m", "2")
    assert code == 0 and json.loads(out)["result"]["ok"]
    code, out, _ = run(capsys, "verify", "tilde-iso", nak_file)
    assert code == 0 and json.loads(out)["result"]["dim_tilde"] == 12


def test_cli_constructs(capsys):
    code, out, _ = run(capsys, "construct", "anm", "--n", "3", "--m", "2")
    assert code == 0 and json.loads(out)["result"]["summary"]["dim"] == 20
    code, out, _ = run(capsys, "construct", "nakayama", "--simples", "2", "--loewy", "4")
    assert code == 0 and json.loads(out)["result"]["summary"]["dim"] == 8
    code, out, _ = run(capsys, "construct", "preprojective", "--type", "D", "--rank", "4")
    assert code == 0 and json.loads(out)["result"]["summary"]["dim"] == 28
    code, out, _ = run(capsys, "construct", "skew", "--n", "3", "--m", "2")
    assert code == 0 and json.loads(out)["result"]["dim"] == 20


def test_construct_output_feeds_back_in(capsys, tmp_path):
    code, out, _ = run(capsys, "construct", "nakayama", "--simples", "2", "--loewy", "3")
    assert code == 0
    path = tmp_path / "n23.json"
    path.write_text(out)
    code, out, _ = run(capsys, "silting", "enumerate", str(path))
    assert code == 0 and json.loads(out)["result"]["nodes"] == 6
    bad = json.loads(path.read_text())
    bad["result"]["algebra"]["arrows"][0]["source"] = 7
    with pytest.raises(AlgebraFileError, match="unknown vertex") as exc:
        parse_algebra_text(json.dumps(bad, indent=2))
    assert exc.value.line is not None


def test_cli_construct_from_file(capsys, nak_file):
    code, out, _ = run(capsys, "construct", "tilde", nak_file)
    assert code == 0 and json.loads(out)["result"]["summary"]["dim"] == 12
    code, out, _ = run(capsys, "construct", "gamma", nak_file)
    assert code == 0 and json.loads(out)["result"]["dim"] == 12


def test_cli_mutate(capsys, nak_file):
    code, out, _ = run(capsys, "silting", "mutate", "--summand", "0", nak_file)
    assert code == 0
    assert json.loads(out)["result"]["g_vectors"] == [[-1, 1], [0, 1]]
    code, _, err = run(capsys, "silting", "mutate", nak_file)
    assert code == 1


def test_cli_nu_stable_enumeration(capsys, tmp_path, nak_file):
    code, out, _ = run(capsys, "silting", "enumerate", "--nu-stable", nak_file)
    res = json.loads(out)["result"]
    assert code == 0 and res["nu_stable"] and res["complete"]


def test_cli_help_and_usage(capsys):
    code, out, _ = run(capsys, "--help")
    assert code == 0 and "Usage" in out
    code, _, err = run(capsys, "silting", "enumerate")
    assert code == 1
    code, _, err = run(capsys, "no-such-verb")
    assert code == 1


def test_cli_computation_error(capsys, tmp_path):
    path = tmp_path / "bad.json"
    path.write_text('{"vertices": [1], "arrows": [], "relations": [[{"coefficient": 1, "path": ["q"]}]]}')
    code, _, err = run(capsys, "algebra", "info", str(path))
    assert code == 2 and "unknown arrow" in err
    code, _, err = run(capsys, "verify", "derived-class", "--n", "4", "--m", "3")
    assert code == 2


def test_cli_rejects_bad_prime(capsys):
    code, _, err = run(capsys, "--field-prime", "12", "construct", "anm", "--n", "2", "--m", "1")
    assert code == 2
