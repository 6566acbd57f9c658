import json

import numpy as np
import pytest

from ekrlab.catalog import emit_group_spec, psl2, spec_of, sym
from ekrlab.cli import run
from ekrlab.perm_core import point_stabilizer


def invoke(capsys, *argv):
    code = run(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def report(capsys, *argv):
    code, out, _ = invoke(capsys, *argv)
    return code, json.loads(out)


# permutation image arrays are data, written like the coclique input files
RAW = {"schema_version", "generators", "derangement_witness", "representative", "witness"}


def numerics(node):
    """Yield every leaf value that is a bare number (should be none)."""
    if isinstance(node, dict):
        if set(node) in ({"exact"}, {"float"}):
            return
        for k, v in node.items():
            if k not in RAW:
                yield from numerics(v)
    elif isinstance(node, list):
        for v in node:
            yield from numerics(v)
    elif isinstance(node, (int, float)) and not isinstance(node, bool):
        yield node


def test_spectrum_alt5(capsys):
    code, rep = report(capsys, "spectrum", "--group", "alt:5")
    assert code == 0
    assert rep["schema_version"] == 1
    assert rep["group"]["order"] == {"exact": "60"}
    assert rep["payload"]["d"] == {"exact": "24"}
    assert rep["payload"]["lambda_star"] == {"exact": "-6"}
    assert rep["payload"]["verdict"] == "CERTIFIED_UNIQUE"
    assert not list(numerics(rep))


def test_ekr_check_agl15(capsys):
    code, rep = report(capsys, "ekr-check", "--group", "agl1:5", "--exhaustive")
    assert code == 0
    census = rep["payload"]["census"]
    assert census["total"] == {"exact": "625"} and census["complete"]
    assert all(f["module_check"] for f in rep["payload"]["found"])
    assert rep["verdicts"]["found_in_module"]
    assert not list(numerics(rep))


def test_complements_asl24(capsys):
    code, rep = report(capsys, "complements", "--group", "asl2:4")
    assert code == 0
    assert rep["payload"]["nonstandard_coclique_found"]


@pytest.mark.parametrize("command", ["info", "spectrum", "derangements", "connectivity",
                                     "ekr-check", "inner-dist", "complements"])
def test_every_numeric_tagged(command, capsys):
    code, rep = report(capsys, command, "--group", "sym:4")
    assert code == 0
    assert not list(numerics(rep))


def test_deterministic_output(capsys):
    _, first, _ = invoke(capsys, "ekr-check", "--group", "psl2:5")
    _, second, _ = invoke(capsys, "ekr-check", "--group", "psl2:5")
    assert first == second
    assert json.loads(first)["timings"] is None


def test_timings_opt_in(capsys):
    _, rep = report(capsys, "info", "--group", "sym:4", "--timings")
    assert "wall_seconds" in rep["timings"]


def test_corpus_workers_deterministic(capsys):
    _, one, _ = invoke(capsys, "corpus", "--criteria", "11")
    _, two, _ = invoke(capsys, "corpus", "--criteria", "11", "--workers", "2")
    assert one == two
    assert json.loads(one)["verdicts"]


def test_group_file_and_module_check(tmp_path, capsys):
    G = psl2(5)
    gfile = tmp_path / "g.json"
    gfile.write_text(emit_group_spec(spec_of(G)))
    S = point_stabilizer(G, 1)
    cfile = tmp_path / "s.json"
    cfile.write_text(json.dumps(G.elements[S].tolist()))
    code, rep = report(capsys, "module-check", "--group", f"@{gfile}", "--coclique", str(cfile))
    assert code == 0
    assert rep["payload"]["holds"]
    assert len(rep["group"]["file_sha256"]) == 64
    code, rep = report(capsys, "inner-dist", "--group", f"@{gfile}", "--coclique", str(cfile))
    assert code == 0 and rep["verdicts"]["matches_stabilizer"]


def test_module_check_rejects_non_coclique(tmp_path, capsys):
    G = sym(3)
    cfile = tmp_path / "s.json"
    cfile.write_text(json.dumps([[0, 1, 2], [1, 2, 0]]))
    code, _, err = invoke(capsys, "module-check", "--group", "sym:3", "--coclique", str(cfile))
    assert code == 1 and "intersecting" in err


def test_disconnected_reported(capsys):
    code, rep = report(capsys, "connectivity", "--group", "agammal1:3,2")
    assert code == 0
    assert not rep["payload"]["is_connected"]


@pytest.mark.parametrize("argv", [
    ["info", "--group", "nope:3"],
    ["info", "--group", "@/does/not/exist.json"],
    ["ekr-check", "--group", "sym:3", "--limit", "0"],
    ["module-check", "--group", "sym:3"],
    ["complements", "--group", "alt:5"],
])
def test_usage_errors(argv, capsys):
    code, _, err = invoke(capsys, *argv)
    assert code == 1 and err.startswith("ekr-lab: error")


def test_unknown_command(capsys):
    with pytest.raises(SystemExit) as exc:
        run(["frobnicate"])
    assert exc.value.code == 2


def test_text_output(capsys):
    code, out, _ = invoke(capsys, "derangements", "--group", "sym:3", "--out", "text")
    assert code == 0
    assert "d: 2" in out
