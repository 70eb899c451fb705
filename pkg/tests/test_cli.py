"""CLI: grammar, commands, exit codes, determinism, checkpointing."""

import json
import subprocess
import sys

import pytest

from lyutab import ParseError
from lyutab.cli import (EXIT_BUDGET, EXIT_NOT_FPURE, EXIT_OK, EXIT_PARSE,
                        JobSpec, main, parse_input)

TWO_PLANES = "char 2\nfacets: 1 2; 3 4\n"
HYPERSURFACE = "char 2\nvars x y\nideal: x*y\n"
NOT_FPURE = "char 2\nvars x y\nideal: x^2\n"
CYCLE5 = "char 3\ngraph: 1 2; 2 3; 3 4; 4 5; 5 1\n"


def write(tmp_path, text, name="job.txt"):
    path = tmp_path / name
    path.write_text(text)
    return str(path)


def test_parse_input_examples():
    spec = parse_input("char 2\nvars x y\nideal: x*y")
    assert spec.characteristic == 2
    assert spec.variables == ("x", "y")
    assert spec.ideal_generators == ("x*y",)

    spec2 = parse_input("char 5\nvars x y z\nideal: x^3+y^3+z^3")
    assert spec2.characteristic == 5 and len(spec2.ideal_generators) == 1

    with pytest.raises(ParseError):
        parse_input("char 4\nvars x\nideal: x")


def test_parse_input_forms_and_errors():
    spec = parse_input(TWO_PLANES)
    assert spec.source_kind == "facets" and spec.facets == ((1, 2), (3, 4))
    spec2 = parse_input(CYCLE5)
    assert spec2.source_kind == "graph" and len(spec2.edges) == 5
    multi = parse_input("char 3\nvars x y\nideal:\nx^2\ny^2\n")
    assert multi.ideal_generators == ("x^2", "y^2")
    # comments and blank lines are fine
    parse_input("# a comment\nchar 2\n\nvars x\nideal: x\n")
    for bad in (
        "vars x\nideal: x",               # missing char
        "char 2\nideal: x",               # missing vars for ideal form
        "char 2\nvars x\n",               # no source
        "char 2\nvars x\nideal:\n",       # no generators
        "char 2\nfacets: ",               # empty facets
        "char 2\ngraph: 1\n",             # malformed edge
        "char 2\nwhatever x\n",           # unknown directive
        "char 2\nvars a b\nfacets: 1 2",  # vars must match the auto names
        "char 2\nchar 3\nvars x\nideal: x",
    ):
        with pytest.raises(ParseError):
            parse_input(bad)


def test_jobspec_roundtrip():
    for text in (TWO_PLANES, HYPERSURFACE, CYCLE5,
                 "char 3\nvars x y\nideal:\nx^2\ny^2\n"):
        spec = parse_input(text)
        assert parse_input(spec.to_text()) == spec


def test_jobspec_build():
    I, delta, graph = parse_input(TWO_PLANES).build()
    assert delta is not None and len(I.generators) == 4
    I2, _, graph2 = parse_input(CYCLE5).build()
    assert graph2 is not None and I2.ring.n == 10


def test_cli_fpure(tmp_path, capsys):
    assert main(["fpure", write(tmp_path, HYPERSURFACE)]) == EXIT_OK
    assert "True" in capsys.readouterr().out
    assert main(["fpure", write(tmp_path, NOT_FPURE)]) == EXIT_OK
    assert "False" in capsys.readouterr().out


def test_cli_table_text_and_json(tmp_path, capsys):
    path = write(tmp_path, TWO_PLANES)
    assert main(["table", path, "--with-sdim"]) == EXIT_OK
    out = capsys.readouterr().out
    assert "Lyubeznik table" in out and "check sdim-vanishing: pass" in out

    assert main(["table", path, "--format", "json"]) == EXIT_OK
    doc = json.loads(capsys.readouterr().out)
    assert doc["d"] == 2 and [0, 1, 1] in doc["entries"] and [2, 2, 2] in doc["entries"]
    assert doc["fpure"] is True


def test_cli_json_deterministic(tmp_path, capsys):
    path = write(tmp_path, TWO_PLANES)
    main(["table", path, "--format", "json"])
    a = json.loads(capsys.readouterr().out)
    main(["table", path, "--format", "json"])
    b = json.loads(capsys.readouterr().out)
    a.pop("generated_at"); b.pop("generated_at")
    assert json.dumps(a) == json.dumps(b)


def test_cli_exit_codes(tmp_path, capsys):
    assert main(["table", write(tmp_path, NOT_FPURE)]) == EXIT_NOT_FPURE
    assert main(["table", write(tmp_path, TWO_PLANES), "--budget", "45"]) == EXIT_BUDGET
    out = capsys.readouterr().out
    assert "BUDGET_EXCEEDED" in out
    assert main(["table", write(tmp_path, "char 4\nvars x\nideal: x")]) == EXIT_PARSE
    assert main(["table", str(tmp_path / "missing.txt")]) == EXIT_PARSE


def test_cli_budget_persists_partial(tmp_path, capsys):
    path = write(tmp_path, TWO_PLANES)
    outfile = tmp_path / "partial.json"
    assert main(["table", path, "--budget", "45",
                 "--output", str(outfile)]) == EXIT_BUDGET
    capsys.readouterr()
    doc = json.loads(outfile.read_text())
    assert doc["error"] == "BUDGET_EXCEEDED"
    assert doc["complete"] is False


def test_cli_projective_checks(tmp_path, capsys):
    code = main(["projective", write(tmp_path, TWO_PLANES),
                 "--assert-cm", "--assert-equidim"])
    assert code == EXIT_OK
    out = capsys.readouterr().out
    assert "projective-duality: pass" in out
    assert "theorem-d-profile: pass" in out


def test_cli_raw_ext_with_disclaimer(tmp_path, capsys):
    assert main(["raw-ext", write(tmp_path, NOT_FPURE), "1", "1"]) == EXIT_OK
    out = capsys.readouterr().out
    assert "NOT F-pure" in out


def test_cli_sdim_and_splitting_prime(tmp_path, capsys):
    assert main(["sdim", write(tmp_path, HYPERSURFACE)]) == EXIT_OK
    assert "sdim = 0 (certified)" in capsys.readouterr().out
    assert main(["splitting-prime", write(tmp_path, HYPERSURFACE)]) == EXIT_OK
    out = capsys.readouterr().out
    assert "stabilized at e=1" in out


def test_cli_compatible(tmp_path, capsys):
    path = write(tmp_path, HYPERSURFACE)
    assert main(["compatible", path, "--second", "x"]) == EXIT_OK
    assert "compatible: True" in capsys.readouterr().out
    assert main(["compatible", path, "--second", "x + y"]) == EXIT_OK
    assert "compatible: False (definitive)" in capsys.readouterr().out
    assert main(["compatible", path]) == EXIT_PARSE


def test_cli_ncm(tmp_path, capsys):
    assert main(["ncm", write(tmp_path, TWO_PLANES), "--assert-equidim"]) == EXIT_OK
    out = capsys.readouterr().out
    assert "x1" in out
    assert main(["ncm", write(tmp_path, TWO_PLANES)]) == EXIT_PARSE


def test_cli_oracle(tmp_path, capsys):
    assert main(["oracle", write(tmp_path, TWO_PLANES)]) == EXIT_OK
    out = capsys.readouterr().out
    assert "components: 2" in out and "all agree" in out
    # oracle needs facets input
    assert main(["oracle", write(tmp_path, HYPERSURFACE)]) == EXIT_PARSE


def test_cli_checkpoint_resume(tmp_path, capsys):
    path = write(tmp_path, TWO_PLANES)
    ledger = tmp_path / "ledger.json"
    assert main(["table", path, "--checkpoint", str(ledger)]) == EXIT_OK
    capsys.readouterr()
    data = json.loads(ledger.read_text())
    assert any(k.endswith(":2:2") for k in data)
    # a second run resumes from the ledger and still succeeds
    assert main(["table", path, "--checkpoint", str(ledger)]) == EXIT_OK


def test_cli_strict_verify_threads(tmp_path, capsys):
    code = main(["table", write(tmp_path, TWO_PLANES), "--strict",
                 "--verify", "--threads", "2", "--with-sdim"])
    assert code == EXIT_OK


def test_console_entry_point(tmp_path):
    path = write(tmp_path, HYPERSURFACE)
    proc = subprocess.run([sys.executable, "-m", "lyutab.cli", "fpure", path],
                          capture_output=True, text=True)
    assert proc.returncode == 0
    assert "True" in proc.stdout
