"""Golden-file tests for the command line.

Each case runs in a scratch directory holding copies of the fixture files and
records stdout, stderr, the exit code and any files the command wrote.  Set
BGL_REGEN=1 to rewrite the golden files.
"""

import io
import os
import shutil
import subprocess
import sys
from importlib import resources
from pathlib import Path

import pytest

from bgl.cli import run

GOLDEN = Path(__file__).parent / "golden"
REGEN = os.environ.get("BGL_REGEN") == "1"

SCRIPTS = {
    "eloise.txt": "# eloise picks the second option at the root\n2\n1\n",
    "both.txt": "2\n\n9\n1\n1\n2\n",
}

CASES = [
    ("eval_p4_one", ["eval", "-g", "p4.bg", "-x", "w,y"]),
    ("eval_p4", ["eval", "-g", "p4.bg", "-x", "w,x"]),
    ("eval_p4_empty", ["eval", "-g", "p4.bg", "-x", "y,z"]),
    ("eval_seven_recursive", ["eval", "-g", "seven.bg", "-x", "a,b", "--recursive"]),
    ("eval_web", ["eval", "-g", "web5.formula", "-x", "w,y,z"]),
    ("entail_and_p5_c5", ["entail", "--and", "p5.bg", "c5.bg"]),
    ("entail_or_p5_c5", ["entail", "--or", "p5.bg", "c5.bg"]),
    ("entail_or_interpolant", ["entail", "--or", "lhs.formula", "interpolant.bg"]),
    ("decompose_game", ["decompose", "game.bg"]),
    ("decompose_modules", ["decompose", "modules.bg"]),
    ("decompose_seven", ["decompose", "seven.bg"]),
    ("decompose_bull", ["decompose", "bull.bg"]),
    ("web_five", ["web", "web5.formula"]),
    ("web_lhs", ["web", "lhs.formula"]),
    ("synth_web", ["synth", "web5.formula"]),
    ("synth_seven", ["synth", "seven.bg"]),
    ("synth_p4", ["synth", "p4.bg"]),
    ("normalize_dnf_c5", ["normalize", "--dnf", "c5.bg", "--emit-derivation", "c5.der"]),
    ("normalize_cnf_p4", ["normalize", "--cnf", "p4.bg"]),
    ("derive_and_interpolant", ["derive", "--and", "interpolant.bg", "rhs.formula", "-o", "out.der"]),
    ("derive_or_p5_c5", ["derive", "--or", "c5.bg", "p5.bg", "-o", "out.der"]),
    ("derive_refused", ["derive", "--and", "c5.bg", "p5.bg", "-o", "out.der"]),
    ("derive_budget", ["derive", "--and", "lhs.formula", "interpolant.bg", "-o", "out.der", "--budget", "3"]),
    ("check_derivation_c5", ["check-derivation", "--and", "c5_dnf.der"]),
    ("check_derivation_wrong_system", ["check-derivation", "--or", "c5_dnf.der"]),
    ("check_cis_bull", ["check", "cis", "bull.bg"]),
    ("check_total_bull", ["check", "total", "bull.bg"]),
    ("check_total_c5", ["check", "total", "c5.bg"]),
    ("check_prime_p4", ["check", "prime", "p4.bg"]),
    ("check_p4free_bull", ["check", "p4free", "bull.bg"]),
    ("check_deterministic_c5", ["check", "deterministic", "c5.bg"]),
    ("play_static_game", ["play", "game.bg", "-x", "h"]),
    ("play_sequential_c5", ["play", "c5.bg", "-x", "v,w,z", "--mode", "sequential"]),
    ("play_sequential_abelard", ["play", "p4.bg", "-x", "w,z", "--mode", "sequential", "--second", "abelard"]),
    ("play_human_eloise", ["play", "game.bg", "-x", "h", "--human", "eloise", "--script", "eloise.txt"]),
    ("play_human_both", ["play", "game.bg", "-x", "a", "--human", "both", "--script", "both.txt"]),
    ("play_script_runs_out", ["play", "p4.bg", "-x", "w", "--human", "eloise", "--script", "empty.txt"]),
    ("reduce_sat", ["reduce", "sat", "sample.cnf"]),
    ("reduce_sat_bit1", ["reduce", "sat", "sample.cnf", "--bit", "1"]),
    ("reduce_qbf", ["reduce", "qbf", "sample.qdimacs"]),
    ("reduce_qbf_and_files", ["reduce", "qbf", "sample.qdimacs", "--flavor", "and", "-o", "q"]),
    ("error_missing_file", ["decompose", "nope.bg"]),
    ("error_bad_graph", ["decompose", "broken.bg"]),
    ("error_second_static", ["play", "p4.bg", "-x", "w", "--second", "eloise"]),
    ("error_plain_cnf_quantifier", ["reduce", "sat", "sample.qdimacs"]),
]


@pytest.fixture
def workdir(tmp_path, monkeypatch):
    data = resources.files("bgl").joinpath("data")
    for p in data.iterdir():
        if p.is_file():
            (tmp_path / p.name).write_text(p.read_text(encoding="utf-8"), encoding="utf-8")
    for name, text in SCRIPTS.items():
        (tmp_path / name).write_text(text, encoding="utf-8")
    (tmp_path / "empty.txt").write_text("", encoding="utf-8")
    (tmp_path / "broken.bg").write_text("node a\nedge a b c\n", encoding="utf-8")
    monkeypatch.chdir(tmp_path)
    run(["normalize", "--dnf", "c5.bg", "--emit-derivation", "c5_dnf.der"], io.StringIO(), io.StringIO())
    return tmp_path


def transcript(argv, where):
    before = {p.name for p in where.iterdir()}
    out, err = io.StringIO(), io.StringIO()
    code = run(argv, out, err)
    parts = ["$ bgl " + " ".join(argv), out.getvalue().rstrip("\n"), "--- stderr", err.getvalue().rstrip("\n"), f"--- exit {code}"]
    for name in sorted({p.name for p in where.iterdir()} - before):
        parts += [f"--- file {name}", (where / name).read_text(encoding="utf-8").rstrip("\n")]
        (where / name).unlink()
    return "\n".join(parts) + "\n"


@pytest.mark.parametrize("name, argv", CASES, ids=[c[0] for c in CASES])
def test_golden(name, argv, workdir):
    first = transcript(argv, workdir)
    assert transcript(argv, workdir) == first
    path = GOLDEN / f"{name}.txt"
    if REGEN:
        GOLDEN.mkdir(exist_ok=True)
        path.write_text(first, encoding="utf-8")
    assert path.exists(), f"missing golden file {path.name}; run with BGL_REGEN=1"
    assert first == path.read_text(encoding="utf-8")


def test_every_subcommand_has_a_golden_case():
    from bgl.cli import build_parser

    parser = build_parser()
    sub = next(a for a in parser._actions if a.choices and "eval" in a.choices)
    covered = {argv[0] for _, argv in CASES}
    assert set(sub.choices) <= covered


EXIT_CODES = [
    (["entail", "--and", "p5.bg", "c5.bg"], 0),
    (["entail", "--and", "c5.bg", "p5.bg"], 1),
    (["check", "cis", "c5.bg"], 1),
    (["check", "p4free", "web5.formula"], 0),
    (["decompose", "missing.bg"], 2),
    (["synth", "p4.bg"], 2),
    (["entail", "p5.bg", "c5.bg"], 2),
    (["frobnicate"], 2),
    (["derive", "--and", "lhs.formula", "interpolant.bg", "-o", "x.der", "--budget", "3"], 3),
]


@pytest.mark.parametrize("argv, code", EXIT_CODES)
def test_exit_codes(argv, code, workdir, capsys):
    # argparse usage errors still go to the real stderr, hence capsys
    assert run(argv, io.StringIO(), io.StringIO()) == code


def test_derivation_round_trip_through_files(workdir):
    assert run(["derive", "--or", "lhs.formula", "interpolant.bg", "-o", "d.der"], io.StringIO(), io.StringIO()) == 0
    out = io.StringIO()
    assert run(["check-derivation", "--or", "d.der"], out, io.StringIO()) == 0
    assert out.getvalue().startswith("ok (")
    assert run(["check-derivation", "--and", "d.der"], io.StringIO(), io.StringIO()) == 1
    lines = (workdir / "d.der").read_text().splitlines()
    lines.insert(lines.index("end"), "edge a nowhere")
    (workdir / "bad.der").write_text("\n".join(lines) + "\n")
    assert run(["check-derivation", "bad.der"], io.StringIO(), io.StringIO()) == 2


def test_stdin_input(workdir, monkeypatch):
    monkeypatch.setattr(sys, "stdin", io.StringIO("node a\nnode b\nnode c\nnode d\nedge a b\nedge b c\nedge c d\n"))
    out = io.StringIO()
    assert run(["check", "prime", "-"], out, io.StringIO()) == 0
    assert out.getvalue() == "true\n"


def test_console_script_matches_in_process(workdir):
    exe = shutil.which("bgl")
    cmd = [exe] if exe else [sys.executable, "-m", "bgl.cli"]
    argv = ["decompose", "game.bg"]
    proc = subprocess.run(cmd + argv, capture_output=True, text=True, cwd=workdir)
    out = io.StringIO()
    run(argv, out, io.StringIO())
    assert proc.returncode == 0 and proc.stdout == out.getvalue()
