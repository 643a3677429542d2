import json
import os
import subprocess
import sys

import pytest

from cobweb.cli import SUBCOMMANDS, main, run
from conftest import GOLDEN

# name -> argv; expected stdout lives in tests/golden/<name>.txt
# (set COBWEB_REGEN_GOLDEN=1 to rewrite them)
CASES = {
    "triangle_fibonacci": "triangle --seq fibonacci --rows 6",
    "triangle_odd_csv": "triangle --seq odd --rows 4 --format csv",
    "triangle_natural_json": "triangle --seq natural --rows 4 --format json",
    "admissible_fibonacci": "admissible --seq fibonacci --upto 20",
    "admissible_odd": "admissible --seq odd --upto 10",
    "admissible_odd_json": "admissible --seq odd --upto 10 --format json",
    "gcd_fibonacci": "gcd-morphic --seq fibonacci --upto 30",
    "gcd_natural_json": "gcd-morphic --seq natural --upto 12 --format json",
    "search_admissible": "search --property admissible --len 3 --max-term 4",
    "search_gcd_json": "search --property gcd-morphic --len 2 --max-term 2 --format json",
    "search_prefix": "search --property admissible --len 4 --max-term 7 --prefix 1,3",
    "poset_dot": "poset --seq natural --levels 2 --export dot",
    "poset_json": "poset --seq fibonacci --levels 4 --export json",
    "poset_csv": "poset --seq natural --levels 3 --export csv-matrix",
    "chains_formula": "chains --seq fibonacci --from 0 --to 6",
    "chains_brute_json": "chains --seq natural --from 1 --to 5 --mode brute --format json",
    "mobius_natural": "mobius --seq natural --levels 3",
    "mobius_csv": "mobius --seq fibonacci --levels 4 --format csv",
    "charpoly_natural": "charpoly --seq natural --levels 4",
    "charpoly_json": "charpoly --seq gauss:2 --levels 3 --format json",
    "domatic_mod2": "domatic --seq fibonacci --levels 6 --mod 2",
    "domatic_mod3_json": "domatic --seq fibonacci --levels 6 --mod 3 --format json",
    "tile_exists": "tile exists --seq natural --from 1 --to 3",
    "tile_exists_identity": "tile exists --seq natural --from 1 --to 3 --policy identity",
    "tile_count": "tile count --seq natural --from 2 --to 4",
    "tile_enumerate": "tile enumerate --seq natural --from 1 --to 3",
    "tile_enumerate_limit_json": "tile enumerate --seq natural --from 2 --to 4 --limit 2 --format json",
    "tile_triangle_bound": "tile triangle --seq natural --rows 5",
    "tile_triangle_count": "tile triangle --seq fibonacci --rows 5 --mode count",
    "tile_triangle_exists_json": "tile triangle --seq natural --rows 4 --mode exists --format json",
}


@pytest.mark.parametrize("name", sorted(CASES))
def test_golden(name):
    report = run(CASES[name].split())
    assert report.exit_status == 0, report.error
    path = GOLDEN / f"{name}.txt"
    if os.environ.get("COBWEB_REGEN_GOLDEN"):
        GOLDEN.mkdir(exist_ok=True)
        path.write_text(report.output)
    assert report.output == path.read_text()


def test_every_subcommand_has_a_golden():
    covered = {argv.split()[0] for argv in CASES.values()}
    assert covered == set(SUBCOMMANDS)


@pytest.mark.parametrize("name", [n for n in sorted(CASES) if "json" in n])
def test_json_roundtrip(name):
    text = run(CASES[name].split()).output
    assert json.dumps(json.loads(text)) + "\n" == text


def test_help_lists_subcommands():
    report = run(["--help"])
    assert report.exit_status == 0
    for name in SUBCOMMANDS:
        assert name in report.output


@pytest.mark.parametrize(
    "argv",
    [
        "",
        "bogus",
        "triangle --rows 3",
        "triangle --seq natural --seq-file x --rows 3",
        "chains --seq natural --from 0 --to 3 --mode magic",
        "tile",
        "poset --seq natural --levels 2 --export svg",
    ],
)
def test_usage_errors_exit_2(argv):
    report = run(argv.split())
    assert report.exit_status == 2
    assert report.output == ""
    assert "usage:" in report.error


@pytest.mark.parametrize(
    "argv",
    [
        "triangle --seq gauss:0 --rows 3",
        "triangle --seq primes --rows 3",
        "chains --seq natural --from 4 --to 2",
        "chains --seq natural --from 0 --to 12 --mode brute",
        "poset --seq gauss:3 --levels 12 --export json",
        "domatic --seq natural --levels 2 --mod 3",
        "tile count --seq natural --from 1 --to 5",
        "tile count --seq natural --from 3 --to 3",
        "triangle --seq-file /nonexistent/seq.txt --rows 2",
    ],
)
def test_domain_errors_exit_1(argv):
    report = run(argv.split())
    assert report.exit_status == 1
    assert report.output == ""
    assert report.error.startswith("cobweb: ")


def test_seq_file(tmp_path):
    path = tmp_path / "fib.txt"
    path.write_text("# first Fibonacci terms\nroot=0\n1\n1\n2\n3\n5\n8\n")
    from_file = run(["triangle", "--seq-file", str(path), "--rows", "6"])
    assert from_file.exit_status == 0
    assert from_file.output == run(["triangle", "--seq", "fibonacci", "--rows", "6"]).output
    too_short = run(["triangle", "--seq-file", str(path), "--rows", "7"])
    assert too_short.exit_status == 1 and "OutOfRange" in too_short.error


def test_budget_cells_env(monkeypatch):
    argv = "tile count --seq natural --from 2 --to 4".split()
    assert run(argv).output == "132\n"
    monkeypatch.setenv("COBWEB_BUDGET_CELLS", "10")
    assert run(argv).exit_status == 1
    assert run(argv + ["--budget-cells", "12"]).output == "132\n"
    monkeypatch.setenv("COBWEB_BUDGET_CELLS", "lots")
    assert run(argv).exit_status == 1


def test_truncation_flag():
    report = run("tile enumerate --seq natural --from 2 --to 4 --limit 3".split())
    assert report.truncated
    assert report.output.endswith("# 3 tilings (truncated)\n")
    assert not run("tile enumerate --seq natural --from 1 --to 3".split()).truncated


def test_main_writes_streams(capsys):
    assert main(["chains", "--seq", "fibonacci", "--from", "0", "--to", "6"]) == 0
    assert capsys.readouterr().out == "240\n"
    assert main(["chains", "--seq", "natural", "--from", "3", "--to", "1"]) == 1
    assert "InvalidParameter" in capsys.readouterr().err


def test_module_entry_point():
    proc = subprocess.run(
        [sys.executable, "-m", "cobweb", "charpoly", "--seq", "natural", "--levels", "2"],
        capture_output=True, text=True, check=False,
    )
    assert proc.returncode == 0
    assert proc.stdout == "x^2 - x\n"
