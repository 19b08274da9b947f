"""Text format round-trips, generators, and the command line."""

import json
import subprocess
import sys
from fractions import Fraction

import pytest

from ecaug.cli import main
from ecaug.graph import INF, edge_connectivity
from ecaug.io import (ParseError, generate_random, parse_instance,
                      serialize_instance)

SAMPLE = """c tiny path
p aug 3 2 1 2 1
e 0 1
e 1 2
l 0 2 1 3/2
"""


def test_parse_sample():
    inst = parse_instance(SAMPLE)
    assert inst.graph.n == 3
    assert inst.k == 2 and inst.p == 1
    assert inst.links[0].cost == Fraction(3, 2)


def test_round_trip():
    inst = parse_instance(SAMPLE)
    again = parse_instance(serialize_instance(inst))
    assert again == inst


def test_inf_cost_round_trip():
    text = "p aug 2 1 1 2 1\ne 0 1\nl 0 1 1 inf\n"
    inst = parse_instance(text)
    assert inst.links[0].cost == INF
    assert "inf" in serialize_instance(inst)


def test_solution_round_trip():
    from ecaug.io import parse_solution, serialize_solution
    from ecaug.solver import solve

    inst = parse_instance(SAMPLE)
    sol = solve(inst)
    again = parse_solution(inst, serialize_solution(inst, sol))
    assert again == sol


def test_parse_errors_carry_line_numbers():
    with pytest.raises(ParseError, match="line 3"):
        parse_instance("p aug 2 1 0 2 1\ne 0 1\ne 0 5\n")
    with pytest.raises(ParseError, match="header"):
        parse_instance("e 0 1\n")
    with pytest.raises(ParseError, match="declares"):
        parse_instance("p aug 2 2 0 2 1\ne 0 1\n")


def test_duplicate_slot_keeps_cheaper(capsys):
    text = ("p aug 2 1 2 2 1\ne 0 1\n"
            "l 0 1 1 5\nl 0 1 1 2\n")
    inst = parse_instance(text)
    assert len(inst.links) == 1
    assert inst.links[0].cost == Fraction(2)
    assert "duplicate" in capsys.readouterr().err


def test_generator_kinds_have_right_connectivity():
    tree = generate_random("tree", 8, 2, 2, seed=1)
    assert edge_connectivity(tree.graph) == 1
    cactus = generate_random("cactus", 8, 2, 3, seed=1)
    assert edge_connectivity(cactus.graph) == 2
    forest = generate_random("forest", 8, 2, 2, seed=1, components=2)
    assert len(forest.graph.components()) == 2
    gen = generate_random("general", 5, 2, 4, seed=1)
    assert edge_connectivity(gen.graph) == 3


def test_generator_is_deterministic():
    a = generate_random("tree", 10, 3, 2, seed=42)
    b = generate_random("tree", 10, 3, 2, seed=42)
    assert serialize_instance(a) == serialize_instance(b)


def run_cli(args, instance_text=None, tmp_path=None):
    argv = list(args)
    if instance_text is not None:
        path = tmp_path / "inst.aug"
        path.write_text(instance_text)
        argv.append(str(path))
    proc = subprocess.run([sys.executable, "-m", "ecaug.cli"] + argv,
                          capture_output=True, text=True)
    return proc


def test_cli_solve_exit_codes(tmp_path):
    ok = run_cli(["solve"], SAMPLE, tmp_path)
    assert ok.returncode == 0
    data = json.loads(ok.stdout)
    assert data["status"] == "optimal"
    assert data["cost"] == "3/2"

    bad = "p aug 3 2 0 2 1\ne 0 1\ne 1 2\n"
    infeasible = run_cli(["solve"], bad, tmp_path)
    assert infeasible.returncode == 2
    assert json.loads(infeasible.stdout) == {"status": "infeasible"}

    err = run_cli(["solve", str(tmp_path / "missing.aug")])
    assert err.returncode == 1
    assert "error" in err.stderr


def test_cli_gen_solve_pipe(tmp_path):
    gen = run_cli(["--seed", "7", "gen", "--kind", "tree", "-n", "6", "-k", "2",
                   "-p", "2", "--link-fraction", "0.6"])
    assert gen.returncode == 0
    (tmp_path / "g.aug").write_text(gen.stdout)
    sol = run_cli(["solve", str(tmp_path / "g.aug")])
    assert sol.returncode in (0, 2)


def test_cli_verify_and_stats(tmp_path):
    inst_path = tmp_path / "i.aug"
    inst_path.write_text(SAMPLE)
    sol = run_cli(["solve", str(inst_path)])
    sol_path = tmp_path / "s.json"
    sol_path.write_text(sol.stdout)
    ver = run_cli(["verify", str(inst_path), str(sol_path)])
    assert ver.returncode == 0
    assert json.loads(ver.stdout)["valid"]
    stats = run_cli(["stats", str(inst_path)])
    assert json.loads(stats.stdout)["edge_connectivity"] == 1


def test_cli_kernelize_trace_is_json(tmp_path):
    out = run_cli(["kernelize", "--emit-trace"], SAMPLE, tmp_path)
    assert out.returncode == 0
    data = json.loads(out.stdout)
    assert "instance" in data and "trace" in data


def test_cli_determinism(tmp_path):
    args = ["--seed", "3", "gen", "--kind", "cactus", "-n", "7", "-k", "3",
            "-p", "2", "--link-fraction", "0.5"]
    assert run_cli(args).stdout == run_cli(args).stdout


def test_main_oracle_in_process(tmp_path):
    path = tmp_path / "i.aug"
    path.write_text(SAMPLE)
    assert main(["oracle", str(path)]) == 0
