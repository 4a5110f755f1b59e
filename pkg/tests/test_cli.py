import csv
import io

import pytest

from dynconn.cli import BENCH_COLUMNS, main
from dynconn.oracle import OracleGraph, o_connected
from dynconn.trace import TraceError, generate, parse


def run_cli(argv, capsys):
    code = main(argv)
    out, err = capsys.readouterr()
    return code, out, err


def write(tmp_path, text, name="t.txt"):
    p = tmp_path / name
    p.write_text(text)
    return str(p)


def test_disconnected_query(tmp_path, capsys):
    path = write(tmp_path, "init 4 10\ni 1 2\nq 1 3\n")
    assert run_cli(["run", path], capsys)[:2] == (0, "0\n")


def test_path_query(tmp_path, capsys):
    path = write(tmp_path, "# a path\ninit 4 10\ni 1 2\ni 2 3   # second edge\nq 1 3\n")
    assert run_cli(["run", path], capsys)[:2] == (0, "1\n")


@pytest.mark.parametrize("text, needle", [
    ("i 0 1\n", "before the init"),
    ("init 3 10\ni 0 3\n", "line 2"),
    ("init 3 10\ni 0 1\ni 1 0\n", "line 3"),
    ("init 3 10\nd 0 1\n", "line 2"),
    ("init 3 1\ni 0 1\ni 1 2\n", "capacity"),
    ("init 3 10\nx 0 1\n", "unknown operation"),
    ("init 3 10\nq 0 one\n", "not a decimal"),
])
def test_input_errors_exit_1(tmp_path, capsys, text, needle):
    code, _, err = run_cli(["run", write(tmp_path, text)], capsys)
    assert code == 1
    assert needle in err


def test_generate_is_repeatable(tmp_path, capsys):
    a = run_cli(["generate", "30", "50", "400", "--seed", "7"], capsys)[1]
    b = run_cli(["generate", "30", "50", "400", "--seed", "7"], capsys)[1]
    assert a == b
    trace = parse(a)
    assert len(trace.ops) == 400


def test_generated_trace_respects_contract():
    trace = generate(20, 30, 2000, mix=(0.6, 0.3, 0.1), seed=2)
    g = OracleGraph(20)
    for op in trace.ops:
        if op.kind == "i":
            g.insert(op.u, op.v)
            assert g.m <= 30
        elif op.kind == "d":
            g.delete(op.u, op.v)


def test_generate_rejects_bad_mix():
    with pytest.raises(ValueError):
        generate(5, 5, 5, mix=(0.5, 0.5, 0.5))


def test_delete_with_no_edges_falls_back_to_insert():
    trace = generate(5, 5, 10, mix=(0.0, 1.0, 0.0), seed=0)
    assert trace.ops[0].kind == "i"


def test_run_matches_oracle_replay(tmp_path, capsys):
    trace = generate(60, 150, 5000, seed=5)
    code, out, _ = run_cli(["run", write(tmp_path, trace.dump())], capsys)
    assert code == 0
    g = OracleGraph(60)
    want = []
    for op in trace.ops:
        if op.kind == "i":
            g.insert(op.u, op.v)
        elif op.kind == "d":
            g.delete(op.u, op.v)
        else:
            want.append("1\n" if o_connected(g, op.u, op.v) else "0\n")
    assert out == "".join(want)


def test_bench_csv(tmp_path, capsys):
    trace = generate(40, 100, 300, seed=1)
    path = write(tmp_path, trace.dump())
    code, out, _ = run_cli(["bench", path, "--k-override", "3", "--h-override", "4",
                            "--audit-every", "1", "--encoding", "packed"], capsys)
    assert code == 0
    rows = list(csv.reader(io.StringIO(out)))
    assert rows[0] == BENCH_COLUMNS
    assert len(rows) == 301
    assert all(len(r) == 9 for r in rows)
    assert all(int(r[2]) > 0 for r in rows[1:])
    assert max(int(r[7]) for r in rows[1:]) <= 12 * 3


def test_bad_parameters_exit_1(tmp_path, capsys):
    path = write(tmp_path, "init 3 10\n")
    assert run_cli(["run", path, "--h-override", "3"], capsys)[0] == 1


def test_internal_failure_exits_2(tmp_path, capsys, monkeypatch):
    import dynconn.cli as cli

    monkeypatch.setattr(cli, "audit", lambda c: ["ChAdj(0,0)(0,0) is set without an edge"])
    path = write(tmp_path, "init 3 10\ni 0 1\n")
    code, _, err = run_cli(["run", path, "--audit-every", "1"], capsys)
    assert code == 2 and "invariant" in err


def test_trace_error_carries_line():
    with pytest.raises(TraceError) as info:
        parse("init 2 2\n\n# note\nq 0 5\n")
    assert info.value.line == 4
