import csv
import io
import json

import pytest

from betahole.cli import parse_value, run
from betahole.errors import DomainError
from betahole.field import make_beta


def call(*argv):
    out, err = io.StringIO(), io.StringIO()
    code = run(list(argv), stdout=out, stderr=err)
    return code, out.getvalue(), err.getvalue()


@pytest.mark.parametrize("m,delta", [("1", "(10)"), ("2", "(110)"), ("3", "(1110)"), ("two", "(1)")])
def test_delta(m, delta):
    assert call("delta", "--m", m) == (0, json.dumps({"delta": delta}, separators=(",", ":")) + "\n", "")


def test_dim_quarter():
    code, out, _ = call("dim", "--m", "1", "--t", "1/4", "--depth", "12")
    data = json.loads(out)
    assert code == 0 and data["method"] == "exact_sft"
    assert abs(data["dim_lo"] - 0.58436) < 1e-4 and abs(data["dim_hi"] - 0.58436) < 1e-4


def test_lyndon_check():
    assert json.loads(call("lyndon-check", "--m", "1", "--word", "01")[1]) == {"lyndon": False}
    data = json.loads(call("lyndon-check", "--word", "001", "--precision-digits", "12")[1])
    assert data["interval"]["t_left"]["decimal"] == "0.236067977500"


def test_output_is_deterministic():
    argv = ("staircase", "--grid", "0:0.45:10", "--depth", "8", "--format", "csv")
    assert call(*argv) == call(*argv)


def test_staircase_csv_columns():
    code, out, _ = call("staircase", "--points", "0,1/4,0.5", "--depth", "8", "--format", "csv")
    rows = list(csv.DictReader(io.StringIO(out)))
    assert code == 0
    assert list(rows[0]) == ["t_decimal", "t_exact", "dim_lo", "dim_hi", "method", "depth"]
    assert [r["method"] for r in rows] == ["exact_sft", "exact_sft", "zero_tail"]


@pytest.mark.parametrize(
    "argv",
    [
        ("expand", "--t", "2*b-3"),
        ("expand", "--t", "1", "--quasi", "--m", "2"),
        ("lyndon-enum", "--depth", "6", "--format", "csv"),
        ("member", "--t", "(b-1)/2"),
        ("sup-e", "--depth", "10"),
        ("coverage", "--depth", "8"),
        ("local-dim", "--t", "0", "--radii", "0.1,0.01"),
        ("tail-dim", "--t", "001(0)"),
        ("selftest", "--depth", "8"),
    ],
)
def test_commands_succeed(argv):
    code, out, err = call(*argv)
    assert code == 0, err
    assert out.endswith("\n")


def test_member_payload():
    data = json.loads(call("member", "--t", "(b-1)/2")[1])
    assert data["in_E"]["status"] == "member" and data["in_E_prime"]["status"] == "nonmember"


def test_unknown_is_not_an_error():
    code, out, _ = call("member", "--t", "1/10", "--horizon", "5", "--depth", "4")
    assert code == 0 and json.loads(out)["in_E"] == {"status": "unknown", "horizon": 5, "reason": "no period within horizon"}


@pytest.mark.parametrize(
    "argv",
    [
        (),
        ("bogus",),
        ("dim",),
        ("dim", "--t", "1.5"),
        ("dim", "--t", "__import__('os')"),
        ("delta", "--m", "0"),
        ("local-dim", "--t", "0.3"),
        ("dim", "--t", "1/4", "--depth", "0"),
        ("lyndon-check", "--word", "012"),
    ],
)
def test_usage_errors_exit_one(argv):
    code, out, err = call(*argv)
    assert code == 1 and out == "" and err


def test_emit_graph(tmp_path):
    path = tmp_path / "g.dot"
    assert call("dim", "--t", "1/4", "--emit-graph", str(path))[0] == 0
    assert path.read_text().startswith("digraph")


def test_invariant_violation_exits_two(monkeypatch):
    from betahole import bifurcation
    from betahole.errors import InvariantViolation

    def broken(*a, **k):
        raise InvariantViolation("disagreement")

    monkeypatch.setattr(bifurcation, "in_B", broken)
    assert call("member", "--t", "0")[0] == 2


def test_parse_value_forms():
    beta = make_beta(1)
    assert parse_value("0.25", beta) == beta(1) / 4
    assert parse_value("1/4", beta) == beta(1) / 4
    assert parse_value("(b-1)/2", beta) == (beta.gen - 1) / 2
    assert parse_value("(001)", beta) == (beta.gen - 1) / 2
    assert parse_value("b**-3", beta) == beta.element(-3, 2)
    for bad in ("b+", "x", "1/0", "b**b", "2.5.1"):
        with pytest.raises((DomainError, ZeroDivisionError, ValueError)):
            parse_value(bad, beta)
