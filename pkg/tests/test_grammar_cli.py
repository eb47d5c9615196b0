import json
import os
import subprocess
import sys

import pytest
from hypothesis import given, strategies as st

from abclosure.cli import main
from abclosure.grammar import SpecSyntaxError, build, parse_spec, render

DOCUMENTED = [
    "tm", "fib", "trib", "champ(3)", "periodic(0102)", "preperiodic(0011,001101)",
    "sturmian(alpha=quad(3/2,-1/2,5), rho=quad(3/2,-1/2,5), conv=under)",
    "sturmian(alpha=quad(-1,1,2), conv=bar)",
    "ternary(alpha=quad(-1,1,2), zeta=1/2, rho=0, one_in_j1=true, zeta_in_j2=false)",
    "interleave(fib; periodic(0102); periodic(ab))",
    "morphic(0->01, 1->10, start=0)",
    "image(fib, 0->02, 1->12)",
    "ar(directive=periodic(012))",
    "fm(G={c}, E={a}, F={b}, s=fib)",
    "prepend(2, tm)", "shift(fib, 3)",
]


@pytest.mark.parametrize("text", DOCUMENTED)
def test_round_trip(text):
    ast = parse_spec(text)
    again = parse_spec(render(ast))
    assert again == ast and render(again) == render(ast)
    assert build(text).render(30) == build(render(ast)).render(30)


nested = st.recursive(
    st.sampled_from(["tm", "fib", "trib", "periodic(01)", "periodic(ab)"]),
    lambda inner: st.one_of(
        st.builds(lambda a, k: f"shift({a}, {k})", inner, st.integers(0, 9)),
        st.builds(lambda a: f"prepend(0, {a})", inner)),
    max_leaves=4)


@given(nested, st.sampled_from(["", " ", "\n"]))
def test_round_trip_nested(text, ws):
    ast = parse_spec(text.replace(", ", "," + ws))
    assert parse_spec(render(ast)) == ast


@pytest.mark.parametrize("text,fragment,line,col", [
    ("periodic(01", "unexpected end of input", 1, 12),
    ("bogus", "unknown constructor", 1, 1),
    ("tm(1)", "takes no arguments", 1, 1),
    ("sturmian(alpha=quad(1,2))", "", 1, None),
    ("interleave(fib;\n  periodic(01) periodic(ab))", "", 2, 16),
])
def test_diagnostics(text, fragment, line, col):
    with pytest.raises(SpecSyntaxError) as e:
        build(text)
    assert fragment in str(e.value)
    assert e.value.line == line
    if col is not None:
        assert e.value.col == col


def test_expected_token_set_is_reported():
    with pytest.raises(SpecSyntaxError) as e:
        parse_spec("periodic(")
    assert e.value.expected


def run(argv, capsys):
    code = main(argv)
    out = capsys.readouterr()
    return code, out.out, out.err


def test_generate(capsys):
    assert run(["generate", "tm", "-n", "12"], capsys)[:2] == (0, "011010011001\n")


def test_member_exit_codes(capsys):
    code, out, _ = run(["member", "preperiodic(0011,001101)", "tm", "-L", "60", "-N", "4000"], capsys)
    assert code == 0 and "member-up-to-L" in out
    code, out, _ = run(["member", "tm", "preperiodic(0011,001101)", "-L", "60", "-N", "4000"], capsys)
    assert code == 0
    code, out, _ = run(["member", "periodic(00101)", "tm", "-L", "20", "-N", "1000", "--format", "json"], capsys)
    d = json.loads(out)
    assert code == 1 and d["schema"] == 1 and d["result"] == "rejected" and d["witness"]["factor"] == "0010100"


def test_census_json(capsys):
    code, out, _ = run(["census", "periodic(00011)", "-N", "500", "--format", "json"], capsys)
    d = json.loads(out)
    assert code == 0 and d["schema"] == 1 and len(d["representatives"]) == 2


def test_complexity_and_corridor(capsys):
    code, out, _ = run(["complexity", "tm", "-L", "6", "--format", "csv"], capsys)
    assert code == 0 and out.splitlines()[1:] == ["1,2", "2,3", "3,2", "4,3", "5,2", "6,3"]
    code, out, _ = run(["complexity", "fib", "--factor", "-L", "5", "--format", "json"], capsys)
    assert [v["value"] for v in json.loads(out)["values"]] == [2, 3, 4, 5, 6]
    code, out, _ = run(["corridor", "fib", "--letter", "1", "-L", "3", "--format", "csv"], capsys)
    assert out.splitlines() == ["n,letter,min,max", "1,1,0,1", "2,1,0,1", "3,1,1,2"]


def test_hl_exists(capsys):
    spec = "ternary(alpha=quad(-1,1,2), zeta=1/2)"
    code, out, _ = run(["hl-exists", spec, "--kind", "1heavy2light", "-m", "5"], capsys)
    assert code == 0 and "true" in out
    code, _, err = run(["hl-exists", "fib", "--kind", "12heavy", "-m", "5"], capsys)
    assert code == 2 and "ternary" in err


def test_subshift_commands(capsys, tmp_path):
    assert run(["subshift", "golden-mean", "legal", "0101"], capsys)[0] == 0
    assert run(["subshift", "golden-mean", "legal", "0110"], capsys)[0] == 1
    f = tmp_path / "gm.txt"
    f.write_text("alphabet 0 1\n11\n")
    code, out, _ = run(["subshift", str(f), "minimal-forbidden", "-L", "4", "--format", "json"], capsys)
    assert code == 0 and json.loads(out)["words"] == ["11"]
    code, out, _ = run(["subshift", "three-letter", "sft-report", "-n", "4", "--format", "json"], capsys)
    assert code == 0 and json.loads(out)["witness"] == "bccccb"
    code, out, _ = run(["subshift", "four-letter", "nonsofic", "-L", "3"], capsys)
    assert code == 0


@pytest.mark.parametrize("argv", [
    ["generate", "tm"],
    ["generate", "nosuch", "-n", "3"],
    ["member", "periodic(02)", "tm", "-L", "3"],
    ["subshift", "nosuch", "legal", "0"],
    ["verify", "--suite", "nosuch"],
    ["generate", "tm", "-n", "0"],
])
def test_usage_errors_exit_2(argv, capsys):
    code, out, err = run(argv, capsys)
    assert code == 2 and out == "" and "error" in err


def test_cli_output_is_deterministic_across_processes_and_workers():
    def cli(*args, workers="8"):
        env = dict(os.environ, ABCLOSURE_WORKERS=workers)
        return subprocess.run([sys.executable, "-m", "abclosure.cli", *args], env=env,
                              capture_output=True, text=True)
    a = cli("verify", "--suite", "quick", "--workers", "1")
    b = cli("verify", "--suite", "quick", "--workers", "8")
    c = cli("verify", "--suite", "quick", "--workers", "8")
    assert a.returncode == 0, a.stdout + a.stderr
    assert a.stdout == b.stdout == c.stdout
