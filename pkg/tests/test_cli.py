import glob
import io
import json
import os
import subprocess
import sys
from fractions import Fraction

import pytest

from skolem.cli import run
from skolem.errors import ParseError
from skolem.problem import parse, parse_text, same_lrs, serialize

HERE = os.path.dirname(__file__)
CORPUS = os.path.join(HERE, "corpus")


def cli(*argv):
    out = io.StringIO()
    code = run(list(argv), stdout=out)
    return code, json.loads(out.getvalue())


def corpus(name):
    return os.path.join(CORPUS, name + ".json")


def write(tmp_path, text, name="p.json"):
    p = tmp_path / name
    p.write_bytes(text.encode("utf-8"))
    return str(p)


class TestParse:
    def test_rationals_only(self):
        lrs = parse_text('{"coeffs":["1","1"],"initial":["5","-3"]}')
        assert lrs.field.D == 1
        assert [t.rational_value for t in lrs.terms(6)] == [5, -3, 2, -1, 1, 0]

    def test_gaussian_selector(self):
        lrs = parse_text('{"field_poly":[1,0,1],"root":0,"coeffs":[[0,1]],"initial":["1"]}')
        K = lrs.field
        z = K.to_algebraic(K.theta).approx(60)
        assert complex(z) == pytest.approx(1j)

    def test_sqrt2_literal(self):
        lrs = parse_text('{"field_poly":[-2,0,1],"root":1,"coeffs":["1"],"initial":[[0,1]]}')
        u0 = lrs.initial[0]
        K = lrs.field
        assert u0 * u0 == K.element([2])
        assert complex(K.to_algebraic(u0).approx(60)) == pytest.approx(2 ** 0.5)

    def test_non_monic_field_polynomial(self):
        # 2x^2 - 1: root 1 is +1/sqrt(2)
        lrs = parse_text('{"field_poly":[-1,0,2],"root":1,"coeffs":["1"],"initial":[[0,1]]}')
        u0 = lrs.initial[0]
        assert (u0 * u0).rational_value == Fraction(1, 2)
        assert complex(lrs.field.to_algebraic(u0).approx(60)) == pytest.approx(2 ** -0.5)

    def test_invalid_json_offset(self):
        text = '{"coeffs": [1, 2,], "initial": [0, 1]}'
        with pytest.raises(ParseError) as e:
            parse_text(text)
        assert e.value.offset == text.index("]")

    def test_schema_violation_offset(self):
        text = '{"coeffs": ["1", true], "initial": ["0", "1"]}'
        with pytest.raises(ParseError) as e:
            parse_text(text)
        assert e.value.offset == text.index("true")

    def test_offsets_are_bytes(self):
        text = '{"name": "éé", "coeffs": ["1", "x"], "initial": ["0", "1"]}'
        with pytest.raises(ParseError) as e:
            parse_text(text)
        assert e.value.offset == len(text[:text.index('"x"')].encode("utf-8"))

    def test_reducible_field(self):
        text = '{"field_poly": [-1, 0, 1], "coeffs": ["1"], "initial": ["1"]}'
        with pytest.raises(ParseError) as e:
            parse_text(text)
        assert "reducible" in str(e.value)
        assert e.value.offset == text.index("[-1")

    def test_inconsistent_lengths(self):
        text = '{"coeffs": ["1", "1"], "initial": ["0"]}'
        with pytest.raises(ParseError) as e:
            parse_text(text)
        assert e.value.offset == text.index('["0"]')

    def test_selector_out_of_range(self):
        with pytest.raises(ParseError):
            parse_text('{"field_poly":[1,0,1],"root":2,"coeffs":["1"],"initial":["1"]}')

    def test_unknown_key(self):
        with pytest.raises(ParseError):
            parse_text('{"coeffs":["1"],"initial":["1"],"extra":1}')


@pytest.mark.parametrize("path", sorted(glob.glob(os.path.join(CORPUS, "*.json"))))
def test_round_trip(path):
    lrs = parse(path)
    again = parse_text(json.dumps(serialize(lrs)))
    assert same_lrs(lrs, again)
    assert again.terms(12) == [again.field.element(t.c) for t in lrs.terms(12)]


class TestCommands:
    def test_solve_shifted_fibonacci(self):
        code, rep = cli("solve", corpus("shifted_fibonacci"))
        assert code == 0
        assert (rep["finite_zeros"], rep["progressions"], rep["status"]) == ([5], [], "complete")

    def test_solve_cross_check(self):
        code, rep = cli("solve", corpus("berstel"), "--max-enumerate", "200")
        assert code == 0
        assert rep["cross_check"]["agrees"] is True
        assert rep["cross_check"]["enumerated_zeros"] == [0, 1, 4, 6, 13, 52]

    def test_classify_quartic(self):
        code, rep = cli("classify", corpus("quartic_3pm4i_4pm3i"))
        assert code == 0
        w = rep["witness"]
        assert (w["kind"], w["p"], w["r"]) == ("nonarch", 5, 2)
        assert rep["degenerate"] is True
        assert rep["L"] == 4
        assert all(b["witness"]["r"] == 1 for b in rep["branches"])

    def test_classify_fibonacci(self):
        code, rep = cli("classify", corpus("fibonacci"))
        assert code == 0
        assert (rep["witness"]["kind"], rep["witness"]["r"]) == ("arch", 1)
        assert rep["relevant_primes"] == []

    def test_bound_fibonacci(self):
        code, rep = cli("bound", corpus("fibonacci"))
        assert code == 0
        assert 1 <= rep["tail_bound"]["N"] <= 50

    def test_bound_with_fixed_constant(self):
        _, a = cli("bound", corpus("cubic_padic_pair"), "--yu-constant", "1e10")
        _, b = cli("bound", corpus("cubic_padic_pair"), "--yu-constant", "1e20")
        assert a["tail_bound"]["N"] < b["tail_bound"]["N"]
        assert a["yu_provider"].startswith("fixed")

    def test_decompose_alternating(self):
        code, rep = cli("decompose", corpus("alternating_zero"))
        assert code == 0
        assert rep["L"] == 2
        assert [b["zero"] for b in rep["branches"]] == [True, False]

    def test_incomplete_exit_code(self):
        code, rep = cli("solve", corpus("cubic_padic_pair"), "--primes", "1", "--candidate-cap", "1")
        assert code == 2
        assert rep["status"] == "incomplete"

    def test_parse_error_report(self, tmp_path):
        text = '{"coeffs": ["1"], "initial": ["1", "2"]}'
        code, rep = cli("solve", write(tmp_path, text))
        assert code == 1
        assert rep["error"]["code"] == "parse-error"
        assert rep["error"]["offset"] == text.index('["1", "2"]')

    def test_missing_file(self, tmp_path):
        code, rep = cli("classify", str(tmp_path / "nope.json"))
        assert code == 1 and "error" in rep

    def test_config_file(self, tmp_path):
        cfg = write(tmp_path, '{"primes": 3, "fallback-limit": 100}', "cfg.json")
        code, rep = cli("solve", corpus("fibonacci"), "--config", cfg)
        assert code == 0
        assert len(rep["branches"][0]["sieve_primes"]) == 3

    def test_bad_config_key(self, tmp_path):
        cfg = write(tmp_path, '{"colour": 3}', "cfg.json")
        code, rep = cli("solve", corpus("fibonacci"), "--config", cfg)
        assert code == 1
        assert "colour" in rep["error"]["message"]

    def test_console_script(self):
        res = subprocess.run([sys.executable, "-m", "skolem.cli", "solve", corpus("powers_of_two")],
                             capture_output=True, text=True, timeout=300)
        assert res.returncode == 0
        assert json.loads(res.stdout)["status"] == "complete"
