import json
import math
from pathlib import Path

import numpy as np
import pytest

from qw1d.cli import main
from qw1d.core import WalkSpec
from qw1d.errors import ParseError, ValidationError
from qw1d.io import dumps, parse_spec_file, parse_state, spec_from_dict, spec_to_dict
from walkgen import HADAMARD, random_spec

PI = math.pi
SQ = 1 / math.sqrt(2)


def ti(r, **extra):
    site = {"r": r, "a": 0.0, "b": 0.0, "c": 0.0, "d": PI}
    return {"left_tail": site, "right_tail": site, **extra}


def write(tmp_path, name, data):
    path = tmp_path / name
    path.write_text(data if isinstance(data, str) else json.dumps(data))
    return str(path)


HADAMARD_VECTORS = {
    "xi_right": [[1, 0], [0, 0]],
    "xi_left": [[0, 0], [1, 0]],
    "zeta_to_left": [[SQ, 0], [SQ, 0]],
    "zeta_to_right": [[SQ, 0], [-SQ, 0]],
}


class TestParse:
    def test_minimal(self, tmp_path):
        parsed = parse_spec_file(write(tmp_path, "ti.json", ti(0.6)))
        assert parsed.spec.exceptions == {} and parsed.state is None
        assert parsed.spec.right_tail.r == 0.6

    def test_vector_form(self):
        spec = spec_from_dict({"left_tail": HADAMARD_VECTORS, "right_tail": HADAMARD_VECTORS}).spec
        assert spec.site(0).r == pytest.approx(SQ)
        assert spec.site(0).d == pytest.approx(PI)

    def test_vector_state_rotated(self):
        # swapping the outgoing pair exchanges the state components
        swapped = dict(HADAMARD_VECTORS, xi_right=[[0, 0], [1, 0]], xi_left=[[1, 0], [0, 0]])
        parsed = spec_from_dict({"left_tail": swapped, "right_tail": swapped,
                                 "state": [[1, 0], [0, 0]]})
        assert np.allclose(parsed.state, [0, 1])

    def test_phase_constraint(self, tmp_path):
        bad = ti(0.6)
        bad["right_tail"] = dict(bad["right_tail"], d=0.0)
        with pytest.raises(ValidationError, match="phase constraint"):
            parse_spec_file(write(tmp_path, "bad.json", bad))

    def test_json_syntax_location(self, tmp_path):
        with pytest.raises(ParseError, match=r"bad\.json:2:\d+"):
            parse_spec_file(write(tmp_path, "bad.json", '{\n  "left_tail": ,\n}'))

    @pytest.mark.parametrize("data, where", [
        ({"left_tail": {}}, "right_tail"),
        ({"left_tail": {"r": 0.5}, "right_tail": {}}, "left_tail: missing a"),
        (dict(ti(0.5), exceptions={"x": {}}), "'x'"),
        (dict(ti(0.5), exceptions={"2": {"r": "1", "a": 0, "b": 0, "c": 0, "d": 0}}),
         "exceptions.2.r"),
    ])
    def test_field_diagnostics(self, data, where):
        with pytest.raises(ParseError, match=where):
            spec_from_dict(data)

    def test_missing_file(self, tmp_path):
        with pytest.raises(ParseError):
            parse_spec_file(tmp_path / "nope.json")

    def test_state_strings(self):
        assert np.allclose(parse_state("0.6, 0.8i"), [0.6, 0.8j])
        assert np.allclose(parse_state("1+2i,-3-4j"), [1 + 2j, -3 - 4j])
        with pytest.raises(ParseError):
            parse_state("1")
        with pytest.raises(ParseError):
            parse_state("a,b")

    def test_round_trip(self, rng):
        for cls in ("General", "TwoPhaseDefect", "TI"):
            spec = random_spec(rng, cls)
            back = spec_from_dict(json.loads(dumps(spec_to_dict(spec)))).spec
            assert back == spec

    def test_dumps_precision(self):
        assert dumps(0.1) == "0.10000000000000001"
        assert dumps({"x": [1.0, 2]}) == '{\n  "x": [\n    1.0,\n    2\n  ]\n}'
        with pytest.raises(ValueError):
            dumps(float("nan"))


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


class TestCli:
    def test_equiv_identical(self, tmp_path, capsys):
        a = write(tmp_path, "a.json", ti(0.6))
        code, out, _ = run(capsys, "equiv", "--a", a, "--b", a)
        assert code == 0 and json.loads(out)["equivalent"] is True

    def test_equiv_different(self, tmp_path, capsys):
        a = write(tmp_path, "a.json", ti(0.6))
        b = write(tmp_path, "b.json", ti(0.8))
        code, out, _ = run(capsys, "equiv", "--a", a, "--b", b)
        assert code == 1 and json.loads(out)["equivalent"] is False
        code, out, _ = run(capsys, "equiv", "--a", a, "--b", b, "--oracle")
        assert code == 1 and json.loads(out)["method"] == "oracle"

    def test_equiv_error(self, tmp_path, capsys):
        code, _, err = run(capsys, "equiv", "--a", str(tmp_path / "x.json"), "--b", "y")
        assert code == 2 and "error" in err

    def test_simulate(self, tmp_path, capsys):
        spec = write(tmp_path, "h.json", {"left_tail": HADAMARD.to_dict(),
                                           "right_tail": HADAMARD.to_dict()})
        out_csv = tmp_path / "d.csv"
        code, _, _ = run(capsys, "simulate", "--in", spec, "--state", "1,0",
                         "--steps", "2", "--out", str(out_csv))
        assert code == 0
        rows = [ln.split(",") for ln in out_csv.read_text().splitlines()[1:]]
        last = [(int(n), float(p)) for t, n, p in rows if t == "2"]
        assert [n for n, _ in last] == [-2, 0, 2]
        assert np.allclose([p for _, p in last], [0.25, 0.5, 0.25], atol=1e-12, rtol=0)

    def test_simulate_stdout_and_file_state(self, tmp_path, capsys):
        spec = write(tmp_path, "h.json", ti(SQ, state="0,1"))
        code, out, _ = run(capsys, "simulate", "--in", spec, "--steps", "1")
        assert code == 0 and out.splitlines()[0] == "t,site,probability"

    def test_simulate_needs_state(self, tmp_path, capsys):
        code, _, err = run(capsys, "simulate", "--in", write(tmp_path, "a.json", ti(0.5)),
                           "--steps", "1")
        assert code == 2 and "state" in err

    def test_canonicalize(self, tmp_path, capsys):
        spec = write(tmp_path, "h.json", {"left_tail": HADAMARD.to_dict(),
                                           "right_tail": HADAMARD.to_dict()})
        gauge = tmp_path / "g.json"
        code, out, _ = run(capsys, "canonicalize", "--in", spec, "--gauge", str(gauge),
                           "--state", "1,0")
        data = json.loads(out)
        assert code == 0 and data["class"] == "TI"
        assert data["params"]["r"] == pytest.approx(SQ)
        assert data["state"]["alpha"] == 1.0
        assert set(json.loads(gauge.read_text())) == {"lambda", "u", "v"}

    def test_canonicalize_wrong_class(self, tmp_path, capsys):
        spec = write(tmp_path, "a.json", ti(0.5))
        code, out, _ = run(capsys, "canonicalize", "--in", spec, "--class", "General")
        assert code == 0 and json.loads(out)["class"] == "General"
        bad = dict(ti(0.5), exceptions={"0": HADAMARD.to_dict(), "3": HADAMARD.to_dict()})
        code, _, err = run(capsys, "canonicalize", "--in", write(tmp_path, "b.json", bad),
                           "--class", "OneDefect")
        assert code == 2

    def test_classify(self, tmp_path, capsys):
        data = dict(ti(0.5), exceptions={"0": HADAMARD.to_dict()})
        code, out, _ = run(capsys, "classify", "--in", write(tmp_path, "a.json", data))
        assert code == 0 and out.strip() == "OneDefect"

    def test_commutant(self, tmp_path, capsys):
        code, out, _ = run(capsys, "commutant", "--in", write(tmp_path, "a.json", ti(0.5)))
        lams = sorted(w["lambda"] for w in json.loads(out))
        assert code == 0 and lams == pytest.approx([0.0, PI])

    def test_commutant_degenerate(self, tmp_path, capsys):
        path = write(tmp_path, "a.json", ti(1.0))
        assert run(capsys, "commutant", "--in", path)[0] == 2
        code, out, _ = run(capsys, "commutant", "--in", path, "--window", "3",
                           "--allow-degenerate")
        assert code == 0 and len(json.loads(out)) > 2

    def test_usage_error(self, capsys):
        assert run(capsys, "bogus")[0] == 2
        assert run(capsys)[0] == 2


def test_spec_roundtrip_via_uniform():
    spec = WalkSpec.uniform(HADAMARD)
    assert spec_from_dict(spec_to_dict(spec)).spec == spec


SPECS = sorted((Path(__file__).parent.parent / "specs").glob("*.json"))


@pytest.mark.parametrize("path", SPECS, ids=[p.stem for p in SPECS])
def test_shipped_specs_parse(path, capsys):
    assert parse_spec_file(path).spec is not None
    assert run(capsys, "classify", "--in", str(path))[0] == 0
