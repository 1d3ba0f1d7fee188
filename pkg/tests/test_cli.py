import json
import subprocess
import sys

import pytest

from qpl import battery
from qpl.cli import errata, main, run_checks
from qpl.qcore import Series


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


class TestCoeffs:
    def test_finite_sum_json(self, capsys):
        code, out, _ = run(capsys, "coeffs", "F", "--i", "0", "--j", "1", "--k", "1", "--N", "3", "--format", "json")
        assert code == 0
        doc = json.loads(out)
        assert doc["family"] == "F"
        s = Series.from_dict(doc)
        assert str(s) == "1 + q*x + q^2*x + q^3*x + q^4*x^2 - q^6*x^3"

    def test_infinite_sum_at_one(self, capsys):
        code, out, _ = run(capsys, "coeffs", "Finf", "--i", "0", "--k", "1", "--T", "7", "--x", "1")
        assert code == 0
        values = [int(line.split()[1]) for line in out.splitlines() if line.startswith("q^")]
        assert values == [1, 1, 1, 1, 2, 2, 2, 3]

    def test_negative_N_is_zero(self, capsys):
        code, out, _ = run(capsys, "coeffs", "F", "--N", "-1", "--format", "json")
        assert code == 0
        assert json.loads(out)["terms"] == []

    def test_x_zero(self, capsys):
        code, out, _ = run(capsys, "coeffs", "overgf", "--i", "1", "--k", "1", "--T", "5", "--x", "0", "--format", "json")
        assert code == 0
        assert Series.from_dict(json.loads(out)) == Series.one(5)

    def test_tracked_table(self, capsys):
        code, out, _ = run(capsys, "coeffs", "overgf", "--i", "1", "--k", "1", "--T", "7")
        assert code == 0
        assert out.splitlines()[-1].split(None, 1)[1] == "x^7 + 2*x^6 + 4*x^5 + 7*x^4 + 10*x^3 + 9*x^2 + 2*x"

    def test_small_sequences(self, capsys):
        assert run(capsys, "coeffs", "f", "--N", "2")[0] == 0
        code, out, _ = run(capsys, "coeffs", "b", "--N", "2", "--format", "json")
        assert code == 0 and str(Series.from_dict(json.loads(out))) == "1"

    def test_unknown_family(self, capsys):
        with pytest.raises(SystemExit) as exc:
            main(["coeffs", "G"])
        assert exc.value.code == 2


class TestVerify:
    def test_single_check(self, capsys):
        code, out, _ = run(capsys, "verify", "one-mod-three", "--T", "100")
        assert code == 0
        assert "PASS" in out and "summary: 1/1 PASS" in out

    def test_colored_partitions_table(self, capsys):
        code, out, _ = run(capsys, "verify", "colored-partitions", "--n-max", "6")
        assert code == 0
        row4 = next(line.split() for line in out.splitlines() if line.split()[:1] == ["4"])
        assert row4 == ["4", "13", "13", "13", "13"]
        assert "errata" in out

    def test_json_report(self, capsys):
        code, out, _ = run(capsys, "verify", "q-gauss-limit", "f011-recurrence", "--T", "30", "--N", "12",
                           "--format", "json")
        assert code == 0
        doc = json.loads(out)
        assert list(doc["checks"]) == ["q-gauss-limit", "f011-recurrence"]
        assert doc["passed"] is True
        assert [e["item"] for e in doc["errata"]] == ["Pochhammer in the q-Gauss limit sum"]

    def test_unknown_check(self, capsys):
        code, _, err = run(capsys, "verify", "no-such-check")
        assert code == 2 and "unknown check" in err

    def test_bad_values(self, capsys):
        assert run(capsys, "verify", "one-mod-three", "--T", "-3")[0] == 2
        assert run(capsys, "verify", "one-mod-three", "--jobs", "0")[0] == 2
        assert run(capsys, "verify", "colored-partitions", "--n-max", "99")[0] == 2

    def test_env_default(self, capsys, monkeypatch):
        monkeypatch.setenv("QPL_DEFAULT_T", "12")
        code, out, _ = run(capsys, "verify", "one-mod-three")
        assert code == 0 and "to order 12" in out
        monkeypatch.setenv("QPL_DEFAULT_T", "many")
        code, _, err = run(capsys, "verify", "one-mod-three")
        assert code == 2 and "QPL_DEFAULT_T" in err

    def test_failure_exit_code(self, capsys, monkeypatch):
        from qpl.report import FAIL, Report

        def broken(cfg):
            return [Report("always fails", None, FAIL, first_failure={"q": 3})]

        monkeypatch.setitem(battery.CHECKS, "broken", ("test double", broken))
        code, out, _ = run(capsys, "verify", "broken")
        assert code == 1
        assert "first failure" in out and "summary: 0/1 PASS" in out

    def test_parallel_order_is_deterministic(self):
        cfg = battery.RunConfig(T=20, N_max=8, n_max=6)
        names = ["q-gauss-limit", "one-mod-three", "functional-equation"]
        serial = run_checks(names, cfg, 1)
        parallel = run_checks(names, cfg, 2)
        assert list(parallel) == names
        as_json = lambda res: {n: [r.to_dict() for r in reps] for n, reps in res.items()}  # noqa: E731
        assert as_json(serial) == as_json(parallel)
        assert errata(serial) == errata(parallel)


class TestConjecture:
    def test_consistent(self, capsys):
        code, out, _ = run(capsys, "conjecture", "--T", "80")
        assert code == 0
        assert "consistent to order 80 (not a proof)" in out

    def test_order_zero(self, capsys):
        code, out, _ = run(capsys, "conjecture", "--T", "0")
        assert code == 0 and "consistent to order 0" in out

    def test_perturbed(self, capsys):
        code, out, _ = run(capsys, "conjecture", "--T", "40", "--perturb-at", "17", "--format", "json")
        assert code == 1
        doc = json.loads(out)
        assert doc["first_failure"]["q"] == 17
        assert doc["verdict"] == "potential counterexample at q^17"

    def test_perturb_out_of_range(self, capsys):
        assert run(capsys, "conjecture", "--T", "10", "--perturb-at", "11")[0] == 2


def test_console_entry_point():
    proc = subprocess.run([sys.executable, "-m", "qpl.cli", "coeffs", "F", "--N", "1"],
                          capture_output=True, text=True, check=False)
    assert proc.returncode == 0
    assert proc.stdout.splitlines()[1:] == ["q^0  1", "q^1  x"]
