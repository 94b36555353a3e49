"""Acceptance gate: every certification criterion at its pinned tolerance.

Each test runs one named criterion through the same suite machinery the CLI
uses, prints one PASS/FAIL line per check, and asserts the criterion holds.
Run with ``pytest tests/test_acceptance.py -v -s`` to see the check lines.
"""

import json
import math

import numpy as np

from latgeo import cli, io, suites
from latgeo.core import GramMatrix


def run_and_report(name, **kwargs):
    opts = suites.SuiteOptions(**kwargs)
    outcome = suites.run_criterion(name, opts)
    for line in suites.format_outcome(outcome):
        print(line)
    assert outcome.passed, "criterion %s failed" % name
    return outcome


def test_criterion_01_hex_systole():
    out = run_and_report("hex-systole")
    # systole in squared length 2/sqrt(3), i.e. (4/3)^(1/4) in length
    err_check = out.checks[0]
    assert err_check.bound == 1e-9


def test_criterion_02_hex_maximality():
    run_and_report("hex-maximality")


def test_criterion_03_flow_oracle():
    out = run_and_report("flow-oracle")
    assert all(c.bound in (1e-10, 1e-9) for c in out.checks)


def test_criterion_04_flow_generic():
    run_and_report("flow-generic")


def test_criterion_05_equivariance():
    run_and_report("equivariance")


def test_criterion_06_product_systoles():
    run_and_report("product-systoles")


def test_criterion_07_claim_g2():
    run_and_report("claim-g2", grid=(200, 120))


def test_criterion_08_qjq():
    run_and_report("qjq")


def test_criterion_09_thm12_odd():
    run_and_report("thm12-odd", p_values=(1, 2))


def test_criterion_10_bavard_witness():
    run_and_report("bavard-witness")


def test_criterion_11_enumeration_oracle():
    run_and_report("enumeration-oracle")


class TestCriterion12CliContract:
    def test_file_round_trip_identity(self, tmp_path):
        values = [
            [1.0 / 3.0, 0.123456789012345678],
            [0.123456789012345678, 2.0 + 1.0 / 7.0],
        ]
        path = tmp_path / "q.json"
        io.write_lattice_file(str(path), gram=GramMatrix(values))
        back, _, _ = io.read_lattice_file(str(path))
        assert np.array_equal(back.entries, GramMatrix(values).entries)
        print("[PASS] lattice file round-trip is bit-exact")

    def test_deterministic_csv_for_fixed_seed(self, tmp_path):
        a, b = tmp_path / "a.csv", tmp_path / "b.csv"
        assert cli.main(["scan", "--grid", "10x7", "--out", str(a)]) == 0
        assert cli.main(["scan", "--grid", "10x7", "--out", str(b)]) == 0
        assert a.read_bytes() == b.read_bytes()
        print("[PASS] identical command lines produce byte-identical CSV")

    def test_exit_code_contract(self, tmp_path):
        ok = tmp_path / "ok.json"
        ok.write_text(json.dumps({"n": 2, "gram": [[1.0, 0.0], [0.0, 1.0]]}))
        assert cli.main(["stratum", str(ok)]) == 0
        assert cli.main(["verify", "bavard-witness"]) == 0
        assert cli.main(["verify", "definitely-not-a-suite"]) == 2
        bad = tmp_path / "bad.json"
        bad.write_text(json.dumps({"n": 2, "gram": [[1.0, 3.0], [3.0, 1.0]]}))
        assert cli.main(["systole", str(bad)]) == 2
        print("[PASS] exit codes: 0 pass, 2 usage/input error")

    def test_failing_verification_exits_one(self, monkeypatch):
        # force a failing check through the verify path
        def broken(opts):
            out = suites.VerificationOutcome("bavard-witness")
            out.add("forced failure", 1.0, 0.0, False)
            return out

        monkeypatch.setitem(suites.CRITERIA, "bavard-witness", (broken,))
        assert cli.main(["verify", "bavard-witness"]) == 1
        print("[PASS] failing verification exits 1")


def test_criterion_values_documented():
    """The hexagonal systole constants agree: (4/3)^(1/4) length, 2/sqrt(3) squared."""
    assert math.isclose(
        (4.0 / 3.0) ** 0.25, (2.0 / math.sqrt(3.0)) ** 0.5, rel_tol=1e-15
    )
