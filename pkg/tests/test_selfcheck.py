from flagpath import selfcheck
from flagpath.cli import main
from flagpath.lattice import StepSequence


def test_gating_checks_pass():
    checks = selfcheck.run_checks()
    failed = [c for c in checks if c.gating and not c.ok]
    assert not failed, failed


def test_literal_diagram_check_is_informational():
    checks = {c.name: c for c in selfcheck.run_checks()}
    literal = checks["literal block recursion = brute force (l_i <= 3, n <= 3)"]
    assert not literal.gating
    assert not literal.ok and literal.detail.startswith("9 mismatches")


def test_crash_is_reported_as_failure():
    def boom():
        raise RuntimeError("broken oracle")

    c = selfcheck._check("x", boom)
    assert not c.ok and c.detail == "RuntimeError: broken oracle"


def test_path_oracle_on_small_paths():
    assert selfcheck.bases_by_paths(StepSequence.parse("NE")) == {frozenset({1}), frozenset({2})}
    assert selfcheck.bases_by_paths(StepSequence.parse("EN")) == {frozenset({2})}


def test_cli_exit_status(capsys):
    assert main(["selfcheck"]) == 0
    out = capsys.readouterr().out.splitlines()
    assert sum(line.startswith("PASS") for line in out) == 10
    assert [line for line in out if not line.startswith("PASS")][0].startswith("INFO literal")
