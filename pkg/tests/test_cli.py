import io
import json
import subprocess
import sys
from pathlib import Path

import pytest

from flagpath.cli import main
from flagpath.enumeration import tbp_count

GOLDEN = Path(__file__).parent / "golden"


def run(capsys, *argv):
    rc = main(list(argv))
    out, err = capsys.readouterr()
    return rc, out, err


class TestCount:
    def test_with_bounds(self, capsys):
        rc, out, _ = run(capsys, "count", "--l", "1,1,1", "--n", "2", "--bounds")
        assert rc == 0
        assert out == '{"count": 63, "upper": 90, "lower_hook": 5, "lower_product": 60}\n'

    @pytest.mark.parametrize("method", ["dp", "filter", "bfs"])
    def test_methods_agree(self, capsys, method):
        rc, out, _ = run(capsys, "count", "--l", "1,1,1", "--n", "2", "--method", method)
        assert rc == 0 and json.loads(out) == {"count": 63}

    def test_limit_flag_and_env(self, capsys, monkeypatch):
        rc, _, err = run(capsys, "count", "--l", "1,1", "--n", "3", "--method", "bfs", "--limit", "5")
        assert rc == 1 and err.startswith("GroundTooLarge:")
        monkeypatch.setenv("FLAGPATH_LIMIT", "5")
        rc, _, err = run(capsys, "count", "--l", "1,1", "--n", "3", "--method", "filter")
        assert rc == 1 and err.startswith("GroundTooLarge:")
        rc, out, _ = run(capsys, "count", "--l", "1,1", "--n", "3", "--method", "filter", "--limit", "6")
        assert rc == 0 and json.loads(out) == {"count": tbp_count(1, 1, 3)}


class TestUsageErrors:
    @pytest.mark.parametrize(
        "argv",
        [
            ["count", "--l", "1,0", "--n", "2"],
            ["count", "--l", "a,b", "--n", "2"],
            ["count", "--l", "1,1", "--n", "0"],
            ["count", "--l", "1,1"],
            ["diagram", "--l", "1,1,1", "--n", "2", "--format", "xml"],
            ["frobnicate"],
        ],
    )
    def test_exit_two(self, argv):
        with pytest.raises(SystemExit) as exc:
            main(argv)
        assert exc.value.code == 2

    def test_bad_json_is_usage(self, capsys):
        rc, _, err = run(capsys, "verify", "--input", "{not json")
        assert rc == 2 and "cannot read JSON" in err

    def test_bad_partition_shape(self, capsys):
        rc, _, _ = run(capsys, "realize", "--l", "1,1,1", "--n", "1", "--partition", "[1, 2, 3]")
        assert rc == 2


class TestDiagram:
    @pytest.mark.parametrize("l", ["2,4,3", "3,2,2"])
    def test_csv_golden(self, capsys, l):
        rc, out, _ = run(capsys, "diagram", "--l", l, "--n", "3", "--format", "csv")
        golden = GOLDEN / f"diagram_{l.replace(',', '_')}_n3.csv"
        assert rc == 0 and out == golden.read_text()

    def test_json(self, capsys):
        rc, out, _ = run(capsys, "diagram", "--l", "1,1,1", "--n", "2", "--format", "json")
        assert rc == 0
        assert json.loads(out) == {"l": [1, 1, 1], "n": 2, "entries": [[0, 0, 0], [0, 0, 1], [2, 1, 1]]}

    def test_star_is_null_in_json(self, capsys):
        _, out, _ = run(capsys, "diagram", "--l", "2,4,3", "--n", "3", "--format", "json")
        assert json.loads(out)["entries"][3][0] is None

    def test_ascii_default(self, capsys):
        rc, out, _ = run(capsys, "diagram", "--l", "1,1,1", "--n", "2")
        assert rc == 0 and out == "0 0 0\n0 0 1\n2 1 1\n"

    def test_methods(self, capsys):
        _, literal, _ = run(capsys, "diagram", "--l", "2,4,3", "--n", "3", "--format", "json")
        _, corrected, _ = run(capsys, "diagram", "--l", "2,4,3", "--n", "3", "--format", "json", "--method", "corrected")
        _, brute, _ = run(capsys, "diagram", "--l", "2,4,3", "--n", "3", "--format", "json", "--method", "brute")
        assert corrected == brute != literal
        assert json.loads(brute)["entries"][3][0] == 7

    def test_wrong_dimension(self, capsys):
        rc, _, err = run(capsys, "diagram", "--l", "1,1", "--n", "2")
        assert rc == 1 and err.startswith("DimensionMismatch:")

    def test_output_file(self, capsys, tmp_path):
        target = tmp_path / "m.csv"
        rc, out, _ = run(capsys, "diagram", "--l", "2,4,3", "--n", "3", "--format", "csv", "--output", str(target))
        assert rc == 0 and out == ""
        assert target.read_text() == (GOLDEN / "diagram_2_4_3_n3.csv").read_text()


class TestVerify:
    FAMILY = {"ground_size": 3, "flag_rank": [1, 1, 1], "flags": [[[1], [2], [3]], [[2], [3], [1]]]}

    def test_violation_exits_one(self, capsys):
        rc, out, _ = run(capsys, "verify", "--input", json.dumps(self.FAMILY))
        assert rc == 1
        assert out == '{"ok": false, "axiom": "F2", "index": 1, "witness": [3]}\n'

    def test_file_and_stdin(self, capsys, tmp_path, monkeypatch):
        path = tmp_path / "fam.json"
        path.write_text(
            json.dumps({"ground_size": 4, "flag_rank": [2, 2], "flags": [[[1, 3], [2, 4]], [[1, 4], [2, 3]],
                        [[2, 3], [1, 4]], [[2, 4], [1, 3]], [[3, 4], [1, 2]]]})
        )
        rc, out, _ = run(capsys, "verify", "--input", f"@{path}")
        assert rc == 0 and json.loads(out) == {"ok": True, "constituent_ranks": [2, 4]}
        monkeypatch.setattr(sys, "stdin", io.StringIO(path.read_text()))
        rc, out2, _ = run(capsys, "verify", "--input", "-")
        assert rc == 0 and out2 == out

    def test_missing_file(self, capsys, tmp_path):
        rc, _, _ = run(capsys, "verify", "--input", f"@{tmp_path / 'nope.json'}")
        assert rc == 2

    def test_not_a_family(self, capsys):
        rc, _, _ = run(capsys, "verify", "--input", '{"flags": []}')
        assert rc == 2


class TestRealize:
    def test_example(self, capsys):
        rc, out, _ = run(capsys, "realize", "--l", "1,1,1", "--n", "2", "--partition", "[[5,6],[3,4],[1,2]]")
        assert rc == 0
        assert out == '{"turns": [{"moves": [[1, 2], [1]]}, {"moves": [[3, 4], [2]]}]}\n'

    def test_partition_file(self, capsys, tmp_path):
        path = tmp_path / "p.json"
        path.write_text("[[3],[2],[1]]")
        rc, out, _ = run(capsys, "realize", "--l", "1,1,1", "--n", "1", "--partition", f"@{path}")
        assert rc == 0 and json.loads(out) == {"turns": [{"moves": [[1, 2], [1]]}]}

    def test_domain_errors_keep_names(self, capsys):
        rc, _, err = run(capsys, "realize", "--l", "1,1,1", "--n", "2", "--partition", "[[1,2],[3,4],[5,6]]")
        assert rc == 1 and err.startswith("NotAFlagBasis:")
        rc, _, err = run(capsys, "realize", "--l", "1,1,1", "--n", "2", "--partition", "[[1,2],[2,3],[5,6]]")
        assert rc == 1 and err.startswith("NotAPartition:")


class TestBases:
    def test_count(self, capsys):
        rc, out, _ = run(capsys, "bases", "--path", "NNEEENNEEENNEEE", "--count")
        assert rc == 0 and json.loads(out) == {"count": tbp_count(2, 3, 3)}

    def test_list(self, capsys):
        rc, out, _ = run(capsys, "bases", "--path", "NNE")
        assert rc == 0 and out == '{"bases": [[1, 2], [1, 3], [2, 3]]}\n'

    def test_bad_word(self, capsys):
        rc, _, _ = run(capsys, "bases", "--path", "NXE")
        assert rc == 2


class TestBounds:
    def test_report(self, capsys):
        rc, out, _ = run(capsys, "bounds", "--l", "1,1,1", "--n", "2", "--exact")
        assert rc == 0
        assert json.loads(out) == {"upper": 90, "lower_hook": 5, "lower_product": 60, "count": 63}

    def test_hook_absent_for_unequal_bins(self, capsys):
        _, out, _ = run(capsys, "bounds", "--l", "2,1", "--n", "2")
        assert json.loads(out)["lower_hook"] is None


class TestDeterminism:
    @pytest.mark.parametrize(
        "argv",
        [
            ["count", "--l", "1,2,1", "--n", "2", "--bounds"],
            ["diagram", "--l", "2,4,3", "--n", "3", "--format", "json"],
            ["bases", "--path", "NENENNEE"],
            ["realize", "--l", "1,1,1", "--n", "2", "--partition", "[[5,6],[3,4],[1,2]]"],
        ],
    )
    def test_repeat_runs_are_identical(self, argv):
        outs = {
            subprocess.run([sys.executable, "-m", "flagpath", *argv], capture_output=True, check=True).stdout
            for _ in range(2)
        }
        assert len(outs) == 1
