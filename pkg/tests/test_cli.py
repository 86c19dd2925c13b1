import json

import numpy as np
import pytest

from qincompat.cli import main
from qincompat.documents import basis_document, to_pairs
from qincompat.entropic import shared_eigenvector_pair
from qincompat.errors import BoundViolationError
from qincompat.observables import Eigenbasis, ObservableSet, mub_bases


def write_zx(tmp_path):
    path = tmp_path / "zx.json"
    path.write_text(json.dumps(basis_document(mub_bases(2, 2))))
    return str(path)


def write_set(tmp_path, name, obs):
    path = tmp_path / name
    path.write_text(json.dumps(basis_document(obs)))
    return str(path)


def run(capsys, *argv):
    code = main(list(argv))
    captured = capsys.readouterr()
    return code, captured.out, captured.err


class TestMeasureCommand:
    def test_reports_incompatibility(self, tmp_path, capsys):
        code, out, _ = run(capsys, "measure", write_zx(tmp_path), "--restarts", "2")
        assert code == 0
        doc = json.loads(out)
        assert doc["incompatibility"] == pytest.approx(0.25, abs=1e-6)
        assert doc["command"] == "measure"
        assert doc["config"]["seed"] == 0
        assert doc["minimal_subset_labels"] == ["mub-0", "mub-1"]

    def test_out_flag_writes_file(self, tmp_path, capsys):
        target = tmp_path / "report.json"
        code, out, _ = run(
            capsys, "measure", write_zx(tmp_path), "--restarts", "2", "--out", str(target)
        )
        assert code == 0 and out == ""
        assert json.loads(target.read_text())["incompatibility"] == pytest.approx(0.25, abs=1e-6)

    def test_csv_format(self, tmp_path, capsys):
        code, out, _ = run(capsys, "measure", write_zx(tmp_path), "--restarts", "2", "--format", "csv")
        assert code == 0
        header, row = out.strip().splitlines()
        fields = dict(zip(header.split(","), row.split(",")))
        assert float(fields["incompatibility"]) == pytest.approx(0.25, abs=1e-6)
        # csv keeps scalars only
        assert "best_povm.weights" not in fields

    def test_emitted_floats_parse_back_exactly(self, tmp_path, capsys):
        _, out, _ = run(capsys, "measure", write_zx(tmp_path), "--restarts", "2")
        doc = json.loads(out)
        assert json.loads(json.dumps(doc)) == doc

    def test_flags_reach_the_optimizer(self, tmp_path, capsys):
        code, out, _ = run(
            capsys,
            "measure", write_zx(tmp_path),
            "--seed", "3", "--restarts", "2", "--outcomes", "3",
            "--tol", "1e-9", "--max-iters", "50",
        )
        assert code == 0
        doc = json.loads(out)
        assert doc["config"] == {
            "seed": 3,
            "restarts": 2,
            "outcomes": 3,
            "max_iters": 50,
            "convergence_eps": 1e-9,
            "weight_prune_eps": 1e-12,
        }
        # 2 projective starts + 2 random restarts
        assert len(doc["restart_trace"]) == 4

    def test_malformed_file_exits_2(self, tmp_path, capsys):
        path = tmp_path / "broken.json"
        path.write_text("{ not json")
        code, _, err = run(capsys, "measure", str(path))
        assert code == 2
        assert "error:" in err

    def test_non_hermitian_exits_2(self, tmp_path, capsys):
        path = tmp_path / "bad.json"
        doc = {
            "dim": 2,
            "items": [
                {"type": "observable", "label": "bad", "matrix": to_pairs(np.array([[0, 1], [0, 0]]))}
            ],
        }
        path.write_text(json.dumps(doc))
        code, _, err = run(capsys, "measure", str(path))
        assert code == 2
        assert "Hermitian" in err

    def test_commuting_input_reports_zero(self, tmp_path, capsys):
        z = Eigenbasis(np.eye(2, dtype=complex), label="Z")
        z2 = Eigenbasis(np.eye(2, dtype=complex)[::-1].copy(), label="Z-sw")
        path = write_set(tmp_path, "commuting.json", ObservableSet((z, z2)))
        code, out, _ = run(capsys, "measure", path, "--restarts", "2")
        assert code == 0
        doc = json.loads(out)
        assert abs(doc["incompatibility"]) <= 1e-8
        assert doc["n_observables"] == 1

    def test_bound_violation_exits_3(self, tmp_path, capsys, monkeypatch):
        import qincompat.cli as cli_module

        def explode(*_args, **_kwargs):
            raise BoundViolationError("synthetic certificate failure")

        monkeypatch.setattr(cli_module, "incompatibility", explode)
        code, _, err = run(capsys, "measure", write_zx(tmp_path))
        assert code == 3
        assert "synthetic" in err


class TestMubCommand:
    def test_writes_unbiased_bases(self, tmp_path, capsys):
        target = tmp_path / "bases.json"
        code, out, _ = run(capsys, "mub", "3", "4", "--out", str(target))
        assert code == 0
        summary = json.loads(out)
        assert summary["unbiased"] is True
        written = json.loads(target.read_text())
        assert written["dim"] == 3
        assert len(written["items"]) == 4

    def test_prime_check_exits_2(self, tmp_path, capsys):
        code, _, err = run(capsys, "mub", "4", "2", "--out", str(tmp_path / "x.json"))
        assert code == 2
        assert "prime" in err

    def test_too_many_bases_exits_2(self, tmp_path, capsys):
        code, _, _ = run(capsys, "mub", "3", "5", "--out", str(tmp_path / "x.json"))
        assert code == 2


class TestBoundsCommand:
    def test_crossover_case(self, capsys):
        code, out, _ = run(capsys, "bounds", "3", "2")
        assert code == 0
        doc = json.loads(out)
        assert doc["q_upper_small_n"] == pytest.approx(1.0 / 3.0)
        assert doc["q_upper_large_n"] == pytest.approx(1.0 / 3.0)

    def test_pair_in_dim_three(self, capsys):
        _, out, _ = run(capsys, "bounds", "2", "3")
        doc = json.loads(out)
        assert doc["q_upper_small_n"] == pytest.approx(1.0 / 3.0)
        assert doc["q_upper_large_n"] == pytest.approx(0.5)

    def test_single_observable(self, capsys):
        _, out, _ = run(capsys, "bounds", "1", "4")
        assert json.loads(out)["q_upper_small_n"] == 0.0


class TestEntropicCommand:
    def test_informative_pair(self, tmp_path, capsys):
        code, out, _ = run(capsys, "entropic", write_zx(tmp_path), "--restarts", "2")
        assert code == 0
        doc = json.loads(out)
        assert doc["verdict"] == "BOUND_INFORMATIVE"
        assert doc["entropy_bound"] == pytest.approx(0.5, abs=1e-12)

    def test_item_count_enforced(self, tmp_path, capsys):
        path = tmp_path / "three.json"
        path.write_text(json.dumps(basis_document(mub_bases(2, 3))))
        code, _, err = run(capsys, "entropic", str(path))
        assert code == 2
        assert "exactly two" in err

    def test_shared_eigenvector_pair_is_vacuous(self, tmp_path, capsys):
        path = write_set(tmp_path, "shared.json", ObservableSet(shared_eigenvector_pair(3)))
        code, out, _ = run(capsys, "entropic", path, "--restarts", "2")
        assert code == 0
        doc = json.loads(out)
        assert doc["verdict"] == "BOUND_VACUOUS_BUT_INCOMPATIBLE"
        assert doc["entropy_bound"] == 0.0
        assert doc["incompatibility"] >= 1e-3

    def test_commuting_pair_verdict(self, tmp_path, capsys):
        z = Eigenbasis(np.eye(2, dtype=complex), label="Z")
        z2 = Eigenbasis(np.eye(2, dtype=complex)[::-1].copy(), label="Z-sw")
        path = write_set(tmp_path, "comm.json", ObservableSet((z, z2)))
        code, out, _ = run(capsys, "entropic", path, "--restarts", "2")
        assert code == 0
        assert json.loads(out)["verdict"] == "COMMUTING"


class TestVerifyCommand:
    def test_fast_suites_pass(self, capsys):
        code, out, err = run(
            capsys,
            "verify",
            "--suite", "map-contracts",
            "--suite", "fidelity-consistency",
            "--samples", "20",
        )
        assert code == 0
        doc = json.loads(out)
        assert doc["all_passed"] is True
        assert {s["name"] for s in doc["suites"]} == {"map-contracts", "fidelity-consistency"}
        assert "pass map-contracts" in err

    def test_all_suites_run_and_pass(self, capsys):
        code, out, _ = run(capsys, "verify", "--samples", "5")
        assert code == 0
        doc = json.loads(out)
        assert doc["all_passed"] is True
        assert len(doc["suites"]) == 4

    def test_seed_is_echoed(self, capsys):
        _, out, _ = run(capsys, "verify", "--suite", "map-contracts", "--samples", "5", "--seed", "9")
        assert json.loads(out)["seed"] == 9

    def test_unknown_suite_exits_2(self, capsys):
        with pytest.raises(SystemExit):
            main(["verify", "--suite", "nope"])


class TestDeterminism:
    def test_identical_runs_match_modulo_walltime(self, tmp_path, capsys):
        path = write_zx(tmp_path)
        docs = []
        for _ in range(2):
            code, out, _ = run(capsys, "measure", path, "--restarts", "3", "--seed", "7")
            assert code == 0
            doc = json.loads(out)
            doc.pop("wall_time_s")
            docs.append(doc)
        assert docs[0] == docs[1]
