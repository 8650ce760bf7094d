"""Command-line interface: schemas, exit codes, golden outputs, determinism."""

import json
import math

from fockcascade.cli import main

R = 0.7071067811865476  # 1/sqrt(2) at double precision
HADAMARD_JSON = {
    "matrix": [
        [{"re": R, "im": 0.0}, {"re": R, "im": 0.0}],
        [{"re": R, "im": 0.0}, {"re": -R, "im": 0.0}],
    ]
}
IDENTITY_JSON = {
    "matrix": [
        [{"re": 1.0, "im": 0.0}, {"re": 0.0, "im": 0.0}],
        [{"re": 0.0, "im": 0.0}, {"re": 1.0, "im": 0.0}],
    ]
}


def write(tmp_path, name, payload):
    path = tmp_path / name
    path.write_text(json.dumps(payload))
    return str(path)


def pair_instance(network):
    return {
        "modes": ["m1", "m2"],
        "states": [{"terms": [{"exp": [1, 1], "re": 1.0, "im": 0.0}]}],
        "network": network,
        "measure": "m1",
    }


class TestSimulate:
    def test_identity_echoes_input(self, tmp_path, capsys):
        path = write(tmp_path, "inst.json", pair_instance(IDENTITY_JSON))
        assert main(["simulate", path]) == 0
        report = json.loads(capsys.readouterr().out)
        assert report["schema_version"] == "1"
        assert report["output_states"] == [
            {"modes": ["m1", "m2"], "terms": [{"exp": [1, 1], "re": 1.0, "im": 0.0}]}
        ]

    def test_interference_golden(self, tmp_path, capsys):
        path = write(tmp_path, "inst.json", pair_instance(HADAMARD_JSON))
        assert main(["simulate", path]) == 0
        report = json.loads(capsys.readouterr().out)
        terms = report["output_states"][0]["terms"]
        by_exp = {tuple(t["exp"]): complex(t["re"], t["im"]) for t in terms}
        assert set(by_exp) == {(2, 0), (0, 2)}
        assert abs(by_exp[(2, 0)] - 0.5) < 1e-12
        assert abs(by_exp[(0, 2)] + 0.5) < 1e-12

    def test_malformed_json_exits_2(self, tmp_path, capsys):
        path = tmp_path / "broken.json"
        path.write_text("{not json")
        assert main(["simulate", str(path)]) == 2
        assert "error" in capsys.readouterr().err

    def test_unknown_field_exits_2(self, tmp_path, capsys):
        payload = pair_instance(IDENTITY_JSON)
        payload["surprise"] = True
        path = write(tmp_path, "inst.json", payload)
        assert main(["simulate", path]) == 2
        assert "unknown fields" in capsys.readouterr().err

    def test_non_unitary_exits_3_with_magnitude(self, tmp_path, capsys):
        bad = {
            "matrix": [
                [{"re": R, "im": 0.0}, {"re": R, "im": 0.0}],
                [{"re": R, "im": 0.0}, {"re": R, "im": 0.0}],
            ]
        }
        path = write(tmp_path, "inst.json", pair_instance(bad))
        assert main(["simulate", path]) == 3
        err = capsys.readouterr().err
        assert "not unitary" in err
        assert "e-" in err or "e+" in err or "1.0" in err  # deviation magnitude

    def test_out_file(self, tmp_path):
        path = write(tmp_path, "inst.json", pair_instance(IDENTITY_JSON))
        out = tmp_path / "report.json"
        assert main(["simulate", path, "--out", str(out)]) == 0
        assert json.loads(out.read_text())["command"] == "simulate"

    def test_named_network_selection(self, tmp_path, capsys):
        payload = {
            "modes": ["m1", "m2"],
            "states": [{"terms": [{"exp": [1, 1], "re": 1.0, "im": 0.0}]}],
            "networks": {"idle": IDENTITY_JSON, "mix": HADAMARD_JSON},
        }
        path = write(tmp_path, "inst.json", payload)
        assert main(["simulate", path, "--network", "idle"]) == 0
        report = json.loads(capsys.readouterr().out)
        assert report["output_states"][0]["terms"] == [
            {"exp": [1, 1], "re": 1.0, "im": 0.0}
        ]
        assert main(["simulate", path, "--network", "missing"]) == 2
        assert main(["simulate", path]) == 2  # ambiguous without a name


class TestCondition:
    def test_bunched_outcome_golden(self, tmp_path, capsys):
        path = write(tmp_path, "inst.json", pair_instance(HADAMARD_JSON))
        assert main(["condition", path, "--outcome", "2"]) == 0
        report = json.loads(capsys.readouterr().out)
        cond = report["conditionals"][0]
        assert abs(cond["weight"] - 0.5) < 1e-12
        (term,) = cond["state"]["terms"]
        assert term["exp"] == [0]
        assert abs(term["re"] - 0.5) < 1e-12 and term["im"] == 0.0

    def test_suppressed_outcome(self, tmp_path, capsys):
        path = write(tmp_path, "inst.json", pair_instance(HADAMARD_JSON))
        assert main(["condition", path, "--outcome", "1"]) == 0
        report = json.loads(capsys.readouterr().out)
        cond = report["conditionals"][0]
        assert cond["weight"] == 0.0
        assert cond["state"]["terms"] == []

    def test_missing_measure_exits_2(self, tmp_path, capsys):
        payload = pair_instance(IDENTITY_JSON)
        del payload["measure"]
        path = write(tmp_path, "inst.json", payload)
        assert main(["condition", path, "--outcome", "0"]) == 2


def check_instance(with_splitter: bool):
    stage_two = {"measure": "m2", "branches": {"0": "none", "1": "one-low"}}
    strategy = {
        "measure": "m1",
        "branches": {
            "0": stage_two,
            "1": {"measure": "m2", "branches": {"0": "one-high"}},
        },
    }
    if with_splitter:
        strategy["network"] = {
            "elements": [
                {"bs": {"theta": math.pi / 4, "phi": 0.0, "i": "m1", "j": "m2"}}
            ]
        }
    return {
        "modes": ["m1", "m2"],
        "states": [
            {"terms": [
                {"exp": [1, 0], "re": R, "im": 0.0},
                {"exp": [0, 1], "re": R, "im": 0.0},
            ]},
            {"terms": [
                {"exp": [1, 0], "re": R, "im": 0.0},
                {"exp": [0, 1], "re": -R, "im": 0.0},
            ]},
        ],
        "strategy": strategy,
    }


class TestCheck:
    def test_identity_boxes_fail(self, tmp_path, capsys):
        path = write(tmp_path, "inst.json", check_instance(with_splitter=False))
        assert main(["check", path]) == 0
        report = json.loads(capsys.readouterr().out)
        assert report["verdict"] is False
        assert any(leaf["ambiguous"] for leaf in report["cascade"]["leaves"])
        assert report["root_stage"]["verdict"] is False

    def test_splitter_passes(self, tmp_path, capsys):
        path = write(tmp_path, "inst.json", check_instance(with_splitter=True))
        assert main(["check", path]) == 0
        report = json.loads(capsys.readouterr().out)
        assert report["verdict"] is True
        assert report["root_stage"]["verdict"] is True

    def test_no_strategy_exits_2(self, tmp_path):
        payload = check_instance(with_splitter=False)
        del payload["strategy"]
        path = write(tmp_path, "inst.json", payload)
        assert main(["check", path]) == 2


class TestVerifyNogo:
    def test_small_batch_passes(self, tmp_path, capsys):
        out = tmp_path / "report.json"
        code = main(["verify-nogo", "--count", "5", "--seed", "3", "--out", str(out)])
        assert code == 0
        report = json.loads(out.read_text())
        assert report["all_passed"] is True
        assert len(report["reports"]) == 5
        assert "PASS" in capsys.readouterr().err

    def test_deterministic_bytes(self, tmp_path):
        out1 = tmp_path / "a.json"
        out2 = tmp_path / "b.json"
        main(["verify-nogo", "--count", "4", "--seed", "12", "--out", str(out1)])
        main(["verify-nogo", "--count", "4", "--seed", "12", "--out", str(out2)])
        assert out1.read_bytes() == out2.read_bytes()

    def test_corruption_fails(self, tmp_path, capsys):
        code = main(
            ["verify-nogo", "--count", "3", "--seed", "3",
             "--inject-corruption", "0.5", "--out", str(tmp_path / "r.json")]
        )
        assert code == 1
        assert "FAIL" in capsys.readouterr().err

    def test_no_aux_configuration(self, tmp_path, capsys):
        # With the auxiliary photon budget forced to zero the transfer matrix
        # is the identity and residuals sit at machine scale.
        out = tmp_path / "noaux.json"
        code = main(
            ["verify-nogo", "--count", "4", "--seed", "9",
             "--max-aux-photons", "0", "--out", str(out)]
        )
        assert code == 0
        report = json.loads(out.read_text())
        assert report["max_residual"] <= 1e-12
        for entry in report["reports"]:
            assert entry["aux_order"] == 0
            assert entry["diagonal_value"] == 1.0

    def test_cap_violation_exits_4(self, tmp_path, capsys):
        code = main(["verify-nogo", "--count", "999999"])
        assert code == 4
        assert "cap" in capsys.readouterr().err

    def test_size_cap_exits_4(self):
        assert main(["verify-nogo", "--count", "2", "--max-photons", "9"]) == 4


class TestOracleCheck:
    def test_small_batch_passes(self, tmp_path, capsys):
        out = tmp_path / "oracle.json"
        code = main(["oracle-check", "--count", "5", "--seed", "2", "--out", str(out)])
        assert code == 0
        report = json.loads(out.read_text())
        assert report["all_passed"] is True
        assert "PASS" in capsys.readouterr().err
