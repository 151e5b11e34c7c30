import csv
import json
import os

import pytest
from utils import DATA_ROOT, binary_entropy, binary_setup

from gpwlab import io
from gpwlab.cli import THREADS_ENV, build_parser, main


SETUP = os.path.abspath(os.path.join(DATA_ROOT, "binary-gp.json"))


def write_config(name, **values):
    values.setdefault("input", SETUP)
    with open(name, "w") as fd:
        json.dump(values, fd)
    return name


def read_rows(path):
    with open(path, newline="") as fd:
        return list(csv.DictReader(fd))


class TestCommands:
    def test_rate(self, tmpdir):
        with tmpdir.as_cwd():
            config = write_config("config.json")
            assert main(["rate", "--config", config, "--out", "results"]) == 0

            summary = io.read_json(os.path.join("results", "rate.json"))
            rows = read_rows(os.path.join("results", "rate.csv"))

        assert summary["command"] == "rate"
        result = summary["result"]

        i_us = 1 - binary_entropy(0.75)
        expected = binary_entropy(0.3) - binary_entropy(0.1) - i_us
        assert result["rate_a"] == pytest.approx(expected, abs=1e-9)
        assert not result["s2_member"]

        quantities = [row["quantity"] for row in rows]
        assert quantities[-2:] == ["rate_a", "rate_alt"]
        assert "component1" in quantities

    def test_exponent(self, tmpdir):
        with tmpdir.as_cwd():
            config = write_config("config.json", alpha=[0.25, 0.5], optimize=True)
            assert main(["exponent", "--config", config]) == 0

            summary = io.read_json("exponent.json")
            rows = read_rows("exponent.csv")

        result = summary["result"]
        assert len(result["records"]) == 2
        assert result["records"][1]["bounds"]["alpha"] == 0.5
        assert set(result["optimal"]) == {"error", "secrecy", "min"}

        assert len(rows) == 2
        assert float(rows[0]["alpha"]) == 0.25
        assert "expurgated_error_bound" in rows[0]

    def test_hyptest(self, tmpdir):
        with tmpdir.as_cwd():
            config = write_config(
                "config.json", alpha=[0.5], rates={"R": 0.5, "R1": 1, "r": 0.5}
            )
            assert main(["hyptest", "--config", config]) == 0
            result = io.read_json("hyptest.json")["result"]

        assert result["M1"] == 4.0
        assert result["M2"] == pytest.approx(2**1.5)
        assert len(result["traces"]) == 4
        assert result["all_hold"]

    def test_resolve(self, tmpdir):
        with tmpdir.as_cwd():
            config = write_config(
                "config.json",
                alpha=0.5,
                rates={"R": 0, "R1": 1, "r": 2},
                trials=8,
                seed=3,
            )
            assert main(["resolve", "--config", config]) == 0
            result = io.read_json("resolve.json")["result"]
            rows = read_rows("resolve.csv")

        assert result["name"] == "resolve"
        assert result["trials"] == 8
        assert result["extra"]["r"] == 2
        assert result["passed"]
        assert len(rows) == 8

    def test_resolve_conditional(self, tmpdir):
        with tmpdir.as_cwd():
            config = write_config(
                "config.json",
                rates={"R": 0, "R1": 1, "r": 0},
                trials=4,
                mode="conditional",
            )
            assert main(["resolve", "--config", config]) == 0
            result = io.read_json("resolve.json")["result"]

        assert result["name"] == "resolve-conditional"
        assert result["bound"] == pytest.approx(1.75, abs=1e-3)

    def test_decode(self, tmpdir):
        with tmpdir.as_cwd():
            config = write_config(
                "config.json", rates={"R": 1, "R1": 1, "r": 1}, trials=3
            )
            assert main(["decode", "--config", config, "--threads", "2"]) == 0
            result = io.read_json("decode.json")["result"]
            rows = read_rows("decode.csv")

        assert result["trials"] == 3
        assert result["checks"]["povm_valid"]
        assert result["expurgation"]["codebooks"] == 3
        assert result["secrecy"]["trials"] == 3
        assert [row["trial"] for row in rows] == ["0", "1", "2"]

    def test_secrecy_seed(self, tmpdir):
        with tmpdir.as_cwd():
            config = write_config(
                "config.json", rates={"R": 1, "R1": 0, "r": 1}, trials=4, seed=1
            )
            assert main(["secrecy", "--config", config, "--out", "a"]) == 0
            assert main(["secrecy", "--config", config, "--out", "b"]) == 0
            assert (
                main(["secrecy", "--config", config, "--out", "c", "--seed", "1"])
                == 0
            )

            first = read_rows(os.path.join("a", "secrecy.csv"))
            second = read_rows(os.path.join("b", "secrecy.csv"))
            third = read_rows(os.path.join("c", "secrecy.csv"))

        assert first == second
        assert first == third

    def test_lemma_la(self, tmpdir):
        family = {"q_b": 0.1, "q_e": 0.3, "p_v": [0.25, 0.5], "c": [0.0, 0.5]}
        with tmpdir.as_cwd():
            with open("config.json", "w") as fd:
                json.dump({"family": family}, fd)
            assert main(["lemma-la", "--config", "config.json"]) == 0

            result = io.read_json("lemma-la.json")["result"]
            rows = read_rows("lemma-la.csv")

        assert result["argmax"] == [0.5, 0.0]
        assert result["gap"] == pytest.approx(0.0, abs=1e-9)
        assert [row["s2_member"] for row in rows] == ["true", "false"] * 2


class TestErrors:
    def test_infeasible_rates(self, tmpdir, capsys):
        setup = binary_setup(q_b=0.2, q_e=0.2)
        data = {
            "state": io.state_to_dict(setup.state),
            "channel": io.channel_to_dict(setup.channel),
        }
        with tmpdir.as_cwd():
            with open("setup.json", "w") as fd:
                json.dump(data, fd)
            config = write_config("config.json", input="setup.json")

            assert main(["exponent", "--config", config]) == 3
            assert not os.path.exists("exponent.json")

        captured = capsys.readouterr()
        assert captured.err.startswith("gpwlab exponent: error:")

    def test_invalid_config(self, tmpdir, capsys):
        with tmpdir.as_cwd():
            config = write_config("config.json", trial=12)
            assert main(["decode", "--config", config]) == 2

            assert main(["rate", "--config", "missing.json"]) == 2

        captured = capsys.readouterr()
        assert "unknown keys" in captured.err
        assert "does not exist" in captured.err

    @pytest.mark.parametrize(
        "command, values, message",
        [
            ("rate", {"alpha": ["x"]}, "list of numbers"),
            ("resolve", {"rates": {"R": 0, "R1": 1, "r": 1}, "trials": 1.5}, "trials"),
            ("secrecy", {"rates": {"R": 1, "R1": 0, "r": 1}, "seed": 1.5}, "seed"),
            ("exponent", {"n": "2"}, "n should be an integer"),
            ("decode", {"rates": {"R": 1, "R1": 1, "r": 1}, "threads": 2.5}, "threads"),
        ],
    )
    def test_malformed_config(self, tmpdir, capsys, command, values, message):
        with tmpdir.as_cwd():
            config = write_config("config.json", **values)
            assert main([command, "--config", config]) == 2
            assert not os.path.exists(f"{command}.json")

        captured = capsys.readouterr()
        assert captured.err.startswith(f"gpwlab {command}: error:")
        assert message in captured.err
        assert "Traceback" not in captured.err

    @pytest.mark.parametrize("defect", ["size", "ragged", "pmf", "kraus"])
    def test_malformed_setup(self, tmpdir, capsys, defect):
        setup = binary_setup()
        state = io.state_to_dict(setup.state)
        channel = io.channel_to_dict(setup.channel)
        if defect == "size":
            state["classical"][0]["size"] = "two"
        elif defect == "ragged":
            state["conditionals"]["0,0"][0] = state["conditionals"]["0,0"][0][:1]
        elif defect == "pmf":
            state["pmf"] = [["a", 0.25], [0.25, 0.25]]
        else:
            channel["kraus"] = {"0": channel["kraus"][0]}

        with tmpdir.as_cwd():
            with open("setup.json", "w") as fd:
                json.dump({"state": state, "channel": channel}, fd)
            config = write_config("config.json", input="setup.json")
            assert main(["rate", "--config", config]) == 2

        captured = capsys.readouterr()
        assert captured.err.startswith("gpwlab rate: error:")
        assert "Traceback" not in captured.err

    def test_integer_rates(self, tmpdir):
        with tmpdir.as_cwd():
            config = write_config("config.json", rates={"R": 0.5, "R1": 1, "r": 1})
            assert main(["decode", "--config", config]) == 2

    def test_threads(self, tmpdir, monkeypatch):
        with tmpdir.as_cwd():
            config = write_config("config.json")

            monkeypatch.setenv(THREADS_ENV, "many")
            assert main(["rate", "--config", config]) == 2

            monkeypatch.setenv(THREADS_ENV, "2")
            assert main(["rate", "--config", config]) == 0

            assert main(["rate", "--config", config, "--threads", "0"]) == 2

    def test_parser(self, capsys):
        parser = build_parser()

        with pytest.raises(SystemExit) as cm:
            parser.parse_args(["--version"])
        assert cm.value.code == 0
        assert capsys.readouterr().out.startswith("gpwlab ")

        with pytest.raises(SystemExit) as cm:
            parser.parse_args(["rate"])
        assert cm.value.code == 2

        with pytest.raises(SystemExit):
            parser.parse_args(["unknown", "--config", "config.json"])
