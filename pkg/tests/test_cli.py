import json
from pathlib import Path

import pytest

from groverlab.core.circuit import gate_census, parse_circuit
from groverlab.main import main
from groverlab.routers.commands import SWEEP_HEADER, parse_sweep
from groverlab.services import compiler_service, grover_service
from groverlab.services.verification_service import CHECKS


GOLDEN = Path(__file__).parent / "golden"
FLOAT_FIELDS = {"theta_rad", "p_analytic", "p_engine"}


def _field(output: str, name: str) -> str:
    for line in output.splitlines():
        if line.startswith(f"{name}: "):
            return line.split(": ", 1)[1]
    raise AssertionError(f"{name} missing from output")


class TestRun:
    def test_worked_example(self, capsys):
        code = main(["run", "--n", "3", "--target", "5", "--engine", "statevector", "--shots", "10000", "--seed", "7"])
        output = capsys.readouterr().out
        assert code == 0
        assert _field(output, "k0") == "2"
        assert _field(output, "theta_deg") == "41.4"
        assert float(_field(output, "p_engine")) == pytest.approx(0.9453125, abs=1e-10)
        assert _field(output, "measured_mode") == "5"

    def test_analytic_n2(self, capsys):
        assert main(["run", "--n", "2", "--target", "0", "--engine", "analytic"]) == 0
        output = capsys.readouterr().out
        assert float(_field(output, "p_analytic")) == pytest.approx(1.0, abs=1e-12)
        assert _field(output, "k0") == "1"
        assert _field(output, "shots") == "1024"

    def test_target_out_of_range(self, capsys):
        assert main(["run", "--n", "3", "--target", "9"]) == 1
        assert "target out of range" in capsys.readouterr().err

    def test_byte_identical_output(self, capsys):
        argv = ["run", "--n", "4", "--target", "6", "--shots", "200", "--seed", "123"]
        main(argv)
        first = capsys.readouterr().out
        main(argv)
        assert capsys.readouterr().out == first

    def test_matches_golden_output(self, capsys):
        assert main(["run", "--n", "3", "--target", "5", "--shots", "100", "--seed", "7"]) == 0
        actual = capsys.readouterr().out.splitlines()
        expected = (GOLDEN / "run_n3_target5_seed7.txt").read_text(encoding="utf-8").splitlines()
        assert len(actual) == len(expected)
        for got, want in zip(actual, expected):
            key, _, value = want.partition(": ")
            if key in FLOAT_FIELDS:
                assert got.startswith(f"{key}: ")
                assert float(got.split(": ", 1)[1]) == pytest.approx(float(value), abs=1e-12)
            else:
                assert got == want

    @pytest.mark.parametrize("level", ["operator", "toffoli", "universal"])
    def test_compiled_single_qubit(self, level, capsys):
        argv = ["run", "--n", "1", "--target", "1", "--engine", "compiled", "--level", level, "--shots", "0"]
        assert main(argv) == 0
        assert float(_field(capsys.readouterr().out, "p_engine")) == pytest.approx(0.5, abs=1e-12)

    def test_json_record(self, capsys):
        assert main(["run", "--n", "3", "--target", "5", "--shots", "10", "--json"]) == 0
        record = json.loads(capsys.readouterr().out.strip().splitlines()[-1])
        assert record["n"] == 3
        assert record["k0"] == 2
        assert len(record["trace"]) == 3

    def test_compiled_engine(self, capsys):
        argv = ["run", "--n", "3", "--target", "5", "--engine", "compiled", "--level", "toffoli", "--shots", "0"]
        assert main(argv) == 0
        output = capsys.readouterr().out
        assert _field(output, "level") == "toffoli"
        assert float(_field(output, "p_engine")) == pytest.approx(121 / 128, abs=1e-9)
        assert _field(output, "measured_mode") == "-"

    @pytest.mark.parametrize(
        "argv",
        [
            ["run", "--n", "three", "--target", "1"],
            ["run", "--n", "3"],
            ["run", "--n", "3", "--target", "1", "--engine", "quantum"],
            ["teleport"],
        ],
    )
    def test_usage_errors_exit_one(self, argv, capsys):
        assert main(argv) == 1
        assert "error:" in capsys.readouterr().err


class TestSweep:
    def test_analytic_curve(self, capsys):
        assert main(["sweep", "--n-min", "2", "--n-max", "30", "--engine", "analytic"]) == 0
        lines = capsys.readouterr().out.splitlines()
        assert lines[0] == ",".join(SWEEP_HEADER)
        assert len(lines) == 30
        assert lines[1].startswith("2,1.0471975511965")
        assert lines[1].split(",")[2] == "1"
        fields = lines[9].split(",")
        assert (fields[0], fields[2]) == ("10", "25")

    def test_round_trip_at_full_precision(self, capsys):
        main(["sweep", "--n-min", "2", "--n-max", "8", "--engine", "statevector"])
        rows = parse_sweep(capsys.readouterr().out)
        assert rows == grover_service.sweep(2, 8, "statevector")

    def test_blank_engine_column_when_infeasible(self, capsys):
        main(["sweep", "--n-min", "6", "--n-max", "7", "--engine", "compiled"])
        lines = capsys.readouterr().out.splitlines()
        assert lines[1].split(",")[4] != ""
        assert lines[2].endswith(",")

    def test_out_file(self, tmp_path, capsys):
        target = tmp_path / "curve.csv"
        assert main(["sweep", "--n-min", "2", "--n-max", "4", "--out", str(target)]) == 0
        assert capsys.readouterr().out == ""
        assert target.read_text().count("\n") == 4

    def test_bad_range(self, capsys):
        assert main(["sweep", "--n-min", "5", "--n-max", "3"]) == 1


class TestCompile:
    def _compile(self, capsys, *argv):
        assert main(["compile", *argv]) == 0
        return capsys.readouterr().out

    def test_universal_contains_only_universal_gates(self, capsys):
        text = self._compile(capsys, "--n", "3", "--target", "5", "--level", "universal")
        census = gate_census(parse_circuit(text))
        assert set(census.counts) <= {"x", "h", "s", "t", "tdg", "cx", "gphase"}
        assert "# gates: " in text
        assert "# predicted: 324.89" in text

    def test_toffoli_level(self, capsys):
        census = gate_census(parse_circuit(self._compile(capsys, "--n", "3", "--target", "5", "--level", "toffoli")))
        assert census.count("ccx") > 0
        assert census.count("ncx") == 0

    def test_all_ones_target_oracle_has_no_conjugation(self, capsys):
        lines = self._compile(capsys, "--n", "3", "--target", "7", "--level", "operator").splitlines()
        first_oracle = lines.index("h 3") + 1
        assert lines[first_oracle] == "ncx 0 1 2 3"

    def test_out_file_is_parseable(self, tmp_path, capsys):
        target = tmp_path / "grover.qc"
        main(["compile", "--n", "2", "--target", "1", "--level", "universal", "--out", str(target)])
        circuit = parse_circuit(target.read_text())
        assert circuit.num_qubits == 3
        assert circuit == compiler_service.assemble_grover_circuit(2, 1, 1, "universal")

    def test_level_required(self, capsys):
        assert main(["compile", "--n", "3", "--target", "5"]) == 1


class TestVerify:
    def test_all_pass(self, capsys):
        assert main(["verify", "--n", "3", "--target", "5"]) == 0
        lines = capsys.readouterr().out.splitlines()
        assert len(lines) == len(CHECKS)
        assert all(line.startswith("PASS ") for line in lines)

    def test_corrupted_lowering_exits_two(self, monkeypatch, capsys):
        def broken_toffoli():
            gates = compiler_service.toffoli_gates(0, 1, 2)[1:]
            return compiler_service.CircuitBuilder(3).extend(gates).build()

        monkeypatch.setattr(compiler_service, "lower_toffoli", broken_toffoli)
        assert main(["verify", "--n", "3", "--target", "5"]) == 2
        captured = capsys.readouterr()
        assert "FAIL toffoli_exact" in captured.out
        assert "toffoli_exact" in captured.err

    def test_size_guard(self, capsys):
        assert main(["verify", "--n", "6", "--target", "0"]) == 1
        assert "matrix verification limited to n ≤ 5" in capsys.readouterr().err
