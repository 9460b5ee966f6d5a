import json
import math

import pytest

from cli import EXIT_FAILED, EXIT_INVALID, EXIT_OK, main, run
from utils.analysis import admissible_theta_window, locate_vortex, shell_energy
from utils.core_field import BeamSpec, SphericalPoint, eval_field

EXAMPLE_THETA = "1.0471975511965976"


def _fields(stdout):
    return dict(item.split("=", 1) for item in stdout.split())


def test_eval_example():
    result = run(["eval", "--k", "1", "--a", "1", "--r", "0.5", "--theta", EXAMPLE_THETA])
    assert result.exit_code == EXIT_OK
    assert result.stdout_payload.startswith("re=-0.964122986")
    assert result.stdout_payload.endswith("im=0 branch=cos")


def test_eval_prints_library_value_exactly():
    result = run(["eval", "--k", "1.7", "--a", "0.3", "--r", "2.5", "--theta", "2.1"])
    value, branch = eval_field(BeamSpec(a=0.3, k=1.7), SphericalPoint(2.5, 2.1))
    fields = _fields(result.stdout_payload)
    assert float(fields["re"]) == value.real
    assert float(fields["im"]) == value.imag
    assert fields["branch"] == branch.value


def test_eval_degrees_and_cartesian_input():
    radians = run(["eval", "--k", "1", "--a", "1", "--r", "0.5", "--theta", str(math.radians(60))])
    degrees = run(["eval", "--k", "1", "--a", "1", "--r", "0.5", "--theta", "60", "--deg"])
    assert radians.stdout_payload == degrees.stdout_payload

    cartesian = run(["eval", "--k", "1", "--a", "1", "--x", "0.3", "--y", "0", "--z", "0.4", "--json"])
    document = json.loads(cartesian.stdout_payload)
    value, _ = eval_field(BeamSpec(a=1.0, k=1.0), SphericalPoint(0.5, math.acos(0.8)))
    assert document["re"] == pytest.approx(value.real, rel=1e-14)


def test_eval_forced_branch():
    result = run(["eval", "--k", "1", "--a", "1", "--r", "0.5", "--theta", "1.0", "--branch", "sin"])
    fields = _fields(result.stdout_payload)
    assert fields["branch"] == "sin"
    assert fields["re"] == "0"


def test_window():
    result = run(["window"])
    assert result.exit_code == EXIT_OK
    fields = _fields(result.stdout_payload)
    assert float(fields["theta0"]) == pytest.approx(0.7050269, abs=1e-6)
    assert float(fields["theta1"]) == pytest.approx(2.4365657, abs=1e-6)
    assert float(fields["theta0"]) == admissible_theta_window().theta0


def test_residual_passes_for_the_closed_form():
    result = run(["residual", "--k", "1", "--r", "0.5", "--theta", EXAMPLE_THETA])
    assert result.exit_code == EXIT_OK
    assert _fields(result.stdout_payload)["passed"] == "true"


def test_residual_fails_for_a_corrupted_field():
    argv = ["residual", "--k", "1", "--r", "0.5", "--theta", EXAMPLE_THETA, "--h", "1e-3", "--tol", "1e-4"]
    result = run(argv, field=lambda p: complex(p.R**2))
    assert result.exit_code == EXIT_FAILED
    assert _fields(result.stdout_payload)["passed"] == "false"


def test_envelope_residual():
    result = run(["residual", "--k", "1", "--r", "0.6", "--theta", "1.0", "--envelope", "--json"])
    document = json.loads(result.stdout_payload)
    assert result.exit_code == EXIT_OK
    assert document["equation"] == "envelope"


def test_riccati_crosschecks():
    angular = run(["riccati", "--which", "angular", "--from", "0.5235987755982988", "--to", "1.4707963267948966"])
    assert angular.exit_code == EXIT_OK
    radial = run(["riccati", "--which", "radial", "--from", "1", "--to", "2", "--k", "1", "--branch", "sin"])
    assert radial.exit_code == EXIT_OK
    assert float(_fields(radial.stdout_payload)["max_rel_error"]) <= 1e-8


def test_riccati_radial_needs_k():
    result = run(["riccati", "--which", "radial", "--from", "1", "--to", "2"])
    assert result.exit_code == EXIT_INVALID


def test_vortex():
    fields = _fields(run(["vortex", "--k", "2", "--r", "5"]).stdout_payload)
    assert float(fields["theta"]) == locate_vortex(BeamSpec(a=1.0, k=2.0), 5.0)
    assert abs(float(fields["phase_jump"])) == pytest.approx(math.pi)


def test_paraxial():
    fields = _fields(run(["paraxial", "--k", "1", "--z", "1000", "--rho", "1"]).stdout_payload)
    assert float(fields["rel_error"]) <= 1e-3
    assert fields["non_paraxial"] == "false"


def test_energy_matches_library():
    result = run(["energy", "--k", "1", "--a", "1", "--rlo", "1", "--rhi", "3", "--json"])
    document = json.loads(result.stdout_payload)
    window = admissible_theta_window()
    report = shell_energy(BeamSpec(a=1.0, k=1.0), 1.0, 3.0, window.theta0, window.theta1)
    assert document["value"] == report.value
    assert document["integrand"] == "|A|^2"


def test_energy_flags():
    result = run(["energy", "--k", "1", "--a", "1", "--rlo", "1", "--rhi", "3", "--full-theta", "--magnitude", "--json"])
    document = json.loads(result.stdout_payload)
    assert document["integrand"] == "|A|"
    assert document["theta_lo"] < 1e-14


def test_pq_flat_wavefront():
    fields = _fields(run(["pq", "--w", "2", "--z", "5", "--k", "1", "--zeta", "0.3"]).stdout_payload)
    assert float(fields["inv_2q_im"]) == 0.25
    assert float(fields["p_re"]) == 0.3 - 5.0


def test_grid_to_file(tmp_path):
    target = tmp_path / "fig3.csv"
    result = run(["grid", "--figure", "3", "--k", "1", "--nx", "4", "--ny", "4", "--format", "csv", "--out", str(target)])
    assert result.exit_code == EXIT_OK
    assert target.read_text().startswith("x,y,re,im\n")
    assert _fields(result.stdout_payload)["masked"] == "0"


def test_grid_to_stdout_is_the_document():
    result = run(["grid", "--field", "paraxial", "--k", "1", "--nx", "2", "--ny", "2", "--format", "json"])
    document = json.loads(result.stdout_payload)
    assert document["generator"].startswith("paraxial:")


@pytest.mark.parametrize("fmt", ["csv", "json"])
def test_grid_to_stdout_with_json_wraps_the_document(fmt):
    result = run(["grid", "--figure", "5", "--k", "1", "--ny", "3", "--format", fmt, "--json"])
    assert result.exit_code == EXIT_OK
    payload = json.loads(result.stdout_payload)
    assert payload["schema"] == "grid"
    assert payload["format"] == fmt
    assert payload["out"] is None
    assert payload["ny"] == 3
    if fmt == "csv":
        assert payload["document"].startswith("x,y,re,im\n")
    else:
        assert payload["document"]["generator"].startswith("fig5:")


def test_grid_bad_destination(tmp_path):
    target = tmp_path / "missing" / "g.csv"
    result = run(["grid", "--figure", "5", "--k", "1", "--ny", "4", "--out", str(target)])
    assert result.exit_code == EXIT_INVALID
    assert result.diagnostics


@pytest.mark.parametrize(
    "argv,schema",
    [
        (["eval", "--k", "1", "--a", "1", "--r", "0.5", "--theta", "1"], "eval"),
        (["residual", "--k", "1", "--r", "0.5", "--theta", "1"], "residual"),
        (["riccati", "--which", "radial", "--from", "0.2", "--to", "0.7", "--k", "1"], "riccati"),
        (["window"], "window"),
        (["vortex", "--k", "1", "--r", "1"], "vortex"),
        (["paraxial", "--k", "1", "--z", "10", "--rho", "1"], "paraxial"),
        (["energy", "--k", "1", "--a", "1", "--rlo", "0.2", "--rhi", "0.5"], "energy"),
        (["pq", "--w", "1", "--z", "0", "--k", "1"], "pq"),
    ],
)
def test_json_output_names_its_schema(argv, schema):
    result = run(argv + ["--json"])
    assert result.exit_code == EXIT_OK
    assert json.loads(result.stdout_payload)["schema"] == schema


@pytest.mark.parametrize(
    "argv",
    [
        ["frobnicate"],
        ["eval", "--k", "1"],
        ["window", "--bogus"],
        [],
    ],
)
def test_usage_errors_exit_two(argv):
    result = run(argv)
    assert result.exit_code == EXIT_INVALID
    assert any("usage" in line for line in result.diagnostics)


@pytest.mark.parametrize(
    "argv",
    [
        ["eval", "--k", "1", "--a", "1", "--r", "-1", "--theta", "1"],
        ["eval", "--k", "0", "--a", "1", "--r", "1", "--theta", "1"],
        ["eval", "--k", "1", "--a", "1", "--r", "1"],
        ["vortex", "--k", "1", "--r", "0"],
    ],
)
def test_domain_errors_exit_two(argv):
    result = run(argv)
    assert result.exit_code == EXIT_INVALID
    assert result.diagnostics[0].startswith("error:")


def test_main_prints_and_returns_code(capsys):
    assert main(["window", "--json"]) == EXIT_OK
    assert json.loads(capsys.readouterr().out)["schema"] == "window"
