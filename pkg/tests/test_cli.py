import csv
import io
import json
import math
import xml.etree.ElementTree as ET

import pytest

from cardan.cli import main
from cardan.perimeter import load_reference_table

SVG = "{http://www.w3.org/2000/svg}"


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def rows_of(text):
    return list(csv.DictReader(io.StringIO(text)))


def test_moments_quadrature_reproduces_table(capsys):
    code, out, _ = run(capsys, "moments", "--quantity", "perimeter", "--kappa", "2", "--k-max", "10",
                       "--method", "quadrature")
    assert code == 0
    rows = rows_of(out)
    ref = {e.k: e.value for e in load_reference_table() if e.kappa == 2.0}
    assert [int(r["k"]) for r in rows] == list(range(1, 11))
    for r in rows:
        assert float(r["moment"]) == pytest.approx(ref[int(r["k"])], rel=1e-9)


def test_area_point_mass_moments(capsys):
    code, out, _ = run(capsys, "moments", "--quantity", "area", "--kappa", "0", "--k-max", "3")
    assert code == 0
    assert [float(r["moment"]) for r in rows_of(out)] == [math.pi, math.pi ** 2, math.pi ** 3]


@pytest.mark.parametrize("method", ["closed", "quadrature", "cdf"])
def test_area_methods_agree(capsys, method):
    _, out, _ = run(capsys, "moments", "--quantity", "area", "--kappa", "1.7", "--k-max", "4", "--method", method)
    values = [float(r["moment"]) for r in rows_of(out)]
    _, ref, _ = run(capsys, "moments", "--quantity", "area", "--kappa", "1.7", "--k-max", "4")
    assert values == pytest.approx([float(r["moment"]) for r in rows_of(ref)], rel=1e-9)


def test_perimeter_closed_form_only_first_moment(capsys):
    code, out, err = run(capsys, "moments", "--quantity", "perimeter", "--kappa", "1", "--k-max", "1")
    assert code == 0 and float(rows_of(out)[0]["moment"]) == 64 / 9
    code, out, err = run(capsys, "moments", "--quantity", "perimeter", "--kappa", "2", "--k-max", "3")
    assert code == 2 and out == ""
    assert "closed form" in err and "k >= 2" in err


def test_montecarlo_moment(capsys):
    code, out, _ = run(capsys, "moments", "--quantity", "area", "--kappa", "1", "--method", "montecarlo",
                       "--n", "200000", "--seed", "7")
    assert code == 0
    row = rows_of(out)[0]
    assert abs(float(row["moment"]) - math.pi / 2) < 4 * float(row["standard_error"])


def test_cdf_perimeter_curve(capsys):
    code, out, _ = run(capsys, "cdf", "--quantity", "perimeter", "--kappa", "1", "--grid", "6.28319:8.0:200")
    assert code == 0
    rows = rows_of(out)
    assert len(rows) == 200
    values = [float(r["cdf"]) for r in rows]
    assert values[0] < 1e-5 and values[-1] == 1.0
    assert all(a <= b for a, b in zip(values, values[1:]))


def test_cdf_area_knot_value(capsys):
    knot = math.pi * (1.2 ** 2 - 1)
    code, out, _ = run(capsys, "cdf", "--quantity", "area", "--kappa", "1.2", "--grid", f"0:{knot!r}:2")
    assert code == 0
    assert float(rows_of(out)[-1]["cdf"]) == pytest.approx(0.6111111111111, abs=1e-12)


def test_pdf_area_step_density(capsys):
    code, out, _ = run(capsys, "pdf", "--quantity", "area", "--kappa", "2", "--grid", "0:9.42478:100")
    assert code == 0
    rows = rows_of(out)
    levels = {round(float(r["pdf"]), 12) for r in rows}
    assert levels == {round(1 / (2 * math.pi), 12), round(1 / (4 * math.pi), 12)}
    # the step sits at pi r^2
    for r in rows:
        expected = 1 / (2 * math.pi) if float(r["x"]) < math.pi else 1 / (4 * math.pi)
        assert float(r["pdf"]) == pytest.approx(expected)


def test_pdf_outside_support_exits_2(capsys):
    code, out, err = run(capsys, "pdf", "--quantity", "area", "--kappa", "2", "--grid", "0:12:10")
    assert code == 2 and "support" in err
    code, _, _ = run(capsys, "pdf", "--quantity", "perimeter", "--kappa", "1", "--grid", "6:8:10")
    assert code == 2
    code, _, _ = run(capsys, "pdf", "--quantity", "area", "--kappa", "0")
    assert code == 2


def test_pdf_perimeter_endpoints_and_uniform(capsys):
    code, out, _ = run(capsys, "pdf", "--quantity", "perimeter", "--kappa", "2", "--with-uniform")
    assert code == 0
    rows = rows_of(out)
    assert len(rows) == 201
    assert float(rows[0]["pdf"]) == pytest.approx(2 / (math.pi * 4), rel=1e-9)
    width = float(rows[-1]["x"]) - float(rows[0]["x"])
    assert all(float(r["uniform_pdf"]) == pytest.approx(1 / width) for r in rows)


def test_cdf_with_uniform(capsys):
    _, out, _ = run(capsys, "cdf", "--quantity", "area", "--kappa", "0.5", "--with-uniform")
    rows = rows_of(out)
    # the sub-unit law is itself uniform
    assert all(float(r["cdf"]) == pytest.approx(float(r["uniform_cdf"]), abs=1e-12) for r in rows)


def test_bad_grid(capsys):
    code, _, err = run(capsys, "cdf", "--quantity", "area", "--kappa", "1", "--grid", "3:1:10")
    assert code == 2
    code, _, err = run(capsys, "cdf", "--quantity", "area", "--kappa", "1", "--grid", "nonsense")
    assert code == 2 and "min:max:count" in err


def test_unknown_flag_is_usage_error(capsys):
    with pytest.raises(SystemExit) as info:
        main(["moments", "--quantity", "volume", "--kappa", "1"])
    assert info.value.code == 2


def parse_svg(text):
    return ET.fromstring(text.split("\n", 1)[1])


def test_trace_svg_structure(capsys):
    code, out, _ = run(capsys, "trace", "--r", "1", "--kappa", "1.5", "--n-ellipses", "100", "--seed", "1")
    assert code == 0
    root = parse_svg(out)
    fixed = root.find(f".//{SVG}circle[@class='fixed-centrode']")
    moving = root.find(f".//{SVG}circle[@class='moving-centrode']")
    assert float(fixed.get("r")) == 2.0 and float(moving.get("r")) == 1.0
    ellipses = root.findall(f".//{SVG}polygon[@class='ellipse']")
    assert len(ellipses) == 100
    assert len(root.findall(f".//{SVG}circle[@class='generating-point']")) == 100
    for el in ellipses:
        rho = float(el.get("data-rho"))
        assert rho <= 1.5
        assert float(el.get("data-semi-major")) == 1 + rho
        assert float(el.get("data-semi-minor")) == abs(1 - rho)
        theta = float(el.get("data-orientation"))
        a, b = 1 + rho, abs(1 - rho)
        for pair in el.get("points").split()[::17]:
            x, y = map(float, pair.split(","))
            xr = x * math.cos(theta) + y * math.sin(theta)
            yr = -x * math.sin(theta) + y * math.cos(theta)
            assert b * b * xr * xr + a * a * yr * yr == pytest.approx(a * a * b * b, abs=1e-9)


def test_trace_point_mass_is_circle(capsys):
    code, out, _ = run(capsys, "trace", "--n-ellipses", "1", "--kappa", "0")
    assert code == 0
    (el,) = parse_svg(out).findall(f".//{SVG}polygon[@class='ellipse']")
    assert float(el.get("data-semi-major")) == float(el.get("data-semi-minor")) == 1.0
    for pair in el.get("points").split():
        x, y = map(float, pair.split(","))
        assert math.hypot(x, y) == pytest.approx(1.0, abs=1e-14)


def test_trace_rejects_empty(capsys):
    assert run(capsys, "trace", "--kappa", "1", "--n-ellipses", "0")[0] == 2


def test_approx_error_rows(capsys):
    code, out, _ = run(capsys, "approx-error", "--kappa-list", "1,2,10")
    assert code == 0
    rows = rows_of(out)
    assert list(rows[0]) == ["kappa", "mean", "series", "difference"]
    diffs = [float(r["difference"]) for r in rows]
    assert [float(f"{d:.6g}") for d in diffs] == [-2.29222e-2, -5.44238e-4, -1.64009e-7]
    assert run(capsys, "approx-error", "--kappa-list", "1,-2")[0] == 2


def test_table_check(capsys):
    code, out, err = run(capsys, "table-check")
    assert code == 0
    assert len(rows_of(out)) == 20
    assert "max relative error" in err and "ok" in err


def test_table_check_threshold_failure(capsys):
    code, _, err = run(capsys, "table-check", "--threshold", "1e-30")
    assert code == 1 and "FAILED" in err


def test_quadrature_budget_exit_1(capsys, monkeypatch):
    from cardan import cli
    from cardan.quadrature import QuadratureSpec

    monkeypatch.setattr(cli, "_spec", lambda args: QuadratureSpec(1e-16, 1e-16, 1))
    code, _, err = run(capsys, "moments", "--quantity", "perimeter", "--kappa", "3", "--k-max", "10",
                       "--method", "quadrature")
    assert code == 1 and "budget" in err


def test_cardan_tol_env(capsys, monkeypatch):
    monkeypatch.setenv("CARDAN_TOL", "1e-3")
    _, loose, _ = run(capsys, "moments", "--quantity", "perimeter", "--kappa", "3", "--k-max", "6",
                      "--method", "quadrature")
    monkeypatch.delenv("CARDAN_TOL")
    _, tight, _ = run(capsys, "moments", "--quantity", "perimeter", "--kappa", "3", "--k-max", "6",
                      "--method", "quadrature")
    lv = [float(r["moment"]) for r in rows_of(loose)]
    tv = [float(r["moment"]) for r in rows_of(tight)]
    assert lv == pytest.approx(tv, rel=1e-3)


@pytest.mark.parametrize("argv", [
    ["sample", "--kappa", "1.5", "--n", "50", "--seed", "4"],
    ["trace", "--kappa", "1.5", "--n-ellipses", "5", "--seed", "4"],
    ["pdf", "--quantity", "perimeter", "--kappa", "3"],
    ["moments", "--quantity", "perimeter", "--kappa", "2", "--k-max", "4", "--method", "cdf"],
])
def test_byte_identical_reruns(capsys, argv):
    first = run(capsys, *argv)[1]
    second = run(capsys, *argv)[1]
    assert first == second and first


@pytest.mark.parametrize("argv", [
    ["sample", "--kappa", "2", "--n", "20"],
    ["cdf", "--quantity", "perimeter", "--kappa", "2", "--with-uniform"],
    ["approx-error"],
])
def test_json_mirrors_csv(capsys, argv):
    as_csv = rows_of(run(capsys, *argv)[1])
    as_json = json.loads(run(capsys, *argv, "--format", "json")[1])
    assert len(as_csv) == len(as_json)
    for c, j in zip(as_csv, as_json):
        assert list(c) == list(j)
        assert [float(v) for v in c.values()] == [float(v) for v in j.values()]


def test_output_file(tmp_path, capsys):
    path = tmp_path / "out.csv"
    code, out, _ = run(capsys, "sample", "--kappa", "1", "--n", "3", "-o", str(path))
    assert code == 0 and out == ""
    assert len(rows_of(path.read_text())) == 3


def test_console_script_entry_point():
    from importlib.metadata import entry_points

    (ep,) = [e for e in entry_points(group="console_scripts") if e.name == "cardan"]
    assert ep.load() is main
