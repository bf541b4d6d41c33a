import json
import math
import subprocess
import sys
import xml.etree.ElementTree as ET

import numpy as np
import pytest

from canonham import StepHamiltonian, render_svg, pointmass_hamiltonian
from canonham.cli import main

COS_MEASURE = '{"density":{"kind":"trigpoly","a":[1,1]}}'
SIN_MEASURE = '{"density":{"kind":"trigpoly","a":[1],"b":[0,1]}}'


def read_csv(path):
    lines = path.read_text().split("\n")
    header = lines[0].split(",")
    rows = [[float(v) for v in ln.split(",")] for ln in lines[1:] if ln]
    return header, rows


class TestInverseCommand:
    def test_one_plus_cos_steps(self, tmp_path):
        out = tmp_path / "steps.csv"
        rc = main(["inverse", "--measure", COS_MEASURE, "--T", "pi", "--N", "6",
                   "--out", str(out)])
        assert rc == 0
        header, rows = read_csv(out)
        assert header == ["t_start", "t_end", "h11", "g", "h22"]
        h11 = [r[2] for r in rows]
        assert h11[:3] == pytest.approx([1.0, 1 / 3, 2 / 3], rel=1e-12)
        assert rows[1][0] == pytest.approx(0.5)

    def test_json_artifact(self, tmp_path):
        out = tmp_path / "steps.csv"
        j = tmp_path / "steps.json"
        rc = main(["inverse", "--measure", SIN_MEASURE, "--T", "pi", "--N", "3",
                   "--out", str(out), "--json", str(j)])
        assert rc == 0
        H = StepHamiltonian.from_json(json.loads(j.read_text()))
        assert H.g[1] == pytest.approx(-4 / 3, rel=1e-12)

    def test_invalid_measure_exit_2(self, tmp_path):
        rc = main(["inverse", "--measure", '{"density":', "--T", "pi", "--N", "3",
                   "--out", str(tmp_path / "x.csv")])
        assert rc == 2

    def test_unwritable_output_exit_4(self):
        rc = main(["inverse", "--measure", COS_MEASURE, "--T", "pi", "--N", "3",
                   "--out", "/nonexistent-dir/steps.csv"])
        assert rc == 4

    def test_breakdown_exit_3_with_partial(self, tmp_path):
        # a pure-atom density fails the support gate -> invalid input, exit 2;
        # a barely-positive trig poly loses positivity numerically -> exit 3
        measure = '{"density":{"kind":"trigpoly","a":[1,1.0,0,0,0]},"atoms":[[0,40]]}'
        out = tmp_path / "steps.csv"
        rc = main(["inverse", "--measure", measure, "--T", "pi", "--N", "160",
                   "--out", str(out)])
        assert rc in (0, 3)
        if rc == 3:
            _, rows = read_csv(out)
            assert 0 < len(rows) < 161


class TestDeterminism:
    def test_inverse_byte_identical(self, tmp_path):
        outs = []
        for name in ("a.csv", "b.csv"):
            p = tmp_path / name
            assert main(["inverse", "--measure", SIN_MEASURE, "--T", "pi",
                         "--N", "12", "--out", str(p)]) == 0
            outs.append(p.read_bytes())
        assert outs[0] == outs[1]

    def test_closed_form_byte_identical(self, tmp_path):
        outs = []
        for name in ("a.csv", "b.csv"):
            p = tmp_path / name
            assert main(["closed-form", "pointmass", "--alpha", "1", "--beta", "1",
                         "--grid", "0:5:0.01", "--out", str(p)]) == 0
            outs.append(p.read_bytes())
        assert outs[0] == outs[1]


class TestClosedFormCommand:
    def test_pointmass_values(self, tmp_path):
        out = tmp_path / "cf.csv"
        rc = main(["closed-form", "pointmass", "--alpha", "1", "--beta", "1",
                   "--grid", "0:5:0.5", "--out", str(out)])
        assert rc == 0
        _, rows = read_csv(out)
        for t, h11, g, h22 in rows:
            assert h11 == pytest.approx(1.0 / (1 + t) ** 2, rel=1e-14)
            assert g == 0.0

    def test_homogeneous_domain_error_exit_2(self, tmp_path):
        rc = main(["closed-form", "homogeneous", "--c1", "2", "--c2", "1",
                   "--grid", "0:1:0.5", "--out", str(tmp_path / "x.csv")])
        assert rc == 2

    def test_homogeneous_values(self, tmp_path):
        out = tmp_path / "h.csv"
        rc = main(["closed-form", "homogeneous", "--c1", "2", "--c2", "1",
                   "--grid", "1:3:1", "--out", str(out)])
        assert rc == 0
        _, rows = read_csv(out)
        assert rows[0][2] == pytest.approx(0.0, abs=1e-15)  # g(1) = C at C=0

    def test_atoms_form(self, tmp_path):
        out = tmp_path / "a.csv"
        rc = main(["closed-form", "atoms", "--alpha", "1",
                   "--atoms", "0:0.7", "--grid", "0:2:0.5", "--out", str(out)])
        assert rc == 0
        _, rows = read_csv(out)
        assert rows[0][1] == pytest.approx(1.0, abs=1e-7)

    def test_bessel_power_profile(self, tmp_path):
        out = tmp_path / "b.csv"
        rc = main(["closed-form", "bessel", "--m", "1", "--grid", "0.5:2:0.5",
                   "--out", str(out)])
        assert rc == 0
        _, rows = read_csv(out)
        for t, h11, g, h22 in rows:
            assert h11 == pytest.approx(t)
            assert h22 == pytest.approx(1.0 / t)


class TestValidateCommand:
    def test_sin_routes_agree(self, tmp_path, capsys):
        report = tmp_path / "report.json"
        rc = main(["validate", "--measure", SIN_MEASURE, "--N", "7",
                   "--report", str(report)])
        assert rc == 0
        out = capsys.readouterr().out
        assert "routes agree" in out
        blob = json.loads(report.read_text())
        assert blob["agree"] is True
        assert blob["max_rel_dev"] < 1e-8

    def test_zero_tolerance_forces_disagreement(self, capsys):
        rc = main(["validate", "--measure", SIN_MEASURE, "--N", "7",
                   "--route-tol", "0"])
        assert rc == 3
        assert "DISAGREE" in capsys.readouterr().out


class TestPeriodizeAndDirect:
    def test_periodize_moments(self, tmp_path):
        out = tmp_path / "m.csv"
        rc = main(["periodize", "--measure", SIN_MEASURE, "--T", "pi",
                   "--n-max", "3", "--out", str(out)])
        assert rc == 0
        _, rows = read_csv(out)
        assert rows[0][1:] == pytest.approx([1.0, 0.0])
        assert rows[1][1:] == pytest.approx([0.0, -0.5])

    def test_direct_round_trip(self, tmp_path):
        steps = {"step_length": 0.5,
                 "steps": [{"h11": (n + 1) * (n + 2) / 2, "g": 0.0}
                           for n in range(8)]}
        f = tmp_path / "H.json"
        f.write_text(json.dumps(steps))
        out = tmp_path / "m.csv"
        rc = main(["direct", "--hamiltonian", str(f), "--N", "5",
                   "--out", str(out)])
        assert rc == 0
        _, rows = read_csv(out)
        assert rows[0][1] == pytest.approx(1.0)
        assert rows[1][1] == pytest.approx(-0.5, rel=1e-12)

    def test_direct_nondiagonal_exit_2(self, tmp_path):
        f = tmp_path / "H.json"
        f.write_text(json.dumps(
            {"step_length": 0.5, "steps": [{"h11": 1.0, "g": 0.5}]}
        ))
        assert main(["direct", "--hamiltonian", str(f)]) == 2


class TestDiracApprox:
    def test_exp_pipeline(self, tmp_path):
        out = tmp_path / "steps.csv"
        spec = tmp_path / "moments.csv"
        verb = tmp_path / "v.json"
        rc = main(["dirac-approx", "--h11", "exp:rate=1", "--T", "1", "--N", "10",
                   "--out", str(out), "--spectrum", str(spec),
                   "--verblunsky", str(verb)])
        assert rc == 0
        _, rows = read_csv(out)
        h = [r[2] for r in rows]
        assert h[1] / h[0] == pytest.approx(math.e, rel=1e-12)
        blob = json.loads(verb.read_text())
        want = (1 - math.e) / (1 + math.e)
        assert blob["alpha"][0][0] == pytest.approx(want, rel=1e-12)


class TestSweepCommand:
    def test_pointmass_sweep(self, tmp_path):
        s = math.sqrt(2 * math.pi)
        measure = json.dumps(
            {"atoms": [[0.0, s]], "lebesgue_scale": 1.0 / s}
        )
        out = tmp_path / "sweep.csv"
        j = tmp_path / "sweep.json"
        rc = main(["sweep", "--measure", measure, "--T-list", "pi,2pi,4pi",
                   "--reference", f"pointmass:alpha={1/s},beta={s/math.pi}",
                   "--intervals", "0:0.3,0.7:1.9", "--out", str(out),
                   "--json", str(j)])
        assert rc == 0
        header, rows = read_csv(out)
        assert header == ["T", "interval_a", "interval_b", "int_hT", "int_href",
                          "abs_err"]
        assert len(rows) == 6
        blob = json.loads(j.read_text())
        assert blob["arithmetic_progression"] is False


class TestJobFiles:
    def test_job_equals_flags(self, tmp_path):
        out1 = tmp_path / "flags.csv"
        out2 = tmp_path / "job.csv"
        assert main(["inverse", "--measure", COS_MEASURE, "--T", "pi", "--N", "5",
                     "--out", str(out1)]) == 0
        job = {"command": "inverse",
               "args": {"measure": COS_MEASURE, "T": "pi", "N": 5,
                        "out": str(out2)}}
        f = tmp_path / "job.json"
        f.write_text(json.dumps(job))
        assert main(["--job", str(f)]) == 0
        assert out1.read_bytes() == out2.read_bytes()

    def test_bad_job_file(self, tmp_path):
        f = tmp_path / "job.json"
        f.write_text("{broken")
        assert main(["--job", str(f)]) == 2


class TestSvg:
    def test_steps_with_reference(self, tmp_path):
        H = StepHamiltonian(
            step_length=0.5,
            h11=np.array([1.0, 1 / 3, 2 / 3, 2 / 5]),
            g=np.zeros(4),
        )
        p = tmp_path / "fig.svg"
        doc = render_svg(H, reference=pointmass_hamiltonian(1.0, 1.0), path=str(p))
        root = ET.fromstring(doc)
        assert root.tag.endswith("svg")
        assert p.read_text() == doc
        assert doc.count("<polyline") == 1  # the reference curve
        assert doc.count("<line") >= 4 + 2  # steps plus axes

    def test_steps_only(self):
        H = StepHamiltonian(step_length=0.5, h11=np.ones(3), g=np.zeros(3))
        doc = render_svg(H)
        assert "<polyline" not in doc

    def test_log_scale_for_growing_steps(self, tmp_path):
        n = np.arange(12)
        H = StepHamiltonian(step_length=0.5, h11=(n + 1) * (n + 2) / 2.0,
                            g=np.zeros(12))
        doc = render_svg(H, log_y=True)
        assert "log10 h11" in doc

    def test_cli_svg_artifact(self, tmp_path):
        svg = tmp_path / "fig.svg"
        rc = main(["inverse", "--measure", COS_MEASURE, "--T", "pi", "--N", "8",
                   "--out", str(tmp_path / "s.csv"), "--svg", str(svg),
                   "--reference", "pointmass:alpha=1,beta=0.5"])
        assert rc == 0
        ET.fromstring(svg.read_text())

    def test_empty_rejected(self):
        H = StepHamiltonian(step_length=0.5, h11=np.ones(0), g=np.zeros(0))
        with pytest.raises(ValueError):
            render_svg(H)


class TestConsoleEntryPoint:
    def test_installed_script(self, tmp_path):
        out = tmp_path / "s.csv"
        proc = subprocess.run(
            [sys.executable, "-m", "canonham.cli", "inverse", "--measure",
             COS_MEASURE, "--T", "pi", "--N", "3", "--out", str(out)],
            capture_output=True, text=True,
        )
        assert proc.returncode == 0
        assert out.exists()
