"""Command-line surface: every subcommand end to end through main(),
exit codes, provenance headers, and the file formats."""

import json
import math

import numpy as np
import pytest

from tomokit.cli import main

INV_SQRT_PI = 0.56418958354775628


def _rows(path, skip_header=True):
    lines = [
        ln
        for ln in path.read_text().splitlines()
        if ln and not ln.startswith("#")
    ]
    return lines[1:] if skip_header else lines


class TestTomogram:
    def test_csv_output(self, tmp_path):
        out = tmp_path / "w.csv"
        rc = main(["tomogram", "ho:n=0", "--x", "-4:4:81", "--out", str(out)])
        assert rc == 0
        rows = _rows(out)
        assert len(rows) == 81
        mid = rows[40].split(",")
        assert float(mid[0]) == 0.0
        assert float(mid[3]) == pytest.approx(INV_SQRT_PI, rel=1e-9)

    def test_provenance_header(self, tmp_path):
        out = tmp_path / "w.csv"
        main(["tomogram", "ho:n=0", "--x", "0:1:2", "--out", str(out)])
        header = out.read_text().splitlines()[:3]
        assert header[0].startswith("# tomokit ")
        assert header[1].startswith("# command: tomokit tomogram")
        assert header[2].startswith("# config: ")
        assert len(header[2].split()[-1]) == 12

    def test_negative_range_value(self, tmp_path, capsys):
        # "-4:4:11" starts with a dash; the argv preprocessing must keep
        # argparse from eating it as an option name
        rc = main(["tomogram", "ho:n=1", "--x", "-4:4:11"])
        assert rc == 0
        assert len(capsys.readouterr().out.splitlines()) >= 12

    def test_squeeze_frame_flags(self, tmp_path):
        out = tmp_path / "w.csv"
        rc = main(
            [
                "tomogram",
                "ho:n=0",
                "--phi",
                "1.5707963267948966",
                "--squeeze",
                "2.0",
                "--x",
                "0:1:3",
                "--out",
                str(out),
            ]
        )
        assert rc == 0
        row = _rows(out)[0].split(",")
        assert float(row[1]) == pytest.approx(0.0, abs=1e-12)
        assert float(row[2]) == pytest.approx(0.5)

    def test_conflicting_frame_flags(self):
        rc = main(["tomogram", "ho:n=0", "--mu", "1", "--phi", "0.3"])
        assert rc == 2

    def test_bad_descriptor(self):
        assert main(["tomogram", "ho:n=-1"]) == 2
        assert main(["tomogram", "nosuch:n=1"]) == 2

    def test_bad_range(self):
        assert main(["tomogram", "ho:n=0", "--x", "1:0:5"]) == 2
        assert main(["tomogram", "ho:n=0", "--x", "0:1"]) == 2

    def test_numeric_error_exit_code(self, capsys):
        # the half-line state has no closed form on the nu = 0 frame
        rc = main(
            ["tomogram", "pho:a=1,n=0", "--method", "analytic", "--mu", "1", "--nu", "0"]
        )
        assert rc == 3
        err = json.loads(capsys.readouterr().err)
        assert err["error"] == "UnsupportedFrameError"
        assert "message" in err


class TestCharfun:
    def test_point_value_json(self, capsys):
        rc = main(["charfun", "ho:n=0", "--mu", "1", "--nu", "0"])
        assert rc == 0
        doc = json.loads(capsys.readouterr().out)
        assert doc["re"] == pytest.approx(math.exp(-0.25), rel=1e-12)
        assert doc["im"] == pytest.approx(0.0, abs=1e-15)

    def test_grid_csv(self, tmp_path):
        out = tmp_path / "phi.csv"
        rc = main(["charfun", "ho:n=1", "--grid", "-2:2:5", "--out", str(out)])
        assert rc == 0
        rows = _rows(out)
        assert len(rows) == 25
        assert _rows(out, skip_header=False)[0] == "mu,nu,re,im"

    def test_family_provider(self, capsys):
        rc = main(["charfun", "exponential:lambda=1"])
        assert rc == 0
        doc = json.loads(capsys.readouterr().out)
        assert doc["re"] == pytest.approx(0.5, abs=1e-9)
        assert doc["im"] == pytest.approx(0.5, abs=1e-9)


class TestValidate:
    def test_pass_exit_zero(self, tmp_path):
        out = tmp_path / "report.json"
        rc = main(["validate", "ho:n=0", "--out", str(out)])
        assert rc == 0
        report = json.loads(out.read_text())
        assert report["overall"] is True
        assert report["provider"] == "ho:n=0"

    def test_fail_exit_one(self, capsys):
        rc = main(["validate", "exponential:lambda=1"])
        assert rc == 1
        report = json.loads(capsys.readouterr().out)
        assert report["overall"] is False
        assert report["trace_check"]["pass"] is False

    def test_pdf_file_input(self, tmp_path):
        # a centered Gaussian with variance 1 is NOT a vacuum tomogram
        # family when reused at every frame: purity integrates to the
        # wrong constant, so the run must exit 1
        x = np.linspace(-8.0, 8.0, 801)
        pdf = tmp_path / "pdf.csv"
        pdf.write_text(
            "X,W\n"
            + "\n".join(
                f"{xi},{math.exp(-0.5 * xi * xi) / math.sqrt(2 * math.pi)}"
                for xi in x
            )
            + "\n"
        )
        rc = main(["validate", "--pdf-file", str(pdf)])
        assert rc == 1

    def test_needs_some_input(self):
        assert main(["validate"]) == 2

    def test_empirical_tolerances_flag(self, tmp_path):
        out = tmp_path / "report.json"
        rc = main(
            [
                "validate",
                "ho:n=0",
                "--empirical",
                "--halfwidth",
                "6",
                "--step",
                "0.75",
                "--out",
                str(out),
            ]
        )
        assert rc == 0
        report = json.loads(out.read_text())
        assert report["tolerances"]["trace"] == 1e-3
        assert report["lattice"]["nodes_per_axis"] == 17


class TestOverlapAndPurity:
    def test_purity_of_mixture(self, capsys):
        rc = main(["purity", "mix:0.5*ho:n=0+0.5*ho:n=1"])
        assert rc == 0
        doc = json.loads(capsys.readouterr().out)
        assert doc["purity"] == pytest.approx(0.5, abs=1e-3)

    def test_overlap_orthogonal(self, capsys):
        rc = main(["overlap", "ho:n=0", "ho:n=1"])
        assert rc == 0
        doc = json.loads(capsys.readouterr().out)
        assert doc["overlap"] == pytest.approx(0.0, abs=1e-3)

    def test_fidelity_flag(self, capsys):
        rc = main(["overlap", "ho:n=0", "coh:re=1", "--fidelity"])
        assert rc == 0
        doc = json.loads(capsys.readouterr().out)
        assert doc["fidelity"] == pytest.approx(math.exp(-1.0), abs=1e-3)


class TestReconstruct:
    def test_json_grid(self, tmp_path, capsys):
        out = tmp_path / "rho.json"
        rc = main(["reconstruct", "ho:n=0", "--grid", "-4:4:33", "--out", str(out)])
        assert rc == 0
        doc = json.loads(out.read_text())
        assert doc["shape"] == [33, 33]
        summary = json.loads(capsys.readouterr().out)
        assert summary["trace"] == pytest.approx(1.0, abs=1e-4)
        assert summary["top_eigenvalues"][0] == pytest.approx(1.0, abs=1e-3)

    def test_csv_magnitudes(self, tmp_path):
        out = tmp_path / "rho.csv"
        rc = main(
            [
                "reconstruct",
                "ho:n=0",
                "--grid",
                "-2:2:9",
                "--format",
                "csv",
                "--out",
                str(out),
            ]
        )
        assert rc == 0
        rows = _rows(out, skip_header=False)
        assert len(rows) == 9
        center = float(rows[4].split(",")[4])
        assert center == pytest.approx(INV_SQRT_PI, rel=1e-6)


class TestSampleEstimate:
    def test_round_trip(self, tmp_path, capsys):
        csv = tmp_path / "draws.csv"
        rc = main(
            [
                "sample",
                "ho:n=0",
                "--mu",
                "1",
                "--nu",
                "0",
                "--n-samples",
                "20000",
                "--seed",
                "42",
                "--out",
                str(csv),
            ]
        )
        assert rc == 0
        assert json.loads(capsys.readouterr().out)["n"] == 20000
        meta = json.loads((tmp_path / "draws.csv.meta.json").read_text())
        assert meta["state"] == "ho:n=0"
        assert meta["mu"] == 1.0

        est = tmp_path / "hist.csv"
        rc = main(["estimate", str(csv), "--method", "hist", "--out", str(est)])
        assert rc == 0
        summary = json.loads(capsys.readouterr().out)
        assert summary["mass"] == pytest.approx(1.0, abs=1e-9)
        # the sidecar carries state + frame, so the distances are computed
        assert summary["l1"] <= 0.08
        assert summary["ks"] <= 0.02
        assert len(_rows(est)) == 64

    def test_kde_method(self, tmp_path, capsys):
        csv = tmp_path / "draws.csv"
        main(
            [
                "sample",
                "ho:n=0",
                "--n-samples",
                "20000",
                "--seed",
                "7",
                "--out",
                str(csv),
            ]
        )
        capsys.readouterr()
        rc = main(["estimate", str(csv), "--method", "kde", "--out", str(tmp_path / "kde.csv")])
        assert rc == 0
        summary = json.loads(capsys.readouterr().out)
        assert summary["method"] == "kde"
        assert summary["l1"] <= 0.05

    def test_sample_requires_out(self):
        assert main(["sample", "ho:n=0"]) == 2

    def test_estimate_missing_file(self, tmp_path, capsys):
        rc = main(["estimate", str(tmp_path / "nope.csv")])
        assert rc == 2
        assert "error:" in capsys.readouterr().err


class TestFigures:
    def test_fig1_levels(self, tmp_path):
        out = tmp_path / "fig1.csv"
        rc = main(["figures", "--fig", "1", "--n", "0,1", "--points", "401", "--out", str(out)])
        assert rc == 0
        rows = _rows(out)
        assert len(rows) == 2 * 401
        levels = {r.split(",")[0] for r in rows}
        assert levels == {"0", "1"}

    def test_fig2_couplings(self, tmp_path):
        out = tmp_path / "fig2.csv"
        rc = main(
            [
                "figures",
                "--fig",
                "2",
                "--n",
                "0",
                "--a",
                "0,10",
                "--points",
                "201",
                "--out",
                str(out),
            ]
        )
        assert rc == 0
        rows = _rows(out)
        assert len(rows) == 2 * 201
        assert _rows(out, skip_header=False)[0] == "a,n,X,W"

    def test_bad_level_list(self):
        assert main(["figures", "--fig", "1", "--n", "0,x"]) == 2


class TestTopLevel:
    def test_version_flag(self, capsys):
        with pytest.raises(SystemExit) as exc:
            main(["--version"])
        assert exc.value.code == 0
        assert capsys.readouterr().out.startswith("tomokit ")

    def test_unknown_subcommand(self, capsys):
        with pytest.raises(SystemExit) as exc:
            main(["frobnicate"])
        assert exc.value.code == 2
