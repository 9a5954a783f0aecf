"""End-to-end CLI behavior through click's test runner."""

from __future__ import annotations

import csv
import json

import numpy as np
import pytest
from click.testing import CliRunner

from chromashift import colorspace as cs, cvd, imageio
from chromashift.cli import main

runner = CliRunner()


@pytest.fixture
def workdir(tmp_path, monkeypatch):
    monkeypatch.chdir(tmp_path)
    return tmp_path


def _write_png(path, pixels):
    imageio.save_image(path, pixels)
    return str(path)


def test_rotate_zero_is_identity(workdir):
    rng = np.random.default_rng(70)
    img = rng.integers(0, 256, size=(12, 17, 3), dtype=np.uint8)
    src = _write_png(workdir / "in.png", img)
    result = runner.invoke(main, ["rotate", src, "out.png", "--theta", "0"])
    assert result.exit_code == 0, result.output
    assert np.array_equal(imageio.load_image(workdir / "out.png"), img)


def test_rotate_120_turns_red_green(workdir):
    img = np.zeros((8, 8, 3), dtype=np.uint8)
    img[:, :, 0] = 255
    src = _write_png(workdir / "red.png", img)
    result = runner.invoke(main, ["rotate", src, "green.png", "--theta", "120"])
    assert result.exit_code == 0, result.output
    out = imageio.load_image(workdir / "green.png")
    assert np.all(out[:, :, 1] == 255)
    assert np.all(out[:, :, 0] == 0) and np.all(out[:, :, 2] == 0)


def test_rotate_malformed_png_exits_2(workdir):
    bad = workdir / "broken.png"
    bad.write_bytes(b"\x89PNG\r\n\x1a\nnot really a png")
    result = runner.invoke(main, ["rotate", str(bad), "out.png", "--theta", "10"])
    assert result.exit_code == 2
    assert "broken.png" in result.output


def test_rotate_supports_ppm(workdir):
    rng = np.random.default_rng(71)
    img = rng.integers(0, 256, size=(6, 9, 3), dtype=np.uint8)
    src = workdir / "in.ppm"
    imageio.save_image(src, img)
    result = runner.invoke(main, ["rotate", str(src), "out.ppm", "--theta", "0"])
    assert result.exit_code == 0, result.output
    assert np.array_equal(imageio.load_image(workdir / "out.ppm"), img)


def test_simulate_gray_image_unchanged(workdir):
    img = np.full((10, 10, 3), 136, dtype=np.uint8)
    src = _write_png(workdir / "gray.png", img)
    result = runner.invoke(main, ["simulate", src, "sim.png", "--cvd", "deutan"])
    assert result.exit_code == 0, result.output
    out = imageio.load_image(workdir / "sim.png")
    assert np.max(np.abs(out.astype(int) - 136)) <= 1


def test_simulate_idempotent_on_images(workdir):
    rng = np.random.default_rng(72)
    img = rng.integers(0, 256, size=(24, 24, 3), dtype=np.uint8)
    src = _write_png(workdir / "in.png", img)
    assert runner.invoke(main, ["simulate", src, "once.png", "--cvd", "protan"]).exit_code == 0
    assert runner.invoke(
        main, ["simulate", str(workdir / "once.png"), "twice.png", "--cvd", "protan"]
    ).exit_code == 0
    once = imageio.load_image(workdir / "once.png").astype(int)
    twice = imageio.load_image(workdir / "twice.png").astype(int)
    assert np.max(np.abs(twice - once)) <= 1


def test_simulate_collapses_confusable_card(workdir):
    # Two fields drawn from one deutan confusion line look alike simulated.
    base = cs.srgb_decode([184, 74, 74])
    pair = cvd.sample_confusion_line(base, cvd.CvdType.DEUTAN, 20.0, 2)
    codes = cs.srgb_encode(np.clip(pair, 0, 1))
    card = np.zeros((16, 32, 3), dtype=np.uint8)
    card[:, :16] = codes[0]
    card[:, 16:] = codes[1]
    src = _write_png(workdir / "card.png", card)
    assert runner.invoke(main, ["simulate", src, "sim.png", "--cvd", "deutan"]).exit_code == 0
    out = imageio.load_image(workdir / "sim.png")
    left = cs.lab_from_linear(cs.srgb_decode(out[:, :16].reshape(-1, 3).mean(axis=0)))
    right = cs.lab_from_linear(cs.srgb_decode(out[:, 16:].reshape(-1, 3).mean(axis=0)))
    assert cs.delta_e76(left, right) <= 2.0


def test_name_commands():
    gray = runner.invoke(main, ["name", "136", "136", "136"])
    assert gray.exit_code == 0
    assert "gray" in gray.output or "silver" in gray.output
    black = runner.invoke(main, ["name", "0", "0", "0"])
    assert black.exit_code == 0
    assert black.output.startswith("black")
    bad = runner.invoke(main, ["name", "300", "0", "0"])
    assert bad.exit_code == 2


def test_dictionary_override(workdir, tmp_path):
    result = runner.invoke(
        main, ["--dictionary", str(naming_default()), "name", "0", "0", "0"]
    )
    assert result.exit_code == 0 and result.output.startswith("black")


def naming_default():
    from chromashift import naming

    return naming.default_dictionary_path()


def test_analyze_fig9_outputs(workdir):
    result = runner.invoke(
        main,
        ["analyze", "fig9", "--base", "136,136,136", "--cvd", "protan", "--step", "1"],
    )
    assert result.exit_code == 0, result.output
    with open(workdir / "fig9.csv", newline="") as fh:
        rows = list(csv.DictReader(fh))
    assert len(rows) == 12 * 360
    summary = json.loads((workdir / "fig9.json").read_text())
    assert len(summary["pairs"]) == 12
    assert all(p["jnd_max"] >= 3.0 for p in summary["pairs"])


def test_analyze_fig9_rejects_bad_base(workdir):
    result = runner.invoke(main, ["analyze", "fig9", "--base", "12,13"])
    assert result.exit_code != 0


def test_analyze_ellipse(workdir):
    pts = workdir / "points.csv"
    with open(pts, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["x", "y"])
        t = np.linspace(0, 2 * np.pi, 8, endpoint=False)
        for x, y in zip(0.31 + 0.02 * np.cos(t), 0.33 + 0.01 * np.sin(t)):
            writer.writerow([f"{x:.10f}", f"{y:.10f}"])
    result = runner.invoke(main, ["analyze", "ellipse", "--points", str(pts)])
    assert result.exit_code == 0, result.output
    payload = json.loads(result.output)
    assert payload["semi_axis_a"] == pytest.approx(0.02, abs=1e-6)
    assert payload["semi_axis_b"] == pytest.approx(0.01, abs=1e-6)
    assert payload["area"] == pytest.approx(np.pi * 0.02 * 0.01, rel=1e-6)


def test_analyze_ellipse_rejects_degenerate(workdir):
    pts = workdir / "line.csv"
    with open(pts, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["x", "y"])
        for v in np.linspace(0, 1, 8):
            writer.writerow([v, 2 * v])
    result = runner.invoke(main, ["analyze", "ellipse", "--points", str(pts)])
    assert result.exit_code == 1
    assert "Error" in result.output


def test_unknown_subcommand_exits_2():
    result = runner.invoke(main, ["frobnicate"])
    assert result.exit_code == 2
    assert "Usage" in result.output
