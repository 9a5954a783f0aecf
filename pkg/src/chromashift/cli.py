"""Command-line interface: rotate, simulate, name, analyze, study, serve."""

from __future__ import annotations

import csv
import json
import sys
from pathlib import Path

import click
import numpy as np

from . import analysis, backend, colorspace, cvd, imageio, naming, psychophysics, rotation


def _load_dictionary(ctx) -> naming.ColorDictionary:
    path = ctx.obj.get("dictionary") or naming.default_dictionary_path()
    try:
        return naming.load_dictionary(path)
    except naming.DictionaryError as err:
        raise click.ClickException(f"bad dictionary file: {err}") from err


def _read_image(path: str) -> np.ndarray:
    try:
        return imageio.load_image(path)
    except imageio.ImageFormatError as err:
        raise click.UsageError(str(err))


def _write_image(path: str, pixels: np.ndarray) -> None:
    try:
        imageio.save_image(path, pixels)
    except (OSError, ValueError) as err:
        raise click.ClickException(f"cannot write {path}: {err}") from err


@click.group()
@click.option("--dictionary", type=click.Path(exists=True, dir_okay=False),
              help="Color-name dictionary CSV overriding the embedded one.")
@click.option("--seed", type=int, default=0, show_default=True,
              help="Seed for every randomized subcommand.")
@click.pass_context
def main(ctx, dictionary, seed):
    """Gray-axis color rotation toolkit for color-vision-deficient users."""
    ctx.ensure_object(dict)
    ctx.obj["dictionary"] = dictionary
    ctx.obj["seed"] = seed


@main.command()
@click.argument("input_path", type=click.Path(exists=True, dir_okay=False))
@click.argument("output_path", type=click.Path(dir_okay=False))
@click.option("--theta", type=float, required=True, help="Rotation angle in degrees.")
def rotate(input_path, output_path, theta):
    """Rotate every pixel of an image about the gray axis."""
    pixels = _read_image(input_path)
    _write_image(output_path, rotation.rotate_image(pixels, np.radians(theta)))


@main.command()
@click.argument("input_path", type=click.Path(exists=True, dir_okay=False))
@click.argument("output_path", type=click.Path(dir_okay=False))
@click.option("--cvd", "cvd_name", type=click.Choice([t.value for t in cvd.CvdType]),
              required=True, help="Dichromacy type to simulate.")
def simulate(input_path, output_path, cvd_name):
    """Simulate how a dichromat sees an image."""
    pixels = _read_image(input_path)
    rgb = pixels[:, :, :3]
    out = backend.simulate_pixels(rgb, cvd.CvdType(cvd_name))
    if pixels.shape[2] == 4:
        out = np.dstack([out, pixels[:, :, 3]])
    _write_image(output_path, out)


@main.command()
@click.argument("r", type=click.IntRange(0, 255))
@click.argument("g", type=click.IntRange(0, 255))
@click.argument("b", type=click.IntRange(0, 255))
@click.pass_context
def name(ctx, r, g, b):
    """Print the nearest dictionary name for an 8-bit sRGB color."""
    dictionary = _load_dictionary(ctx)
    result = naming.name_color(colorspace.srgb_decode(np.array([r, g, b])), dictionary)
    click.echo(f"{result.display_name} (delta-E {result.distance:.2f})")


def _parse_srgb(text: str) -> np.ndarray:
    parts = text.split(",")
    if len(parts) != 3:
        raise click.BadParameter("expected R,G,B (e.g. 136,136,136)")
    values = [int(p) for p in parts]
    if any(not 0 <= v <= 255 for v in values):
        raise click.BadParameter("channels must be in 0..255")
    return np.array(values)


@main.group()
def analyze():
    """Discriminability and threshold-ellipse analyses."""


@analyze.command()
@click.option("--base", default="136,136,136", show_default=True,
              help="Base color as sRGB R,G,B.")
@click.option("--cvd", "cvd_name", type=click.Choice([t.value for t in cvd.CvdType]),
              default="protan", show_default=True)
@click.option("--spacing", type=float, default=5.0, show_default=True,
              help="Delta-E spacing between confusion-line samples.")
@click.option("--count", type=int, default=13, show_default=True,
              help="Number of confusion-line samples.")
@click.option("--step", type=float, default=1.0, show_default=True,
              help="Rotation angle grid step in degrees.")
@click.option("--out-csv", type=click.Path(dir_okay=False), default="fig9.csv",
              show_default=True)
@click.option("--out-json", type=click.Path(dir_okay=False), default="fig9.json",
              show_default=True)
def fig9(base, cvd_name, spacing, count, step, out_csv, out_json):
    """Per-pair discriminability curves over a full rotation."""
    base_rgb = colorspace.srgb_decode(_parse_srgb(base))
    try:
        curves = analysis.discriminability_curves(
            base_rgb, cvd.CvdType(cvd_name), spacing, count, step
        )
    except cvd.GamutError as err:
        raise click.ClickException(str(err))
    with open(out_csv, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["pair_index", "theta_deg", "jnd"])
        for curve in curves:
            for theta, jnd in zip(curve.thetas_deg, curve.jnd):
                writer.writerow([curve.pair_index, f"{theta:g}", f"{jnd:.6f}"])
    summary = []
    for curve in curves:
        theta_star, jnd_max = analysis.max_discriminability(curve)
        summary.append({"pair_index": curve.pair_index, "theta_star": theta_star,
                        "jnd_max": round(jnd_max, 6)})
    with open(out_json, "w") as fh:
        json.dump({"base": base, "cvd": cvd_name, "pairs": summary}, fh, indent=2)
    click.echo(f"wrote {out_csv} and {out_json}")


@analyze.command()
@click.option("--points", "points_path", type=click.Path(exists=True, dir_okay=False),
              required=True, help="CSV of threshold points with header x,y.")
@click.option("--out", "out_path", type=click.Path(dir_okay=False), default=None,
              help="Write the JSON here instead of stdout.")
def ellipse(points_path, out_path):
    """Fit a threshold ellipse to xy points."""
    with open(points_path, newline="") as fh:
        reader = csv.DictReader(fh)
        try:
            points = [(float(row["x"]), float(row["y"])) for row in reader]
        except (KeyError, TypeError, ValueError) as err:
            raise click.ClickException(f"bad points file {points_path}: {err}")
    try:
        fit = analysis.fit_ellipse(np.array(points, dtype=np.float64).reshape(-1, 2))
    except analysis.EllipseFitError as err:
        raise click.ClickException(str(err))
    payload = json.dumps(
        {
            "center": {"x": fit.center[0], "y": fit.center[1]},
            "semi_axis_a": fit.a,
            "semi_axis_b": fit.b,
            "orientation_rad": fit.orientation,
            "area": analysis.ellipse_area(fit),
        },
        indent=2,
    )
    if out_path:
        Path(out_path).write_text(payload + "\n")
        click.echo(f"wrote {out_path}")
    else:
        click.echo(payload)


@main.group()
def study():
    """Simulated-observer discrimination studies."""


@study.command()
@click.option("--cvd", "cvd_name", type=click.Choice([t.value for t in cvd.CvdType]),
              required=True, help="Observer dichromacy type.")
@click.option("--tau-jnd", type=float, default=1.0, show_default=True,
              help="Observer threshold in JND.")
@click.option("--lapse", type=float, default=0.0, show_default=True,
              help="Observer lapse rate in [0, 1].")
@click.option("--seed", type=int, default=None, help="Override the global seed.")
@click.option("--out", "out_path", type=click.Path(dir_okay=False), default="study.csv",
              show_default=True, help="Threshold records CSV; ellipse JSON sits next to it.")
@click.pass_context
def run(ctx, cvd_name, tau_jnd, lapse, seed, out_path):
    """Run the full 64-sequence study with a simulated observer."""
    if seed is None:
        seed = ctx.obj["seed"]
    config = psychophysics.make_study_config(seed)
    observer = psychophysics.SimulatedObserver(cvd.CvdType(cvd_name), tau_jnd, lapse)
    records = psychophysics.run_study(observer, config)
    with open(out_path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["base_name", "line", "direction", "phase", "threshold_delta_e"])
        for rec in records:
            writer.writerow(
                [rec.base_name, rec.line, rec.direction, rec.phase,
                 f"{rec.threshold_delta_e:.6f}"]
            )
    ellipses = psychophysics.study_ellipses(records)
    summary = {
        f"{base}/{phase}": {
            "center": list(info["ellipse"].center),
            "semi_axis_a": info["ellipse"].a,
            "semi_axis_b": info["ellipse"].b,
            "orientation_rad": info["ellipse"].orientation,
            "area": info["area"],
        }
        for (base, phase), info in sorted(ellipses.items())
    }
    json_path = Path(out_path).with_suffix(".json")
    json_path.write_text(json.dumps(summary, indent=2) + "\n")
    click.echo(f"wrote {out_path} and {json_path}")


@main.command()
@click.option("--host", default="127.0.0.1", show_default=True)
@click.option("--port", type=int, default=8765, show_default=True)
@click.option("--assets", type=click.Path(file_okay=False), default=None,
              help="Directory of viewer static assets to serve at /.")
@click.pass_context
def serve(ctx, host, port, assets):
    """Run the local HTTP service backing the viewer."""
    import uvicorn

    from .service import ServiceConfig, create_app

    config = ServiceConfig(
        host=host,
        port=port,
        assets_dir=Path(assets) if assets else None,
        dictionary_path=ctx.obj.get("dictionary"),
    )
    uvicorn.run(create_app(config), host=config.host, port=config.port)


if __name__ == "__main__":
    main()
