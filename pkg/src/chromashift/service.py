"""Local HTTP service exposing the toolkit to scripts and the viewer.

All endpoints call the same core functions as the CLI, so the two produce
identical bytes for identical inputs. The service is stateless apart from
the dictionary and config loaded at startup, and binds to loopback by
default; camera frames never reach it (the viewer rotates client-side and
only asks for naming, simulation previews and analyses).
"""

from __future__ import annotations

from dataclasses import dataclass
from pathlib import Path

import numpy as np
from fastapi import FastAPI, Query, Request
from fastapi.responses import JSONResponse, Response
from fastapi.staticfiles import StaticFiles

from . import analysis, backend, colorspace, cvd, imageio, naming, rotation

MAX_DIMENSION = 4096


@dataclass(frozen=True)
class ServiceConfig:
    host: str = "127.0.0.1"
    port: int = 8765
    assets_dir: Path | None = None
    dictionary_path: str | None = None
    max_dimension: int = MAX_DIMENSION

    def __post_init__(self):
        if not 1 <= self.port <= 65535:
            raise ValueError("port out of range")
        if self.max_dimension <= 0:
            raise ValueError("max_dimension must be positive")


class ApiError(Exception):
    """Error reported to clients as JSON with a matching HTTP status."""

    STATUS = {"bad_request": 400, "unsupported_media": 415, "too_large": 413, "internal": 500}

    def __init__(self, code: str, message: str):
        assert code in self.STATUS and message
        self.code = code
        self.message = message
        super().__init__(message)


def _channel(value: int) -> int:
    if not 0 <= value <= 255:
        raise ApiError("bad_request", f"channel {value} outside 0..255")
    return value


def _cvd_type(name: str) -> cvd.CvdType:
    try:
        return cvd.CvdType(name)
    except ValueError:
        raise ApiError("bad_request", f"unknown cvd type '{name}'") from None


async def _image_body(request: Request, max_dim: int) -> np.ndarray:
    if request.headers.get("content-type", "").split(";")[0] != "image/png":
        raise ApiError("unsupported_media", "request body must be image/png")
    data = await request.body()
    try:
        pixels = imageio.decode_bytes(data)
    except imageio.ImageFormatError as err:
        raise ApiError("bad_request", str(err)) from err
    h, w = pixels.shape[:2]
    if h > max_dim or w > max_dim:
        raise ApiError("too_large", f"image {w}x{h} exceeds {max_dim}x{max_dim}")
    return pixels


def create_app(config: ServiceConfig | None = None) -> FastAPI:
    config = config or ServiceConfig()
    dictionary = naming.load_dictionary(
        config.dictionary_path or naming.default_dictionary_path()
    )
    app = FastAPI(title="chromashift service")

    @app.exception_handler(ApiError)
    async def _api_error(_request, exc: ApiError):
        return JSONResponse(
            status_code=ApiError.STATUS[exc.code],
            content={"code": exc.code, "message": exc.message},
        )

    @app.get("/api/name")
    async def name_endpoint(r: int, g: int, b: int, k: int = 1):
        rgb = colorspace.srgb_decode(np.array([_channel(r), _channel(g), _channel(b)]))
        if not 1 <= k <= len(dictionary):
            raise ApiError("bad_request", f"k must be in 1..{len(dictionary)}")
        names = naming.nearest_k(rgb, dictionary, k)
        first = names[0]
        return {
            "name": first.name,
            "variant": first.variant,
            "display_name": first.display_name,
            "distance": first.distance,
            "nearest": [
                {"name": n.name, "variant": n.variant, "display_name": n.display_name,
                 "distance": n.distance}
                for n in names
            ],
        }

    @app.get("/api/dictionary")
    async def dictionary_endpoint():
        return {
            "entries": [
                {"name": e.name, "variant": e.variant, "display_name": e.display_name,
                 "r": e.srgb[0], "g": e.srgb[1], "b": e.srgb[2]}
                for e in dictionary.entries
            ]
        }

    @app.post("/api/rotate")
    async def rotate_endpoint(request: Request, theta_deg: float = Query(...)):
        pixels = await _image_body(request, config.max_dimension)
        out = rotation.rotate_image(pixels, np.radians(theta_deg))
        return Response(content=imageio.encode_png_bytes(out), media_type="image/png")

    @app.post("/api/simulate")
    async def simulate_endpoint(request: Request, cvd_type: str = Query(..., alias="cvd")):
        kind = _cvd_type(cvd_type)
        pixels = await _image_body(request, config.max_dimension)
        out = backend.simulate_pixels(pixels[:, :, :3], kind)
        if pixels.shape[2] == 4:
            out = np.dstack([out, pixels[:, :, 3]])
        return Response(content=imageio.encode_png_bytes(out), media_type="image/png")

    @app.get("/api/trajectory")
    async def trajectory_endpoint(r: int, g: int, b: int, samples: int = 72):
        if samples < 2 or samples > 3600:
            raise ApiError("bad_request", "samples must be in 2..3600")
        rgb = colorspace.srgb_decode(np.array([_channel(r), _channel(g), _channel(b)]))
        if np.all(rgb == 0.0):
            raise ApiError("bad_request", "black has no chromaticity trajectory")
        return rotation.shift_trajectory(rgb, samples)

    @app.get("/api/fig9")
    async def fig9_endpoint(
        r: int = 136, g: int = 136, b: int = 136,
        cvd_type: str = Query("protan", alias="cvd"),
        spacing: float = 5.0, count: int = 13, step: float = 1.0,
    ):
        kind = _cvd_type(cvd_type)
        if not 2 <= count <= 25 or not 0.0 < spacing <= 50.0 or not 0.05 <= step <= 90.0:
            raise ApiError("bad_request", "spacing/count/step outside supported ranges")
        rgb = colorspace.srgb_decode(np.array([_channel(r), _channel(g), _channel(b)]))
        try:
            curves = analysis.discriminability_curves(rgb, kind, spacing, count, step)
        except cvd.GamutError as err:
            raise ApiError("bad_request", str(err)) from err
        return {
            "curves": [
                {
                    "pair_index": c.pair_index,
                    "theta_deg": c.thetas_deg.tolist(),
                    "jnd": c.jnd.tolist(),
                    "theta_star": analysis.max_discriminability(c)[0],
                    "jnd_max": analysis.max_discriminability(c)[1],
                }
                for c in curves
            ]
        }

    if config.assets_dir is not None and Path(config.assets_dir).is_dir():
        app.mount("/", StaticFiles(directory=config.assets_dir, html=True), name="viewer")

    return app
