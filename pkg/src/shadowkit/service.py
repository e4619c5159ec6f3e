"""Session-scoped HTTP API for interactive shadow previews.

Scenes are uploaded once (cutout + height map, optional receiver and
background) and held in memory with an idle TTL; each render request
then re-renders from the stored scene. Renders on the same scene
serialize; different scenes render concurrently.
"""

from __future__ import annotations

import io
import threading
import time
import uuid
from contextlib import asynccontextmanager
from dataclasses import dataclass, field
from typing import Literal, Optional

import numpy as np
from fastapi import FastAPI, File, UploadFile
from fastapi.exceptions import HTTPException
from fastapi.middleware.cors import CORSMiddleware
from fastapi.responses import PlainTextResponse, Response
from PIL import Image
from pydantic import BaseModel, Field, model_validator

from . import pipeline
from .formats import read_phm_bytes
from .geometry import DegenerateLight
from .heightmap import HeightMap
from .render import ReceiverMap

PREVIEW_SAMPLE_CAP = 32


class LightSpec(BaseModel):
    x: float
    y: float
    H: Optional[float] = None
    horizon: Optional[float] = None

    @model_validator(mode="after")
    def _exactly_one_mode(self):
        if (self.H is None) == (self.horizon is None):
            raise ValueError("exactly one of H and horizon must be given")
        return self


class RenderParams(BaseModel):
    light: LightSpec
    softness: float = Field(default=0.0, ge=0.0, le=1.0)
    samples: int = Field(default=64, ge=1)
    seed: int = 0
    stratified: bool = True
    mode: Literal["hard", "soft", "reflection"] = "hard"
    composite: bool = False
    preview: bool = False


@dataclass
class SceneState:
    cutout: np.ndarray
    height: HeightMap
    receiver: Optional[ReceiverMap]
    background: Optional[np.ndarray]
    lock: threading.Lock = field(default_factory=threading.Lock)
    last_used: float = field(default_factory=time.monotonic)
    last_params: Optional[dict] = None


def _decode_rgba(data: bytes) -> np.ndarray:
    return np.array(Image.open(io.BytesIO(data)).convert("RGBA"))


def _decode_rgb(data: bytes) -> np.ndarray:
    return np.array(Image.open(io.BytesIO(data)).convert("RGB"))


def _warm_kernels() -> None:
    """Compile the render kernels up front so the first interactive
    request gets steady-state latency."""
    from .geometry import PixelCoord, PointLight
    from .render import render_hard_generic, render_hard_planar

    h = np.zeros((8, 8), np.float32)
    m = np.zeros((8, 8), bool)
    m[2:5, 2:5] = True
    h[m] = 2.0
    obj = HeightMap(h, m)
    light = PointLight(PixelCoord(0.0, -3.0), 20.0)
    render_hard_planar(obj, light)
    render_hard_generic(obj, ReceiverMap.ground(obj.shape), light)


def create_app(ttl_seconds: float = 1800.0, studio_dir: Optional[str] = None) -> FastAPI:
    @asynccontextmanager
    async def lifespan(_app: FastAPI):
        _warm_kernels()
        yield

    app = FastAPI(title="shadowkit render service", lifespan=lifespan)
    app.add_middleware(
        CORSMiddleware,
        allow_origins=["*"],
        allow_methods=["*"],
        allow_headers=["*"],
    )
    scenes: dict[str, SceneState] = {}
    table_lock = threading.Lock()

    def _evict_stale() -> None:
        cutoff = time.monotonic() - ttl_seconds
        with table_lock:
            for sid in [s for s, sc in scenes.items() if sc.last_used < cutoff]:
                del scenes[sid]

    @app.get("/health")
    def health() -> PlainTextResponse:
        return PlainTextResponse("ok")

    @app.post("/scenes", status_code=201)
    async def create_scene(
        cutout: Optional[UploadFile] = File(None),
        height: Optional[UploadFile] = File(None),
        receiver: Optional[UploadFile] = File(None),
        background: Optional[UploadFile] = File(None),
    ):
        _evict_stale()
        if cutout is None or height is None:
            raise HTTPException(400, "cutout and height parts are required")
        try:
            cut = _decode_rgba(await cutout.read())
            hm = read_phm_bytes(await height.read())
            rec = None
            if receiver is not None:
                rec_map = read_phm_bytes(await receiver.read())
                rec = ReceiverMap(rec_map.h)  # zero outside its mask
            bg = _decode_rgb(await background.read()) if background is not None else None
        except Exception as e:
            raise HTTPException(400, f"undecodable upload: {e}") from e
        if hm.shape != cut.shape[:2]:
            raise HTTPException(
                400, f"height {hm.shape} does not match cutout {cut.shape[:2]}"
            )
        if rec is not None and rec.shape != hm.shape:
            raise HTTPException(400, "receiver dimensions do not match the scene")
        if bg is not None and bg.shape[:2] != hm.shape:
            raise HTTPException(400, "background dimensions do not match the scene")
        sid = uuid.uuid4().hex
        with table_lock:
            scenes[sid] = SceneState(cutout=cut, height=hm, receiver=rec, background=bg)
        return {"scene_id": sid}

    @app.post("/scenes/{scene_id}/render")
    def render_scene(scene_id: str, params: RenderParams) -> Response:
        _evict_stale()
        with table_lock:
            scene = scenes.get(scene_id)
        if scene is None:
            raise HTTPException(404, f"unknown scene {scene_id!r}")
        try:
            light = pipeline.build_light(
                params.light.x, params.light.y,
                H=params.light.H, horizon=params.light.horizon,
            )
        except (DegenerateLight, ValueError) as e:
            raise HTTPException(422, str(e)) from e
        samples = params.samples
        if params.preview:
            samples = min(samples, PREVIEW_SAMPLE_CAP)
        with scene.lock:
            scene.last_used = time.monotonic()
            try:
                png = pipeline.run_render(
                    scene.cutout,
                    scene.height,
                    light,
                    mode=params.mode,
                    receiver=scene.receiver,
                    background=scene.background,
                    softness=params.softness,
                    samples=samples,
                    seed=params.seed,
                    stratified=params.stratified,
                    composite=params.composite,
                )
            except pipeline.MissingBackground as e:
                raise HTTPException(422, str(e)) from e
            scene.last_params = params.model_dump()
        return Response(content=png, media_type="image/png")

    if studio_dir is not None:
        from fastapi.staticfiles import StaticFiles

        app.mount("/", StaticFiles(directory=studio_dir, html=True), name="studio")

    return app
