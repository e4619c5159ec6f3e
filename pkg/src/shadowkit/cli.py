"""Command-line front door for every pipeline stage.

Exit codes: 0 success, 2 validation error (bad flags or parameter
values), 1 runtime error (unreadable files, render failures). All
randomness flows through --seed, so outputs are reproducible.
"""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

import numpy as np

from . import formats, pipeline
from .composite import CompositeParams, metric_abs, metric_zncc
from .geometry import DegenerateLight
from .heightmap import NegativeHeightResult, offset_height, interpolate_sparse
from .mesh import Camera, height_from_mesh
from .render import DimensionMismatch, ReceiverMap
from .soft import InvalidSamplingConfig, InvalidSoftness


class ValidationError(ValueError):
    """Maps to exit code 2."""


def _light_args(p: argparse.ArgumentParser) -> None:
    p.add_argument("--light-x", type=float, required=True)
    p.add_argument("--light-y", type=float, required=True)
    g = p.add_mutually_exclusive_group(required=True)
    g.add_argument("--light-H", type=float, dest="light_H",
                   help="signed light height in pixels (negative: behind camera)")
    g.add_argument("--horizon", type=float,
                   help="horizon row; models a light at infinity")


def _scene_args(p: argparse.ArgumentParser, receiver: bool = True) -> None:
    p.add_argument("--object", required=True, help="RGBA cutout PNG")
    p.add_argument("--height", required=True, help="object height map (PHM)")
    if receiver:
        p.add_argument("--receiver", help="receiver height map (PHM); default ground")
    p.add_argument("--out", required=True)


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="shadowkit",
                                 description="2.5D shadow synthesis for image cutouts")
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("render-hard", help="binary shadow from a point light")
    _scene_args(p)
    _light_args(p)
    p.set_defaults(func=cmd_render_hard)

    p = sub.add_parser("render-soft", help="area-light shadow by sampling")
    _scene_args(p)
    _light_args(p)
    p.add_argument("--softness", type=float, required=True)
    p.add_argument("--samples", type=int, default=64)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--iid", action="store_true",
                   help="plain i.i.d. sampling instead of stratified")
    p.set_defaults(func=cmd_render_soft)

    p = sub.add_parser("render-reflection", help="ground-mirror reflection RGBA")
    _scene_args(p, receiver=False)
    p.set_defaults(func=cmd_render_reflection)

    p = sub.add_parser("height-from-mesh", help="height map from a mesh + camera")
    p.add_argument("--mesh", required=True, help="triangle-list text file")
    p.add_argument("--out", required=True, help="output PHM path")
    p.add_argument("--focal", type=float, required=True, help="focal length in pixels")
    p.add_argument("--camera", required=True, help="world position as X,Y,Z")
    p.add_argument("--forward", default="0,0,1", help="view direction as X,Y,Z")
    p.add_argument("--image-width", type=int, required=True)
    p.add_argument("--image-height", type=int, required=True)
    p.add_argument("--pp-x", type=float, help="principal point x; default center")
    p.add_argument("--pp-y", type=float, help="principal point y; default center")
    p.set_defaults(func=cmd_height_from_mesh)

    p = sub.add_parser("height-from-annotations",
                       help="height map from sparse point/footpoint labels")
    p.add_argument("--annotations", required=True, help="annotation JSON")
    p.add_argument("--out", required=True, help="output PHM path")
    p.set_defaults(func=cmd_height_from_annotations)

    p = sub.add_parser("offset-height", help="lift or lower all heights")
    p.add_argument("--height", required=True, help="input PHM")
    p.add_argument("--delta", type=float, required=True)
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_offset_height)

    p = sub.add_parser("composite", help="composite a shadow (and optional "
                                         "reflection) under a cutout")
    p.add_argument("--background", required=True, help="RGB background PNG")
    p.add_argument("--shadow", required=True, help="shadow map PNG")
    p.add_argument("--cutout", required=True, help="RGBA cutout PNG")
    p.add_argument("--reflection", help="reflection RGBA PNG")
    p.add_argument("--shadow-opacity", type=float, default=0.6)
    p.add_argument("--reflection-opacity", type=float, default=0.3)
    p.add_argument("--shadow-color", default="0,0,0", help="RGB in [0,1] as R,G,B")
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_composite)

    p = sub.add_parser("metrics", help="compare two shadow maps")
    p.add_argument("--a", required=True)
    p.add_argument("--b", required=True)
    p.set_defaults(func=cmd_metrics)

    p = sub.add_parser("serve", help="run the interactive render service")
    p.add_argument("--host", default="127.0.0.1")
    p.add_argument("--port", type=int, default=8000)
    p.add_argument("--ttl-seconds", type=float, default=1800.0)
    p.add_argument("--studio", help="also serve the studio frontend from this directory")
    p.set_defaults(func=cmd_serve)

    p = sub.add_parser("benchmark", help="time the renderers on a synthetic scene")
    p.add_argument("--size", type=int, default=512)
    p.add_argument("--runs", type=int, default=3)
    p.add_argument("--samples", type=int, default=64)
    p.set_defaults(func=cmd_benchmark)

    return ap


def _parse_triple(text: str, flag: str):
    parts = text.split(",")
    if len(parts) != 3:
        raise ValidationError(f"{flag} must be three comma-separated numbers")
    try:
        return tuple(float(p) for p in parts)
    except ValueError as e:
        raise ValidationError(f"{flag}: {e}") from e


def _load_scene(args, with_receiver: bool = True):
    cutout = formats.load_rgba(args.object)
    height = formats.read_phm(args.height)
    if height.shape != cutout.shape[:2]:
        raise ValidationError(
            f"height {height.shape} does not match object {cutout.shape[:2]}"
        )
    receiver = None
    if with_receiver and getattr(args, "receiver", None):
        rec = formats.read_phm(args.receiver)
        if rec.shape != height.shape:
            raise ValidationError(
                f"receiver {rec.shape} does not match object {height.shape}"
            )
        receiver = ReceiverMap(rec.h)  # heights are zeroed outside the mask
    return cutout, height, receiver


def _build_light(args):
    try:
        return pipeline.build_light(args.light_x, args.light_y,
                                    H=args.light_H, horizon=args.horizon)
    except (DegenerateLight, ValueError) as e:
        raise ValidationError(str(e)) from e


def cmd_render_hard(args) -> int:
    cutout, height, receiver = _load_scene(args)
    png = pipeline.run_render(cutout, height, _build_light(args),
                              mode="hard", receiver=receiver)
    Path(args.out).write_bytes(png)
    return 0


def cmd_render_soft(args) -> int:
    if not 0.0 <= args.softness <= 1.0:
        raise ValidationError(f"--softness must be in [0, 1], got {args.softness}")
    if args.samples < 1:
        raise ValidationError(f"--samples must be >= 1, got {args.samples}")
    cutout, height, receiver = _load_scene(args)
    png = pipeline.run_render(cutout, height, _build_light(args), mode="soft",
                              receiver=receiver, softness=args.softness,
                              samples=args.samples, seed=args.seed,
                              stratified=not args.iid)
    Path(args.out).write_bytes(png)
    return 0


def cmd_render_reflection(args) -> int:
    cutout, height, _ = _load_scene(args, with_receiver=False)
    png = pipeline.run_render(cutout, height, light=None, mode="reflection")
    Path(args.out).write_bytes(png)
    return 0


def cmd_height_from_mesh(args) -> int:
    mesh = formats.read_mesh(args.mesh)
    pos = _parse_triple(args.camera, "--camera")
    fwd = _parse_triple(args.forward, "--forward")
    pp = (args.pp_x if args.pp_x is not None else args.image_width / 2.0,
          args.pp_y if args.pp_y is not None else args.image_height / 2.0)
    cam = Camera(position=pos, forward=fwd, focal=args.focal,
                 principal_point=pp,
                 image_size=(args.image_width, args.image_height))
    formats.write_phm(height_from_mesh(mesh, cam), args.out)
    return 0


def cmd_height_from_annotations(args) -> int:
    ann = formats.parse_annotation_file(args.annotations)
    formats.write_phm(interpolate_sparse(ann), args.out)
    return 0


def cmd_offset_height(args) -> int:
    hm = formats.read_phm(args.height)
    try:
        formats.write_phm(offset_height(hm, args.delta), args.out)
    except NegativeHeightResult as e:
        raise ValidationError(str(e)) from e
    return 0


def cmd_composite(args) -> int:
    try:
        params = CompositeParams(
            shadow_opacity=args.shadow_opacity,
            reflection_opacity=args.reflection_opacity,
            shadow_color=_parse_triple(args.shadow_color, "--shadow-color"),
        )
    except ValueError as e:
        raise ValidationError(str(e)) from e
    bg = formats.load_rgb(args.background)
    shadow = formats.load_shadow_png(args.shadow)
    cutout = formats.load_rgba(args.cutout)
    from .composite import composite_reflection, composite_shadow

    out = bg
    if args.reflection:
        # transparent cutout layer: the object is pasted once, after the shadow
        out = composite_reflection(out, formats.load_rgba(args.reflection),
                                   np.zeros_like(cutout), params)
    out = composite_shadow(out, shadow, cutout, params)
    formats.save_rgb_png(out, args.out)
    return 0


def cmd_metrics(args) -> int:
    a = formats.load_shadow_png(args.a)
    b = formats.load_shadow_png(args.b)
    print(f"abs={metric_abs(a, b):g} zncc={metric_zncc(a, b):g}")
    return 0


def cmd_serve(args) -> int:
    import uvicorn

    from .service import create_app

    uvicorn.run(create_app(ttl_seconds=args.ttl_seconds, studio_dir=args.studio),
                host=args.host, port=args.port, log_level="warning")
    return 0


def cmd_benchmark(args) -> int:
    from .benchmark import run_benchmark

    results = run_benchmark(size=args.size, runs=args.runs, samples=args.samples)
    for name, seconds in results.items():
        print(f"{name}_ms={seconds * 1000.0:.1f}")
    return 0


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except (ValidationError, InvalidSoftness, InvalidSamplingConfig,
            DimensionMismatch) as e:
        print(f"error: {e}", file=sys.stderr)
        return 2
    except Exception as e:  # unreadable files, malformed payloads, render errors
        print(f"error: {e}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
