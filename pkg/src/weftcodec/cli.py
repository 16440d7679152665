"""Command-line front end: render, decode, eval, dataset, serve.

Exit codes: 0 success, 2 input/validation problem, 3 I/O failure,
4 decode-stage failure.
"""

from __future__ import annotations

import argparse
import csv
import math
import os
import sys
from dataclasses import fields, replace

from .errors import (
    ContractViolationError,
    DecodeStageError,
    InvalidInputError,
    WeftError,
)
from .formats import (
    read_annotation,
    read_pbm,
    read_png_gray,
    write_annotation,
    write_pbm,
    write_png_gray,
)
from .metrics import match_points, pattern_metrics
from .postproc import DecodeConfig, decode
from .weavesim import RenderParams, gen_dataset, random_pattern, render

EXIT_OK = 0
EXIT_VALIDATION = 2
EXIT_IO = 3
EXIT_DECODE = 4

_RENDER_KEYS = {f.name: f.type for f in fields(RenderParams)}
_DECODE_KEYS = {f.name: f.type for f in fields(DecodeConfig)}
_EXTRA_KEYS = {"backend"}


def _parse_value(key: str, raw: str):
    raw = raw.strip()
    if key == "trivalue_thresholds":
        parts = [p for p in raw.replace("(", "").replace(")", "").split(",") if p.strip()]
        if len(parts) != 2:
            raise InvalidInputError(f"config key '{key}' needs two comma-separated values")
        return (float(parts[0]), float(parts[1]))
    if raw.lower() in ("none", "null"):
        return None
    if raw.lower() in ("true", "false"):
        return raw.lower() == "true"
    try:
        return int(raw)
    except ValueError:
        pass
    try:
        return float(raw)
    except ValueError:
        pass
    return raw.strip("\"'")


def load_config(path: str) -> dict:
    """Parse a key=value config file; # starts a comment, unknown keys fail."""
    known = set(_RENDER_KEYS) | set(_DECODE_KEYS) | _EXTRA_KEYS
    out: dict = {}
    with open(path, "r", encoding="utf-8") as f:
        for lineno, line in enumerate(f, 1):
            line = line.split("#", 1)[0].strip()
            if not line:
                continue
            if "=" not in line:
                raise InvalidInputError(f"{path}:{lineno}: expected key=value, got '{line}'")
            key, raw = line.split("=", 1)
            key = key.strip()
            if key not in known:
                raise InvalidInputError(f"{path}:{lineno}: unknown config key '{key}'")
            out[key] = _parse_value(key, raw)
    return out


def _build_render_params(cfg: dict, args) -> RenderParams:
    kw = {k: v for k, v in cfg.items() if k in _RENDER_KEYS}
    p = RenderParams(**kw)
    overrides = {}
    for name in _RENDER_KEYS:
        val = getattr(args, name, None)
        if val is not None:
            overrides[name] = val
    if getattr(args, "spacing", None) is not None:
        overrides["warp_spacing"] = args.spacing
        overrides["weft_spacing"] = args.spacing
    if overrides:
        p = replace(p, **overrides)
    return p.validate()


def _build_decode_config(cfg: dict, args) -> DecodeConfig:
    kw = {k: v for k, v in cfg.items() if k in _DECODE_KEYS}
    c = DecodeConfig(**kw)
    overrides = {}
    for name in _DECODE_KEYS:
        val = getattr(args, name, None)
        if val is not None:
            overrides[name] = val
    if overrides:
        c = replace(c, **overrides)
    return c


def _add_config_flag(sp):
    sp.add_argument("--config", help="key=value config file; flags override it")


def _add_render_flags(sp):
    sp.add_argument("--spacing", type=float, help="set warp and weft spacing together")
    sp.add_argument("--warp-spacing", dest="warp_spacing", type=float)
    sp.add_argument("--weft-spacing", dest="weft_spacing", type=float)
    sp.add_argument("--yarn-width-ratio", dest="yarn_width_ratio", type=float)
    sp.add_argument("--jitter-amp", dest="jitter_amp", type=float)
    sp.add_argument("--fiber-noise-density", dest="fiber_noise_density", type=float)
    sp.add_argument("--warp-color", dest="warp_color", type=float)
    sp.add_argument("--weft-color", dest="weft_color", type=float)
    sp.add_argument("--gap-color", dest="gap_color", type=float)
    sp.add_argument("--width", type=int)
    sp.add_argument("--height", type=int)
    sp.add_argument("--seed", type=int)


def _add_decode_flags(sp):
    sp.add_argument("--s", type=float, help="grid assignment radius")
    sp.add_argument("--box-w", dest="box_w", type=int)
    sp.add_argument("--log-sigma", dest="log_sigma", type=float)
    sp.add_argument("--open-radius", dest="open_radius", type=float)
    sp.add_argument("--border-margin", dest="border_margin", type=float)
    sp.add_argument("--smooth-halfwidth", dest="smooth_halfwidth", type=int)


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="weftcodec", description=__doc__)
    sub = ap.add_subparsers(dest="command", required=True)

    sp = sub.add_parser("render", help="render a weave pattern to a fabric image")
    sp.add_argument("pattern", nargs="?", help="input pattern PBM")
    sp.add_argument(
        "--random",
        nargs=4,
        metavar=("ROWS", "COLS", "DENSITY", "SEED"),
        help="generate a random pattern instead of reading one",
    )
    sp.add_argument("-o", "--out", default=".", help="output directory")
    sp.add_argument("--name", help="output file stem")
    _add_config_flag(sp)
    _add_render_flags(sp)

    sp = sub.add_parser("decode", help="decode a fabric image to its weave pattern")
    sp.add_argument("image", help="input fabric PNG")
    sp.add_argument("--backend", choices=("classical", "external"), default="classical")
    sp.add_argument("--map", dest="map_path", help="likelihood map PNG (external backend)")
    sp.add_argument("-o", "--out", default=".", help="output directory")
    sp.add_argument("--dump-stages", action="store_true", help="write per-stage PNGs")
    _add_config_flag(sp)
    _add_decode_flags(sp)

    sp = sub.add_parser("eval", help="score predictions against ground truth")
    sp.add_argument("truth_dir")
    sp.add_argument("pred_dir")
    sp.add_argument("--s-list", default="1..20", help="radii: 'a..b' or comma list")
    sp.add_argument("-o", "--out", default=".", help="output directory for CSVs")
    sp.add_argument("--jobs", type=int, default=1)

    sp = sub.add_parser("dataset", help="render a seeded dataset with a manifest")
    sp.add_argument("n", type=int, help="number of base samples")
    sp.add_argument("-o", "--out", default=".", help="output directory")
    sp.add_argument("--rows", type=int, default=16)
    sp.add_argument("--cols", type=int, default=25)
    sp.add_argument("--density", type=float, default=0.5)
    sp.add_argument("--augment", action="store_true", help="add flipped/rotated copies")
    sp.add_argument("--jobs", type=int, default=1)
    _add_config_flag(sp)
    _add_render_flags(sp)

    sp = sub.add_parser("serve", help="run the annotation HTTP service")
    sp.add_argument("--port", type=int, default=8000)
    sp.add_argument("--host", default="127.0.0.1")
    sp.add_argument("--dir", dest="image_dir", default=".", help="directory of images")
    sp.add_argument("--out", dest="out_dir", default=None, help="export directory")
    sp.add_argument("--ui-dir", dest="ui_dir", default=None, help="static UI assets")
    _add_config_flag(sp)
    _add_decode_flags(sp)
    return ap


def _stem(path: str) -> str:
    return os.path.splitext(os.path.basename(path))[0]


def cmd_render(args) -> int:
    cfg = load_config(args.config) if args.config else {}
    params = _build_render_params(cfg, args)
    if (args.pattern is None) == (args.random is None):
        raise InvalidInputError("give exactly one of a pattern file or --random")
    if args.random is not None:
        rows, cols, density, seed = args.random
        pattern = random_pattern(int(rows), int(cols), float(density), int(seed))
        stem = args.name or f"random_{int(seed)}"
    else:
        try:
            pattern = read_pbm(args.pattern)
        except InvalidInputError as e:
            raise InvalidInputError(f"pattern input: {e}") from e
        stem = args.name or _stem(args.pattern)
    img, truth = render(pattern, params)
    os.makedirs(args.out, exist_ok=True)
    write_png_gray(os.path.join(args.out, stem + ".png"), img)
    write_annotation(
        os.path.join(args.out, stem + ".json"),
        stem + ".png",
        truth.grid,
        truth.crossings,
        None,
    )
    write_pbm(os.path.join(args.out, stem + ".pbm"), truth.pattern)
    print(f"wrote {stem}.png, {stem}.json, {stem}.pbm to {args.out}")
    return EXIT_OK


def cmd_decode(args) -> int:
    cfg_file = load_config(args.config) if args.config else {}
    cfg = _build_decode_config(cfg_file, args)
    backend = cfg_file.get("backend", args.backend)
    if args.backend != "classical":
        backend = args.backend
    img = read_png_gray(args.image)
    sink: dict | None = {} if args.dump_stages else None
    pattern, crossings, grid = decode(
        img, backend=backend, cfg=cfg, external_map=args.map_path, stage_sink=sink
    )
    os.makedirs(args.out, exist_ok=True)
    stem = _stem(args.image)
    write_pbm(os.path.join(args.out, stem + "_decoded.pbm"), pattern)
    write_annotation(
        os.path.join(args.out, stem + "_decoded.json"),
        os.path.basename(args.image),
        grid,
        crossings,
        None,
    )
    if sink is not None:
        for name in ("likelihood", "tri", "merged"):
            write_png_gray(os.path.join(args.out, f"{stem}_{name}.png"), sink[name])
    r, c = pattern.shape
    print(f"decoded {args.image}: {r}x{c} pattern, {len(crossings)} crossings")
    return EXIT_OK


def _parse_s_list(text: str) -> list[float]:
    text = text.strip()
    if ".." in text:
        a, b = text.split("..", 1)
        lo, hi = int(a), int(b)
        if lo > hi:
            raise InvalidInputError(f"bad s range '{text}'")
        return [float(v) for v in range(lo, hi + 1)]
    vals = [float(v) for v in text.split(",") if v.strip()]
    if not vals:
        raise InvalidInputError(f"bad s list '{text}'")
    return vals


def _dir_stems(path: str) -> dict[str, set[str]]:
    """stem -> set of extensions present (json/pbm only)."""
    out: dict[str, set[str]] = {}
    for entry in sorted(os.listdir(path)):
        stem, ext = os.path.splitext(entry)
        if ext in (".json", ".pbm") and not stem.endswith("_decoded"):
            out.setdefault(stem, set()).add(ext)
    return out


def _eval_one(stem, truth_dir, pred_dir, exts, s_values):
    rate_rows = []
    pattern_row = None
    if ".json" in exts:
        truth = read_annotation(os.path.join(truth_dir, stem + ".json"))
        pred = read_annotation(os.path.join(pred_dir, stem + ".json"))
        for s in s_values:
            rep = match_points(truth["crossings"], pred["crossings"], s)
            rate_rows.append(
                [stem, s, rep.correct_rate, rep.error_rate, rep.missed_rate]
            )
    if ".pbm" in exts:
        t = read_pbm(os.path.join(truth_dir, stem + ".pbm"))
        p = read_pbm(os.path.join(pred_dir, stem + ".pbm"))
        if t.shape != p.shape:
            raise InvalidInputError(
                f"{stem}: pattern shape mismatch {t.shape} vs {p.shape}"
            )
        rep = pattern_metrics(t, p)
        pattern_row = [
            stem, rep.accuracy, rep.f_measure, rep.c00, rep.c11, rep.e01, rep.e10,
        ]
    return rate_rows, pattern_row


def cmd_eval(args) -> int:
    s_values = _parse_s_list(args.s_list)
    truth = _dir_stems(args.truth_dir)
    pred = _dir_stems(args.pred_dir)
    unmatched = sorted(set(truth) ^ set(pred))
    if unmatched:
        for stem in unmatched:
            side = "pred" if stem in truth else "truth"
            print(f"unmatched: {stem} (missing from {side} dir)", file=sys.stderr)
        return EXIT_VALIDATION
    if not truth:
        raise InvalidInputError("no annotation or pattern files found")

    stems = sorted(truth)
    work = [(st, truth[st] & pred[st]) for st in stems]
    if args.jobs > 1:
        from concurrent.futures import ThreadPoolExecutor

        with ThreadPoolExecutor(max_workers=args.jobs) as pool:
            results = list(
                pool.map(
                    lambda w: _eval_one(w[0], args.truth_dir, args.pred_dir, w[1], s_values),
                    work,
                )
            )
    else:
        results = [
            _eval_one(st, args.truth_dir, args.pred_dir, exts, s_values)
            for st, exts in work
        ]

    os.makedirs(args.out, exist_ok=True)
    rates_path = os.path.join(args.out, "rates.csv")
    with open(rates_path, "w", newline="") as f:
        w = csv.writer(f)
        w.writerow(["image", "s", "correct_rate", "error_rate", "missed_rate"])
        for rate_rows, _ in results:
            w.writerows(rate_rows)

    pattern_rows = [p for _, p in results if p is not None]
    patterns_path = os.path.join(args.out, "patterns.csv")
    with open(patterns_path, "w", newline="") as f:
        w = csv.writer(f)
        w.writerow(["image", "accuracy", "f_measure", "c00", "c11", "e01", "e10"])
        w.writerows(pattern_rows)

    summary_path = os.path.join(args.out, "summary.csv")
    with open(summary_path, "w", newline="") as f:
        w = csv.writer(f)
        w.writerow(["metric", "mean", "min", "max", "std"])
        for col, name in ((1, "accuracy"), (2, "f_measure")):
            vals = [row[col] for row in pattern_rows]
            if vals:
                mean = math.fsum(vals) / len(vals)
                var = math.fsum((v - mean) ** 2 for v in vals) / len(vals)
                w.writerow([name, mean, min(vals), max(vals), math.sqrt(var)])
    print(f"wrote {rates_path}, {patterns_path}, {summary_path}")
    return EXIT_OK


def cmd_dataset(args) -> int:
    cfg = load_config(args.config) if args.config else {}
    params = _build_render_params(cfg, args)
    manifest = gen_dataset(
        args.n,
        params,
        augment=args.augment,
        out_dir=args.out,
        rows=args.rows,
        cols=args.cols,
        density=args.density,
        jobs=args.jobs,
    )
    print(f"wrote {manifest}")
    return EXIT_OK


def cmd_serve(args) -> int:
    import uvicorn

    from .annosvc import create_app

    cfg_file = load_config(args.config) if args.config else {}
    cfg = _build_decode_config(cfg_file, args)
    app = create_app(
        image_dir=args.image_dir,
        out_dir=args.out_dir or args.image_dir,
        cfg=cfg,
        ui_dir=args.ui_dir,
    )
    uvicorn.run(app, host=args.host, port=args.port, log_level="warning")
    return EXIT_OK


_COMMANDS = {
    "render": cmd_render,
    "decode": cmd_decode,
    "eval": cmd_eval,
    "dataset": cmd_dataset,
    "serve": cmd_serve,
}


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return _COMMANDS[args.command](args)
    except DecodeStageError as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_DECODE
    except (InvalidInputError, ContractViolationError, WeftError, ValueError) as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_VALIDATION
    except OSError as e:
        print(f"i/o error: {e}", file=sys.stderr)
        return EXIT_IO


if __name__ == "__main__":
    sys.exit(main())
