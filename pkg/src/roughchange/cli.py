"""Command-line front end: detection, baselines, batch frames, synthesis,
and mask evaluation.

Options may come from a plain ``key=value`` config file (``--config`` or
the ROUGHCHANGE_CONFIG environment variable); explicit flags win. Exit
codes: 0 success, 2 invalid arguments, 3 I/O or file-format failure,
4 dimension mismatch.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from pathlib import Path

from .baselines import fcm_detect, hcm_detect, threshold_diff_detect
from .detector import (
    CandidateRule,
    DetectionParams,
    detect_changes,
    load_mask,
    otsu_threshold,
    save_mask,
)
from .errors import DimensionMismatchError, FormatError
from .evaluate import SynthSpec, compare_masks, synth_pair
from .imaging import abs_difference, load_image, save_image, transform_to_scalar

CONFIG_ENV = "ROUGHCHANGE_CONFIG"

_CONFIG_KEYS = {
    "threshold",
    "bins",
    "candidate_rule",
    "output",
    "report",
    "fuzzifier",
    "max_iter",
    "tol",
    "t0",
}

_BASELINE_METHODS = ("hcm", "fcm", "diff")

_EXIT_OK = 0
_EXIT_USAGE = 2
_EXIT_IO = 3
_EXIT_DIMENSIONS = 4


def _fail(message: str) -> None:
    print(f"roughchange: error: {message}", file=sys.stderr)


def _load_config(path: str | Path) -> dict[str, str]:
    """Parse a key=value config file; unknown keys are rejected."""
    config: dict[str, str] = {}
    for lineno, raw in enumerate(Path(path).read_text().splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        if "=" not in line:
            raise ValueError(f"{path}:{lineno}: expected key=value, got {line!r}")
        key, _, value = line.partition("=")
        key, value = key.strip(), value.strip()
        if key not in _CONFIG_KEYS:
            raise ValueError(f"{path}:{lineno}: unknown config key {key!r}")
        config[key] = value
    return config


def _config_for(args) -> dict[str, str]:
    path = getattr(args, "config", None) or os.environ.get(CONFIG_ENV)
    return _load_config(path) if path else {}


def _pick(flag_value, config: dict[str, str], key: str, default, cast):
    if flag_value is not None:
        return flag_value
    if key in config:
        try:
            return cast(config[key])
        except ValueError:
            raise ValueError(f"bad config value for {key}: {config[key]!r}") from None
    return default


def _detection_params(args, config: dict[str, str]) -> DetectionParams:
    threshold = _pick(args.threshold, config, "threshold", 0.5, float)
    bins = _pick(args.bins, config, "bins", 32, int)
    rule_text = _pick(args.candidate_rule, config, "candidate_rule", "otsu", str)
    return DetectionParams(threshold=threshold, bins=bins, rule=CandidateRule.parse(rule_text))


def _require_output(args, config: dict[str, str]) -> Path:
    output = args.output or config.get("output")
    if not output:
        raise ValueError("an output path is required (-o/--output)")
    return Path(output)


def _write_json(path: str | Path, payload: dict) -> None:
    Path(path).write_text(json.dumps(payload, indent=2) + "\n")


def _parse_pair(text: str, sep: str, count: int, what: str) -> tuple[int, ...]:
    parts = text.split(sep)
    if len(parts) != count or not all(p.strip().lstrip("-").isdigit() for p in parts):
        raise ValueError(f"bad {what} {text!r}")
    return tuple(int(p) for p in parts)


# ---------------------------------------------------------------- commands


def _cmd_detect(args) -> int:
    config = _config_for(args)
    params = _detection_params(args, config)
    output = _require_output(args, config)
    report_path = args.report or config.get("report")

    mask, report = detect_changes(load_image(args.image1), load_image(args.image2), params)
    save_mask(mask, output)
    if report_path:
        _write_json(report_path, report.to_json_dict())
    print(f"wrote {output} ({report.changed_count} changed pixels, t0={report.candidate_t0})")
    return _EXIT_OK


def _cmd_baseline(args) -> int:
    config = _config_for(args)
    method = args.method
    if method not in _BASELINE_METHODS:
        raise ValueError(f"unknown baseline method {method!r} (use hcm, fcm, or diff)")
    fuzzifier = _pick(args.fuzzifier, config, "fuzzifier", 2.0, float)
    max_iter = _pick(args.max_iter, config, "max_iter", 100, int)
    tol = _pick(args.tol, config, "tol", 1e-4, float)
    t0 = _pick(args.t0, config, "t0", None, int)
    if fuzzifier <= 1.0:
        raise ValueError("fuzzifier must exceed 1")
    if max_iter < 1 or tol <= 0:
        raise ValueError("max_iter must be >= 1 and tol > 0")
    output = _require_output(args, config)
    report_path = args.report or config.get("report")

    diff = abs_difference(
        transform_to_scalar(load_image(args.image1)), transform_to_scalar(load_image(args.image2))
    )
    payload: dict = {"method": method}
    if method == "hcm":
        mask = hcm_detect(diff, max_iter=max_iter, tol=tol)
        payload.update(max_iter=max_iter, tol=tol)
    elif method == "fcm":
        mask = fcm_detect(diff, fuzzifier=fuzzifier, max_iter=max_iter, tol=tol)
        payload.update(fuzzifier=fuzzifier, max_iter=max_iter, tol=tol)
    else:
        # plain fixed-cutoff differencing; cutoff falls back to Otsu when unset
        resolved_t0 = t0 if t0 is not None else otsu_threshold(diff)
        mask = threshold_diff_detect(diff, resolved_t0)
        payload.update(t0=resolved_t0, iom_approximation=True)
    payload["changed_count"] = mask.changed_count

    save_mask(mask, output)
    if report_path:
        _write_json(report_path, payload)
    print(f"wrote {output} ({mask.changed_count} changed pixels, method={method})")
    return _EXIT_OK


def _cmd_batch(args) -> int:
    config = _config_for(args)
    params = _detection_params(args, config)
    out_dir = _require_output(args, config)

    frames_dir = Path(args.frames)
    if not frames_dir.is_dir():
        _fail(f"not a directory: {frames_dir}")
        return _EXIT_IO
    frames = sorted(
        p for p in frames_dir.iterdir() if p.suffix.lower() in (".png", ".pgm", ".ppm")
    )
    if not frames:
        _fail(f"no frames found in {frames_dir}")
        return _EXIT_IO

    reference = load_image(args.reference)
    out_dir.mkdir(parents=True, exist_ok=True)
    entries = []
    succeeded = 0
    for frame in frames:
        entry: dict = {"frame": frame.name}
        try:
            mask, report = detect_changes(reference, load_image(frame), params)
            mask_path = out_dir / f"{frame.stem}.mask.png"
            report_path = out_dir / f"{frame.stem}.report.json"
            save_mask(mask, mask_path)
            _write_json(report_path, report.to_json_dict())
            entry.update(
                changed_count=report.changed_count,
                mask=str(mask_path),
                report=str(report_path),
            )
            succeeded += 1
        except (OSError, ValueError) as exc:
            entry["error"] = str(exc)
        entries.append(entry)

    summary = {
        "reference": str(args.reference),
        "frames": entries,
        "succeeded": succeeded,
        "failed": len(entries) - succeeded,
    }
    _write_json(out_dir / "summary.json", summary)
    print(f"processed {succeeded}/{len(entries)} frames into {out_dir}")
    return _EXIT_OK if succeeded else _EXIT_IO


def _cmd_synth(args) -> int:
    spec = SynthSpec(
        width=args.size[0],
        height=args.size[1],
        patch_rect=args.patch,
        background_rgb=args.background,
        patch_rgb=args.patch_color,
        noise_amplitude=args.noise,
        seed=args.seed,
    )
    before, after, truth = synth_pair(spec)
    prefix = Path(args.output or "synth")
    if prefix.parent != Path("."):
        prefix.parent.mkdir(parents=True, exist_ok=True)
    paths = (
        prefix.with_name(prefix.name + "_a.png"),
        prefix.with_name(prefix.name + "_b.png"),
        prefix.with_name(prefix.name + "_truth.png"),
    )
    save_image(before, paths[0])
    save_image(after, paths[1])
    save_mask(truth, paths[2])
    print("wrote " + ", ".join(str(p) for p in paths))
    return _EXIT_OK


def _cmd_eval(args) -> int:
    metrics = compare_masks(load_mask(args.pred), load_mask(args.truth))
    payload = {"eval": metrics.to_json_dict()}
    text = json.dumps(payload, indent=2)
    print(text)
    if args.report:
        _write_json(args.report, payload)
    return _EXIT_OK


# ------------------------------------------------------------------ parser


def _add_config_flag(parser: argparse.ArgumentParser) -> None:
    parser.add_argument(
        "--config",
        metavar="FILE",
        help=f"key=value config file (default: ${CONFIG_ENV} if set); flags override it",
    )


def _add_detection_flags(parser: argparse.ArgumentParser) -> None:
    parser.add_argument(
        "-t",
        "--threshold",
        type=float,
        metavar="T",
        help="rough-membership cutoff in [0, 1]; pixels whose equivalence class "
        "fraction inside the candidate set reaches T are marked changed "
        "(default 0.5; other useful working points: 0.55, 0.52, 0.3)",
    )
    parser.add_argument(
        "--bins",
        type=int,
        metavar="B",
        help="quantization bins per image over the scalar range [0, 1530] (default 32)",
    )
    parser.add_argument(
        "--candidate-rule",
        metavar="RULE",
        help="cutoff rule for the candidate changed set: otsu, mean, or fixed:<t0> "
        "(default otsu)",
    )


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="roughchange",
        description="Detect changed regions between two co-registered images "
        "with rough-set clustering.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser(
        "detect",
        help="rough-clustering change detection on an image pair",
        description="Detect changes between two equally sized images and write a "
        "binary mask (white = changed) plus an optional JSON report.",
    )
    p.add_argument("image1", help="earlier image (PNG/PGM/PPM)")
    p.add_argument("image2", help="later image, same dimensions")
    p.add_argument("-o", "--output", metavar="MASK", help="mask output path (.png or .pgm)")
    p.add_argument("--report", metavar="JSON", help="write the detection report here")
    _add_detection_flags(p)
    _add_config_flag(p)
    p.set_defaults(func=_cmd_detect)

    p = sub.add_parser(
        "baseline",
        help="run a comparison detector (hcm, fcm, or plain differencing)",
        description="Run a baseline detector on the scalar difference of an image "
        "pair. The diff method is plain fixed-cutoff differencing, a stand-in "
        "approximation for intensity-only methods, and its report says so.",
    )
    p.add_argument("method", help="one of: hcm, fcm, diff")
    p.add_argument("image1", help="earlier image")
    p.add_argument("image2", help="later image, same dimensions")
    p.add_argument("-o", "--output", metavar="MASK", help="mask output path (.png or .pgm)")
    p.add_argument("--report", metavar="JSON", help="write the baseline report here")
    p.add_argument("--fuzzifier", type=float, metavar="M", help="fcm fuzzifier m > 1 (default 2)")
    p.add_argument("--max-iter", type=int, metavar="N", help="iteration cap (default 100)")
    p.add_argument("--tol", type=float, metavar="EPS", help="center-movement stop (default 1e-4)")
    p.add_argument(
        "--t0",
        type=int,
        metavar="T0",
        help="diff method cutoff in [0, 1530] (default: Otsu on the difference field)",
    )
    _add_config_flag(p)
    p.set_defaults(func=_cmd_baseline)

    p = sub.add_parser(
        "batch",
        help="detect each frame in a directory against one reference image",
        description="Run detection of every frame in a directory against a fixed "
        "reference image; writes per-frame masks and reports plus summary.json "
        "(changed_count per frame in filename order).",
    )
    p.add_argument("reference", help="reference image")
    p.add_argument("frames", help="directory of frames (PNG/PGM/PPM)")
    p.add_argument("-o", "--output", metavar="DIR", help="output directory")
    _add_detection_flags(p)
    _add_config_flag(p)
    p.set_defaults(func=_cmd_batch)

    p = sub.add_parser(
        "synth",
        help="generate a synthetic before/after pair with ground truth",
        description="Write <prefix>_a.png, <prefix>_b.png, and <prefix>_truth.png: "
        "a flat background, the same background with a painted patch, and the "
        "patch mask. Deterministic for a given --seed.",
    )
    p.add_argument(
        "--size",
        type=lambda s: _parse_pair(s, "x", 2, "size"),
        default=(64, 64),
        metavar="WxH",
        help="image dimensions (default 64x64)",
    )
    p.add_argument(
        "--patch",
        type=lambda s: _parse_pair(s, ",", 4, "patch rect"),
        default=(16, 16, 16, 16),
        metavar="X,Y,W,H",
        help="changed rectangle (default 16,16,16,16)",
    )
    p.add_argument(
        "--background",
        type=lambda s: _parse_pair(s, ",", 3, "color"),
        default=(0, 0, 0),
        metavar="R,G,B",
        help="background color (default 0,0,0)",
    )
    p.add_argument(
        "--patch-color",
        type=lambda s: _parse_pair(s, ",", 3, "color"),
        default=(255, 255, 255),
        metavar="R,G,B",
        help="patch color (default 255,255,255)",
    )
    p.add_argument(
        "--noise", type=int, default=0, metavar="A", help="uniform +-A channel noise (default 0)"
    )
    p.add_argument("--seed", type=int, default=0, metavar="N", help="noise seed (default 0)")
    p.add_argument("-o", "--output", metavar="PREFIX", help="output prefix (default synth)")
    p.set_defaults(func=_cmd_synth)

    p = sub.add_parser(
        "eval",
        help="score a predicted mask against a ground-truth mask",
        description="Compare two masks (white = changed) and print confusion "
        "counts, error rate, precision, recall, and F1 as JSON.",
    )
    p.add_argument("pred", help="predicted mask image")
    p.add_argument("truth", help="ground-truth mask image")
    p.add_argument(
        "--report",
        metavar="JSON",
        help="also write the metrics here (default: print to stdout only)",
    )
    p.set_defaults(func=_cmd_eval)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:  # argparse exits 2 on bad usage, 0 on --help
        return int(exc.code or 0)
    try:
        return args.func(args)
    except DimensionMismatchError as exc:
        _fail(str(exc))
        return _EXIT_DIMENSIONS
    except FormatError as exc:
        _fail(str(exc))
        return _EXIT_IO
    except OSError as exc:
        _fail(str(exc))
        return _EXIT_IO
    except ValueError as exc:
        _fail(str(exc))
        return _EXIT_USAGE


def app() -> None:
    raise SystemExit(main())


if __name__ == "__main__":
    app()
