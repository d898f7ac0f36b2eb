"""Batch command-line driver: embed, extract, attack, metric, bench.

Exit codes: 0 success, 1 runtime or numeric failure, 2 usage error. Every run
is reproducible: identical arguments and seed give byte-identical outputs.
"""

import argparse
import csv
import math
import sys
from dataclasses import replace
from pathlib import Path

import numpy as np

from .attacks import ALL_KINDS, AttackSpec, apply_attack, benchmark_battery
from .codec import (
    METHOD_PARTS,
    EmbedConfig,
    analyze,
    embed,
    embed_prepared,
    extract,
)
from .eigen import ConvergenceError
from .matrix import quantize_u8
from .imageio import (
    FLOAT_MAGIC,
    FormatError,
    load_key,
    read_float_image,
    read_pgm,
    save_float_image,
    save_image,
    save_key,
)
from .metrics import ber, mse, psnr
from .rng import mix_seed


class UsageError(Exception):
    """Bad command invocation beyond what argparse can express."""


def _load_any(path):
    """Read a PGM or raw-float image into a float64 matrix."""
    with open(path, "rb") as fh:
        data = fh.read()
    if data.startswith(FLOAT_MAGIC):
        return read_float_image(data)
    return read_pgm(data).astype(np.float64)


def _parse_methods(text):
    try:
        methods = [int(tok) for tok in text.split(",") if tok.strip()]
    except ValueError:
        raise UsageError(f"bad method list {text!r}") from None
    if not methods or any(m not in METHOD_PARTS for m in methods):
        raise UsageError(f"methods must be from 1,2,3,4, got {text!r}")
    seen = []
    for m in methods:
        if m not in seen:
            seen.append(m)
    return seen


def _parse_alphas(text):
    try:
        if ":" in text:
            start_s, step_s, stop_s = text.split(":")
            start, step, stop = float(start_s), float(step_s), float(stop_s)
            if step <= 0 or stop < start:
                raise UsageError(f"bad alpha range {text!r}")
            values = []
            k = 0
            while True:
                value = round(start + k * step, 10)
                if value > stop + step * 1e-9:
                    break
                values.append(value)
                k += 1
        else:
            values = [float(tok) for tok in text.split(",") if tok.strip()]
    except (ValueError, UsageError) as exc:
        if isinstance(exc, UsageError):
            raise
        raise UsageError(f"bad alpha list {text!r}") from None
    if not values or any(a <= 0 for a in values):
        raise UsageError(f"alphas must be positive, got {text!r}")
    return values


def _fmt_db(value):
    return "inf" if math.isinf(value) else f"{value:.4f}"


def run_embed(args):
    x = _load_any(args.host)
    w = _load_any(args.watermark)
    config = EmbedConfig(
        method=args.method,
        alpha=args.alpha,
        size_mode="block" if args.block else "spectral_pad",
        quantize_output=False,
    )
    y, key = embed(x, w, config)
    save_image(args.out, quantize_u8(y))
    save_key(args.key, key)
    if args.exact:
        save_float_image(args.exact, y)
    return 0


def run_extract(args):
    key = load_key(args.key)
    received = _load_any(args.infile)
    result = extract(received, key)
    save_image(args.out, quantize_u8(result.watermark_estimate))
    if args.exact_out:
        save_float_image(args.exact_out, result.watermark_estimate)
    return 0


def run_attack(args):
    if args.kind == "resize" and args.size is None:
        raise UsageError("attack --kind resize requires --size")
    img = np.asarray(quantize_u8(_load_any(args.infile)))
    spec = AttackSpec(
        kind=args.kind,
        window=args.window,
        quality=args.quality,
        sigma=args.sigma,
        density=args.density,
        intermediate_size=args.size,
        low_pct=args.low,
        high_pct=args.high,
        seed=args.seed,
    )
    save_image(args.out, apply_attack(img, spec))
    return 0


def run_metric(args):
    a = _load_any(args.a)
    b = _load_any(args.b)
    if args.psnr:
        print(_fmt_db(psnr(a, b)))
    elif args.ber:
        print(f"{ber(a, b):.5f}")
    else:
        print(f"{mse(a, b):.4f}")
    return 0


def run_bench(args):
    host_paths = sorted(Path(args.hosts).glob("*.pgm"))
    if not host_paths:
        raise ValueError(f"no .pgm hosts found in {args.hosts}")
    methods = _parse_methods(args.methods)
    alphas = _parse_alphas(args.alphas)
    if args.attacks and not args.ber_out:
        raise UsageError("--attacks requires --ber-out")
    if args.ber_out and not args.attacks:
        raise UsageError("--ber-out requires --attacks")

    watermark_u8 = np.asarray(quantize_u8(_load_any(args.watermark)))
    w = watermark_u8.astype(np.float64)
    parts = tuple(dict.fromkeys(p for m in methods for p in METHOD_PARTS[m]))
    mark_dec = analyze(w, parts)

    psnr_rows = []
    ber_rows = []
    for index, path in enumerate(host_paths):
        host_u8 = np.asarray(quantize_u8(_load_any(path)))
        x = host_u8.astype(np.float64)
        host_dec = analyze(x, parts)
        for method in methods:
            for alpha in alphas:
                y, _ = embed_prepared(x, w, method, alpha, host_dec, mark_dec)
                if args.exact:
                    value = psnr(x, y)
                else:
                    value = psnr(host_u8, quantize_u8(y))
                psnr_rows.append((path.stem, method, alpha, value))
        if args.attacks and index == 0:
            ber_rows = _ber_battery(
                x, w, watermark_u8, host_dec, mark_dec, methods, args
            )

    with open(args.out, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["host_id", "method", "alpha", "psnr_db"])
        for host_id, method, alpha, value in psnr_rows:
            writer.writerow([host_id, method, f"{alpha:g}", _fmt_db(value)])
    if args.ber_out:
        with open(args.ber_out, "w", newline="") as fh:
            writer = csv.writer(fh)
            writer.writerow(["attack_id", "method", "ber_pct"])
            for attack_id, method, value in ber_rows:
                writer.writerow([attack_id, method, f"{value:.4f}"])
    return 0


def _ber_battery(x, w, watermark_u8, host_dec, mark_dec, methods, args):
    """Robustness rows for the first host: battery x methods, seeded from --seed."""
    battery = benchmark_battery(x.shape[0], args.seed)
    if args.attacks != "all":
        wanted = [tok.strip() for tok in args.attacks.split(",") if tok.strip()]
        known = {attack_id for attack_id, _ in battery}
        bad = [tok for tok in wanted if tok not in known]
        if bad:
            raise UsageError(f"unknown attack ids {bad}; known: {sorted(known)}")
        battery = [(a, s) for a, s in battery if a in wanted]
    marked = {}
    for method in methods:
        y, key = embed_prepared(x, w, method, args.ber_alpha, host_dec, mark_dec)
        marked[method] = (np.asarray(quantize_u8(y)), key)
    rows = []
    for idx, (attack_id, spec) in enumerate(battery):
        seeded = replace(spec, seed=mix_seed(args.seed, idx + 1))
        for method in methods:
            y_q, key = marked[method]
            attacked = apply_attack(y_q, seeded)
            estimate = extract(attacked.astype(np.float64), key).watermark_estimate
            rows.append((attack_id, method, ber(watermark_u8, estimate)))
    return rows


def build_parser():
    parser = argparse.ArgumentParser(
        prog="normalmark",
        description="Eigendecomposition watermarking toolkit: embed, extract, attack, measure.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("embed", help="embed a watermark into a host image")
    p.add_argument("--method", type=int, required=True, choices=(1, 2, 3, 4))
    p.add_argument("--alpha", type=float, required=True)
    p.add_argument("--host", required=True)
    p.add_argument("--watermark", required=True)
    p.add_argument("--out", required=True, help="quantized watermarked image (PGM)")
    p.add_argument("--key", required=True, help="extraction key file")
    p.add_argument("--exact", help="also write the unquantized image (NMIF)")
    p.add_argument("--block", action="store_true", help="tile the host with per-block embeddings")
    p.set_defaults(func=run_embed)

    p = sub.add_parser("extract", help="recover a watermark using a key")
    p.add_argument("--key", required=True)
    p.add_argument("--in", dest="infile", required=True, help="received image (PGM or NMIF)")
    p.add_argument("--out", required=True, help="quantized watermark estimate (PGM)")
    p.add_argument("--exact-out", help="also write the raw estimate (NMIF)")
    p.set_defaults(func=run_extract)

    p = sub.add_parser("attack", help="apply a deterministic robustness attack")
    p.add_argument("--kind", required=True, choices=ALL_KINDS)
    p.add_argument("--in", dest="infile", required=True)
    p.add_argument("--out", required=True)
    p.add_argument("--window", type=int, default=3)
    p.add_argument("--quality", type=int, default=70)
    p.add_argument("--sigma", type=float, default=5.0)
    p.add_argument("--density", type=float, default=0.01)
    p.add_argument("--size", type=int, help="intermediate size for resize")
    p.add_argument("--low", type=float, default=1.0, help="low percentile for intensity")
    p.add_argument("--high", type=float, default=99.0, help="high percentile for intensity")
    p.add_argument("--seed", type=int, default=0)
    p.set_defaults(func=run_attack)

    p = sub.add_parser("metric", help="compare two images")
    group = p.add_mutually_exclusive_group(required=True)
    group.add_argument("--psnr", action="store_true")
    group.add_argument("--ber", action="store_true")
    group.add_argument("--mse", action="store_true")
    p.add_argument("a")
    p.add_argument("b")
    p.set_defaults(func=run_metric)

    p = sub.add_parser("bench", help="PSNR grid and optional attack battery, as CSV")
    p.add_argument("--hosts", required=True, help="directory of .pgm host images")
    p.add_argument("--watermark", required=True)
    p.add_argument("--alphas", default="0.2:0.2:2.0", help="start:step:stop or comma list")
    p.add_argument("--methods", default="1,2,3,4")
    p.add_argument("--out", required=True, help="PSNR CSV path")
    p.add_argument("--attacks", help="'all' or comma list of attack ids (first host only)")
    p.add_argument("--ber-out", dest="ber_out", help="BER CSV path")
    p.add_argument("--ber-alpha", dest="ber_alpha", type=float, default=1.0)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--exact", action="store_true", help="PSNR on unquantized embeddings")
    p.set_defaults(func=run_bench)

    return parser


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except UsageError as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return 2
    except (ValueError, FormatError, ConvergenceError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    raise SystemExit(main())
