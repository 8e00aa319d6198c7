"""Command-line front end.

Exit codes: 0 success, 2 bad parameters, 3 I/O failure, 4 internal
consistency failure.
"""

from __future__ import annotations

import argparse
import json
import sys
import time
from pathlib import Path

import numpy as np

from . import apps, bench
from .corpus import load_corpus
from .filters import ALL_VARIANTS, FilterSpec
from .imgcore import ConsistencyError, ParameterError, luminance
from .io import ImageIOError, per_channel, read_hdr, read_image, write_image
from .pmgf import structure_transfer_decomposition
from .weights import eaw_w1, eaw_w2, eaw_w3, gamma_map

EXIT_OK, EXIT_PARAM, EXIT_IO, EXIT_CONSISTENCY = 0, 2, 3, 4

VARIANT_CHOICES = [v.replace("_", "-") for v in ALL_VARIANTS]

# per-command filter defaults: (variant, r, eps)
DEFAULTS = {
    "filter": ("gh-gif", 4, 0.04),
    "enhance": ("gh-gif", 16, 0.01),
    "tonemap": ("gh-gif", 16, 0.25),
    "dehaze": ("gh-gif", 20, 1e-3),
    "texture": ("gh-gif", 8, 0.04),
}


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_PARAM, f"{self.prog}: error: {message}\n")


def _add_filter_args(p, single_variant=True):
    g = p.add_argument_group("filter")
    if single_variant:
        g.add_argument("--variant", choices=VARIANT_CHOICES, default=None)
    g.add_argument("-r", "--radius", dest="r", type=int, default=None, help="window radius")
    g.add_argument("--eps", type=float, default=None, help="local-affine regularisation")
    g.add_argument("--lambda", dest="lam", type=float, default=None,
                   help="PM-GF regularisation (default 0.1 * eps)")
    g.add_argument("--sigma", type=float, default=None, help="PM-GF lowpass scale (default r/2)")
    g.add_argument("--border", choices=["replicate", "reflect"], default="replicate")
    g.add_argument("--tau", type=float, default=1e-4, help="w1/w2 stabiliser")
    g.add_argument("--c", dest="c", type=int, default=3, help="w3 cut-off scale")
    g.add_argument("--h", dest="h", type=float, default=None, help="steering kernel scale")


def _spec(args, command) -> FilterSpec:
    variant, r, eps = DEFAULTS[command]
    return FilterSpec(
        variant=args.variant or variant,
        r=args.r if args.r is not None else r,
        eps=args.eps if args.eps is not None else eps,
        lam=args.lam, sigma=args.sigma, tau=args.tau, c=args.c, h=args.h,
        border=args.border,
    )


def _sidecar(path, payload):
    Path(str(path) + ".json").write_text(json.dumps(payload, indent=2, sort_keys=True) + "\n")


def _apply_to_image(spec: FilterSpec, img, guide):
    if img.ndim == 2:
        g = guide if guide is None or guide.ndim == 2 else luminance(guide)
        return spec.apply(img, g)
    if guide is None:
        return per_channel(spec.apply, img)
    if guide.ndim == 2:
        return per_channel(lambda x: spec.apply(x, guide), img)
    return np.stack([spec.apply(img[..., k], guide[..., k]) for k in range(3)], axis=-1)


def _export_weights(spec: FilterSpec, guide, path):
    base = spec.variant.removeprefix("gh_")
    g = guide if guide.ndim == 2 else luminance(guide)
    if base == "wgif":
        w = eaw_w1(g, spec.tau, spec.border).values
    elif base == "ggif":
        w = eaw_w2(g, spec.r, spec.tau, spec.border).values * gamma_map(g, spec.r, spec.border).values
    elif base == "rdwgif":
        w = eaw_w3(g, spec.c, spec.border).values
    else:
        raise ParameterError(f"variant {spec.variant} has no edge-aware weight map")
    lo, hi = float(w.min()), float(w.max())
    write_image(path, (w - lo) / (hi - lo) if hi > lo else np.zeros_like(w))


def cmd_filter(args) -> int:
    spec = _spec(args, "filter")
    img = read_image(args.input)
    guide = read_image(args.guide) if args.guide else None
    if guide is not None and guide.shape[:2] != img.shape[:2]:
        raise ParameterError(f"guidance shape {guide.shape} does not match input {img.shape}")
    t0 = time.perf_counter()
    out = _apply_to_image(spec, img, guide)
    ms = (time.perf_counter() - t0) * 1e3
    write_image(args.output, out)
    if args.export_weights:
        _export_weights(spec, img if guide is None else guide, args.export_weights)
    h, w = img.shape[:2]
    print(f"{spec.variant.replace('_', '-')} {w}x{h}: {ms:.2f} ms")
    if args.report:
        Path(args.report).write_text(json.dumps(
            {"command": "filter", "input": str(args.input), "guide": args.guide,
             "output": str(args.output), "wall_ms": round(ms, 3), **spec.describe()},
            indent=2, sort_keys=True) + "\n")
    return EXIT_OK


def _bench_specs(args):
    kw = {"tau": args.tau, "c": args.c, "h": args.h, "border": args.border}
    if args.lam is not None:
        kw["lam"] = args.lam
    if args.sigma is not None:
        kw["sigma"] = args.sigma
    return kw


def _parse_list(text, cast):
    return tuple(cast(x) for x in text.split(",") if x.strip())


def _variants(text):
    vs = _parse_list(text, str)
    bad = [v for v in vs if v not in VARIANT_CHOICES]
    if bad:
        raise ParameterError(f"unknown variant(s) {bad}; expected from {VARIANT_CHOICES}")
    return vs


def _emit(records, config, args, tables):
    if args.report:
        bench.write_report(args.report, records, config)
    else:
        for rec in records:
            print(rec.to_json())
    avgs = bench.averages(records)
    text = "\n\n".join(f"### {title}\n\n{fn(avgs)}" for title, fn in tables)
    if args.markdown:
        Path(args.markdown).write_text(text + "\n")
    print(text, file=sys.stderr if not args.report else sys.stdout)


def cmd_bench_smooth(args) -> int:
    corpus = load_corpus(args.corpus)
    variants = _variants(args.variants)
    radii = _parse_list(args.radii, int)
    eps_values = _parse_list(args.eps_list, float)
    kw = _bench_specs(args)
    records = bench.run_smoothing(corpus, variants, radii, eps_values, seed=args.seed,
                                  timing=args.timing, **kw)
    config = {"command": "bench-smooth", "corpus": args.corpus or "shipped",
              "images": list(corpus), "variants": list(variants), "radii": list(radii),
              "eps": list(eps_values), "seed": args.seed, "lambda_rule": "0.1*eps"
              if args.lam is None else args.lam, "sigma_rule": "r/2" if args.sigma is None
              else args.sigma, **{k: (v.value if hasattr(v, "value") else v) for k, v in kw.items()}}
    _emit(records, config, args, [
        ("Average PSNR (dB)", lambda a: bench.render_smoothing_table(a, "psnr_db")),
        ("Average SSIM", lambda a: bench.render_smoothing_table(a, "ssim")),
    ])
    return EXIT_OK


def cmd_bench_denoise(args) -> int:
    corpus = load_corpus(args.corpus)
    variants = _variants(args.variants)
    cases = _parse_list(args.cases, int)
    if any(c not in (1, 2) for c in cases):
        raise ParameterError(f"cases must be 1 and/or 2, got {cases}")
    r = args.r if args.r is not None else 4
    eps = args.eps if args.eps is not None else 0.04
    kw = _bench_specs(args)
    records = bench.run_denoise(corpus, args.seed, variants, r, eps, cases,
                                args.guide_sigma, timing=args.timing, **kw)
    config = {"command": "bench-denoise", "corpus": args.corpus or "shipped",
              "images": list(corpus), "variants": list(variants), "r": r, "eps": eps,
              "cases": list(cases), "seed": args.seed, "noise_sigma": bench.NOISE_SIGMA,
              "case2_guide_sigma": args.guide_sigma,
              "lambda_rule": "0.1*eps" if args.lam is None else args.lam,
              "sigma_rule": "r/2" if args.sigma is None else args.sigma,
              **{k: (v.value if hasattr(v, "value") else v) for k, v in kw.items()}}
    _emit(records, config, args, [("Denoising averages", bench.render_denoise_table)])
    return EXIT_OK


def cmd_bench_sigma(args) -> int:
    corpus = load_corpus(args.corpus)
    variants = _variants(args.variants)
    if any(not v.startswith("gh") for v in variants):
        raise ParameterError(f"bench-sigma takes PM-GF variants only, got {variants}")
    radii = _parse_list(args.radii, int)
    factors = _parse_list(args.factors, float)
    eps = args.eps if args.eps is not None else 0.04
    kw = _bench_specs(args)
    kw.pop("sigma", None)
    records = bench.run_sigma_sweep(corpus, variants, radii, eps, factors, seed=args.seed,
                                    timing=args.timing, **kw)
    config = {"command": "bench-sigma", "corpus": args.corpus or "shipped",
              "images": list(corpus), "variants": list(variants), "radii": list(radii),
              "eps": eps, "sigma_factors": list(factors), "seed": args.seed,
              "lambda_rule": "0.1*eps" if args.lam is None else args.lam,
              **{k: (v.value if hasattr(v, "value") else v) for k, v in kw.items()}}
    _emit(records, config, args, [
        ("Average PSNR (dB) by sigma", lambda a: bench.render_sigma_table(a, "psnr_db")),
        ("Average SSIM by sigma", lambda a: bench.render_sigma_table(a, "ssim")),
    ])
    return EXIT_OK


def cmd_enhance(args) -> int:
    params = apps.EnhanceParams(k=args.k, filter=_spec(args, "enhance"))
    img = read_image(args.input)
    write_image(args.output, apps.detail_enhance(img, params))
    _sidecar(args.output, {"command": "enhance", "input": str(args.input), **params.describe()})
    return EXIT_OK


def cmd_tonemap(args) -> int:
    params = apps.ToneMapParams(c=args.c_compress, target_contrast=args.target_contrast,
                                filter=_spec(args, "tonemap"))
    src = Path(args.input)
    hdr = read_hdr(src) if src.suffix.lower() == ".hdr" else read_image(src)
    res = apps.tone_map(hdr, params)
    write_image(args.output, res.image)
    _sidecar(args.output, {"command": "tonemap", "input": str(args.input),
                           "c_effective": res.c_effective, **params.describe()})
    return EXIT_OK


def cmd_dehaze(args) -> int:
    params = apps.DehazeParams(patch=args.patch, omega=args.omega, t0=args.t0,
                               airlight_quantile=args.airlight_quantile,
                               filter=_spec(args, "dehaze"))
    img = read_image(args.input)
    if img.ndim != 3:
        raise ParameterError("dehazing needs an RGB image")
    res = apps.dehaze(img, params)
    write_image(args.output, res.image)
    if args.transmission:
        write_image(args.transmission, res.transmission)
    _sidecar(args.output, {"command": "dehaze", "input": str(args.input),
                           "airlight": res.airlight.tolist(), **params.describe()})
    return EXIT_OK


def cmd_texture(args) -> int:
    params = apps.RgfParams(iterations=args.iterations, sigma_init=args.sigma_init,
                            filter=_spec(args, "texture"))
    img = read_image(args.input)
    write_image(args.output, apps.rgf_texture_removal(img, params))
    _sidecar(args.output, {"command": "texture", "input": str(args.input), **params.describe()})
    return EXIT_OK


def cmd_selftest(args) -> int:
    """Identity checks on seeded random images; any failure exits with code 4."""
    from .imgcore import GaussianSpec, gaussian_blur, highpass

    rng = np.random.default_rng(args.seed)
    worst = 0.0
    for n in range(args.trials):
        h, w = rng.integers(8, 48, size=2)
        I = rng.random((h, w))
        G = rng.random((h, w)) if n % 2 else None
        spec = GaussianSpec(float(rng.uniform(0.5, 3.0)))
        recon = highpass(I, spec) + gaussian_blur(I, spec)
        worst = max(worst, float(np.abs(recon - I).max()))
        for variant in ("gh_gif", "gh_wgif", "gh_ggif", "gh_skwgif", "gh_rdwgif"):
            fs = FilterSpec(variant, r=int(rng.integers(1, 5)), eps=float(rng.uniform(0.01, 0.2)))
            structure_transfer_decomposition(fs.apply(I, G), I, G, fs.params())
    if worst > 1e-9:
        raise ConsistencyError(f"highpass + lowpass deviates by {worst:.3e}")
    print(f"selftest ok: {args.trials} trials, max highpass reconstruction error "
          f"{worst:.2e}")
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="ghgif", description="Guided image filtering toolkit")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    f = sub.add_parser("filter", help="filter one image")
    f.add_argument("input")
    f.add_argument("output")
    f.add_argument("--guide", default=None, help="guidance image (default: the input)")
    f.add_argument("--report", default=None, help="write effective parameters and timing as JSON")
    f.add_argument("--export-weights", default=None, metavar="PGM",
                   help="write the variant's edge-aware weight map, min-max rescaled")
    _add_filter_args(f)
    f.set_defaults(func=cmd_filter)

    for name, func, helptext in (("bench-smooth", cmd_bench_smooth, "self-guided smoothing grid"),
                                 ("bench-denoise", cmd_bench_denoise, "denoising benchmark"),
                                 ("bench-sigma", cmd_bench_sigma, "PM-GF lowpass-scale sensitivity")):
        b = sub.add_parser(name, help=helptext)
        b.add_argument("--corpus", default=None, help="image directory (default: shipped corpus)")
        default_variants = [v for v in VARIANT_CHOICES if v.startswith("gh")] if name == "bench-sigma" \
            else VARIANT_CHOICES
        b.add_argument("--variants", default=",".join(default_variants))
        b.add_argument("--seed", type=int, default=0)
        b.add_argument("--report", default=None, help="JSON-lines output (default: stdout)")
        b.add_argument("--markdown", default=None, help="also write markdown tables here")
        b.add_argument("--timing", action="store_true",
                       help="record wall-clock times (reports are then not byte-reproducible)")
        _add_filter_args(b, single_variant=False)
        if name == "bench-smooth":
            b.add_argument("--radii", default="2,4,8")
            b.add_argument("--eps-list", default="0.01,0.04,0.16")
        elif name == "bench-sigma":
            b.add_argument("--radii", default="2,4,8")
            b.add_argument("--factors", default="0.25,0.5,1",
                           help="sigma / r ratios to sweep")
        else:
            b.add_argument("--cases", default="1,2")
            b.add_argument("--guide-sigma", type=float, default=bench.CASE2_GUIDE_SIGMA)
        b.set_defaults(func=func)

    e = sub.add_parser("enhance", help="detail enhancement")
    e.add_argument("input")
    e.add_argument("output")
    e.add_argument("-k", type=float, default=5.0, help="detail amplification")
    _add_filter_args(e)
    e.set_defaults(func=cmd_enhance)

    t = sub.add_parser("tonemap", help="HDR tone mapping (.hdr input)")
    t.add_argument("input")
    t.add_argument("output")
    t.add_argument("--compress", dest="c_compress", type=float, default=0.5,
                   help="base-layer compression factor in (0, 1)")
    t.add_argument("--target-contrast", type=float, default=100.0)
    _add_filter_args(t)
    t.set_defaults(func=cmd_tonemap)

    d = sub.add_parser("dehaze", help="dark-channel dehazing")
    d.add_argument("input")
    d.add_argument("output")
    d.add_argument("--patch", type=int, default=7, help="dark-channel patch radius")
    d.add_argument("--omega", type=float, default=0.95)
    d.add_argument("--t0", type=float, default=0.1)
    d.add_argument("--airlight-quantile", type=float, default=0.001)
    d.add_argument("--transmission", default=None, help="also write the refined transmission")
    _add_filter_args(d)
    d.set_defaults(func=cmd_dehaze)

    x = sub.add_parser("texture", help="rolling-guidance texture removal")
    x.add_argument("input")
    x.add_argument("output")
    x.add_argument("--iterations", type=int, default=5)
    x.add_argument("--sigma-init", type=float, default=3.0)
    _add_filter_args(x)
    x.set_defaults(func=cmd_texture)

    s = sub.add_parser("selftest", help="check internal identities")
    s.add_argument("--seed", type=int, default=0)
    s.add_argument("--trials", type=int, default=20)
    s.set_defaults(func=cmd_selftest)
    return p


def main(argv=None) -> int:
    try:
        args = build_parser().parse_args(argv)
    except SystemExit as e:
        # usage errors and --help; the parser has already printed its message
        return e.code if isinstance(e.code, int) else EXIT_PARAM
    try:
        return args.func(args)
    except ConsistencyError as e:
        print(f"ghgif: internal consistency failure: {e}", file=sys.stderr)
        return EXIT_CONSISTENCY
    except ImageIOError as e:
        print(f"ghgif: {e}", file=sys.stderr)
        return EXIT_IO
    except (ParameterError, ValueError) as e:
        print(f"ghgif: invalid parameter: {e}", file=sys.stderr)
        return EXIT_PARAM
    except OSError as e:
        print(f"ghgif: {e}", file=sys.stderr)
        return EXIT_IO


if __name__ == "__main__":
    sys.exit(main())
