"""Benchmark harness: smoothing and denoising grids, runtime comparison, report rendering.

Records are plain dataclasses serialised one per line as JSON. Reports are
deterministic for a given corpus, grid and seed: grid cells may run on
several threads (capped by the ``GHGIF_THREADS`` environment variable) but
records are sorted into a canonical order before they are emitted, and
wall-clock timings are only included on request.
"""

from __future__ import annotations

import json
import os
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import asdict, dataclass
from itertools import product

import numpy as np

from .filters import ALL_VARIANTS, LAM_VARIANTS, FilterSpec, counterpart
from .imgcore import gaussian_blur
from .metrics import SSIM_SETTINGS, psnr, ssim

SMOOTH_RADII = (2, 4, 8)
SMOOTH_EPS = (0.1**2, 0.2**2, 0.4**2)
NOISE_SIGMA = 25.0 / 255.0
CASE2_GUIDE_SIGMA = 2.0
SIGMA_FACTORS = (0.25, 0.5, 1.0)


@dataclass(frozen=True)
class BenchmarkRecord:
    task: str
    filter: str
    family: str
    r: int
    eps: float
    lam: float | None
    sigma: float | None
    image: str
    psnr_db: float
    ssim: float
    seed: int
    case: int | None = None
    wall_ms: float | None = None

    def to_json(self) -> str:
        d = asdict(self)
        if d["psnr_db"] == float("inf"):
            d["psnr_db"] = "inf"
        return json.dumps(d, sort_keys=True)


def max_workers() -> int:
    n = os.cpu_count() or 1
    cap = os.environ.get("GHGIF_THREADS")
    if cap:
        try:
            n = min(n, max(1, int(cap)))
        except ValueError:
            pass
    return n


def _sort_key(rec: BenchmarkRecord):
    return (rec.task, rec.case or 0, rec.filter, rec.image, rec.r, rec.eps, rec.sigma or 0.0)


def _score(task, spec: FilterSpec, name, I, G, ref, seed, case, timing):
    t0 = time.perf_counter()
    out = spec.apply(I, G)
    wall = (time.perf_counter() - t0) * 1e3
    pm = spec.family == "PM-GF"
    return BenchmarkRecord(
        task=task,
        filter=spec.variant.replace("_", "-"),
        family=spec.family,
        r=int(spec.r),
        eps=float(spec.eps),
        lam=float(spec.effective_lambda) if pm else None,
        sigma=float(spec.effective_sigma) if pm else None,
        image=name,
        psnr_db=psnr(out, ref),
        ssim=ssim(out, ref),
        seed=int(seed),
        case=case,
        wall_ms=round(wall, 3) if timing else None,
    )


def _run(jobs, threads):
    workers = max_workers() if threads is None else max(1, int(threads))
    if workers == 1:
        recs = [job() for job in jobs]
    else:
        with ThreadPoolExecutor(workers) as ex:
            recs = list(ex.map(lambda j: j(), jobs))
    return sorted(recs, key=_sort_key)


def run_smoothing(
    corpus: dict,
    variants=ALL_VARIANTS,
    radii=SMOOTH_RADII,
    eps_values=SMOOTH_EPS,
    seed: int = 0,
    timing: bool = False,
    threads: int | None = None,
    **spec_kwargs,
) -> list[BenchmarkRecord]:
    """Self-guided smoothing scored against the unfiltered image."""
    if not corpus:
        raise ValueError("empty corpus")
    jobs = []
    for (name, img), v, r, eps in product(corpus.items(), variants, radii, eps_values):
        spec = FilterSpec(v, r=r, eps=eps, **spec_kwargs)
        jobs.append(lambda s=spec, n=name, im=img: _score("smooth", s, n, im, None, im, seed, None, timing))
    return _run(jobs, threads)


def run_sigma_sweep(
    corpus: dict,
    variants=("gh_gif",),
    radii=SMOOTH_RADII,
    eps: float = 0.2**2,
    factors=SIGMA_FACTORS,
    seed: int = 0,
    timing: bool = False,
    threads: int | None = None,
    **spec_kwargs,
) -> list[BenchmarkRecord]:
    """Self-guided smoothing of PM-GF variants with sigma = factor * r for each factor."""
    if not corpus:
        raise ValueError("empty corpus")
    bad = [v for v in variants if FilterSpec(v).family != "PM-GF"]
    if bad:
        raise ValueError(f"sigma sweep needs PM-GF variants, got {bad}")
    jobs = []
    for (name, img), v, r, f in product(corpus.items(), variants, radii, factors):
        spec = FilterSpec(v, r=r, eps=eps, sigma=f * r, **spec_kwargs)
        jobs.append(lambda s=spec, n=name, im=img: _score("sigma", s, n, im, None, im, seed, None, timing))
    return _run(jobs, threads)


def render_sigma_table(avgs, metric: str = "psnr_db") -> str:
    """Markdown table: rows filter x r, one column per sigma / r ratio."""
    cell = {(a["filter"], a["r"], round(a["sigma"] / a["r"], 6)): a[metric] for a in avgs if a["task"] == "sigma"}
    factors = sorted({k[2] for k in cell})
    rows = sorted({k[:2] for k in cell})
    fmt = "{:.2f}" if metric == "psnr_db" else "{:.4f}"
    lines = ["| filter | r | " + " | ".join(f"sigma={f:g}r" for f in factors) + " |",
             "|" + "---|" * (2 + len(factors))]
    for flt, r in rows:
        vals = ["-" if (flt, r, f) not in cell else fmt.format(cell[(flt, r, f)]) for f in factors]
        lines.append(f"| {_label(flt)} | {r} | " + " | ".join(vals) + " |")
    return "\n".join(lines)


def add_noise(img, rng, sigma: float = NOISE_SIGMA) -> np.ndarray:
    """Additive white Gaussian noise, unclipped."""
    return img + rng.normal(0.0, sigma, np.shape(img))


def noisy_corpus(corpus: dict, seed: int, sigma: float = NOISE_SIGMA) -> dict:
    """One noise realisation per image; depends only on `seed` and image order."""
    ss = np.random.SeedSequence(seed)
    out = {}
    for (name, img), child in zip(corpus.items(), ss.spawn(len(corpus))):
        out[name] = add_noise(img, np.random.default_rng(child), sigma)
    return out


def run_denoise(
    corpus: dict,
    seed: int = 0,
    variants=ALL_VARIANTS,
    r: int = 4,
    eps: float = 0.2**2,
    cases=(1, 2),
    guide_sigma: float = CASE2_GUIDE_SIGMA,
    timing: bool = False,
    threads: int | None = None,
    **spec_kwargs,
) -> list[BenchmarkRecord]:
    """Denoising with clean guidance (case 1) or Gaussian-smoothed noisy guidance (case 2)."""
    if not corpus:
        raise ValueError("empty corpus")
    noisy = noisy_corpus(corpus, seed)
    jobs = []
    for case, (name, clean), v in product(cases, corpus.items(), variants):
        spec = FilterSpec(v, r=r, eps=eps, **spec_kwargs)
        I = noisy[name]
        G = clean if case == 1 else gaussian_blur(I, guide_sigma)
        jobs.append(lambda s=spec, n=name, I=I, G=G, c=case, ref=clean:
                    _score("denoise", s, n, I, G, ref, seed, c, timing))
    return _run(jobs, threads)


def averages(records) -> list[dict]:
    """Mean PSNR/SSIM per (task, case, filter, r, eps) cell, canonical order."""
    cells: dict = {}
    for rec in records:
        key = (rec.task, rec.case, rec.filter, rec.family, rec.r, rec.eps, rec.lam, rec.sigma)
        cells.setdefault(key, []).append(rec)
    out = []
    for key in sorted(cells, key=lambda k: (k[0], k[1] or 0, k[2], k[4], k[5])):
        recs = cells[key]
        task, case, flt, fam, r, eps, lam, sigma = key
        out.append({
            "kind": "average", "task": task, "case": case, "filter": flt, "family": fam,
            "r": r, "eps": eps, "lam": lam, "sigma": sigma, "n_images": len(recs),
            "psnr_db": float(np.mean([x.psnr_db for x in recs])),
            "ssim": float(np.mean([x.ssim for x in recs])),
        })
    return out


def write_report(path, records, config: dict) -> None:
    """JSON lines: one header with the effective configuration, the records, then cell averages."""
    header = {"kind": "config", **config, "ssim_settings": SSIM_SETTINGS}
    with open(path, "w") as f:
        f.write(json.dumps(header, sort_keys=True) + "\n")
        for rec in records:
            f.write(rec.to_json() + "\n")
        for avg in averages(records):
            f.write(json.dumps(avg, sort_keys=True) + "\n")


def _label(v: str) -> str:
    return v.upper()


def render_smoothing_table(avgs, metric: str = "psnr_db") -> str:
    """Markdown table laid out like the smoothing tables: rows eps x filter, columns r x {LAM, PM-GF}."""
    cell = {(a["filter"], a["r"], a["eps"]): a[metric] for a in avgs if a["task"] == "smooth"}
    radii = sorted({k[1] for k in cell})
    eps_values = sorted({k[2] for k in cell})
    bases = [v for v in LAM_VARIANTS if any(k[0] == v for k in cell)]
    fmt = "{:.2f}" if metric == "psnr_db" else "{:.4f}"
    head = "| eps | filter | " + " | ".join(f"r={r} LAM | r={r} PM-GF" for r in radii) + " |"
    sep = "|" + "---|" * (2 + 2 * len(radii))
    lines = [head, sep]
    for eps in eps_values:
        for b in bases:
            row = [f"{eps:g}", _label(b)]
            for r in radii:
                for v in (b, "gh-" + b):
                    x = cell.get((v, r, eps))
                    row.append("-" if x is None else fmt.format(x))
            lines.append("| " + " | ".join(row) + " |")
    return "\n".join(lines)


def render_denoise_table(avgs) -> str:
    """Markdown table: rows case x metric x family, one column per base filter."""
    cell = {(a["case"], a["filter"]): a for a in avgs if a["task"] == "denoise"}
    cases = sorted({k[0] for k in cell})
    bases = [v for v in LAM_VARIANTS if any(k[1] == v for k in cell)]
    lines = ["| case | metric | model | " + " | ".join(_label(b) for b in bases) + " |",
             "|" + "---|" * (3 + len(bases))]
    for case in cases:
        for metric, fmt in (("psnr_db", "{:.2f}"), ("ssim", "{:.4f}")):
            for fam, pre in (("LAM", ""), ("PM-GF", "gh-")):
                vals = []
                for b in bases:
                    a = cell.get((case, pre + b))
                    vals.append("-" if a is None else fmt.format(a[metric]))
                name = "PSNR" if metric == "psnr_db" else "SSIM"
                lines.append(f"| {case} | {name} | {fam} | " + " | ".join(vals) + " |")
    return "\n".join(lines)


def pairwise_gaps(avgs, metric: str = "psnr_db") -> dict:
    """PM-GF minus LAM average for every (case, base filter, r, eps) pair present."""
    cell = {(a["task"], a["case"], a["filter"], a["r"], a["eps"]): a[metric] for a in avgs}
    gaps = {}
    for (task, case, flt, r, eps), x in cell.items():
        if flt.startswith("gh-"):
            continue
        y = cell.get((task, case, counterpart(flt).replace("_", "-"), r, eps))
        if y is not None:
            gaps[(task, case, flt, r, eps)] = y - x
    return gaps


def median_runtime(fn, runs: int = 100, warmup: int = 3) -> float:
    """Median wall time of `fn()` in seconds."""
    for _ in range(warmup):
        fn()
    ts = []
    for _ in range(runs):
        t0 = time.perf_counter()
        fn()
        ts.append(time.perf_counter() - t0)
    return float(np.median(ts))


def runtime_comparison(img, r: int = 4, eps: float = 0.04, runs: int = 100) -> dict:
    """Median seconds of self-guided GIF and GH-GIF on `img`."""
    gif = FilterSpec("gif", r=r, eps=eps)
    gh = FilterSpec("gh_gif", r=r, eps=eps)
    return {
        "gif": median_runtime(lambda: gif.apply(img), runs),
        "gh_gif": median_runtime(lambda: gh.apply(img), runs),
    }
