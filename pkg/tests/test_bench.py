import json

import numpy as np
import pytest

from ghgif import bench
from ghgif.corpus import corpus_dir, load_corpus, load_directory
from ghgif.io import ImageIOError, write_image


@pytest.fixture(scope="module")
def tiny_corpus():
    rng = np.random.default_rng(8)
    y, x = np.mgrid[0:24, 0:24] / 24
    return {
        "a": np.clip(0.5 + 0.3 * np.sin(6 * x) + 0.05 * rng.standard_normal((24, 24)), 0, 1),
        "b": (x > 0.5).astype(float) * 0.6 + 0.2,
    }


def test_shipped_corpus():
    c = load_corpus()
    assert list(c) == sorted(c)
    assert 6 <= len(c) <= 10
    for img in c.values():
        assert img.ndim == 2 and img.min() >= 0 and img.max() <= 1
    assert corpus_dir().is_dir()


def test_load_directory_grayscale(tmp_path):
    write_image(tmp_path / "z.png", np.full((4, 4, 3), 0.5))
    write_image(tmp_path / "a.pgm", np.zeros((4, 4)))
    (tmp_path / "notes.txt").write_text("ignored")
    c = load_directory(tmp_path)
    assert list(c) == ["a", "z"]
    assert c["z"].shape == (4, 4)
    with pytest.raises(ImageIOError):
        load_directory(tmp_path / "missing")


def test_smoothing_record_count(tiny_corpus):
    recs = bench.run_smoothing(tiny_corpus, radii=(2, 4), eps_values=(0.01, 0.04, 0.16))
    assert len(recs) == 2 * 10 * 6
    assert all(np.isfinite(r.psnr_db) and np.isfinite(r.ssim) for r in recs)
    assert {r.family for r in recs} == {"LAM", "PM-GF"}
    pm = [r for r in recs if r.family == "PM-GF"]
    assert all(r.lam == pytest.approx(0.1 * r.eps) and r.sigma == r.r / 2 for r in pm)
    assert all(r.wall_ms is None for r in recs)


def test_smoothing_empty_corpus():
    with pytest.raises(ValueError, match="empty"):
        bench.run_smoothing({})


def test_canonical_order_independent_of_threads(tiny_corpus):
    kw = dict(variants=("gif", "gh_gif", "wgif"), radii=(2,), eps_values=(0.04,))
    serial = bench.run_smoothing(tiny_corpus, threads=1, **kw)
    threaded = bench.run_smoothing(tiny_corpus, threads=4, **kw)
    assert [r.to_json() for r in serial] == [r.to_json() for r in threaded]


def test_noise_statistics():
    rng = np.random.default_rng(0)
    n = bench.add_noise(np.zeros((512, 512)), rng)
    assert n.var() == pytest.approx((25 / 255) ** 2, rel=0.05)


def test_noisy_corpus_deterministic(tiny_corpus):
    a = bench.noisy_corpus(tiny_corpus, 3)
    b = bench.noisy_corpus(tiny_corpus, 3)
    c = bench.noisy_corpus(tiny_corpus, 4)
    for k in tiny_corpus:
        np.testing.assert_array_equal(a[k], b[k])
        assert not np.array_equal(a[k], c[k])


def test_denoise_reproducible_report(tiny_corpus, tmp_path):
    cfg = {"seed": 5}
    for name in ("r1.jsonl", "r2.jsonl"):
        recs = bench.run_denoise(tiny_corpus, seed=5, variants=("gif", "gh_gif"), threads=2)
        bench.write_report(tmp_path / name, recs, cfg)
    assert (tmp_path / "r1.jsonl").read_bytes() == (tmp_path / "r2.jsonl").read_bytes()
    lines = [json.loads(s) for s in (tmp_path / "r1.jsonl").read_text().splitlines()]
    assert lines[0]["kind"] == "config" and lines[0]["seed"] == 5
    assert lines[0]["ssim_settings"]["window"] == 11
    records = [x for x in lines if "image" in x]
    assert len(records) == 2 * 2 * 2
    assert all(x["seed"] == 5 for x in records)
    assert {x["case"] for x in records} == {1, 2}


def test_timing_opt_in(tiny_corpus):
    recs = bench.run_smoothing(tiny_corpus, variants=("gif",), radii=(2,), eps_values=(0.04,), timing=True)
    assert all(r.wall_ms is not None and r.wall_ms >= 0 for r in recs)


def test_record_inf_serialisation():
    rec = bench.BenchmarkRecord("smooth", "gif", "LAM", 2, 0.04, None, None, "x", float("inf"), 1.0, 0)
    assert json.loads(rec.to_json())["psnr_db"] == "inf"


def test_tables_and_gaps(tiny_corpus):
    recs = bench.run_smoothing(tiny_corpus, radii=(2,), eps_values=(0.04,))
    avgs = bench.averages(recs)
    assert len(avgs) == 10 and all(a["n_images"] == 2 for a in avgs)
    md = bench.render_smoothing_table(avgs, "psnr_db")
    lines = md.splitlines()
    assert lines[0].startswith("| eps | filter | r=2 LAM | r=2 PM-GF")
    assert len(lines) == 2 + 5
    gaps = bench.pairwise_gaps(avgs)
    assert len(gaps) == 5
    den = bench.averages(bench.run_denoise(tiny_corpus, variants=("gif", "gh_gif"), cases=(1,)))
    t = bench.render_denoise_table(den).splitlines()
    assert t[0] == "| case | metric | model | GIF |" and len(t) == 2 + 4


def test_thread_cap(monkeypatch):
    monkeypatch.setenv("GHGIF_THREADS", "1")
    assert bench.max_workers() == 1
    monkeypatch.setenv("GHGIF_THREADS", "junk")
    assert bench.max_workers() >= 1


def test_median_runtime_counts_runs():
    calls = []
    bench.median_runtime(lambda: calls.append(1), runs=7, warmup=2)
    assert len(calls) == 9


def test_sigma_sweep(tiny_corpus):
    recs = bench.run_sigma_sweep(tiny_corpus, variants=("gh_gif", "gh_wgif"), radii=(2, 4))
    assert len(recs) == 2 * 2 * 2 * 3
    assert {r.sigma / r.r for r in recs} == set(bench.SIGMA_FACTORS)
    table = bench.render_sigma_table(bench.averages(recs)).splitlines()
    assert table[0] == "| filter | r | sigma=0.25r | sigma=0.5r | sigma=1r |"
    assert len(table) == 2 + 4
    with pytest.raises(ValueError, match="PM-GF"):
        bench.run_sigma_sweep(tiny_corpus, variants=("gif",))
