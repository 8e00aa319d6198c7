"""How much the Gaussian lowpass scale matters.

The highpass model needs a lowpass scale sigma. The library defaults to
sigma = r / 2. This sweep runs sigma in {r/4, r/2, r} on the shipped corpus
and prints the averaged smoothing scores.

    python demos/05_sigma_sensitivity.py
"""

# %%
from ghgif import bench
from ghgif.corpus import load_corpus

records = bench.run_sigma_sweep(load_corpus(), variants=("gh_gif", "gh_wgif", "gh_ggif"), radii=(2, 4, 8))
avgs = bench.averages(records)
print(bench.render_sigma_table(avgs, "psnr_db"))
print()
print(bench.render_sigma_table(avgs, "ssim"))
