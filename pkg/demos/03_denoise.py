"""Denoising a noisy image with a clean guide (and with a blurred guide).

Gaussian noise with sigma = 25/255 is added to each corpus image. In case 1 the
clean image guides the filter. In case 2 the guide is a Gaussian blur of the
noisy input. The script prints the averaged table.

    python demos/03_denoise.py
"""

# %%
from ghgif import bench
from ghgif.corpus import load_corpus

corpus = load_corpus()
records = bench.run_denoise(corpus, seed=0, r=4, eps=0.2**2)
avgs = bench.averages(records)
print(bench.render_denoise_table(avgs))

# %% PM-GF minus LAM, in dB
for (task, case, flt, r, eps), gap in sorted(bench.pairwise_gaps(avgs).items()):
    print(f"case {case} {flt:>7}: {gap:+.2f} dB")
