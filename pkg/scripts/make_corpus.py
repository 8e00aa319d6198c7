"""Regenerate the shipped grayscale test corpus from scikit-image's bundled data.

All six source images are public domain or CC0 (see the scikit-image data
README). Each is converted to luma, its short side resized to SIZE and the
centre SIZE x SIZE crop written as 8-bit PNG.

    python scripts/make_corpus.py
"""

from pathlib import Path

import numpy as np
from PIL import Image
from skimage import data

SIZE = 192
NAMES = ["camera", "astronaut", "coins", "moon", "chelsea", "coffee"]
OUT = Path(__file__).resolve().parents[1] / "src" / "ghgif" / "data" / "corpus"


def main():
    OUT.mkdir(parents=True, exist_ok=True)
    for name in NAMES:
        im = Image.fromarray(getattr(data, name)()).convert("L")
        w, h = im.size
        s = SIZE / min(w, h)
        im = im.resize((max(SIZE, round(w * s)), max(SIZE, round(h * s))), Image.LANCZOS)
        w, h = im.size
        left, top = (w - SIZE) // 2, (h - SIZE) // 2
        im = im.crop((left, top, left + SIZE, top + SIZE))
        im.save(OUT / f"{name}.png")
        print(name, np.asarray(im).shape)


if __name__ == "__main__":
    main()
