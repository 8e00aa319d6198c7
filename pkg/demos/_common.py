"""Shared helpers for the demo scripts."""

from pathlib import Path

import numpy as np

from ghgif.io import write_image

OUT = Path(__file__).resolve().parent / "output"


def save(name, img):
    OUT.mkdir(exist_ok=True)
    path = OUT / name
    write_image(path, np.clip(img, 0.0, 1.0))
    return path
