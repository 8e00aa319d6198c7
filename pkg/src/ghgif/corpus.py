"""The shipped desk-scale test corpus and loaders for user-supplied datasets."""

from __future__ import annotations

from importlib import resources
from pathlib import Path

import numpy as np

from .imgcore import luminance
from .io import ImageIOError, read_image

IMAGE_SUFFIXES = (".png", ".pgm", ".ppm", ".pnm", ".bmp", ".tif", ".tiff", ".jpg", ".jpeg")


def corpus_dir() -> Path:
    return Path(str(resources.files("ghgif") / "data" / "corpus"))


def load_directory(path, grayscale: bool = True) -> dict[str, np.ndarray]:
    """Load every image in `path`, keyed by file stem, in sorted order."""
    path = Path(path)
    if not path.is_dir():
        raise ImageIOError(f"corpus directory {path} does not exist")
    out = {}
    for p in sorted(path.iterdir()):
        if p.suffix.lower() not in IMAGE_SUFFIXES:
            continue
        img = read_image(p)
        if grayscale and img.ndim == 3:
            img = luminance(img)
        out[p.stem] = img
    return out


def load_corpus(path=None) -> dict[str, np.ndarray]:
    """Grayscale images of the shipped corpus, or of `path` if given."""
    return load_directory(corpus_dir() if path is None else path)
