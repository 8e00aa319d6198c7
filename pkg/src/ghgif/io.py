"""Image file I/O.

8-bit PNG / PGM / PPM go through Pillow and come back as float64 in [0, 1]:
``(H, W)`` for grayscale, ``(H, W, 3)`` for colour. Radiance ``.hdr``
(RGBE) files are handled here directly: flat scanlines and the adaptive
run-length encoding are supported, the obsolete repeat-pixel encoding is not.
"""

from __future__ import annotations

from pathlib import Path

import numpy as np
from PIL import Image, UnidentifiedImageError


class ImageIOError(OSError):
    """An image could not be read or written."""


def read_image(path) -> np.ndarray:
    path = Path(path)
    try:
        with Image.open(path) as im:
            im.load()
            mode = im.mode
            if mode in ("I;16", "I;16B", "I;16L", "I", "F"):
                raise ImageIOError(f"{path}: only 8-bit images are supported (mode {mode})")
            if mode in ("1", "L", "LA"):
                im = im.convert("L")
            else:
                im = im.convert("RGB")
            a = np.asarray(im, dtype=np.float64) / 255.0
    except (FileNotFoundError, UnidentifiedImageError, OSError) as e:
        if isinstance(e, ImageIOError):
            raise
        raise ImageIOError(f"cannot read image {path}: {e}") from e
    return a


def to_uint8(img) -> np.ndarray:
    a = np.clip(np.asarray(img, dtype=np.float64), 0.0, 1.0)
    return np.round(a * 255.0).astype(np.uint8)


def write_image(path, img) -> None:
    """Write a grayscale or RGB float image, clipping to [0, 1]."""
    path = Path(path)
    a = np.asarray(img)
    if not (a.ndim == 2 or (a.ndim == 3 and a.shape[2] == 3)):
        raise ValueError(f"expected (H, W) or (H, W, 3) image, got shape {a.shape}")
    fmt = None
    if path.suffix.lower() in (".pgm", ".ppm", ".pnm"):
        fmt = "PPM"
    try:
        Image.fromarray(to_uint8(a)).save(path, format=fmt)
    except (OSError, ValueError, KeyError) as e:
        raise ImageIOError(f"cannot write image {path}: {e}") from e


def per_channel(fn, img, *args, **kwargs) -> np.ndarray:
    """Apply a 2-D filter `fn` to each channel of `img` (or to `img` if 2-D)."""
    a = np.asarray(img, dtype=np.float64)
    if a.ndim == 2:
        return fn(a, *args, **kwargs)
    return np.stack([fn(a[..., k], *args, **kwargs) for k in range(a.shape[2])], axis=-1)


# --- Radiance RGBE -----------------------------------------------------------


def _read_rle_scanline(buf: memoryview, pos: int, width: int):
    line = np.empty((4, width), dtype=np.uint8)
    for ch in range(4):
        x = 0
        while x < width:
            count = buf[pos]
            pos += 1
            if count > 128:
                n = count - 128
                if x + n > width:
                    raise ImageIOError("RGBE run overflows scanline")
                line[ch, x : x + n] = buf[pos]
                pos += 1
            else:
                n = count
                if n == 0 or x + n > width:
                    raise ImageIOError("bad RGBE literal run")
                if pos + n > len(buf):
                    raise IndexError
                line[ch, x : x + n] = np.frombuffer(buf[pos : pos + n], dtype=np.uint8)
                pos += n
            x += n
    return line.T, pos


def rgbe_to_float(rgbe: np.ndarray) -> np.ndarray:
    rgbe = np.asarray(rgbe, dtype=np.uint8)
    e = rgbe[..., 3].astype(np.int32)
    scale = np.where(e > 0, np.ldexp(1.0, e - 136), 0.0)
    out = (rgbe[..., :3].astype(np.float64) + 0.5) * scale[..., None]
    out[e == 0] = 0.0
    return out


def float_to_rgbe(rgb: np.ndarray) -> np.ndarray:
    rgb = np.asarray(rgb, dtype=np.float64)
    v = rgb.max(axis=-1)
    mant, ex = np.frexp(v)
    small = v < 1e-32
    scale = np.where(small, 0.0, mant * 256.0 / np.where(small, 1.0, v))
    out = np.zeros(rgb.shape[:-1] + (4,), dtype=np.uint8)
    out[..., :3] = np.clip(np.floor(rgb * scale[..., None]), 0, 255).astype(np.uint8)
    out[..., 3] = np.where(small, 0, ex + 128).astype(np.uint8)
    return out


def read_hdr(path) -> np.ndarray:
    """Read a Radiance RGBE file into an ``(H, W, 3)`` float64 radiance array."""
    path = Path(path)
    try:
        data = path.read_bytes()
    except OSError as e:
        raise ImageIOError(f"cannot read {path}: {e}") from e
    if not (data.startswith(b"#?RADIANCE") or data.startswith(b"#?RGBE")):
        raise ImageIOError(f"{path}: not a Radiance RGBE file")
    end = data.find(b"\n\n")
    if end < 0:
        raise ImageIOError(f"{path}: unterminated header")
    header = data[:end].decode("ascii", "replace").splitlines()
    for line in header:
        if line.startswith("FORMAT=") and line.strip() != "FORMAT=32-bit_rle_rgbe":
            raise ImageIOError(f"{path}: unsupported {line.strip()}")
    nl = data.find(b"\n", end + 2)
    res = data[end + 2 : nl].decode("ascii").split()
    if len(res) != 4 or res[0] != "-Y" or res[2] != "+X":
        raise ImageIOError(f"{path}: unsupported orientation {' '.join(res)!r}")
    height, width = int(res[1]), int(res[3])
    buf = memoryview(data)
    pos = nl + 1
    pixels = np.empty((height, width, 4), dtype=np.uint8)
    try:
        for y in range(height):
            if (8 <= width < 32768 and buf[pos] == 2 and buf[pos + 1] == 2
                    and (buf[pos + 2] << 8 | buf[pos + 3]) == width):
                pixels[y], pos = _read_rle_scanline(buf, pos + 4, width)
            else:
                chunk = np.frombuffer(buf[pos : pos + 4 * width], dtype=np.uint8)
                if chunk.size != 4 * width:
                    raise ImageIOError("truncated scanline")
                pixels[y] = chunk.reshape(width, 4)
                pos += 4 * width
    except IndexError:
        raise ImageIOError(f"{path}: truncated pixel data") from None
    except ImageIOError as e:
        raise ImageIOError(f"{path}: {e}") from None
    return rgbe_to_float(pixels)


def _rle_encode_channel(v: np.ndarray) -> bytes:
    out = bytearray()
    n = v.size
    i = 0
    lit_start = 0
    while i < n:
        j = i
        while j < n and j - i < 127 and v[j] == v[i]:
            j += 1
        run = j - i
        if run >= 4:
            while lit_start < i:
                m = min(128, i - lit_start)
                out.append(m)
                out += v[lit_start : lit_start + m].tobytes()
                lit_start += m
            out.append(128 + run)
            out.append(int(v[i]))
            i = j
            lit_start = i
        else:
            i += 1
    while lit_start < n:
        m = min(128, n - lit_start)
        out.append(m)
        out += v[lit_start : lit_start + m].tobytes()
        lit_start += m
    return bytes(out)


def write_hdr(path, rgb, rle: bool = True) -> None:
    """Write an ``(H, W, 3)`` radiance array as Radiance RGBE."""
    rgb = np.asarray(rgb, dtype=np.float64)
    if rgb.ndim == 2:
        rgb = np.repeat(rgb[..., None], 3, axis=2)
    if rgb.ndim != 3 or rgb.shape[2] != 3:
        raise ValueError(f"expected an (H, W, 3) array, got shape {rgb.shape}")
    if (rgb < 0).any() or not np.isfinite(rgb).all():
        raise ValueError("radiance must be finite and non-negative")
    h, w, _ = rgb.shape
    pix = float_to_rgbe(rgb)
    body = bytearray()
    use_rle = rle and 8 <= w < 32768
    for y in range(h):
        if use_rle:
            body += bytes((2, 2, w >> 8, w & 0xFF))
            for ch in range(4):
                body += _rle_encode_channel(pix[y, :, ch])
        else:
            body += pix[y].tobytes()
    head = f"#?RADIANCE\nFORMAT=32-bit_rle_rgbe\n\n-Y {h} +X {w}\n".encode("ascii")
    try:
        Path(path).write_bytes(head + bytes(body))
    except OSError as e:
        raise ImageIOError(f"cannot write {path}: {e}") from e

