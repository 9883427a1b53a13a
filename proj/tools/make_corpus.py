#!/usr/bin/env python3
"""Build the 512x512 grayscale PGM carrier corpus from the photographs bundled
with scikit-image (all public domain or CC0; see skimage/data/README.txt)."""

import argparse
import pathlib

import numpy as np
from skimage import color, data, transform, util

SOURCES = [
    "astronaut",
    "brick",
    "camera",
    "chelsea",
    "coffee",
    "grass",
    "gravel",
    "rocket",
]


def to_carrier(img: np.ndarray, side: int) -> np.ndarray:
    if img.ndim == 3:
        img = color.rgb2gray(img[..., :3])
    img = util.img_as_float(img)
    h, w = img.shape
    s = min(h, w)
    top, left = (h - s) // 2, (w - s) // 2
    img = img[top:top + s, left:left + s]
    if s != side:
        img = transform.resize(img, (side, side), anti_aliasing=True)
    return np.clip(np.round(img * 255.0), 0, 255).astype(np.uint8)


def write_pgm(path: pathlib.Path, img: np.ndarray) -> None:
    h, w = img.shape
    path.write_bytes(f"P5 {w} {h} 255\n".encode("ascii") + img.tobytes())


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--out", default="data/carriers")
    ap.add_argument("--side", type=int, default=512)
    args = ap.parse_args()
    out = pathlib.Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    for name in SOURCES:
        write_pgm(out / f"{name}.pgm", to_carrier(getattr(data, name)(), args.side))
        print(f"wrote {out / name}.pgm")


if __name__ == "__main__":
    main()
