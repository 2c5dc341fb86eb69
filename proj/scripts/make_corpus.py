#!/usr/bin/env python3
"""Regenerate data/corpus/{32,64}/*.pgm from scikit-image sample images.

Each image is converted to grayscale, centre-cropped to a square and
area-resampled to the target size. Output is binary 8-bit PGM.
"""
import argparse
from pathlib import Path

import numpy as np
from PIL import Image
from skimage import color, data

NAMES = [
    "camera", "astronaut", "coins", "moon", "page", "text",
    "clock", "coffee", "chelsea", "rocket", "brick",
]
SIZES = (32, 64)


def grayscale(name: str) -> np.ndarray:
    img = getattr(data, name)()
    if img.ndim == 3:
        img = color.rgb2gray(img[..., :3]) * 255.0
    return np.asarray(img, dtype=np.float64)


def square(img: np.ndarray) -> np.ndarray:
    h, w = img.shape
    s = min(h, w)
    top, left = (h - s) // 2, (w - s) // 2
    return img[top:top + s, left:left + s]


def main() -> None:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--out", type=Path, default=Path(__file__).resolve().parent.parent / "data" / "corpus")
    args = parser.parse_args()
    for size in SIZES:
        (args.out / str(size)).mkdir(parents=True, exist_ok=True)
    for name in NAMES:
        src = Image.fromarray(np.clip(square(grayscale(name)), 0, 255).round().astype(np.uint8), mode="L")
        for size in SIZES:
            src.resize((size, size), Image.Resampling.BOX).save(args.out / str(size) / f"{name}.pgm")
    print(f"wrote {len(NAMES)} images x {len(SIZES)} sizes to {args.out}")


if __name__ == "__main__":
    main()
