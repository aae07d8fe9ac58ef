#!/usr/bin/env python3
"""Writes a small MNIST-style digit suite as 28x28 binary PGMs.

The images come from the handwritten digits bundled with scikit-learn (8x8, 16 gray
levels), upscaled bilinearly to a 20x20 glyph and centered on a 28x28 canvas, with
intensities mapped to 0..255.
"""
import argparse
import pathlib

import numpy as np
from scipy import ndimage
from sklearn.datasets import load_digits


def to_mnist_frame(img8):
    glyph = ndimage.zoom(img8.astype(np.float64), 20 / 8, order=1)
    canvas = np.zeros((28, 28))
    canvas[4:24, 4:24] = glyph
    canvas = np.clip(np.rint(canvas * 255.0 / 16.0), 0, 255)
    return canvas.astype(np.uint8)


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--count", type=int, default=100)
    ap.add_argument("--out", type=pathlib.Path, required=True)
    args = ap.parse_args()
    args.out.mkdir(parents=True, exist_ok=True)
    digits = load_digits()
    for k in range(args.count):
        img = to_mnist_frame(digits.images[k])
        header = b"P5\n28 28\n255\n"
        (args.out / f"digit_{k:03d}.pgm").write_bytes(header + img.tobytes())


if __name__ == "__main__":
    main()
