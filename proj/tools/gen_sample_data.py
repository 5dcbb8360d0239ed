#!/usr/bin/env python3
# Regenerates the bundled sample images, annotations and repository.
# Usage: tools/gen_sample_data.py [data_dir]
import json
import sys
from pathlib import Path

import numpy as np

rng = np.random.default_rng(20260418)


def save_pnm(path, img):
    img = np.clip(np.rint(img), 0, 255).astype(np.uint8)
    if img.ndim == 2:
        header = f"P5\n{img.shape[1]} {img.shape[0]}\n255\n"
    else:
        header = f"P6\n{img.shape[1]} {img.shape[0]}\n255\n"
    path.write_bytes(header.encode() + img.tobytes())


def backdrop(h, w, base):
    y, x = np.mgrid[0:h, 0:w]
    sky = base + 40 * np.cos(y / h * np.pi)[..., None] * np.array([0.6, 0.8, 1.0])
    sky = sky + 6 * np.sin(x / 17.0)[..., None]
    return sky + rng.normal(0, 3, (h, w, 3))


def stripes(h, w, period, vertical, lo, hi):
    y, x = np.mgrid[0:h, 0:w]
    t = (x if vertical else y) // (period // 2) % 2
    return np.where(t[..., None] == 1, hi, lo).astype(float)


def checker(h, w, cell, lo, hi):
    y, x = np.mgrid[0:h, 0:w]
    t = (x // cell + y // cell) % 2
    return np.where(t[..., None] == 1, hi, lo).astype(float)


def disc(h, w, lo, hi):
    y, x = np.mgrid[0:h, 0:w]
    r = np.hypot(x - w / 2, y - h / 2)
    ring = (r // 4 % 2)[..., None]
    return np.where(ring == 1, hi, lo).astype(float)


def diagonal(h, w, period, lo, hi):
    y, x = np.mgrid[0:h, 0:w]
    t = ((x + y) // (period // 2) % 2)[..., None]
    return np.where(t == 1, hi, lo).astype(float)


TEXTURES = {
    "fence": lambda h, w: stripes(h, w, 8, True, [90, 60, 40], [200, 170, 120]),
    "awning": lambda h, w: stripes(h, w, 10, False, [180, 30, 30], [240, 240, 230]),
    "board": lambda h, w: checker(h, w, 6, [20, 20, 20], [230, 230, 230]),
    "wheel": lambda h, w: disc(h, w, [30, 30, 30], [160, 160, 170]),
    "ramp": lambda h, w: diagonal(h, w, 12, [60, 90, 60], [150, 210, 150]),
}


def paste(img, tex, x, y):
    h, w = tex.shape[:2]
    img[y:y + h, x:x + w] = tex + rng.normal(0, 4, tex.shape)


def scene(w, h, base, objects):
    img = backdrop(h, w, base)
    boxes = []
    for label, (x, y, bw, bh, level) in objects.items():
        paste(img, TEXTURES[label](bh, bw), x, y)
        boxes.append({"label": label, "x": x, "y": y, "w": bw, "h": bh, "level": level})
    return img, boxes


def main():
    data = Path(sys.argv[1] if len(sys.argv) > 1 else Path(__file__).resolve().parents[1] / "data")
    (data / "images").mkdir(parents=True, exist_ok=True)
    (data / "repository").mkdir(parents=True, exist_ok=True)

    scenes = {
        "street": (256, 192, 120, {"fence": (16, 96, 96, 64, 2), "wheel": (150, 110, 48, 48, 2),
                                   "awning": (130, 20, 100, 40, 1)}),
        "yard": (200, 150, 100, {"ramp": (20, 60, 80, 60, 2), "board": (120, 30, 56, 56, 1)}),
        "plaza": (160, 128, 140, {"board": (10, 10, 48, 48, 2), "fence": (70, 60, 80, 40, 1),
                                  "wheel": (100, 4, 40, 40, 1)}),
    }
    for name, (w, h, base, objects) in scenes.items():
        img, boxes = scene(w, h, base, objects)
        save_pnm(data / "images" / f"{name}.ppm", img)
        (data / "images" / f"{name}.json").write_text(json.dumps(boxes, indent=2) + "\n")
        if name == "street":
            gray = img @ np.array([0.299, 0.587, 0.114])
            save_pnm(data / "images" / f"{name}.pgm", gray)

    # Repository: close-ups of single textures, owned by the receiving customer.
    manifest = []
    for i, (label, size) in enumerate([("fence", 64), ("wheel", 64), ("ramp", 64), ("awning", 64)]):
        img = backdrop(size + 32, size + 32, 110)
        paste(img, TEXTURES[label](size, size), 16, 16)
        fname = f"closeup_{i}_{label}.ppm"
        save_pnm(data / "repository" / fname, img)
        manifest.append({"image_path": fname, "labels": [label]})
    (data / "repository" / "manifest.json").write_text(json.dumps(manifest, indent=2) + "\n")


if __name__ == "__main__":
    main()
