import sys
from pathlib import Path

import numpy as np
import pytest

sys.path.insert(0, str(Path(__file__).parent))

from roughchange import RasterImage, SynthSpec


def pixel_t(rgb) -> int:
    return rgb[0] + 2 * rgb[1] + 3 * rgb[2]


def random_rgb(rng) -> tuple[int, int, int]:
    return tuple(int(v) for v in rng.integers(0, 256, 3))


def random_rgb_pair(rng, min_contrast: int = 0) -> tuple[tuple, tuple]:
    """Two colors whose scalar transforms differ by at least min_contrast."""
    while True:
        a, b = random_rgb(rng), random_rgb(rng)
        if abs(pixel_t(a) - pixel_t(b)) >= min_contrast:
            return a, b


def random_synth_spec(
    rng,
    min_side: int = 8,
    max_side: int = 64,
    noise: tuple[int, int] = (0, 10),
    min_contrast: int = 0,
) -> SynthSpec:
    w = int(rng.integers(min_side, max_side + 1))
    h = int(rng.integers(min_side, max_side + 1))
    pw = int(rng.integers(1, w + 1))
    ph = int(rng.integers(1, h + 1))
    x = int(rng.integers(0, w - pw + 1))
    y = int(rng.integers(0, h - ph + 1))
    bg, pc = random_rgb_pair(rng, min_contrast)
    return SynthSpec(
        width=w,
        height=h,
        patch_rect=(x, y, pw, ph),
        background_rgb=bg,
        patch_rgb=pc,
        noise_amplitude=int(rng.integers(noise[0], noise[1] + 1)),
        seed=int(rng.integers(0, 2**63)),
    )


def random_raster(rng, max_side: int = 48) -> RasterImage:
    w = int(rng.integers(1, max_side + 1))
    h = int(rng.integers(1, max_side + 1))
    if rng.random() < 0.5:
        return RasterImage(rng.integers(0, 256, (h, w), dtype=np.uint8))
    return RasterImage(rng.integers(0, 256, (h, w, 3), dtype=np.uint8))


@pytest.fixture
def rng():
    return np.random.default_rng(20240811)
