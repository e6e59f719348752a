"""Acceptance suite: one test per release criterion, each printing a
PASS/FAIL line (run with ``pytest tests/test_acceptance.py -s`` to see
them live). Tolerances are fixed here, not tuned elsewhere.
"""

import hashlib
import time

import numpy as np
import pytest

from conftest import random_rgb_pair, random_synth_spec
from oracles import brute_approx, brute_classes
from roughchange import (
    CandidateRule,
    DetectionParams,
    InformationSystem,
    Partition,
    RasterImage,
    abs_difference,
    approximate,
    candidate_change_set,
    compare_masks,
    detect_changes,
    fcm_detect,
    hcm_detect,
    induce_partition,
    pawlak_accuracy,
    quantize,
    run_fcm,
    run_hcm,
    save_image,
    synth_pair,
    threshold_diff_detect,
    transform_to_scalar,
    SynthSpec,
)
from roughchange.cli import main


class _gate:
    """Prints one PASS/FAIL line per criterion, then lets pytest report."""

    def __init__(self, number: int, label: str):
        self.number = number
        self.label = label

    def __enter__(self):
        return self

    def __exit__(self, exc_type, exc, tb):
        verdict = "PASS" if exc_type is None else "FAIL"
        print(f"[acceptance] criterion {self.number} ({self.label}): {verdict}", flush=True)
        return False


def _pipeline_approximation(before, after, params):
    """The pipeline's stages run by hand, for endpoint comparisons."""
    s1, s2 = transform_to_scalar(before), transform_to_scalar(after)
    codes = np.column_stack(
        [quantize(s1, params.bins).reshape(-1), quantize(s2, params.bins).reshape(-1)]
    )
    partition = induce_partition(InformationSystem(codes, (params.bins, params.bins)), (0, 1))
    candidate, _ = candidate_change_set(abs_difference(s1, s2), params.rule)
    return approximate(partition, candidate.reshape(-1))


@pytest.fixture(scope="module")
def synth_corpus():
    """200 random synthetic pairs, sizes capped at 64x64.

    The noisy half stays at or below 31x31 so the smallest possible
    nonzero rough membership, 1/961, still clears the 0.001 endpoint
    probe; the clean half enforces one quantization bin of contrast so
    its memberships are exactly 0 or 1 at any size up to 64.
    """
    rng = np.random.default_rng(0xC0FFEE)
    specs = [random_synth_spec(rng, 8, 31, noise=(1, 10)) for _ in range(120)]
    specs += [random_synth_spec(rng, 8, 64, noise=(0, 0), min_contrast=48) for _ in range(80)]
    return [synth_pair(spec) for spec in specs]


def test_criterion_1_rough_engine_oracle_equivalence():
    with _gate(1, "rough-engine oracle equivalence, 1000 systems in <10s"):
        rng = np.random.default_rng(20240801)
        start = time.perf_counter()
        for _ in range(1000):
            n = int(rng.integers(1, 65))
            m = int(rng.integers(1, 4))
            domains = rng.integers(1, 5, m)
            values = rng.integers(0, 10**9, (n, m)) % domains
            target = rng.random(n) < rng.random()

            attrs = list(range(m))
            classes = brute_classes(values.tolist(), attrs)
            lower, upper, boundary, accuracy = brute_approx(
                classes, set(np.flatnonzero(target).tolist())
            )
            partition = induce_partition(InformationSystem(values, domains), attrs)
            approx = approximate(partition, target)
            assert set(np.flatnonzero(approx.lower).tolist()) == lower
            assert set(np.flatnonzero(approx.upper).tolist()) == upper
            assert set(np.flatnonzero(approx.boundary).tolist()) == boundary
            assert approx.accuracy == accuracy
        elapsed = time.perf_counter() - start
        assert elapsed < 10.0, f"oracle sweep took {elapsed:.2f}s"


def test_criterion_2_sandwich_and_endpoint_identities(synth_corpus):
    with _gate(2, "sandwich and endpoint identities on 200 synthetic pairs"):
        params_probe = DetectionParams()
        for before, after, _ in synth_corpus:
            approx = _pipeline_approximation(before, after, params_probe)
            shape = (before.height, before.width)
            lower = approx.lower.reshape(shape)
            upper = approx.upper.reshape(shape)
            for threshold in (0.1, 0.25, 0.5, 0.75, 1.0):
                mask, _ = detect_changes(before, after, DetectionParams(threshold=threshold))
                assert not np.any(lower & ~mask.flags), "lower not inside mask"
                assert not np.any(mask.flags & ~upper), "mask not inside upper"
            exact_lower, _ = detect_changes(before, after, DetectionParams(threshold=1.0))
            assert np.array_equal(exact_lower.flags, lower)
            exact_upper, _ = detect_changes(before, after, DetectionParams(threshold=0.001))
            assert np.array_equal(exact_upper.flags, upper)


def test_criterion_3_threshold_monotonicity(synth_corpus):
    with _gate(3, "changed_count non-increasing over the threshold sweep"):
        for before, after, _ in synth_corpus:
            previous = None
            for threshold in [i / 10 for i in range(1, 11)]:
                _, report = detect_changes(before, after, DetectionParams(threshold=threshold))
                if previous is not None:
                    assert report.changed_count <= previous
                previous = report.changed_count


def test_criterion_4_null_change_soundness():
    with _gate(4, "self-paired images stay all-black with accuracy 1"):
        rng = np.random.default_rng(31337)
        rule = CandidateRule.parse("fixed:1")
        for _ in range(50):
            side = int(rng.integers(4, 49))
            if rng.random() < 0.5:
                pixels = rng.integers(0, 256, (side, side), dtype=np.uint8)
            else:
                pixels = rng.integers(0, 256, (side, side, 3), dtype=np.uint8)
            img = RasterImage(pixels)
            for threshold in [0.001] + [i / 10 for i in range(1, 11)]:
                mask, report = detect_changes(
                    img, img, DetectionParams(threshold=threshold, rule=rule)
                )
                assert mask.changed_count == 0
                assert report.global_accuracy == 1.0


def test_criterion_5_clean_synthetic_recovery():
    with _gate(5, "exact recovery noise-free; f1>=0.90 on >=90% noisy trials"):
        rng = np.random.default_rng(555)
        for _ in range(100):
            w, h = int(rng.integers(24, 65)), int(rng.integers(24, 65))
            bg, pc = random_rgb_pair(rng, min_contrast=300)
            pw, ph = int(rng.integers(4, w // 2 + 1)), int(rng.integers(4, h // 2 + 1))
            x, y = int(rng.integers(0, w - pw + 1)), int(rng.integers(0, h - ph + 1))
            spec = SynthSpec(w, h, (x, y, pw, ph), bg, pc, noise_amplitude=0, seed=1)
            before, after, truth = synth_pair(spec)
            found, _ = detect_changes(before, after, DetectionParams())
            assert compare_masks(found, truth).f1 == 1.0

        hits = 0
        for trial in range(100):
            trial_rng = np.random.default_rng(9000 + trial)
            w, h = int(trial_rng.integers(24, 65)), int(trial_rng.integers(24, 65))
            bg, pc = random_rgb_pair(trial_rng, min_contrast=300)
            pw = int(trial_rng.integers(4, w // 2 + 1))
            ph = int(trial_rng.integers(4, h // 2 + 1))
            x = int(trial_rng.integers(0, w - pw + 1))
            y = int(trial_rng.integers(0, h - ph + 1))
            spec = SynthSpec(
                w, h, (x, y, pw, ph), bg, pc,
                noise_amplitude=10, seed=int(trial_rng.integers(0, 2**63)),
            )
            before, after, truth = synth_pair(spec)
            found, _ = detect_changes(before, after, DetectionParams())
            hits += compare_masks(found, truth).f1 >= 0.90
        assert hits >= 90, f"only {hits}/100 noisy trials reached f1 0.90"


def test_criterion_6_baseline_correctness():
    with _gate(6, "baseline objectives monotone; bimodal masks coincide"):
        rng = np.random.default_rng(616)
        for _ in range(100):
            values = rng.integers(0, 1531, int(rng.integers(2, 400)))
            hcm = run_hcm(values)
            assert np.all(np.diff(np.array(hcm.objective_history)) <= 0.0)
            fcm = run_fcm(values)
            assert np.all(np.diff(np.array(fcm.objective_history)) <= 1e-9)
            assert np.max(np.abs(fcm.memberships.sum(axis=1) - 1.0)) <= 1e-9

        for _ in range(10):
            h, w = int(rng.integers(4, 32)), int(rng.integers(4, 32))
            flags = rng.random((h, w)) < 0.4
            if flags.all() or not flags.any():
                continue
            before = RasterImage(np.zeros((h, w, 3), np.uint8))
            after_pixels = np.zeros((h, w, 3), np.uint8)
            after_pixels[flags] = (255, 255, 255)
            after = RasterImage(after_pixels)
            diff = abs_difference(transform_to_scalar(before), transform_to_scalar(after))
            expected = flags.tolist()
            assert hcm_detect(diff).flags.tolist() == expected
            assert fcm_detect(diff).flags.tolist() == expected
            assert threshold_diff_detect(diff, 765).flags.tolist() == expected
            rough, _ = detect_changes(before, after, DetectionParams())
            assert rough.flags.tolist() == expected


def test_criterion_7_pawlak_accuracy_spot_checks():
    with _gate(7, "worked accuracy example 0.5; crisp sets score 1"):
        partition = Partition.from_labels([0, 0, 1, 1, 2, 2])
        target = np.array([1, 1, 1, 0, 0, 0], dtype=bool)
        approx = approximate(partition, target)
        assert approx.accuracy == 0.5
        assert pawlak_accuracy(2, 4) == 0.5

        crisp = np.array([1, 1, 0, 0, 1, 1], dtype=bool)  # union of classes
        assert approximate(partition, crisp).accuracy == 1.0
        assert pawlak_accuracy(4, 4) == 1.0


def test_criterion_8_preset_plumbing_and_speed(tmp_path):
    with _gate(8, "presets echoed in reports; QCIF pair end-to-end <1s"):
        spec = SynthSpec(176, 144, (40, 30, 60, 50), (30, 60, 90), (210, 170, 140), 6, seed=99)
        before, after, _ = synth_pair(spec)
        a, b = tmp_path / "a.png", tmp_path / "b.png"
        save_image(before, a)
        save_image(after, b)
        for preset in (0.5, 0.55, 0.52, 0.3):
            mask_path = tmp_path / f"mask_{preset}.png"
            report_path = tmp_path / f"report_{preset}.json"
            start = time.perf_counter()
            code = main(
                ["detect", str(a), str(b), "-t", str(preset),
                 "-o", str(mask_path), "--report", str(report_path)]
            )
            elapsed = time.perf_counter() - start
            assert code == 0
            assert elapsed < 1.0, f"preset {preset} took {elapsed:.3f}s"
            import json

            assert json.loads(report_path.read_text())["threshold_T"] == preset


def test_criterion_9_byte_identical_reruns(tmp_path):
    with _gate(9, "byte-identical masks and reports across reruns"):
        def digests(paths):
            return [hashlib.sha256(p.read_bytes()).hexdigest() for p in paths]

        prefix = tmp_path / "pair"
        synth_argv = ["synth", "--size", "48x40", "--patch", "10,8,16,12", "--noise", "5",
                      "--seed", "21", "--background", "20,40,60",
                      "--patch-color", "220,180,90", "-o", str(prefix)]
        synth_files = [tmp_path / f"pair{s}" for s in ("_a.png", "_b.png", "_truth.png")]
        assert main(synth_argv) == 0
        first = digests(synth_files)
        assert main(synth_argv) == 0
        assert digests(synth_files) == first

        a, b, truth = (str(p) for p in synth_files)
        frames = tmp_path / "frames"
        frames.mkdir()
        (frames / "f0.png").write_bytes(synth_files[1].read_bytes())

        runs = {
            "detect": ["detect", a, b, "-o", str(tmp_path / "d.png"),
                       "--report", str(tmp_path / "d.json")],
            "hcm": ["baseline", "hcm", a, b, "-o", str(tmp_path / "h.png"),
                    "--report", str(tmp_path / "h.json")],
            "fcm": ["baseline", "fcm", a, b, "-o", str(tmp_path / "f.png"),
                    "--report", str(tmp_path / "f.json")],
            "diff": ["baseline", "diff", a, b, "-o", str(tmp_path / "i.png"),
                     "--report", str(tmp_path / "i.json")],
            "batch": ["batch", a, str(frames), "-o", str(tmp_path / "out")],
            "eval": ["eval", truth, truth, "--report", str(tmp_path / "e.json")],
        }
        outputs = {
            "detect": [tmp_path / "d.png", tmp_path / "d.json"],
            "hcm": [tmp_path / "h.png", tmp_path / "h.json"],
            "fcm": [tmp_path / "f.png", tmp_path / "f.json"],
            "diff": [tmp_path / "i.png", tmp_path / "i.json"],
            "batch": [tmp_path / "out" / "f0.mask.png", tmp_path / "out" / "f0.report.json",
                      tmp_path / "out" / "summary.json"],
            "eval": [tmp_path / "e.json"],
        }
        for name, argv in runs.items():
            assert main(argv) == 0, name
            before_digests = digests(outputs[name])
            assert main(argv) == 0, name
            assert digests(outputs[name]) == before_digests, name
