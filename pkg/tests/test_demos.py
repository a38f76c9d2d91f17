"""Smoke tests: every demo script runs to completion and tells its story."""

import pathlib
import subprocess
import sys

import pytest

DEMOS = pathlib.Path(__file__).resolve().parent.parent / "demos"


def run_demo(name, timeout):
    return subprocess.run(
        [sys.executable, str(DEMOS / name)],
        capture_output=True, text=True, timeout=timeout)


def test_worked_example():
    proc = run_demo("worked_example.py", 60)
    assert proc.returncode == 0, proc.stderr
    assert "alpha_eff        = 0.45" in proc.stdout
    assert "0.75" in proc.stdout
    assert "1001" in proc.stdout


def test_surface_sweep():
    proc = run_demo("surface_sweep.py", 60)
    assert proc.returncode == 0, proc.stderr
    assert "1.000" in proc.stdout          # perfect corner
    assert "spot check" in proc.stdout


def test_fixture_tour():
    proc = run_demo("fixture_tour.py", 60)
    assert proc.returncode == 0, proc.stderr
    for fixture_id in ("audio_radar", "linpack_architectures",
                       "algorithms_scaling", "soc_rosenbrock",
                       "soc_rastrigin"):
        assert fixture_id in proc.stdout
    assert "least-squares alpha across the curve: 0.978255" in proc.stdout


def test_measure_local():
    proc = run_demo("measure_local.py", 300)
    assert proc.returncode == 0, proc.stderr
    assert "calibrated:" in proc.stdout
    assert "synthetic-a0.8-o0" in proc.stdout
