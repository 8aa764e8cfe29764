from __future__ import annotations

import os
import subprocess
import sys

import pytest
from hypothesis import given, strategies as st

from fpcert import _pykernels, kernels

compiled = kernels.backends().get("compiled")
needs_compiled = pytest.mark.skipif(compiled is None, reason="extension not built")

letters = st.integers(1, 5).flatmap(lambda i: st.sampled_from((i, -i)))
words = st.lists(letters, max_size=30).map(tuple)
images = st.lists(words, min_size=5, max_size=5).map(tuple)
masks = st.lists(st.integers(1, 2**8 - 1), max_size=12)


def test_python_backend_always_available():
    assert kernels.backends()["python"] is _pykernels
    assert kernels.BACKEND in kernels.backends()


@pytest.mark.parametrize(
    "word, reduced",
    [((), ()), ((1, -1), ()), ((1, 2, -2, -1, 3), (3,)), ((-1, 1, 1), (1,)), ((2, 2), (2, 2))],
)
@pytest.mark.parametrize("backend", sorted(kernels.backends()))
def test_reduce_examples(backend, word, reduced):
    assert kernels.backends()[backend].reduce_word(word) == reduced


@pytest.mark.parametrize("backend", sorted(kernels.backends()))
def test_substitute_example(backend):
    # x1 -> x1 x2: x1^-1 x2 becomes x2^-1 x1^-1 x2, while x1 x2^-1 collapses to x1
    sub = kernels.backends()[backend].substitute
    assert sub((-1, 2), ((1, 2), (2,))) == (-2, -1, 2)
    assert sub((1, -2), ((1, 2), (2,))) == (1,)


@needs_compiled
@given(words)
def test_reduce_parity(w):
    assert compiled.reduce_word(w) == _pykernels.reduce_word(w)


@needs_compiled
@given(words, images)
def test_substitute_parity(w, imgs):
    assert compiled.substitute(w, imgs) == _pykernels.substitute(w, imgs)


@needs_compiled
@given(images, images)
def test_compose_parity(outer, inner):
    assert compiled.compose_images(outer, inner) == _pykernels.compose_images(outer, inner)


@needs_compiled
@given(masks, st.integers(0, 4))
def test_helly_scan_parity(ms, k):
    assert compiled.helly_scan(ms, k) == _pykernels.helly_scan(ms, k)


def test_pure_flag_forces_python_backend():
    env = dict(os.environ, FPCERT_PURE="1")
    out = subprocess.run(
        [sys.executable, "-c", "from fpcert import kernels; print(kernels.BACKEND)"],
        env=env, capture_output=True, text=True, check=True,
    )
    assert out.stdout.strip() == "python"


def test_pure_backend_runs_a_claim():
    code = (
        "from fpcert import certifier, registry;"
        "c = [x for x in registry.builtin_claims() if x.id == 'C7'];"
        "print(certifier.run_claims(c)[0].status)"
    )
    env = dict(os.environ, FPCERT_PURE="1")
    out = subprocess.run([sys.executable, "-c", code], env=env, capture_output=True,
                         text=True, check=True)
    assert out.stdout.strip() == "verified"


def test_benchmark_script_runs():
    from pathlib import Path

    script = Path(__file__).parents[1] / "benchmarks" / "bench_kernels.py"
    out = subprocess.run([sys.executable, str(script), "--repeat", "1"],
                         capture_output=True, text=True, check=True, timeout=300)
    assert "helly_scan" in out.stdout
