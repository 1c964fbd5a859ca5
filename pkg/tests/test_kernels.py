from __future__ import annotations

import os
import subprocess
import sys

import numpy as np
import pytest

from fock_preserve import _kernels_py, kernels
from fock_preserve.poly import MPoly, poly_eval

compiled = pytest.importorskip("fock_preserve._kernels", reason="compiled kernels not built")


def _random_poly(rng, nvars, nterms, max_exp):
    exps = rng.integers(0, max_exp + 1, (nterms, nvars)).astype(np.int64)
    coeffs = rng.normal(size=nterms) + 1j * rng.normal(size=nterms)
    return np.ascontiguousarray(exps), np.ascontiguousarray(coeffs)


def test_line_restriction_backends_agree():
    rng = np.random.default_rng(0)
    exps, coeffs = _random_poly(rng, 3, 12, 4)
    A = rng.standard_cauchy((64, 3))
    V = 10.0 ** rng.uniform(-3, 3, (64, 3))
    ref = _kernels_py.line_restrict_batch(exps, coeffs, A, V)
    fast = compiled.line_restrict_batch(exps, coeffs, A, V)
    assert np.allclose(fast, ref, rtol=1e-12, atol=1e-12 * np.abs(ref).max())


def test_line_restriction_matches_evaluation():
    rng = np.random.default_rng(1)
    raw_exps, raw_coeffs = _random_poly(rng, 2, 6, 3)
    p = MPoly(2, {tuple(int(x) for x in e): c for e, c in zip(raw_exps, raw_coeffs)})
    exps = np.ascontiguousarray([e for e, _ in p.items()], dtype=np.int64)
    coeffs = np.ascontiguousarray([c for _, c in p.items()], dtype=np.complex128)
    a, v = np.array([[0.3, -1.2]]), np.array([[2.0, 0.5]])
    row = kernels.line_restrict_batch(exps, coeffs, a, v)[0]
    t = 0.7 - 0.2j
    assert np.polyval(row[::-1], t) == pytest.approx(poly_eval(p, a[0] + t * v[0]), rel=1e-12)


def test_ising_backends_agree():
    rng = np.random.default_rng(2)
    J = np.triu(rng.uniform(0, 2, (6, 6)), 1)
    J = np.ascontiguousarray(J + J.T)
    assert np.allclose(compiled.ising_energies(J), _kernels_py.ising_energies(J), rtol=1e-13)


def test_read_only_inputs_accepted():
    J = np.zeros((3, 3))
    J.setflags(write=False)
    compiled.ising_energies(J)


def test_pure_python_selected_by_environment():
    env = dict(os.environ, FOCK_PRESERVE_PURE_PYTHON="1")
    out = subprocess.run([sys.executable, "-c", "from fock_preserve import kernels; print(kernels.BACKEND)"],
                         env=env, capture_output=True, text=True, check=True)
    assert out.stdout.strip() == "python"


def test_thread_cap_from_environment(monkeypatch):
    monkeypatch.setenv("FOCK_PRESERVE_THREADS", "1")
    assert kernels.max_threads() == 1
    monkeypatch.setenv("FOCK_PRESERVE_THREADS", "many")
    with pytest.raises(ValueError):
        kernels.max_threads()


def test_stability_verdicts_independent_of_backend(monkeypatch):
    from fock_preserve.stability import is_stable_multi

    z1, z2 = MPoly.var(2, 0), MPoly.var(2, 1)
    p = (z1 + 2 * z2 + 1j) * (z1 * z2 - 1)
    with_compiled = is_stable_multi(p, trials=300, seed=9)
    monkeypatch.setattr(kernels, "line_restrict_batch", _kernels_py.line_restrict_batch)
    assert is_stable_multi(p, trials=300, seed=9) == with_compiled
