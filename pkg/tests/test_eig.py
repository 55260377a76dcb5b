"""Eigensolver contract against the Jacobi-rotation oracle and analytic cases."""

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from phasemem.eig import (
    DiagonalizationError,
    Spectrum,
    config_digest,
    diagonalize,
    load_spectrum,
    save_spectrum,
)

from oracles import jacobi_eigh


def _random_symmetric(n, rng):
    a = rng.standard_normal((n, n))
    return (a + a.T) / 2.0


def test_analytic_two_by_two():
    spectrum = diagonalize(np.array([[0.0, 1.0], [1.0, 0.0]]))
    np.testing.assert_allclose(spectrum.eigenvalues, [-1.0, 1.0], atol=1e-14)
    inv_sqrt2 = 1.0 / np.sqrt(2.0)
    np.testing.assert_allclose(np.abs(spectrum.eigenvectors), inv_sqrt2, atol=1e-14)


def test_eigenvalues_match_jacobi_oracle():
    rng = np.random.default_rng(2024)
    for _ in range(20):
        n = int(rng.integers(2, 33))
        h = _random_symmetric(n, rng)
        spectrum = diagonalize(h)
        oracle_vals, oracle_vecs = jacobi_eigh(h)
        np.testing.assert_allclose(spectrum.eigenvalues, oracle_vals, atol=1e-9)
        # the oracle's vectors satisfy the production eigenvalue equation too
        resid = h @ oracle_vecs - oracle_vecs * spectrum.eigenvalues
        assert np.linalg.norm(resid, axis=0).max() <= 1e-8 * max(np.linalg.norm(h), 1.0)


def test_eigenvalues_ascend_and_columns_orthonormal():
    rng = np.random.default_rng(7)
    h = _random_symmetric(40, rng)
    spectrum = diagonalize(h)
    assert np.all(np.diff(spectrum.eigenvalues) >= 0)
    gram = spectrum.eigenvectors.T @ spectrum.eigenvectors
    np.testing.assert_allclose(gram, np.eye(40), atol=1e-10)


def test_sign_convention_largest_component_positive():
    rng = np.random.default_rng(11)
    spectrum = diagonalize(_random_symmetric(25, rng))
    anchors = np.abs(spectrum.eigenvectors).argmax(axis=0)
    picked = spectrum.eigenvectors[anchors, np.arange(25)]
    assert np.all(picked > 0)


def test_repeat_decomposition_is_bit_identical():
    rng = np.random.default_rng(3)
    h = _random_symmetric(30, rng)
    a = diagonalize(h)
    b = diagonalize(h)
    assert a.eigenvalues.tobytes() == b.eigenvalues.tobytes()
    assert a.eigenvectors.tobytes() == b.eigenvectors.tobytes()


def test_rejects_asymmetric_matrix_with_report():
    h = np.array([[1.0, 2.0], [2.000001, 1.0]])
    with pytest.raises(DiagonalizationError, match="not symmetric"):
        diagonalize(h)


def test_accepts_roundoff_level_asymmetry_via_scale():
    h = np.array([[1e8, 2e8], [2e8 + 1e-5, 1e8]])  # 1e-5 asym on 2e8 scale
    spectrum = diagonalize(h)
    assert spectrum.dim == 2


def test_rejects_non_square_and_empty():
    with pytest.raises(DiagonalizationError, match="square"):
        diagonalize(np.zeros((3, 4)))
    with pytest.raises(DiagonalizationError, match="empty"):
        diagonalize(np.zeros((0, 0)))


def test_degenerate_spectrum_keeps_contract():
    h = np.diag([2.0, 2.0, 5.0])
    spectrum = diagonalize(h)
    np.testing.assert_allclose(spectrum.eigenvalues, [2.0, 2.0, 5.0], atol=1e-14)
    gram = spectrum.eigenvectors.T @ spectrum.eigenvectors
    np.testing.assert_allclose(gram, np.eye(3), atol=1e-12)


def test_spectrum_arrays_frozen():
    spectrum = diagonalize(np.diag([1.0, 2.0]))
    with pytest.raises(ValueError):
        spectrum.eigenvalues[0] = 0.0


def test_save_load_round_trip_bit_exact(tmp_path):
    rng = np.random.default_rng(5)
    spectrum = diagonalize(_random_symmetric(17, rng))
    digest = config_digest("model n=17 check")
    path = tmp_path / "dump.bin"
    save_spectrum(path, spectrum, digest)
    loaded, stored_hash = load_spectrum(path)
    assert stored_hash == digest
    assert loaded.eigenvalues.tobytes() == spectrum.eigenvalues.tobytes()
    assert loaded.eigenvectors.tobytes() == spectrum.eigenvectors.tobytes()


def test_save_rejects_oversized_hash(tmp_path):
    spectrum = diagonalize(np.diag([1.0]))
    with pytest.raises(ValueError, match="32 bytes"):
        save_spectrum(tmp_path / "x.bin", spectrum, b"\0" * 33)


def test_load_rejects_bad_magic(tmp_path):
    path = tmp_path / "junk.bin"
    path.write_bytes(b"not a spectrum dump at all, nothing to see")
    with pytest.raises(ValueError, match="bad magic"):
        load_spectrum(path)


def test_load_rejects_truncation(tmp_path):
    spectrum = diagonalize(np.diag([1.0, 2.0, 3.0]))
    path = tmp_path / "cut.bin"
    save_spectrum(path, spectrum)
    blob = path.read_bytes()
    path.write_bytes(blob[:-8])
    with pytest.raises(ValueError, match="truncated"):
        load_spectrum(path)


def test_load_rejects_unknown_version(tmp_path):
    spectrum = diagonalize(np.diag([1.0]))
    path = tmp_path / "v9.bin"
    save_spectrum(path, spectrum)
    blob = bytearray(path.read_bytes())
    blob[4] = 9
    path.write_bytes(bytes(blob))
    with pytest.raises(ValueError, match="version"):
        load_spectrum(path)


@settings(max_examples=20, deadline=None)
@given(n=st.integers(2, 16), seed=st.integers(0, 2**31))
def test_contract_bounds_hold_property(n, seed):
    h = _random_symmetric(n, np.random.default_rng(seed))
    spectrum = diagonalize(h)
    fro = np.linalg.norm(h)
    resid = h @ spectrum.eigenvectors - spectrum.eigenvectors * spectrum.eigenvalues
    assert np.linalg.norm(resid, axis=0).max() <= 1e-10 * max(fro, 1e-300)
    gram = spectrum.eigenvectors.T @ spectrum.eigenvectors
    assert np.abs(gram - np.eye(n)).max() <= 1e-10
