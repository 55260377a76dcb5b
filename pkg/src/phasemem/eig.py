"""Dense symmetric eigendecomposition with explicit accuracy contracts.

The decomposition itself is delegated to LAPACK through ``numpy.linalg.eigh``
(Householder tridiagonalization plus a relatively-robust/divide-and-conquer
solve, the standard dense path). What this module owns is the contract
around it: input symmetry is rejected rather than silently symmetrized,
residual and orthonormality bounds are verified on every call, column signs
follow a reproducible convention, and failures are explicit. An independent
Jacobi-rotation oracle in the test suite cross-checks eigenvalues on small
matrices.
"""

from __future__ import annotations

import hashlib
import struct
from dataclasses import dataclass

import numpy as np

_MAGIC = b"PMSP"
_FORMAT_VERSION = 1
DEFAULT_TOL = 1e-10


class DiagonalizationError(RuntimeError):
    """Raised when input is rejected or the accuracy contract cannot be met."""


@dataclass(frozen=True)
class Spectrum:
    """Eigenvalues (ascending) and orthonormal eigenvectors, column k per value k."""

    eigenvalues: np.ndarray
    eigenvectors: np.ndarray

    @property
    def dim(self) -> int:
        return len(self.eigenvalues)


def _fix_column_signs(vectors: np.ndarray) -> np.ndarray:
    """Flip columns so the largest-magnitude component is positive.

    Makes serialized spectra reproducible; within degenerate clusters the
    basis itself is still solver-chosen, and downstream statistics are
    basis-invariant there.
    """
    anchor = np.abs(vectors).argmax(axis=0)
    flip = vectors[anchor, np.arange(vectors.shape[1])] < 0
    vectors[:, flip] *= -1.0
    return vectors


def diagonalize(matrix: np.ndarray, tol: float = DEFAULT_TOL) -> Spectrum:
    """Full eigendecomposition of a dense symmetric real matrix.

    Raises DiagonalizationError when the input is not symmetric (reporting
    the worst asymmetry), when LAPACK fails to converge, or when the
    verified residual / orthonormality bounds exceed ``tol``:

        ||V^T V - I||_max <= tol
        ||H v_k - lambda_k v_k||_2 <= tol * ||H||_F   for every k
    """
    matrix = np.asarray(matrix, dtype=float)
    if matrix.ndim != 2 or matrix.shape[0] != matrix.shape[1]:
        raise DiagonalizationError(f"expected a square matrix, got shape {matrix.shape}")
    if matrix.shape[0] == 0:
        raise DiagonalizationError("empty matrix")
    scale = np.abs(matrix).max()
    asym = np.abs(matrix - matrix.T).max()
    if asym > 1e-12 * max(scale, 1.0):
        raise DiagonalizationError(
            f"input is not symmetric: max |H - H^T| = {asym:.3e} "
            f"(max |H| = {scale:.3e})"
        )
    try:
        eigenvalues, eigenvectors = np.linalg.eigh(matrix)
    except np.linalg.LinAlgError as exc:
        raise DiagonalizationError(f"eigensolver did not converge: {exc}") from exc
    eigenvectors = _fix_column_signs(eigenvectors)

    fro = np.linalg.norm(matrix)
    ortho = np.abs(eigenvectors.T @ eigenvectors - np.eye(matrix.shape[0])).max()
    if ortho > tol:
        raise DiagonalizationError(
            f"orthonormality contract violated: ||V^T V - I||_max = {ortho:.3e} > {tol:.1e}"
        )
    residual = matrix @ eigenvectors - eigenvectors * eigenvalues
    worst = np.linalg.norm(residual, axis=0).max()
    if worst > tol * max(fro, np.finfo(float).tiny):
        raise DiagonalizationError(
            f"residual contract violated: max_k ||H v_k - l_k v_k|| = {worst:.3e} "
            f"> {tol:.1e} * ||H||_F = {tol * fro:.3e}"
        )
    eigenvalues.flags.writeable = False
    eigenvectors.flags.writeable = False
    return Spectrum(eigenvalues=eigenvalues, eigenvectors=eigenvectors)


def config_digest(payload: bytes | str) -> bytes:
    """32-byte digest used to tie a cached spectrum to its configuration."""
    if isinstance(payload, str):
        payload = payload.encode()
    return hashlib.sha256(payload).digest()


def save_spectrum(path, spectrum: Spectrum, config_hash: bytes = b"") -> None:
    """Binary spectrum dump for caching.

    Layout, all little-endian:
      bytes 0-3    magic ``PMSP``
      bytes 4-7    format version (u32)
      bytes 8-15   dimension N (u64)
      bytes 16-47  32-byte config hash (zero-padded)
      then N float64 eigenvalues, then N*N float64 eigenvectors in
      column-major order (column k = eigenvector of eigenvalue k).
    """
    if len(config_hash) > 32:
        raise ValueError("config_hash longer than 32 bytes")
    n = spectrum.dim
    header = _MAGIC + struct.pack("<IQ", _FORMAT_VERSION, n) + config_hash.ljust(32, b"\0")
    with open(path, "wb") as fh:
        fh.write(header)
        fh.write(spectrum.eigenvalues.astype("<f8").tobytes())
        fh.write(np.asfortranarray(spectrum.eigenvectors.astype("<f8")).tobytes(order="F"))


def load_spectrum(path) -> tuple[Spectrum, bytes]:
    """Read a dump written by save_spectrum; returns (spectrum, config_hash)."""
    with open(path, "rb") as fh:
        header = fh.read(48)
        if len(header) < 48 or header[:4] != _MAGIC:
            raise ValueError(f"{path}: not a spectrum dump (bad magic)")
        version, n = struct.unpack("<IQ", header[4:16])
        if version != _FORMAT_VERSION:
            raise ValueError(f"{path}: unsupported format version {version}")
        config_hash = header[16:48]
        data = fh.read()
    expect = 8 * n + 8 * n * n
    if len(data) != expect:
        raise ValueError(f"{path}: truncated dump ({len(data)} payload bytes, expected {expect})")
    eigenvalues = np.frombuffer(data[: 8 * n], dtype="<f8").copy()
    eigenvectors = np.frombuffer(data[8 * n:], dtype="<f8").reshape((n, n), order="F").copy()
    eigenvalues.flags.writeable = False
    eigenvectors.flags.writeable = False
    return Spectrum(eigenvalues=eigenvalues, eigenvectors=eigenvectors), config_hash
