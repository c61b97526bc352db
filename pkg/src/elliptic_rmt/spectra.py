"""Eigenvalue and singular-value spectra of scaled samples, plus CSV exchange.

All spectra are taken of matrix / sqrt(n) so that limiting supports stay
order one. Singular spectra may carry a shift z, i.e. they describe
matrix / sqrt(n) - z * I.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import InvalidSpecError, NumericalFailureError

EIG_HEADER = "re,im"
SVAL_HEADER = "index,s"


@dataclass(frozen=True)
class EigenSpectrum:
    """Complex eigenvalues of matrix / sqrt(n); conjugate pairs adjacent."""

    values: np.ndarray
    n: int

    def __post_init__(self):
        if self.values.shape != (self.n,):
            raise InvalidSpecError(f"expected {self.n} eigenvalues, got {self.values.shape}")


@dataclass(frozen=True)
class SingularSpectrum:
    """Singular values of matrix / sqrt(n) - z * I, descending."""

    values: np.ndarray
    n: int
    shift_z: complex = 0j

    def __post_init__(self):
        if self.values.shape != (self.n,):
            raise InvalidSpecError(f"expected {self.n} singular values, got {self.values.shape}")
        if np.any(np.diff(self.values) > 0):
            raise InvalidSpecError("singular values must be sorted descending")
        if np.any(self.values < 0):
            raise InvalidSpecError("singular values must be nonnegative")


def _check_square(matrix: np.ndarray) -> int:
    m = np.asarray(matrix)
    if m.ndim != 2 or m.shape[0] != m.shape[1]:
        raise InvalidSpecError(f"matrix must be square, got shape {m.shape}")
    if not np.all(np.isfinite(m)):
        raise InvalidSpecError("matrix has non-finite entries")
    return m.shape[0]


def eigenvalues(matrix: np.ndarray, seed: int | None = None) -> EigenSpectrum:
    """Eigenvalues of matrix / sqrt(n) via the real Schur form.

    Real input goes through LAPACK dgeev, so complex eigenvalues come out
    in adjacent conjugate pairs. `seed` is only used to label a
    convergence failure for replay.
    """
    n = _check_square(matrix)
    scaled = np.asarray(matrix, dtype=float) / np.sqrt(n)
    try:
        w = np.linalg.eigvals(scaled)
    except np.linalg.LinAlgError as exc:
        raise NumericalFailureError(f"eigenvalue solver failed: {exc}", seed=seed) from exc
    return EigenSpectrum(values=np.asarray(w, dtype=complex), n=n)


def singular_values(matrix: np.ndarray, seed: int | None = None) -> SingularSpectrum:
    """Singular values of matrix / sqrt(n), descending."""
    return shifted_singular_esd(matrix, 0j, seed=seed)


def shifted_singular_esd(matrix: np.ndarray, z: complex, seed: int | None = None) -> SingularSpectrum:
    """Singular values of matrix / sqrt(n) - z * I, descending.

    A real shift keeps the computation in real arithmetic; a complex one
    promotes the operand to complex before the SVD.
    """
    n = _check_square(matrix)
    z = complex(z)
    if z.imag == 0.0:
        operand = np.asarray(matrix, dtype=float) / np.sqrt(n)
        if z.real != 0.0:
            operand = operand - z.real * np.eye(n)
    else:
        operand = np.asarray(matrix, dtype=complex) / np.sqrt(n) - z * np.eye(n)
    try:
        s = np.linalg.svd(operand, compute_uv=False)
    except np.linalg.LinAlgError as exc:
        raise NumericalFailureError(f"SVD failed: {exc}", seed=seed) from exc
    return SingularSpectrum(values=s, n=n, shift_z=z)


def least_singular_value(matrix: np.ndarray, shift: np.ndarray | None = None,
                         seed: int | None = None) -> float:
    """Smallest singular value of matrix + shift (unscaled)."""
    n = _check_square(matrix)
    operand = np.asarray(matrix, dtype=float)
    if shift is not None:
        shift = np.asarray(shift, dtype=float)
        if shift.shape != (n, n):
            raise InvalidSpecError(f"shift shape {shift.shape} != ({n}, {n})")
        operand = operand + shift
    try:
        s = np.linalg.svd(operand, compute_uv=False)
    except np.linalg.LinAlgError as exc:
        raise NumericalFailureError(f"SVD failed: {exc}", seed=seed) from exc
    return float(s[-1])


def operator_norm(matrix: np.ndarray) -> float:
    """Largest singular value of the matrix as given (no scaling)."""
    _check_square(matrix)
    try:
        s = np.linalg.svd(np.asarray(matrix, dtype=float), compute_uv=False)
    except np.linalg.LinAlgError as exc:
        raise NumericalFailureError(f"SVD failed: {exc}") from exc
    return float(s[0])


# --- CSV exchange --------------------------------------------------------
#
# eigenvalues:     header "re,im", one row per eigenvalue
# singular values: header "index,s", 1-based index, descending s
#
# Floats are written with repr (shortest round-trip), so files are
# byte-identical across runs with the same seed.


def write_eigenvalues_csv(spectrum: EigenSpectrum, path) -> None:
    with open(path, "w", newline="") as fh:
        fh.write(EIG_HEADER + "\n")
        for w in spectrum.values:
            fh.write(f"{float(w.real)!r},{float(w.imag)!r}\n")


def write_singular_values_csv(spectrum: SingularSpectrum, path) -> None:
    with open(path, "w", newline="") as fh:
        fh.write(SVAL_HEADER + "\n")
        for i, s in enumerate(spectrum.values, start=1):
            fh.write(f"{i},{float(s)!r}\n")


def read_eigenvalues_csv(path) -> np.ndarray:
    """Read a "re,im" CSV back into a complex array; errors carry line numbers."""
    values = []
    with open(path, "r", newline="") as fh:
        header = fh.readline().strip()
        if header != EIG_HEADER:
            raise InvalidSpecError(f"{path}:1: expected header {EIG_HEADER!r}, got {header!r}")
        for lineno, line in enumerate(fh, start=2):
            line = line.strip()
            if not line:
                continue
            parts = line.split(",")
            if len(parts) != 2:
                raise InvalidSpecError(f"{path}:{lineno}: expected 2 fields, got {len(parts)}")
            try:
                values.append(complex(float(parts[0]), float(parts[1])))
            except ValueError as exc:
                raise InvalidSpecError(f"{path}:{lineno}: {exc}") from None
    return np.asarray(values, dtype=complex)
