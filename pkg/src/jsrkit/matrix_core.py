"""Complex matrix families, finite words, and elementary spectral quantities.

Everything downstream (bounds, reduction, ergodic averages) is built on the
four operations here: spectral radius, operator norm, word products, and
their nth-root averaged values.  Matrices are always stored as complex128;
real input is promoted so there is a single code path.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

Word = tuple[int, ...]


class ConvergenceError(RuntimeError):
    """Eigenvalue/singular-value iteration failed to converge."""


def as_matrix(entries) -> np.ndarray:
    """Validate and return a square complex128 matrix."""
    a = np.asarray(entries, dtype=np.complex128)
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        raise ValueError(f"matrix must be square, got shape {a.shape}")
    if a.shape[0] < 1:
        raise ValueError("matrix must be at least 1x1")
    if not np.all(np.isfinite(a.view(np.float64))):
        raise ValueError("matrix entries must be finite (no NaN/inf)")
    return a


def spectral_radius(a) -> float:
    """Largest eigenvalue modulus of a square matrix."""
    a = as_matrix(a)
    try:
        ev = np.linalg.eigvals(a)
    except np.linalg.LinAlgError as exc:
        raise ConvergenceError(f"eigenvalue iteration did not converge: {exc}") from exc
    return float(np.max(np.abs(ev)))


def operator_norm(a) -> float:
    """Matrix norm induced by the Euclidean vector norm (largest singular value)."""
    a = as_matrix(a)
    try:
        s = np.linalg.svd(a, compute_uv=False)
    except np.linalg.LinAlgError as exc:
        raise ConvergenceError(f"singular value iteration did not converge: {exc}") from exc
    return float(s[0])


@dataclass(frozen=True)
class MatrixFamily:
    """A finite set of K complex d x d matrices, stacked as a (K, d, d) array."""

    mats: np.ndarray = field(repr=False)

    def __post_init__(self):
        m = np.asarray(self.mats, dtype=np.complex128)
        if m.ndim != 3 or m.shape[1] != m.shape[2]:
            raise ValueError(f"expected a (K, d, d) stack, got shape {m.shape}")
        if m.shape[0] < 1:
            raise ValueError("family needs at least one matrix")
        if not np.all(np.isfinite(m.view(np.float64))):
            raise ValueError("family entries must be finite")
        m.setflags(write=False)
        object.__setattr__(self, "mats", m)

    @classmethod
    def from_matrices(cls, matrices) -> "MatrixFamily":
        mats = [as_matrix(a) for a in matrices]
        dims = {a.shape[0] for a in mats}
        if len(dims) != 1:
            raise ValueError(f"all members must share one dimension, got {sorted(dims)}")
        return cls(np.stack(mats))

    @property
    def size(self) -> int:
        return self.mats.shape[0]

    @property
    def dim(self) -> int:
        return self.mats.shape[1]

    @property
    def is_real(self) -> bool:
        return bool(np.max(np.abs(self.mats.imag), initial=0.0) <= 1e-14 * max(1.0, self.scale))

    @property
    def scale(self) -> float:
        """max_k ||S_k||, the natural magnitude of the family."""
        return float(max(operator_norm(a) for a in self.mats))

    def scaled(self, factor: float) -> "MatrixFamily":
        return MatrixFamily(self.mats * factor)

    def transposed(self) -> "MatrixFamily":
        return MatrixFamily(self.mats.transpose(0, 2, 1).copy())

    def __repr__(self):
        return f"MatrixFamily(K={self.size}, d={self.dim})"


def check_word(family: MatrixFamily, word: Word) -> None:
    for letter in word:
        if not 1 <= letter <= family.size:
            raise IndexError(f"letter {letter} out of range 1..{family.size}")


def word_product(family: MatrixFamily, word: Word) -> np.ndarray:
    """S_{i_1} S_{i_2} ... S_{i_n}, multiplied left-to-right; empty word -> identity."""
    check_word(family, word)
    prod = np.eye(family.dim, dtype=np.complex128)
    for letter in word:
        prod = prod @ family.mats[letter - 1]
    return prod


def averaged_spectral_value(family: MatrixFamily, word: Word) -> float:
    """rho(S_{i_1}...S_{i_n})^(1/n)."""
    if len(word) < 1:
        raise ValueError("averaged values need a non-empty word")
    r = spectral_radius(word_product(family, word))
    return r ** (1.0 / len(word))


def averaged_norm_value(family: MatrixFamily, word: Word) -> float:
    """||S_{i_1}...S_{i_n}||^(1/n)."""
    if len(word) < 1:
        raise ValueError("averaged values need a non-empty word")
    n = operator_norm(word_product(family, word))
    return n ** (1.0 / len(word))
