"""Seeded sampling of Ginibre / Wishart ensembles and random induced states,
plus the bipartite partial trace, partial transpose and PPT test.

Conventions, fixed because correctness of the tensor operations depends on
them:

- Ginibre entries are standard complex Gaussians with E G_ij = 0 and
  E |G_ij|^2 = 1 (real and imaginary parts independent N(0, 1/2)), the
  normalization under which E tr GG* = d * s.
- The composite index of the product basis vector (i, a) of C^d (x) C^s is
  i * s + a: row-major, first factor slow.

Every sampler takes an RngStream; sampling is a pure function of the stream
value, so Monte Carlo trials parallelize by giving each trial its own
stream_id.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from . import linalg

#: default cap on d*s Ginibre entries (~1.6 GB complex) enforced by the CLI.
MAX_GINIBRE_ENTRIES = 10**8

_MASK64 = (1 << 64) - 1


@dataclass(frozen=True)
class RngStream:
    """A (seed, stream_id) pair naming one reproducible random stream.

    Identical pairs reproduce identical samples bit-exactly on one build;
    distinct stream_ids give statistically independent streams. Backed by the
    counter-based Philox generator keyed on both fields.
    """

    seed: int
    stream_id: int = 0

    def generator(self) -> np.random.Generator:
        key = (self.seed & _MASK64) | ((self.stream_id & _MASK64) << 64)
        return np.random.Generator(np.random.Philox(key=key))

    def substream(self, stream_id: int) -> "RngStream":
        return RngStream(self.seed, stream_id)


@dataclass(frozen=True, eq=False)
class DensityMatrix:
    """A trace-one PSD matrix, optionally carrying a bipartite shape (d1, d2)."""

    matrix: np.ndarray
    dims: tuple[int, int] | None = None

    def __post_init__(self):
        m = linalg.hermitize(self.matrix)
        tr = float(np.trace(m).real)
        if abs(tr - 1.0) > 1e-12:
            raise ValueError(f"trace must be 1 within 1e-12, got {tr!r}")
        if not linalg.is_psd(m):
            raise ValueError("matrix is not positive semi-definite within tolerance")
        if self.dims is not None:
            d1, d2 = self.dims
            if d1 * d2 != m.shape[0]:
                raise ValueError(f"dims {self.dims} do not factor dimension {m.shape[0]}")
            if min(d1, d2) < 2:
                raise ValueError("bipartite factors must both be >= 2")
        object.__setattr__(self, "matrix", m)

    @property
    def d(self) -> int:
        return self.matrix.shape[0]

    def spectrum(self) -> np.ndarray:
        return linalg.hermitian_eigenvalues(self.matrix)


def sample_ginibre(d: int, s: int, rng: RngStream) -> np.ndarray:
    """d x s matrix of i.i.d. standard complex Gaussians (E |G_ij|^2 = 1)."""
    if d < 1 or s < 1:
        raise ValueError("d and s must be >= 1")
    g = rng.generator()
    re = g.standard_normal((d, s))
    im = g.standard_normal((d, s))
    return (re + 1j * im) / math.sqrt(2.0)


def sample_wishart(d: int, s: int, rng: RngStream) -> np.ndarray:
    """W = GG* for a d x s Ginibre G; PSD by construction, E tr W = d*s."""
    g = sample_ginibre(d, s, rng)
    return linalg.hermitize(g @ g.conj().T)


def centered_normalized(w: np.ndarray, d: int, s: int) -> np.ndarray:
    """Z = sqrt(ds) (W/(ds) - Id/d), the fluctuation of W around its mean."""
    w = np.asarray(w)
    if w.shape != (d, d):
        raise ValueError(f"W must be {d}x{d}, got {w.shape}")
    scale = math.sqrt(d * s)
    return scale * (w / (d * s) - np.eye(d) / d)


def sample_induced_state(d1: int, d2: int, s: int, rng: RngStream) -> DensityMatrix:
    """Random induced state W / tr W on C^(d1*d2), environment dimension s."""
    if d1 < 2 or d2 < 2:
        raise ValueError("bipartite factors must both be >= 2")
    if s < 1:
        raise ValueError("s must be >= 1")
    w = sample_wishart(d1 * d2, s, rng)
    return DensityMatrix(w / np.trace(w).real, dims=(d1, d2))


def uniform_pure_state(dim: int, rng: RngStream) -> np.ndarray:
    """Unit vector uniform on the sphere of C^dim (normalized Ginibre column)."""
    v = sample_ginibre(dim, 1, rng)[:, 0]
    return v / np.linalg.norm(v)


def partial_trace(rho: np.ndarray, d: int, s: int) -> np.ndarray:
    """Trace out the second factor of a (d*s) x (d*s) matrix: sigma_ij = sum_b rho_(ib),(jb)."""
    rho = np.asarray(rho)
    if rho.shape != (d * s, d * s):
        raise ValueError(f"expected a {d * s}x{d * s} matrix, got {rho.shape}")
    return np.einsum("ibjb->ij", rho.reshape(d, s, d, s))


def partial_transpose(rho, dims: tuple[int, int] | None = None) -> np.ndarray:
    """Transpose on the second tensor factor: ((i,a),(j,b)) -> ((i,b),(j,a)).

    Accepts a shaped DensityMatrix, or a plain array with explicit
    dims = (d1, d2). An involution; preserves trace and Hermiticity.
    """
    if isinstance(rho, DensityMatrix):
        if rho.dims is None:
            raise ValueError("density matrix has no bipartite shape; pass dims")
        dims = rho.dims
        m = rho.matrix
    else:
        if dims is None:
            raise ValueError("dims=(d1, d2) required for a plain array")
        m = np.asarray(rho)
    d1, d2 = dims
    if m.shape != (d1 * d2, d1 * d2):
        raise ValueError(f"expected a {d1 * d2}x{d1 * d2} matrix, got {m.shape}")
    out = m.reshape(d1, d2, d1, d2).transpose(0, 3, 2, 1).reshape(d1 * d2, d1 * d2)
    return linalg.hermitize(out)


def is_ppt(rho, dims: tuple[int, int] | None = None, tol: float | None = None) -> bool:
    """Peres-Horodecki test: partial transpose positive semi-definite."""
    return linalg.is_psd(partial_transpose(rho, dims), tol)


def induced_log_density_unnormalized(rho: DensityMatrix, s: float) -> float:
    """log of the unnormalized induced-measure density, (s - d) * log det rho.

    Defined for real s >= d. Singular rho gives the explicit -inf sentinel.
    """
    d = rho.d
    if s < d:
        raise ValueError(f"s must be >= d = {d}, got {s}")
    values = rho.spectrum()
    if values[-1] <= 0.0:
        return -math.inf
    return float((s - d) * np.sum(np.log(values)))
