"""Seeded random weights and structured members.

Each sample is a deterministic function of a latent Gaussian vector plus a few discrete
parameters, so local search can perturb the latent vector and rebuild the matrix.
Randomness comes from counter-based Philox streams keyed by (seed, stream index).
"""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import NotDiagonalError, UnsatisfiableEnsembleError
from .weighted import Weight, make_weight

KINDS = (
    "general-member",
    "a-self-adjoint",
    "nilpotent-ax2-zero",
    "commutative-diagonal",
    "a-positive",
)

WEIGHT_SPECTRUM = (0.2, 5.0)


@dataclass(frozen=True)
class EnsembleConfig:
    seed: int
    dim: int
    weight_rank: int
    kind: str
    scale: float = 1.0

    def __post_init__(self):
        if self.kind not in KINDS:
            raise ValueError(f"unknown ensemble kind {self.kind!r}")
        if not 1 <= self.dim <= 8:
            raise ValueError("dim must lie in 1..8")
        if not 0 <= self.weight_rank <= self.dim:
            raise ValueError("weight_rank must lie in 0..dim")
        if self.kind == "nilpotent-ax2-zero" and self.weight_rank < 2:
            raise UnsatisfiableEnsembleError("a nonzero square-zero compression needs weight rank >= 2")
        if not self.scale > 0:
            raise ValueError("scale must be positive")

    def as_dict(self) -> dict:
        return {"seed": self.seed, "dim": self.dim, "weight_rank": self.weight_rank, "kind": self.kind, "scale": self.scale}


def rng_for(seed: int, *stream: int) -> np.random.Generator:
    """Independent generator for (seed, *stream); same key gives the same draws."""
    ss = np.random.SeedSequence(entropy=int(seed), spawn_key=tuple(int(s) for s in stream))
    return np.random.Generator(np.random.Philox(ss))


def derive_seed(*parts: int) -> int:
    return int(np.random.SeedSequence([int(p) for p in parts]).generate_state(1, np.uint32)[0])


def _cgauss(z: np.ndarray, shape) -> np.ndarray:
    # consumes 2 * prod(shape) reals
    k = int(np.prod(shape))
    return ((z[:k] + 1j * z[k:2 * k]) / np.sqrt(2.0)).reshape(shape)


def haar_unitary(rng: np.random.Generator, n: int) -> np.ndarray:
    g = (rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))) / np.sqrt(2.0)
    q, r = np.linalg.qr(g)
    d = np.diag(r)
    return q * (d / np.abs(d))


def sample_weight(config: EnsembleConfig) -> Weight:
    rng = rng_for(config.seed, 0)
    n, r = config.dim, config.weight_rank
    lo, hi = np.log(WEIGHT_SPECTRUM[0]), np.log(WEIGHT_SPECTRUM[1])
    lam = np.zeros(n)
    lam[:r] = np.exp(rng.uniform(lo, hi, size=r))
    if config.kind == "commutative-diagonal":
        A = np.diag(lam[rng.permutation(n)]).astype(complex)
    else:
        U = haar_unitary(rng, n)
        A = (U * lam) @ U.conj().T
        A = 0.5 * (A + A.conj().T)
    return make_weight(A)


@dataclass(frozen=True)
class Latent:
    kind: str
    z: np.ndarray = field(repr=False)
    k: int = 0  # discrete parameter: square-zero block size for the nilpotent kind


def latent_size(kind: str, n: int, r: int) -> int:
    m = n - r
    tail = 2 * (m * r + m * m)
    if kind == "commutative-diagonal":
        return 2 * n
    if kind == "nilpotent-ax2-zero":
        return 2 * (2 * r * r + r * r) + tail
    return 2 * r * r + tail


def draw_latent(config: EnsembleConfig, W: Weight, stream: int = 1) -> Latent:
    rng = rng_for(config.seed, stream)
    z = rng.standard_normal(latent_size(config.kind, W.n, W.rank))
    k = int(rng.integers(1, W.rank // 2 + 1)) if config.kind == "nilpotent-ax2-zero" else 0
    return Latent(config.kind, z, k)


def _orthonormal(z: np.ndarray, r: int, k: int) -> np.ndarray:
    q, _ = np.linalg.qr(_cgauss(z, (r, k)))
    return q


def build(W: Weight, latent: Latent, scale: float = 1.0) -> np.ndarray:
    """Matrix of the given kind assembled from a latent vector (see module docstring)."""
    n, r = W.n, W.rank
    m = n - r
    z = latent.z
    if latent.kind == "commutative-diagonal":
        if not W.is_diagonal:
            raise NotDiagonalError("commutative-diagonal samples need a diagonal weight")
        return scale * np.diag(_cgauss(z, (n,)))
    if latent.kind == "nilpotent-ax2-zero" and r < 2:
        raise UnsatisfiableEnsembleError("a nonzero square-zero compression needs weight rank >= 2")
    lam = W.spectrum
    if latent.kind == "general-member":
        head = _cgauss(z, (r, r))
        used = 2 * r * r
    elif latent.kind in ("a-self-adjoint", "a-positive"):
        g = _cgauss(z, (r, r))
        h = 0.5 * (g + g.conj().T) if latent.kind == "a-self-adjoint" else g @ g.conj().T / max(r, 1)
        head = h / lam[:, None]
        used = 2 * r * r
    else:
        k = latent.k
        frame = _orthonormal(z, r, 2 * k)
        S, T = frame[:, :k], frame[:, k:]
        C = _cgauss(z[4 * r * r:], (k, k))
        N = T @ C @ S.conj().T
        root = np.sqrt(lam)
        head = N * (root[None, :] / root[:, None])
        used = 2 * (2 * r * r + r * r)
    rest = z[used:]
    lower = _cgauss(rest, (m, r))
    corner = _cgauss(rest[2 * m * r:], (m, m))
    block = np.zeros((n, n), dtype=complex)
    block[:r, :r] = head
    block[r:, :r] = lower
    block[r:, r:] = corner
    U = np.hstack([W.basis, W.kernel_basis])
    return scale * (U @ block @ U.conj().T)


def sample(config: EnsembleConfig, W: Weight, stream: int = 1) -> np.ndarray:
    """One member of the configured kind. Streams >= 1 give independent draws."""
    if stream < 1:
        raise ValueError("stream 0 is reserved for the weight")
    return build(W, draw_latent(config, W, stream), config.scale)
