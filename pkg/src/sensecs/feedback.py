"""Downlink pilots, the user's received signal, and RVQ limited feedback.

The BS and CU share the random codebook by construction seed, so quantizing
at the CU and looking the codeword up at the BS use identical matrices. The
BS-side reconstruction is the unit-norm codeword itself; downstream rate
metrics are invariant to the unknown complex scale, which is why no gain
feedback is needed.
"""

from dataclasses import dataclass

import numpy as np


@dataclass(eq=False)
class PilotMatrix:
    """K x N pilot block; row t is the transmit vector of symbol t."""

    entries: np.ndarray
    per_symbol_power: float

    @property
    def n_symbols(self) -> int:
        return self.entries.shape[0]

    @property
    def n_antennas(self) -> int:
        return self.entries.shape[1]


@dataclass(eq=False)
class RvqCodebook:
    """K x 2^B matrix of i.i.d. isotropic unit-norm codewords."""

    codewords: np.ndarray
    bits: int
    seed: int

    @property
    def size(self) -> int:
        return self.codewords.shape[1]


@dataclass(frozen=True)
class FeedbackWord:
    """Index of the selected codeword, in [0, 2^B)."""

    index: int

    def __post_init__(self):
        if self.index < 0:
            raise ValueError("feedback index must be nonnegative")


def _cscg(rng, shape):
    """Circularly-symmetric complex Gaussian, unit per-entry variance."""
    return (rng.standard_normal(shape) + 1j * rng.standard_normal(shape)) / np.sqrt(2.0)


def draw_pilots(k: int, n: int, power: float, rng) -> PilotMatrix:
    """i.i.d. CSCG pilot rows, each rescaled to squared norm = power."""
    if k < 1 or n < 1:
        raise ValueError("pilot dimensions must be >= 1")
    if power <= 0:
        raise ValueError("per-symbol power must be > 0")
    x = _cscg(rng, (k, n))
    x *= np.sqrt(power) / np.linalg.norm(x, axis=1, keepdims=True)
    return PilotMatrix(entries=x, per_symbol_power=float(power))


def receive_pilots(pilots: PilotMatrix, h: np.ndarray, sigma_c2: float, rng) -> np.ndarray:
    """CU-side received pilots y = X_p h + z, z CSCG with per-entry variance sigma_c2."""
    h = np.asarray(h)
    if h.shape != (pilots.n_antennas,):
        raise ValueError(f"channel length {h.shape} does not match {pilots.n_antennas} antennas")
    if sigma_c2 < 0:
        raise ValueError("noise power must be >= 0")
    y = pilots.entries @ h
    if sigma_c2 > 0:
        y = y + np.sqrt(sigma_c2) * _cscg(rng, pilots.n_symbols)
    return y


def rvq_build(k: int, bits: int, seed: int, max_bits: int = 24) -> RvqCodebook:
    """Construct the shared B-bit RVQ codebook from its seed."""
    if bits < 1:
        raise ValueError("need at least 1 feedback bit")
    if k < 1:
        raise ValueError("codeword length must be >= 1")
    if bits > max_bits:
        raise ValueError(f"codebook with {bits} bits exceeds the {max_bits}-bit capacity cap")
    rng = np.random.default_rng(seed)
    c = _cscg(rng, (k, 2**bits))
    c /= np.linalg.norm(c, axis=0, keepdims=True)
    return RvqCodebook(codewords=c, bits=bits, seed=seed)


def rvq_quantize(y: np.ndarray, cb: RvqCodebook) -> FeedbackWord:
    """Best codeword index, argmax_b |(y/||y||)^H c_b|^2; ties go to the lowest index."""
    y = np.asarray(y)
    norm = np.linalg.norm(y)
    if norm == 0:
        raise ValueError("cannot quantize the zero vector")
    scores = np.abs(cb.codewords.conj().T @ (y / norm)) ** 2
    return FeedbackWord(index=int(np.argmax(scores)))


def rvq_lookup(word: FeedbackWord, cb: RvqCodebook) -> np.ndarray:
    """BS-side reconstruction: the unit-norm codeword selected by the CU."""
    if not 0 <= word.index < cb.size:
        raise IndexError(f"feedback index {word.index} outside codebook of size {cb.size}")
    return cb.codewords[:, word.index]


def perfect_feedback(y: np.ndarray) -> np.ndarray:
    """Idealized infinite-rate feedback: the received vector itself."""
    return np.asarray(y)
