"""Haar-unitary norm experiment: sample independent unitaries, apply
T = a * sum_i (U_i (x) I + I (x) V_i) matrix-free, and estimate its 2-norm
by power iteration on T*T.

The mean over trials approximates the reciprocal radius the bounds module
predicts; the classical strong-convergence limit for s independent pairs
is 2 sqrt(2s-1) at a=1, with s=1 the commuting control where the norm is
exactly 2 (the two legs share no interaction).
"""

from __future__ import annotations

import math
import statistics
from dataclasses import dataclass

import numpy as np

from . import rng


@dataclass(frozen=True)
class SpectralConfig:
    s: int
    N: int
    a: float = 1.0
    trials: int = 4
    seed: int = 0
    power_tol: float = 1e-6
    max_iters: int = 5000

    def __post_init__(self):
        if self.s < 1:
            raise ValueError("s must be >= 1")
        if self.N < 2:
            raise ValueError("N must be >= 2")
        if self.trials < 1:
            raise ValueError("trials must be >= 1")


@dataclass(frozen=True)
class TensorOperands:
    """The a-scaled two-leg operands: left factors U_i, right factors V_i."""

    a: float
    left: tuple[np.ndarray, ...]
    right: tuple[np.ndarray, ...]

    def __post_init__(self):
        if len(self.left) != len(self.right):
            raise ValueError("need as many left as right operands")
        n = self.left[0].shape[0]
        for m in self.left + self.right:
            if m.shape != (n, n):
                raise ValueError("operands must share a square shape")

    @property
    def dim(self) -> int:
        return self.left[0].shape[0]

    def adjoint(self) -> "TensorOperands":
        return TensorOperands(
            a=self.a,
            left=tuple(u.conj().T for u in self.left),
            right=tuple(v.conj().T for v in self.right),
        )


def haar_unitary(N: int, gen: np.random.Generator) -> np.ndarray:
    """Haar sample: complex Ginibre, QR, then fix the R-diagonal phases."""
    if N < 1:
        raise ValueError("N must be >= 1")
    ginibre = rng.standard_complex_normal(gen, (N, N))
    q, r = np.linalg.qr(ginibre)
    d = np.diagonal(r)
    return q * (d / np.abs(d))


def apply_T(v: np.ndarray, operands: TensorOperands) -> np.ndarray:
    """Row-major matrix-free product: (U (x) I)v = U M, (I (x) V)v = M V^T
    for v reshaped to the N x N matrix M."""
    n = operands.dim
    if v.shape != (n * n,):
        raise ValueError(f"vector must have length {n * n}")
    m = v.reshape(n, n)
    out = np.zeros_like(m)
    for u, w in zip(operands.left, operands.right):
        out += u @ m
        out += m @ w.T
    return (operands.a * out).reshape(-1)


def two_norm(
    operands: TensorOperands,
    tol: float = 1e-6,
    max_iters: int = 5000,
    gen: np.random.Generator | None = None,
) -> tuple[float, int, bool]:
    """Largest singular value of T by power iteration on T*T.

    Returns (estimate, iterations, converged); convergence means two
    successive Rayleigh-quotient square roots within tol relative.
    """
    gen = gen or np.random.default_rng(0)
    n2 = operands.dim ** 2
    adj = operands.adjoint()
    v = rng.standard_complex_normal(gen, n2)
    v /= np.linalg.norm(v)
    sigma = 0.0
    for it in range(1, max_iters + 1):
        w = apply_T(v, operands)
        new_sigma = float(np.linalg.norm(w))
        v = apply_T(w, adj)
        norm_v = np.linalg.norm(v)
        if norm_v == 0:
            return 0.0, it, True
        v /= norm_v
        if it > 1 and abs(new_sigma - sigma) <= tol * max(new_sigma, 1e-300):
            return new_sigma, it, True
        sigma = new_sigma
    return sigma, max_iters, False


@dataclass(frozen=True)
class NormEstimate:
    config: SpectralConfig
    norms: tuple[float, ...]
    iterations: tuple[int, ...]
    converged: tuple[bool, ...]

    @property
    def mean(self) -> float:
        return statistics.fmean(self.norms)

    @property
    def std(self) -> float:
        if len(self.norms) < 2:
            return 0.0
        return statistics.stdev(self.norms)

    @property
    def all_converged(self) -> bool:
        return all(self.converged)


def estimate_z_inverse(config: SpectralConfig) -> NormEstimate:
    """Sample `trials` independent operand sets and average their norms.

    Each trial draws 2s Haar unitaries and a start vector from its own
    derived stream, so trial k is reproducible in isolation.  Every norm
    is checked against the triangle-inequality ceiling 2 s a.
    """
    norms, iters, flags = [], [], []
    ceiling = 2.0 * config.s * config.a
    for trial in range(config.trials):
        gen = rng.philox(config.seed, 0x5EC7, trial)
        left = tuple(haar_unitary(config.N, gen) for _ in range(config.s))
        right = tuple(haar_unitary(config.N, gen) for _ in range(config.s))
        operands = TensorOperands(a=config.a, left=left, right=right)
        sigma, it, ok = two_norm(
            operands, tol=config.power_tol, max_iters=config.max_iters, gen=gen
        )
        if sigma > ceiling * (1.0 + 1e-9):
            raise RuntimeError(
                f"trial {trial}: norm {sigma} exceeds the ceiling {ceiling}"
            )
        norms.append(sigma)
        iters.append(it)
        flags.append(ok)
    return NormEstimate(
        config=config,
        norms=tuple(norms),
        iterations=tuple(iters),
        converged=tuple(flags),
    )


def free_limit(s: int, a: float = 1.0) -> float:
    """The strong-convergence prediction 2 a sqrt(2s-1), with the commuting
    s=1 exception where the exact value is 2a."""
    if s == 1:
        return 2.0 * a
    return 2.0 * a * math.sqrt(2.0 * s - 1.0)


def write_spectral_csv(estimate: NormEstimate, stream) -> None:
    cfg = estimate.config
    stream.write("s,N,a,trial,norm,iterations,converged\n")
    for trial, (norm, it, ok) in enumerate(
        zip(estimate.norms, estimate.iterations, estimate.converged)
    ):
        stream.write(
            f"{cfg.s},{cfg.N},{cfg.a:.12g},{trial},{norm:.12g},{it},{int(ok)}\n"
        )


def spectral_summary(estimate: NormEstimate) -> dict:
    cfg = estimate.config
    return {
        "s": cfg.s,
        "N": cfg.N,
        "a": cfg.a,
        "trials": cfg.trials,
        "seed": cfg.seed,
        "mean": estimate.mean,
        "std": estimate.std,
        "all_converged": estimate.all_converged,
        "free_limit": free_limit(cfg.s, cfg.a),
    }
