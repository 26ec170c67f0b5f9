"""Seeded link-level Monte Carlo simulation of the relaying protocol.

Uniform draws come from a Philox counter-based generator. Trials are cut
into fixed blocks of ``BLOCK`` trials; block ``b`` uses the key ``seed``
with counter ``b`` in its top word, so every trial's draws depend only on
``(seed, trial index)``. Estimates are bitwise identical for any worker count.
"""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np

from .analytic import Scheme
from .channel import LinkParams, SecrecyConfig, TrialSnapshot, secrecy_rate
from .errors import DomainError

__all__ = ["BLOCK", "McEstimate", "Simulation", "mc_estimate", "mc_trial", "simulate"]

BLOCK = 1 << 16


@dataclass(frozen=True)
class McEstimate:
    mean: float
    stderr: float
    trials: int
    seed: int


@dataclass(frozen=True)
class Simulation:
    """Per-trial outcomes of one seeded run, shared by every scheme."""

    outage: dict
    decoding_mask: np.ndarray
    seed: int

    @property
    def trials(self) -> int:
        return len(self.decoding_mask)

    def estimate(self, scheme) -> McEstimate:
        return _estimate(int(np.count_nonzero(self.outage[Scheme(scheme)])), self.trials, self.seed)


def _estimate(hits: int, trials: int, seed: int) -> McEstimate:
    p = hits / trials
    return McEstimate(p, math.sqrt(p * (1.0 - p) / trials), trials, seed)


def _rates(links: LinkParams) -> np.ndarray:
    return np.array(
        [links.beta_sd, links.alpha_se, *links.beta_sk, *links.beta_kd, *links.alpha_ke]
    )


def _draw(links, u):
    g = -np.log1p(-u) / _rates(links)
    n = links.n_relays
    return g[:, 0], g[:, 1], g[:, 2 : 2 + n], g[:, 2 + n : 2 + 2 * n], g[:, 2 + 2 * n :]


def _combine(links, cfg, scheme, sd, se, sk, kd, ke):
    """Selected relay (-1 for none) and the combined SNRs at D and E."""
    if links.n_relays == 0:
        return np.full(len(sd), -1), sd, se
    decoded = sk > cfg.gamma_th
    if scheme is Scheme.TS:
        metric = kd
    elif scheme is Scheme.ITS:
        metric = kd * np.asarray(links.alpha_ke)
    else:
        # same expression as secrecy_rate, so per-trial dominance is exact
        metric = (1.0 + (sd[:, None] + kd)) / (1.0 + (se[:, None] + ke))
    # argmax returns the first maximum: ties go to the lowest index
    sel = np.argmax(np.where(decoded, metric, -np.inf), axis=1)
    rows = np.arange(len(sd))
    used = decoded.any(axis=1)
    gm = np.where(used, sd + kd[rows, sel], sd)
    ge = np.where(used, se + ke[rows, sel], se)
    return np.where(used, sel, -1), gm, ge


def _block_uniforms(seed: int, block: int, rows: int, width: int) -> np.ndarray:
    bitgen = np.random.Philox(key=seed, counter=[0, 0, 0, block])
    return np.random.Generator(bitgen).random((rows, width))


def _run_block(links, cfg, schemes, seed, block, rows):
    u = _block_uniforms(seed, block, rows, 2 + 3 * links.n_relays)
    sd, se, sk, kd, ke = _draw(links, u)
    mask = (sk > cfg.gamma_th) @ (1 << np.arange(links.n_relays, dtype=np.int64))
    out = {}
    for sch in schemes:
        _, gm, ge = _combine(links, cfg, sch, sd, se, sk, kd, ke)
        out[sch] = secrecy_rate(gm, ge) < cfg.rate_rs
    return out, mask


def _check(trials, seed):
    if trials < 1:
        raise DomainError(f"trials must be >= 1, got {trials}")
    if seed < 0:
        raise DomainError(f"seed must be a nonnegative integer, got {seed}")


def _blocks(trials):
    return [(b, min(BLOCK, trials - b * BLOCK)) for b in range(-(-trials // BLOCK))]


def simulate(
    links: LinkParams,
    cfg: SecrecyConfig,
    trials: int,
    seed: int,
    schemes=tuple(Scheme),
    workers: int | None = None,
) -> Simulation:
    """Run ``trials`` transmissions, evaluating every scheme on the same draws."""
    _check(trials, seed)
    schemes = tuple(Scheme(s) for s in schemes)
    job = lambda bk: _run_block(links, cfg, schemes, seed, *bk)
    if workers and workers > 1:
        with ThreadPoolExecutor(workers) as pool:
            parts = list(pool.map(job, _blocks(trials)))
    else:
        parts = [job(bk) for bk in _blocks(trials)]
    outage = {s: np.concatenate([p[0][s] for p in parts]) for s in schemes}
    mask = np.concatenate([p[1] for p in parts])
    return Simulation(outage, mask, seed)


def mc_estimate(
    links: LinkParams,
    cfg: SecrecyConfig,
    scheme,
    trials: int,
    seed: int,
    workers: int | None = None,
) -> McEstimate:
    """Monte Carlo outage estimate with its normal-approximation standard error."""
    return simulate(links, cfg, trials, seed, (scheme,), workers).estimate(scheme)


def mc_trial(links: LinkParams, cfg: SecrecyConfig, scheme, rng: np.random.Generator):
    """Simulate one transmission; returns ``(outage, snapshot)``."""
    scheme = Scheme(scheme)
    u = rng.random((1, 2 + 3 * links.n_relays))
    sd, se, sk, kd, ke = _draw(links, u)
    sel, gm, ge = _combine(links, cfg, scheme, sd, se, sk, kd, ke)
    snap = TrialSnapshot(
        float(sd[0]), float(se[0]),
        tuple(sk[0].tolist()), tuple(kd[0].tolist()), tuple(ke[0].tolist()),
        float(gm[0]), float(ge[0]),
        None if sel[0] < 0 else int(sel[0]),
    )
    return bool(secrecy_rate(snap) < cfg.rate_rs), snap
