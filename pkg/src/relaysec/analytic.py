"""Closed-form secrecy outage probability for threshold decode-and-forward relaying.

The outage probability is assembled over every decoding set ``S`` (the
relays whose source link clears the threshold)::

    P_out = sum_S P[S] * P_out(S)

``P_out(S)`` depends on the selection rule:

* ``TS`` picks the relay with the strongest relay-destination SNR,
* ``ITS`` weights that SNR by the eavesdropper-link rate ``alpha_ke``,
* ``OS`` picks the relay maximising the instantaneous secrecy rate.

Both destination and eavesdropper combine the direct and relayed copies by
MRC, so outage with relay ``k`` means ``g_sd + g_kd < rho*(1 + g_se + g_ke) - 1``.
Relay indices are zero-based positions in :class:`~relaysec.channel.LinkParams`.
"""

from __future__ import annotations

import enum
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from itertools import combinations
from typing import Iterator

import numpy as np

from .channel import LinkParams, SecrecyConfig
from .distributions import hypoexp_coeffs, max_pdf_terms, separate
from .errors import CapacityError, DomainError

__all__ = [
    "MAX_RELAYS",
    "DecodingSet",
    "OutageResult",
    "Scheme",
    "all_decoding_sets",
    "its_integrals",
    "os_integrals",
    "outage_empty_set",
    "outage_its_set",
    "outage_os_set",
    "outage_single_relay",
    "outage_ts_set",
    "prob_decoding_set",
    "secrecy_outage",
    "set_outage",
    "ts_integrals",
]

MAX_RELAYS = 20


class Scheme(str, enum.Enum):
    TS = "TS"
    ITS = "ITS"
    OS = "OS"


@dataclass(frozen=True, order=True)
class DecodingSet:
    """Relays that decoded (``members``) and those that did not (``complement``)."""

    members: tuple[int, ...]
    complement: tuple[int, ...]

    def __post_init__(self):
        object.__setattr__(self, "members", tuple(sorted(int(i) for i in self.members)))
        object.__setattr__(self, "complement", tuple(sorted(int(i) for i in self.complement)))
        union = set(self.members) | set(self.complement)
        if set(self.members) & set(self.complement) or union != set(range(len(union))):
            raise DomainError(f"not a partition of relay indices: {self.members} / {self.complement}")

    @classmethod
    def from_members(cls, members, n_relays: int) -> "DecodingSet":
        members = tuple(sorted(members))
        if any(not 0 <= i < n_relays for i in members) or len(set(members)) != len(members):
            raise DomainError(f"invalid members {members} for {n_relays} relays")
        return cls(members, tuple(i for i in range(n_relays) if i not in members))

    @classmethod
    def from_mask(cls, mask: int, n_relays: int) -> "DecodingSet":
        return cls.from_members([i for i in range(n_relays) if mask >> i & 1], n_relays)

    @property
    def mask(self) -> int:
        """Canonical integer encoding, bit ``i`` set when relay ``i`` decoded."""
        return sum(1 << i for i in self.members)

    @property
    def size(self) -> int:
        return len(self.members)

    @property
    def n_relays(self) -> int:
        return len(self.members) + len(self.complement)


def all_decoding_sets(n_relays: int) -> Iterator[DecodingSet]:
    """All ``2**n_relays`` decoding sets in canonical (mask) order."""
    for mask in range(1 << n_relays):
        yield DecodingSet.from_mask(mask, n_relays)


@dataclass(frozen=True)
class OutageResult:
    """Total outage with its decomposition ``{set: (P[S], P_out(S))}``."""

    total: float
    per_set: dict
    scheme: Scheme | None = None


def _check_set(links: LinkParams, s: DecodingSet):
    if s.n_relays != links.n_relays:
        raise DomainError(f"decoding set covers {s.n_relays} relays, links have {links.n_relays}")


def prob_decoding_set(links: LinkParams, cfg: SecrecyConfig, s: DecodingSet) -> float:
    """Probability that exactly the relays in ``s`` clear the decoding threshold."""
    _check_set(links, s)
    p = 1.0
    for k in s.members:
        p *= math.exp(-links.beta_sk[k] * cfg.gamma_th)
    for j in s.complement:
        p *= -math.expm1(-links.beta_sk[j] * cfg.gamma_th)
    return p


def outage_empty_set(links: LinkParams, cfg: SecrecyConfig) -> float:
    """Outage when no relay decodes and only the direct links carry the message."""
    rho, bsd, ase = cfg.rho, links.beta_sd, links.alpha_se
    return 1.0 - ase * math.exp(-bsd * (rho - 1.0)) / (rho * bsd + ase)


def outage_single_relay(links: LinkParams, cfg: SecrecyConfig, k: int) -> float:
    """Outage when relay ``k`` is the only candidate.

    Both ``g_sd + g_kd`` and ``g_se + g_ke`` are hypoexponential; averaging the
    CDF of the first over the second gives two exponential terms.
    """
    rho, bsd, ase = cfg.rho, links.beta_sd, links.alpha_se
    bkd, ake = links.beta_kd[k], links.alpha_ke[k]
    bkd = separate(bkd, bsd)
    c = rho - 1.0
    num = ake * ase
    t_kd = bsd * num * math.exp(-bkd * c) / ((bsd - bkd) * (rho * bkd + ake) * (rho * bkd + ase))
    t_sd = bkd * num * math.exp(-bsd * c) / ((bkd - bsd) * (rho * bsd + ake) * (rho * bsd + ase))
    return 1.0 - t_kd - t_sd


def _window(rate: float, bsd: float, c: float) -> float:
    """``int_0^c exp(-bsd*z) * exp(-rate*(c - z)) dz`` without cancellation."""
    rate = separate(rate, bsd)
    lo, hi = min(rate, bsd), max(rate, bsd)
    return math.exp(-lo * c) * -math.expm1(-(hi - lo) * c) / (hi - lo)


def _selection_integrals(links, cfg, k, other_weights, scale):
    """Joint probability that relay ``k`` wins the selection and is in outage.

    Relay ``k`` wins when ``scale * g_kd`` exceeds the maximum of the other
    candidates' metrics, exponentials with rates ``other_weights``. The result
    is split at ``g_sd = rho - 1``: above it (first value) the eavesdropper sum
    is bounded below, below it (second value) it is unrestricted.
    """
    rho, bsd, ase = cfg.rho, links.beta_sd, links.alpha_se
    bkd, ake = links.beta_kd[k], links.alpha_ke[k]
    c = rho - 1.0
    e_sd = math.exp(-bsd * c)
    fx = hypoexp_coeffs(ase, ake)
    pairs = ((fx.b1, fx.lambda1), (fx.b2, fx.lambda2))
    win_kd = _window(bkd, bsd, c)

    upper = lower = 0.0
    for sign, rate, _ in max_pdf_terms(other_weights).terms:
        b = scale * rate
        a = b + bkd
        win_a = _window(a, bsd, c)
        for coef, alpha in pairs:
            upper += sign * coef * bsd * e_sd / (alpha / rho + bsd) * (
                b / (alpha * a) + bkd / (a * (rho * a + alpha)) - 1.0 / (rho * bkd + alpha)
            )
            lower += sign * coef * (
                b * -math.expm1(-bsd * c) / (alpha * a)
                - bsd * win_kd / (rho * bkd + alpha)
                + bsd * bkd * win_a / (a * (rho * a + alpha))
            )
    return upper, lower


def _require_pair(links, cfg, s, k):
    _check_set(links, s)
    if s.size < 2:
        raise DomainError(f"selection integrals need at least two decoding relays, got {s.members}")
    if k not in s.members:
        raise DomainError(f"relay {k} is not in the decoding set {s.members}")


def ts_integrals(links: LinkParams, cfg: SecrecyConfig, s: DecodingSet, k: int) -> tuple[float, float]:
    """Traditional selection: the two halves of ``P[relay k selected, outage]``."""
    _require_pair(links, cfg, s, k)
    others = [links.beta_kd[i] for i in s.members if i != k]
    return _selection_integrals(links, cfg, k, others, 1.0)


def its_integrals(links: LinkParams, cfg: SecrecyConfig, s: DecodingSet, k: int) -> tuple[float, float]:
    """Improved traditional selection, metric ``g_kd * alpha_ke``."""
    _require_pair(links, cfg, s, k)
    others = [links.beta_kd[i] / links.alpha_ke[i] for i in s.members if i != k]
    return _selection_integrals(links, cfg, k, others, links.alpha_ke[k])


def os_integrals(links: LinkParams, cfg: SecrecyConfig, s: DecodingSet) -> tuple[float, float]:
    """Optimal selection outage split at ``g_sd = rho*(1 + g_se) - 1``.

    The first value covers the region where the direct link alone would be
    secure, the second the region where it would not.
    """
    _check_set(links, s)
    if s.size < 1:
        raise DomainError("optimal selection needs a nonempty decoding set")
    rho, bsd, ase = cfg.rho, links.beta_sd, links.alpha_se
    c = rho - 1.0
    e_sd = math.exp(-bsd * c)
    bkd = [links.beta_kd[k] for k in s.members]
    ake = [links.alpha_ke[k] for k in s.members]

    prod = math.prod(rho * b / (rho * b + a) for b, a in zip(bkd, ake))
    i_upper = bsd * ase * e_sd / ((sum(ake) / rho + bsd) * (rho * bsd + ase)) * prod

    # c_k = A_k * exp(beta_kd * (rho - 1)), kept apart to avoid overflow
    ck = [a / (rho * b + a) for b, a in zip(bkd, ake)]
    i_lower = 1.0 - ase * e_sd / (rho * bsd + ase)
    for m in range(1, len(bkd) + 1):
        acc = 0.0
        for idx in combinations(range(len(bkd)), m):
            bm = separate(sum(bkd[i] for i in idx), bsd)
            cm = math.prod(ck[i] for i in idx)
            acc += cm * bsd * ase / (bm - bsd) * (
                e_sd / (rho * bsd + ase) - math.exp(-bm * c) / (rho * bm + ase)
            )
        i_lower += (-1) ** m * acc
    return i_upper, i_lower


def _clip(p: float) -> float:
    return min(1.0, max(0.0, p))


def outage_ts_set(links: LinkParams, cfg: SecrecyConfig, s: DecodingSet) -> float:
    return _clip(sum(sum(ts_integrals(links, cfg, s, k)) for k in s.members))


def outage_its_set(links: LinkParams, cfg: SecrecyConfig, s: DecodingSet) -> float:
    return _clip(sum(sum(its_integrals(links, cfg, s, k)) for k in s.members))


def outage_os_set(links: LinkParams, cfg: SecrecyConfig, s: DecodingSet) -> float:
    return _clip(sum(os_integrals(links, cfg, s)))


_SET_RULES = {Scheme.TS: outage_ts_set, Scheme.ITS: outage_its_set, Scheme.OS: outage_os_set}


def set_outage(links: LinkParams, cfg: SecrecyConfig, s: DecodingSet, scheme) -> float:
    """Conditional outage given decoding set ``s``, routing trivial sets directly."""
    _check_set(links, s)
    if s.size == 0:
        return _clip(outage_empty_set(links, cfg))
    if s.size == 1:
        return _clip(outage_single_relay(links, cfg, s.members[0]))
    return _SET_RULES[Scheme(scheme)](links, cfg, s)


def secrecy_outage(
    links: LinkParams, cfg: SecrecyConfig, scheme, workers: int | None = None
) -> OutageResult:
    """Total secrecy outage probability under ``scheme``.

    All ``2**N`` decoding sets are enumerated exactly; ``workers`` spreads the
    per-set work over threads without changing the summation order.
    """
    scheme = Scheme(scheme)
    n = links.n_relays
    if n > MAX_RELAYS:
        raise CapacityError(f"{n} relays exceeds the exact-enumeration limit of {MAX_RELAYS}")
    sets = list(all_decoding_sets(n))

    def one(s):
        return prob_decoding_set(links, cfg, s), set_outage(links, cfg, s, scheme)

    if workers and workers > 1:
        with ThreadPoolExecutor(workers) as pool:
            parts = list(pool.map(one, sets))
    else:
        parts = [one(s) for s in sets]
    total = 0.0
    for p_set, p_out in parts:
        total += p_set * p_out
    return OutageResult(_clip(total), dict(zip(sets, parts)), scheme)
