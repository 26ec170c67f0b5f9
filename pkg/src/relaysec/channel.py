"""Link parameters, unit conversion and the secrecy-rate primitives.

Every link SNR is exponentially distributed (Rayleigh fading). Internally a
link is described by its *rate*, the reciprocal of its mean SNR; public
constructors take mean SNRs in dB and convert exactly once.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from .errors import DomainError

__all__ = [
    "LinkParams",
    "SecrecyConfig",
    "TrialSnapshot",
    "db_to_mean",
    "rho_from_rate",
    "secrecy_rate",
]


def db_to_mean(x_db: float) -> float:
    """Convert a mean SNR in dB to linear scale."""
    return 10.0 ** (x_db / 10.0)


def rho_from_rate(rate_rs: float) -> float:
    """Return ``2**(2 * rate_rs)``, the SNR ratio matching a target secrecy rate."""
    if not rate_rs >= 0.0:
        raise DomainError(f"secrecy rate must be >= 0, got {rate_rs!r}")
    return 2.0 ** (2.0 * rate_rs)


def _check_rate(name: str, value: float) -> float:
    value = float(value)
    if not (value > 0.0 and math.isfinite(value)):
        raise DomainError(f"{name} must be positive and finite, got {value!r}")
    return value


@dataclass(frozen=True)
class LinkParams:
    """Exponential rates of every link in the network.

    ``beta_sd`` and ``alpha_se`` describe the direct source-destination and
    source-eavesdropper links. The per-relay tuples hold source-relay,
    relay-destination and relay-eavesdropper rates, indexed by relay.
    """

    beta_sd: float
    alpha_se: float
    beta_sk: tuple[float, ...] = ()
    beta_kd: tuple[float, ...] = ()
    alpha_ke: tuple[float, ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "beta_sd", _check_rate("beta_sd", self.beta_sd))
        object.__setattr__(self, "alpha_se", _check_rate("alpha_se", self.alpha_se))
        for name in ("beta_sk", "beta_kd", "alpha_ke"):
            vals = tuple(_check_rate(f"{name}[{i}]", v) for i, v in enumerate(getattr(self, name)))
            object.__setattr__(self, name, vals)
        if not len(self.beta_sk) == len(self.beta_kd) == len(self.alpha_ke):
            raise DomainError(
                "per-relay lists differ in length: "
                f"{len(self.beta_sk)}, {len(self.beta_kd)}, {len(self.alpha_ke)}"
            )

    @property
    def n_relays(self) -> int:
        return len(self.beta_sk)

    @classmethod
    def from_db(
        cls,
        sd_db: float,
        se_db: float,
        sk_db: Sequence[float] = (),
        kd_db: Sequence[float] = (),
        ke_db: Sequence[float] = (),
    ) -> "LinkParams":
        """Build from mean link SNRs in dB (rates are the reciprocal means)."""
        inv = lambda x: 1.0 / db_to_mean(x)
        return cls(
            beta_sd=inv(sd_db),
            alpha_se=inv(se_db),
            beta_sk=tuple(inv(x) for x in sk_db),
            beta_kd=tuple(inv(x) for x in kd_db),
            alpha_ke=tuple(inv(x) for x in ke_db),
        )

    def subset(self, relays: Sequence[int]) -> "LinkParams":
        """Keep only the listed relays, in the given order."""
        return LinkParams(
            self.beta_sd,
            self.alpha_se,
            tuple(self.beta_sk[i] for i in relays),
            tuple(self.beta_kd[i] for i in relays),
            tuple(self.alpha_ke[i] for i in relays),
        )


@dataclass(frozen=True)
class SecrecyConfig:
    """Target secrecy rate (bpcu) and relay decoding threshold (linear SNR)."""

    rate_rs: float
    gamma_th: float = 0.0
    rho: float = field(init=False)

    def __post_init__(self):
        object.__setattr__(self, "rho", rho_from_rate(self.rate_rs))
        if not (self.gamma_th >= 0.0):
            raise DomainError(f"gamma_th must be >= 0, got {self.gamma_th!r}")

    @classmethod
    def from_db(cls, rate_rs: float, gamma_th_db: float) -> "SecrecyConfig":
        return cls(rate_rs=rate_rs, gamma_th=db_to_mean(gamma_th_db))


@dataclass(frozen=True)
class TrialSnapshot:
    """Realized SNRs of one simulated transmission."""

    gamma_sd: float
    gamma_se: float
    gamma_sk: tuple[float, ...]
    gamma_kd: tuple[float, ...]
    gamma_ke: tuple[float, ...]
    gamma_m: float
    gamma_e: float
    selected: int | None = None


def secrecy_rate(gamma_m, gamma_e=None):
    """Achievable two-slot secrecy rate ``max(0, log2((1+gM)/(1+gE)) / 2)``.

    Accepts either a :class:`TrialSnapshot` or the two SNRs (scalars or arrays).
    """
    if isinstance(gamma_m, TrialSnapshot):
        gamma_m, gamma_e = gamma_m.gamma_m, gamma_m.gamma_e
    r = 0.5 * np.log2(np.divide(np.add(1.0, gamma_m), np.add(1.0, gamma_e)))
    r = np.maximum(r, 0.0)
    return float(r) if np.ndim(r) == 0 else r
