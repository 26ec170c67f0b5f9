"""Secrecy outage of threshold decode-and-forward relay selection.

Closed forms live in :mod:`relaysec.analytic`; :mod:`relaysec.montecarlo`
and :mod:`relaysec.quadrature` are independent checks of them.
"""

from .analytic import (
    DecodingSet,
    OutageResult,
    Scheme,
    outage_empty_set,
    outage_its_set,
    outage_os_set,
    outage_single_relay,
    outage_ts_set,
    prob_decoding_set,
    secrecy_outage,
)
from .channel import LinkParams, SecrecyConfig, TrialSnapshot, db_to_mean, rho_from_rate, secrecy_rate
from .distributions import hypoexp_coeffs, max_pdf_terms
from .errors import CapacityError, ConfigError, DomainError, QuadratureError
from .montecarlo import McEstimate, mc_estimate, mc_trial, simulate
from .quadrature import QuadratureRequest, quad_eval

__version__ = "0.1.0"
