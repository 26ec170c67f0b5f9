"""Direct numerical evaluation of the outage integrals.

Each quantity is written as the multiple integral over the link SNRs that
defines it. The innermost one or two exponential integrals have elementary
antiderivatives and are done by hand; the remaining outer dimensions go to
nested adaptive Gauss-Kronrod quadrature (``scipy.integrate.quad``) on
domains truncated where the exponential envelope drops below
``abs_tol / 100``. This module shares no algebra with :mod:`relaysec.analytic`
beyond the densities themselves.

Integrand identifiers:

``direct``  outage with only the direct links
``single``  outage through one relay (``k`` required)
``I1, I2``  traditional selection, relay ``k`` chosen, ``g_sd`` above / below ``rho - 1``
``I3, I4``  the same for the ``alpha_ke``-weighted rule
``I5, I6``  optimal selection, direct link secure / insecure on its own
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass

from scipy import integrate

from .analytic import DecodingSet, Scheme, all_decoding_sets, prob_decoding_set
from .channel import LinkParams, SecrecyConfig
from .distributions import hypoexp_coeffs, max_pdf_terms
from .errors import DomainError, QuadratureError

__all__ = [
    "INTEGRANDS",
    "QuadResult",
    "QuadratureRequest",
    "quad_eval",
    "quad_secrecy_outage",
    "quad_set_outage",
]

INTEGRANDS = ("direct", "single", "I1", "I2", "I3", "I4", "I5", "I6")
_LIMIT = 200


@dataclass(frozen=True)
class QuadratureRequest:
    integrand: str
    links: LinkParams
    cfg: SecrecyConfig
    decoding_set: DecodingSet | None = None
    k: int | None = None
    abs_tol: float = 1e-9

    def __post_init__(self):
        if self.integrand not in INTEGRANDS:
            raise DomainError(f"unknown integrand {self.integrand!r}; expected one of {INTEGRANDS}")
        if not self.abs_tol > 0:
            raise DomainError(f"abs_tol must be positive, got {self.abs_tol!r}")


@dataclass(frozen=True)
class QuadResult:
    value: float
    error: float


def _quad(f, a, b, tol):
    """``quad`` that raises instead of warning, returning ``(value, error)``."""
    with warnings.catch_warnings():
        warnings.simplefilter("error", integrate.IntegrationWarning)
        try:
            val, err = integrate.quad(f, a, b, epsabs=tol, epsrel=1e-12, limit=_LIMIT)
        except integrate.IntegrationWarning as exc:
            raise QuadratureError(str(exc)) from exc
    return val, err


class _Nested:
    """Two-level adaptive integral ``int_a^b w(u) int_{lo(u)}^{hi(u)} g(u, v) dv du``.

    Tracks the worst inner error so it can be added to the reported bound.
    """

    def __init__(self, tol):
        self.tol = tol
        self.inner_err = 0.0

    def run(self, outer_w, a, b, lo, hi, g):
        def outer(u):
            lo_u, hi_u = lo(u), hi(u)
            if hi_u <= lo_u:
                return 0.0
            val, err = _quad(lambda v: g(u, v), lo_u, hi_u, self.tol)
            self.inner_err = max(self.inner_err, err)
            return outer_w(u) * val

        val, err = _quad(outer, a, b, self.tol)
        return val, err + self.inner_err


def _tail(rate, tol):
    """Length beyond which an Exp(rate) tail holds less than ``tol / 100``."""
    return math.log(100.0 / tol) / rate


def _sum_tail(r1, r2, tol):
    # P[X1 + X2 > d] <= exp(-r1 d/2) + exp(-r2 d/2)
    return 2.0 * math.log(200.0 / tol) / min(r1, r2)


def _direct(req):
    rho, c = req.cfg.rho, req.cfg.rho - 1.0
    bsd, ase = req.links.beta_sd, req.links.alpha_se
    f = lambda y: ase * math.exp(-ase * y) * -math.expm1(-bsd * (c + rho * y))
    val, err = _quad(f, 0.0, _tail(ase, req.abs_tol), req.abs_tol / 4)
    return val, err + req.abs_tol / 100


def _single(req):
    links, rho, c = req.links, req.cfg.rho, req.cfg.rho - 1.0
    bsd, ase = links.beta_sd, links.alpha_se
    bkd, ake = links.beta_kd[req.k], links.alpha_ke[req.k]
    fx = hypoexp_coeffs(ase, ake)
    tol = req.abs_tol / 4
    nest = _Nested(tol)
    # outer x = g_se + g_ke, inner z = g_sd, innermost g_kd analytic
    val, err = nest.run(
        lambda x: float(fx.pdf(x)),
        0.0,
        _sum_tail(ase, ake, req.abs_tol),
        lambda x: 0.0,
        lambda x: c + rho * x,
        lambda x, z: bsd * math.exp(-bsd * z) * -math.expm1(-bkd * (c + rho * x - z)),
    )
    return val, err + req.abs_tol / 100


def _selection(req, weighted):
    links, s, k = req.links, req.decoding_set, req.k
    rho, c = req.cfg.rho, req.cfg.rho - 1.0
    bsd, ase = links.beta_sd, links.alpha_se
    bkd, ake = links.beta_kd[k], links.alpha_ke[k]
    scale = ake if weighted else 1.0
    others = [
        links.beta_kd[i] / links.alpha_ke[i] if weighted else links.beta_kd[i]
        for i in s.members if i != k
    ]
    terms = [(sg, w) for sg, w, _ in max_pdf_terms(others).terms]
    fx = hypoexp_coeffs(ase, ake)
    bt = bkd / scale

    def h(lam):
        # P[max_others < scale * g_kd <= scale * lam]: y over [0, scale*lam], t over [y/scale, lam]
        e_lam = math.exp(-bkd * lam)
        acc = 0.0
        for sg, w in terms:
            acc += sg * (
                w / (w + bt) * -math.expm1(-(w + bt) * scale * lam)
                - e_lam * -math.expm1(-w * scale * lam)
            )
        return acc

    tol = req.abs_tol / 4
    x_len = _sum_tail(ase, ake, req.abs_tol)
    nest = _Nested(tol)
    g = lambda z, x: float(fx.pdf(x)) * h(c + rho * x - z)
    f_sd = lambda z: bsd * math.exp(-bsd * z)
    if req.integrand in ("I1", "I3"):
        x0 = lambda z: (z - c) / rho
        val, err = nest.run(f_sd, c, c + _tail(bsd, req.abs_tol), x0, lambda z: x0(z) + x_len, g)
    else:
        val, err = nest.run(f_sd, 0.0, c, lambda z: 0.0, lambda z: x_len, g)
    return val, err + 2 * req.abs_tol / 100


def _optimal(req):
    links, s = req.links, req.decoding_set
    rho, c = req.cfg.rho, req.cfg.rho - 1.0
    bsd, ase = links.beta_sd, links.alpha_se
    pairs = [(links.beta_kd[k], links.alpha_ke[k]) for k in s.members]

    def secure_direct(d):
        # d = rho*(1+g_se) - 1 - g_sd < 0; x over [-d/rho, inf), t over [0, d + rho*x]
        x0 = -d / rho
        p = 1.0
        for b, a in pairs:
            p *= math.exp(-a * x0) * (1.0 - a / (a + rho * b))
        return p

    def insecure_direct(d):
        p = 1.0
        for b, a in pairs:
            p *= 1.0 - math.exp(-b * d) * a / (a + rho * b)
        return p

    tol = req.abs_tol / 4
    nest = _Nested(tol)
    f_se = lambda y: ase * math.exp(-ase * y)
    y_len = _tail(ase, req.abs_tol)
    if req.integrand == "I5":
        edge = lambda y: rho * y + c
        val, err = nest.run(
            f_se, 0.0, y_len, edge, lambda y: edge(y) + _tail(bsd, req.abs_tol),
            lambda y, z: bsd * math.exp(-bsd * z) * secure_direct(c + rho * y - z),
        )
    else:
        val, err = nest.run(
            f_se, 0.0, y_len, lambda y: 0.0, lambda y: rho * y + c,
            lambda y, z: bsd * math.exp(-bsd * z) * insecure_direct(c + rho * y - z),
        )
    return val, err + 2 * req.abs_tol / 100


def quad_eval(req: QuadratureRequest) -> QuadResult:
    """Evaluate one outage integral; raises :class:`QuadratureError` if the
    error bound exceeds ``req.abs_tol``."""
    name, links = req.integrand, req.links
    if name in ("single", "I1", "I2", "I3", "I4"):
        if req.k is None or not 0 <= req.k < links.n_relays:
            raise DomainError(f"{name} needs a valid relay index, got {req.k!r}")
    if name.startswith("I"):
        s = req.decoding_set
        if s is None or s.n_relays != links.n_relays:
            raise DomainError(f"{name} needs a decoding set over {links.n_relays} relays")
        if name in ("I5", "I6"):
            if s.size < 1:
                raise DomainError(f"{name} is undefined for an empty decoding set")
        elif s.size < 2 or req.k not in s.members:
            raise DomainError(f"{name} needs k in a decoding set of at least two relays")

    if name == "direct":
        val, err = _direct(req)
    elif name == "single":
        val, err = _single(req)
    elif name in ("I1", "I2"):
        val, err = _selection(req, weighted=False)
    elif name in ("I3", "I4"):
        val, err = _selection(req, weighted=True)
    else:
        val, err = _optimal(req)
    if not err <= req.abs_tol:
        raise QuadratureError(f"{name}: error bound {err:.3g} exceeds abs_tol {req.abs_tol:.3g}")
    return QuadResult(val, err)


def quad_set_outage(links: LinkParams, cfg: SecrecyConfig, s: DecodingSet, scheme, abs_tol=1e-8) -> float:
    """Conditional outage for one decoding set, from quadrature alone."""
    scheme = Scheme(scheme)
    ev = lambda name, k=None, tol=abs_tol: quad_eval(QuadratureRequest(name, links, cfg, s, k, tol)).value
    if s.size == 0:
        return ev("direct")
    if s.size == 1:
        return ev("single", s.members[0])
    if scheme is Scheme.OS:
        return ev("I5") + ev("I6")
    names = ("I1", "I2") if scheme is Scheme.TS else ("I3", "I4")
    share = abs_tol / s.size
    return sum(ev(n, k, share / 2) for k in s.members for n in names)


def quad_secrecy_outage(links: LinkParams, cfg: SecrecyConfig, scheme, abs_tol=1e-8) -> float:
    """Total outage with every conditional term computed by quadrature."""
    total = 0.0
    for s in all_decoding_sets(links.n_relays):
        p = prob_decoding_set(links, cfg, s)
        if p > 0.0:
            total += p * quad_set_outage(links, cfg, s, scheme, abs_tol)
    return total
