"""Figure presets, parameter sweeps and CSV output.

A sweep varies the average SNR ``1/beta`` (in dB). Relay links are given
either as a fixed mean SNR in dB or as a multiple of the swept mean, written
``0.2/b`` for ``1/beta_sk = 0.2/beta``.

Config files are INI-style, one section per sweep::

    [fig2]
    variant = rs2
    snr_db = 0:30:2
    engines = analytic, mc
    beta_kd = 20, 20, 20, 20
"""

from __future__ import annotations

import configparser
import csv
import io
import math
import re
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field, replace
from pathlib import Path
from typing import Iterable, Sequence

from .analytic import Scheme, secrecy_outage
from .channel import LinkParams, SecrecyConfig, db_to_mean
from .errors import ConfigError
from .montecarlo import simulate
from .quadrature import quad_secrecy_outage

__all__ = [
    "CSV_HEADER",
    "ENGINES",
    "PRESETS",
    "Row",
    "Scaled",
    "Scenario",
    "SweepSpec",
    "check_agreement",
    "dump_config",
    "emit_csv",
    "load_config",
    "parse_snr_range",
    "preset_spec",
    "run_sweep",
]

ENGINES = ("analytic", "mc", "quad")
CSV_HEADER = ("snr_db", "scheme", "engine", "outage", "stderr", "trials", "seed")
# outage stays above ~1e-4 over these ranges, so 1e6-trial MC resolves it
DEFAULT_SWEEPS = {
    "fig2": tuple(float(x) for x in range(0, 26, 2)),
    "fig3": tuple(float(x) for x in range(0, 26, 2)),
    "fig4": tuple(float(x) for x in range(0, 26, 2)),
    "fig5": tuple(float(x) for x in range(0, 44, 4)),
    "custom": tuple(float(x) for x in range(0, 26, 2)),
}


@dataclass(frozen=True)
class Scaled:
    """Mean SNR equal to ``factor`` times the swept average SNR."""

    factor: float

    def __str__(self):
        return f"{_fmt(self.factor)}/b"


def _fmt(x: float) -> str:
    return f"{x:.12g}"


def _mean(entry, snr_db: float) -> float:
    if isinstance(entry, Scaled):
        return entry.factor * db_to_mean(snr_db)
    return db_to_mean(entry)


@dataclass(frozen=True)
class Scenario:
    """Everything except the swept SNR, with all link qualities in dB."""

    sd_db: float = 3.0
    se_db: float = 2.0
    gamma_th_db: float = 3.0
    rate_rs: float = 1.0
    sk: tuple = ()
    kd: tuple = ()
    ke: tuple = ()

    def at(self, snr_db: float) -> tuple[LinkParams, SecrecyConfig]:
        links = LinkParams(
            beta_sd=1.0 / db_to_mean(self.sd_db),
            alpha_se=1.0 / db_to_mean(self.se_db),
            beta_sk=tuple(1.0 / _mean(e, snr_db) for e in self.sk),
            beta_kd=tuple(1.0 / _mean(e, snr_db) for e in self.kd),
            alpha_ke=tuple(1.0 / _mean(e, snr_db) for e in self.ke),
        )
        return links, SecrecyConfig.from_db(self.rate_rs, self.gamma_th_db)


# The second factor list is read as relay-to-destination; reading both lists
# as source-to-relay would leave beta_kd unspecified.
_fig2 = Scenario(
    sk=tuple(Scaled(f) for f in (0.2, 0.6, 0.4, 0.8)),
    kd=tuple(Scaled(f) for f in (0.8, 0.4, 0.6, 0.2)),
    ke=(0.0, 3.0, 6.0, 9.0),
)
_fig3 = Scenario(sk=(Scaled(0.5),) * 4, kd=(Scaled(0.5),) * 4, ke=(0.0, 3.0, 6.0, 9.0))
_fig4 = Scenario(sk=(Scaled(0.5),) * 4, kd=(Scaled(0.5),) * 4, ke=(3.0,) * 4)
_fig5 = Scenario(sk=(Scaled(1.0),) * 4, kd=(20.0,) * 4, ke=(3.0,) * 4)

PRESETS: dict[str, dict[str, Scenario]] = {
    "fig2": {
        "rs1": _fig2,
        "rs2": replace(_fig2, rate_rs=2.0),
    },
    "fig3": {
        "th0": replace(_fig3, gamma_th_db=0.0),
        "th15": replace(_fig3, gamma_th_db=15.0),
    },
    "fig4": {
        f"n{n}": replace(_fig4, sk=_fig4.sk[:n], kd=_fig4.kd[:n], ke=_fig4.ke[:n])
        for n in (4, 3, 2, 1)
    },
    "fig5": {
        "case1": _fig5,
        "case2": replace(_fig5, sk=(10.0,) * 4, kd=(Scaled(1.0),) * 4),
    },
}

PRESET_NOTES = {
    "fig2": "non-identical relays; variants rs1/rs2 set R_s = 1/2 bpcu",
    "fig3": "balanced relay links, non-identical eavesdropper links; th0/th15 set gamma_th in dB",
    "fig4": "identical relays, 1/alpha_ke = 3 dB; n1..n4 keep the first N relays",
    "fig5": "case1: 1/beta_kd = 20 dB fixed; case2: 1/beta_sk = 10 dB fixed",
    "custom": "section defaults plus beta_sk, beta_kd, alpha_ke given explicitly",
}

_LINK_KEYS = {"beta_sk": "sk", "beta_kd": "kd", "alpha_ke": "ke"}
_SCALAR_KEYS = {"beta_sd": "sd_db", "alpha_se": "se_db", "gamma_th": "gamma_th_db", "rate_rs": "rate_rs"}
OVERRIDE_KEYS = (*_SCALAR_KEYS, *_LINK_KEYS, "n_relays")


@dataclass(frozen=True)
class SweepSpec:
    figure: str = "fig2"
    variant: str | None = None
    sweep_db: tuple | None = None
    schemes: tuple = tuple(Scheme)
    engines: tuple = ("analytic",)
    mc_trials: int = 1_000_000
    mc_seed: int = 42
    overrides: tuple = ()
    quad_tol: float = 1e-8

    def __post_init__(self):
        if self.figure != "custom" and self.figure not in PRESETS:
            raise ConfigError(f"figure: unknown preset {self.figure!r}; known: {', '.join([*PRESETS, 'custom'])}")
        if self.variant is not None and self.variant not in PRESETS.get(self.figure, {}):
            known = ", ".join(PRESETS.get(self.figure, {})) or "none"
            raise ConfigError(f"variant: {self.variant!r} is not a variant of {self.figure} (known: {known})")
        if self.sweep_db is None:
            object.__setattr__(self, "sweep_db", DEFAULT_SWEEPS[self.figure])
        object.__setattr__(self, "sweep_db", tuple(float(x) for x in self.sweep_db))
        if not self.sweep_db:
            raise ConfigError("snr_db: sweep is empty")
        if any(b <= a for a, b in zip(self.sweep_db, self.sweep_db[1:])):
            raise ConfigError("snr_db: sweep points must be strictly increasing")
        object.__setattr__(self, "schemes", tuple(Scheme(s) for s in self.schemes))
        if not self.schemes or not self.engines or any(e not in ENGINES for e in self.engines):
            raise ConfigError(f"engines: expected a nonempty subset of {ENGINES}, got {self.engines}")
        if self.mc_trials < 1:
            raise ConfigError(f"mc_trials: must be >= 1, got {self.mc_trials}")
        if self.mc_seed < 0:
            raise ConfigError(f"mc_seed: must be >= 0, got {self.mc_seed}")
        object.__setattr__(self, "overrides", tuple(self.overrides))
        self.scenario()  # validate overrides eagerly

    def scenario(self) -> Scenario:
        if self.figure == "custom":
            base = Scenario()
            given = {k for k, _ in self.overrides}
            missing = [k for k in _LINK_KEYS if k not in given]
            if missing:
                raise ConfigError(f"custom sweep needs overrides for {', '.join(missing)}")
        else:
            variants = PRESETS[self.figure]
            base = variants[self.variant or next(iter(variants))]
        return _apply_overrides(base, self.overrides)


def _parse_link_list(key: str, text: str) -> tuple:
    out = []
    for tok in (t.strip() for t in text.split(",")):
        m = re.fullmatch(r"([-+0-9.eE]+)\s*/\s*b", tok)
        try:
            out.append(Scaled(float(m.group(1))) if m else float(tok))
        except ValueError:
            raise ConfigError(f"{key}: cannot parse {tok!r} (expected dB value or '<factor>/b')") from None
    return tuple(out)


def _apply_overrides(base: Scenario, overrides) -> Scenario:
    sc = base
    n_relays = None
    for key, value in overrides:
        if key in _SCALAR_KEYS:
            try:
                sc = replace(sc, **{_SCALAR_KEYS[key]: float(value)})
            except ValueError:
                raise ConfigError(f"{key}: expected a number, got {value!r}") from None
        elif key in _LINK_KEYS:
            sc = replace(sc, **{_LINK_KEYS[key]: _parse_link_list(key, value)})
        elif key == "n_relays":
            try:
                n_relays = int(value)
            except ValueError:
                raise ConfigError(f"n_relays: expected an integer, got {value!r}") from None
        else:
            raise ConfigError(f"unknown override {key!r}; known: {', '.join(OVERRIDE_KEYS)}")
    if n_relays is not None:
        if not 0 <= n_relays <= len(sc.sk):
            raise ConfigError(f"n_relays: must lie in 0..{len(sc.sk)}, got {n_relays}")
        sc = replace(sc, sk=sc.sk[:n_relays], kd=sc.kd[:n_relays], ke=sc.ke[:n_relays])
    if not len(sc.sk) == len(sc.kd) == len(sc.ke):
        raise ConfigError(f"relay lists differ in length: {len(sc.sk)}, {len(sc.kd)}, {len(sc.ke)}")
    if sc.rate_rs < 0:
        raise ConfigError(f"rate_rs: must be >= 0, got {sc.rate_rs}")
    return sc


def preset_spec(figure: str, variant: str | None = None, **kwargs) -> SweepSpec:
    return SweepSpec(figure=figure, variant=variant, **kwargs)


def parse_snr_range(text: str) -> tuple[float, ...]:
    """Parse ``start:stop:step`` (stop inclusive) or a comma-separated list."""
    text = text.strip()
    if ":" in text:
        try:
            start, stop, step = (float(p) for p in text.split(":"))
        except ValueError:
            raise ConfigError(f"snr_db: expected start:stop:step, got {text!r}") from None
        if step <= 0:
            raise ConfigError(f"snr_db: step must be positive, got {step}")
        n = int(math.floor((stop - start) / step + 1e-9)) + 1
        if n < 1:
            raise ConfigError(f"snr_db: empty range {text!r}")
        return tuple(round(start + i * step, 12) for i in range(n))
    try:
        return tuple(float(t) for t in text.split(",") if t.strip())
    except ValueError:
        raise ConfigError(f"snr_db: cannot parse {text!r}") from None


@dataclass(frozen=True, order=True)
class Row:
    snr_db: float
    scheme: str
    engine: str
    outage: float
    stderr: float | None = None
    trials: int | None = None
    seed: int | None = None


_SCHEME_ORDER = {s.value: i for i, s in enumerate(Scheme)}
_ENGINE_ORDER = {e: i for i, e in enumerate(ENGINES)}


def _row_key(r: Row):
    return (r.snr_db, _SCHEME_ORDER[r.scheme], _ENGINE_ORDER[r.engine])


def _point(spec: SweepSpec, scenario: Scenario, snr_db: float) -> list[Row]:
    links, cfg = scenario.at(snr_db)
    rows = []
    if "analytic" in spec.engines:
        for sch in spec.schemes:
            rows.append(Row(snr_db, sch.value, "analytic", secrecy_outage(links, cfg, sch).total))
    if "mc" in spec.engines:
        sim = simulate(links, cfg, spec.mc_trials, spec.mc_seed, spec.schemes)
        for sch in spec.schemes:
            est = sim.estimate(sch)
            rows.append(Row(snr_db, sch.value, "mc", est.mean, est.stderr, est.trials, est.seed))
    if "quad" in spec.engines:
        for sch in spec.schemes:
            rows.append(Row(snr_db, sch.value, "quad", quad_secrecy_outage(links, cfg, sch, spec.quad_tol)))
    return rows


def run_sweep(spec: SweepSpec, workers: int | None = None) -> list[Row]:
    """One row per (SNR point, scheme, engine), sorted in that order."""
    scenario = spec.scenario()
    job = lambda x: _point(spec, scenario, x)
    if workers and workers > 1:
        with ThreadPoolExecutor(workers) as pool:
            parts = list(pool.map(job, spec.sweep_db))
    else:
        parts = [job(x) for x in spec.sweep_db]
    return sorted((r for p in parts for r in p), key=_row_key)


def check_agreement(rows: Iterable[Row], n_sigma: float = 3.0) -> list[tuple[Row, Row]]:
    """Analytic/MC pairs whose gap exceeds ``n_sigma`` standard errors."""
    analytic = {(r.snr_db, r.scheme): r for r in rows if r.engine == "analytic"}
    bad = []
    for r in rows:
        if r.engine == "mc" and (r.snr_db, r.scheme) in analytic:
            a = analytic[(r.snr_db, r.scheme)]
            if abs(a.outage - r.outage) > n_sigma * r.stderr:
                bad.append((a, r))
    return bad


def _csv_cell(v):
    if v is None:
        return ""
    if isinstance(v, float):
        return _fmt(v)
    return str(v)


def csv_text(rows: Sequence[Row]) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(CSV_HEADER)
    for r in rows:
        w.writerow([_csv_cell(getattr(r, name)) for name in CSV_HEADER])
    return buf.getvalue()


def emit_csv(rows: Sequence[Row], path) -> Path:
    path = Path(path)
    try:
        path.write_text(csv_text(rows))
    except OSError as exc:
        raise OSError(f"cannot write CSV to {path}: {exc.strerror or exc}") from exc
    return path


_SWEEP_KEYS = ("figure", "variant", "snr_db", "schemes", "engines", "mc_trials", "mc_seed", "quad_tol")


def _line_of(text: str, section: str, key: str) -> int | None:
    current = None
    for i, line in enumerate(text.splitlines(), 1):
        s = line.strip()
        if s.startswith("[") and s.endswith("]"):
            current = s[1:-1].strip()
        elif current == section and re.match(rf"{re.escape(key)}\s*[=:]", s):
            return i
    return None


def _spec_from_section(name: str, sec) -> SweepSpec:
    figure = sec.get("figure", name if name in PRESETS else "custom")
    kwargs = {"figure": figure, "variant": sec.get("variant") or None}
    if "snr_db" in sec:
        kwargs["sweep_db"] = parse_snr_range(sec["snr_db"])
    if "schemes" in sec:
        try:
            kwargs["schemes"] = tuple(Scheme(t.strip().upper()) for t in sec["schemes"].split(","))
        except ValueError:
            raise ConfigError(f"schemes: expected a subset of TS, ITS, OS, got {sec['schemes']!r}") from None
    if "engines" in sec:
        kwargs["engines"] = tuple(t.strip() for t in sec["engines"].split(","))
    for key, conv in (("mc_trials", int), ("mc_seed", int), ("quad_tol", float)):
        if key in sec:
            try:
                kwargs[key] = conv(sec[key])
            except ValueError:
                raise ConfigError(f"{key}: cannot parse {sec[key]!r}") from None
    overrides = []
    for key in sec:
        if key in _SWEEP_KEYS:
            continue
        if key not in OVERRIDE_KEYS:
            raise ConfigError(f"unknown key {key!r}")
        overrides.append((key, sec[key]))
    kwargs["overrides"] = tuple(overrides)
    return SweepSpec(**kwargs)


def load_config(text: str) -> dict[str, SweepSpec]:
    """Parse config text into ``{section: SweepSpec}``.

    Errors name the section, key and line where possible.
    """
    parser = configparser.ConfigParser(interpolation=None)
    try:
        parser.read_string(text)
    except configparser.Error as exc:
        raise ConfigError(f"config syntax: {exc}") from None
    specs = {}
    for name in parser.sections():
        try:
            specs[name] = _spec_from_section(name, parser[name])
        except ConfigError as exc:
            key = str(exc).split(":")[0].split()[-1].strip("'")
            line = _line_of(text, name, key)
            where = f"[{name}]" + (f" line {line}" if line else "")
            raise ConfigError(f"{where}: {exc}") from None
    if not specs:
        raise ConfigError("config defines no sweep sections")
    return specs


def dump_config(specs: dict[str, SweepSpec]) -> str:
    """Canonical config text; ``dump_config(load_config(t))`` is a fixed point."""
    parser = configparser.ConfigParser(interpolation=None)
    for name, spec in specs.items():
        sec = {"figure": spec.figure}
        if spec.variant is not None:
            sec["variant"] = spec.variant
        sec["snr_db"] = ", ".join(_fmt(x) for x in spec.sweep_db)
        sec["schemes"] = ", ".join(s.value for s in spec.schemes)
        sec["engines"] = ", ".join(spec.engines)
        sec["mc_trials"] = str(spec.mc_trials)
        sec["mc_seed"] = str(spec.mc_seed)
        sec["quad_tol"] = _fmt(spec.quad_tol)
        for key, value in spec.overrides:
            sec[key] = value
        parser[name] = sec
    buf = io.StringIO()
    parser.write(buf)
    return buf.getvalue()
