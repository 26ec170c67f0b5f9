"""
Monte Carlo check of the outage formulas
========================================

One seeded run draws every link once per trial and scores all
three selection rules on the same draws.
"""

from relaysec import secrecy_outage, simulate
from relaysec.experiments import PRESETS

scenario = PRESETS["fig2"]["rs1"]

for snr_db in (0, 8, 16, 24):
    links, cfg = scenario.at(snr_db)
    sim = simulate(links, cfg, trials=1_000_000, seed=42)
    for scheme in ("TS", "ITS", "OS"):
        exact = secrecy_outage(links, cfg, scheme).total
        est = sim.estimate(scheme)
        z = (est.mean - exact) / est.stderr
        print(f"{snr_db:3d} dB {scheme:>3}  exact {exact:.5f}  mc {est.mean:.5f} +- {est.stderr:.5f}  ({z:+.2f} sigma)")

# OS never loses a trial that TS wins, since it picks the best relay on the very same draws.
both = sim.outage["OS"] & ~sim.outage["TS"]
print("trials where OS is in outage but TS is not:", int(both.sum()))
