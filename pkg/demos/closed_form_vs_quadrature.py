"""
Closed forms against brute-force integration
============================================

Each decoding set contributes a pair of integrals per selected relay.
Here we evaluate them both ways for a three-relay network.
"""

from relaysec import LinkParams, SecrecyConfig, QuadratureRequest, quad_eval
from relaysec.analytic import all_decoding_sets, ts_integrals, its_integrals, os_integrals

links = LinkParams.from_db(
    sd_db=3, se_db=2,
    sk_db=(5, 8, 11), kd_db=(9, 6, 4), ke_db=(0, 3, 6),
)
cfg = SecrecyConfig.from_db(rate_rs=1.0, gamma_th_db=3.0)

def quad(name, s, k=None):
    return quad_eval(QuadratureRequest(name, links, cfg, s, k, abs_tol=1e-9)).value

print(f"{'set':>10} {'k':>3} {'scheme':>6} {'closed':>14} {'quadrature':>14}")
for s in all_decoding_sets(links.n_relays):
    if s.size < 2:
        continue
    for k in s.members:
        print(f"{str(s.members):>10} {k:>3} {'TS':>6} {sum(ts_integrals(links, cfg, s, k)):14.10f} {quad('I1', s, k) + quad('I2', s, k):14.10f}")
        print(f"{'':>10} {'':>3} {'ITS':>6} {sum(its_integrals(links, cfg, s, k)):14.10f} {quad('I3', s, k) + quad('I4', s, k):14.10f}")
    print(f"{'':>10} {'-':>3} {'OS':>6} {sum(os_integrals(links, cfg, s)):14.10f} {quad('I5', s) + quad('I6', s):14.10f}")
