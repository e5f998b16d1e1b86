"""
Waiting-time bounds for the VtF queue
=====================================

Each Tunstall word occupies the channel for ``ell / r_ch`` slots while the
time between word completions is a random sum of geometric gaps. The encoder
FIFO is a single-server queue, so the mean waiting time has a low-moment
(Kingman-type) bound and a tighter bound from the m.g.f. root
``phi_U(theta) = 1``.
"""
import numpy as np

from tunstall_aoi import (ChannelSpec, SymbolPmf, block_length_pmf, build_tunstall, code_rate,
                          low_moment_bound_vtf, mgf_bound_vtf, phi_U, tarry_mean, vtf_stability)

ch = ChannelSpec(r_ch=1 / 6.5, q=0.5)
print(f"stability needs code rate < r_ch / q = {ch.rate_threshold:.4f}")

##############################################################################
# Sweep the source bias and compare both bounds.

print(f"{'p':>7} {'rate':>7} {'tarry':>7} {'low':>9} {'mgf':>9}")
for p in (0.004, 0.008, 0.012, 0.016, 0.020, 0.025):
    pmf = SymbolPmf.bernoulli(p)
    code = build_tunstall(pmf, 4)
    b_pmf = block_length_pmf(code, pmf)
    stable, _ = vtf_stability(code_rate(code, pmf), ch)
    low = low_moment_bound_vtf(b_pmf, 4, ch)
    mgf = mgf_bound_vtf(b_pmf, 4, ch)
    print(f"{p:7.3f} {code_rate(code, pmf):7.4f} {tarry_mean(b_pmf, ch.q):7.3f} "
          f"{low:9.3f} {mgf.bound:9.3f}  {'' if stable else '(unstable)'}")

##############################################################################
# The m.g.f. of U is convex with phi_U(0) = 1; its second root is nu.

pmf = SymbolPmf.bernoulli(0.01)
b_pmf = block_length_pmf(build_tunstall(pmf, 4), pmf)
res = mgf_bound_vtf(b_pmf, 4, ch)
for theta in np.linspace(0, 1.5 * res.nu, 7):
    print(f"theta={theta:.5f}  phi_U={phi_U(theta, b_pmf, 4, ch):.6f}")
print(f"nu = {res.nu:.6f} after {res.iterations} iterations -> E[W] <= {res.bound:.3f}")
