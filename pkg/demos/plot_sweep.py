"""
An entropy sweep
================

Reproduce the delay-versus-entropy comparison at the reference channel: q=0.5,
r_ch=1/6.5, ell=4 bits per Tunstall word and b=4 symbols per Huffman block.
The same sweep is available as ``tunstall-aoi sweep``.
"""
import io

from tunstall_aoi import SweepSpec, crossover_entropy, default_p_grid, run_sweep

spec = SweepSpec(p_values=tuple(default_p_grid()), n_symbols=200_000, seed=0)
points, text = run_sweep(spec, io.StringIO())

##############################################################################
# Unstable schemes (code rate at or above r_ch / q) have unbounded delay and
# are reported rather than simulated.

print(f"{'H':>6} {'vtf delay':>10} {'bound':>9} {'ftv delay':>10} {'bound':>9}")
for pt in points:
    cells = []
    for res in pt.schemes:
        sim = f"{res.report.mean_delay:10.2f}" if res.report else f"{'unstable':>10}"
        cells.append(f"{sim} {res.delay_bound if res.stable else float('inf'):9.2f}")
    print(f"{pt.entropy:6.3f} " + " ".join(cells))

print("crossover entropy:", crossover_entropy(points))
print(text.splitlines()[0])
