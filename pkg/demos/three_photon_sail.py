"""Three-photon Stokes-unpolarized states on the sail-shaped region.

The Q dispersion is 9/35 for every one of them, so P_Q is constant here.
"""
import numpy as np

from qpolar import degree_bures, degree_q, is_stokes_unpolarized, pure_to_block
from qpolar.unpolarized import sail_region, three_photon_solve

if __name__ == "__main__":
    rng = np.random.default_rng(3)
    shown = 0
    while shown < 4:
        a0, a2 = rng.uniform(0, 0.7), rng.uniform(0, 0.8)
        if sail_region(a0, a2).status != "inside":
            continue
        for state in three_photon_solve(a0, a2, theta1=rng.uniform(0, 2 * np.pi)):
            cert = is_stokes_unpolarized(state)
            block = pure_to_block(state)
            print(f"a0={a0:.3f} a2={a2:.3f}  certified={cert.certified}  "
                  f"P_Bb={degree_bures(block):.4f}  P_Q={degree_q(block):.4f}")
        shown += 1
