"""The two-photon state |1,1> looks unpolarized to the Stokes degree.

Its Stokes means vanish, yet every quantum degree sees polarization.
"""
import numpy as np

from qpolar import (
    degree_bures, degree_chernoff, degree_d, degree_hs, degree_p, degree_q,
    degree_stokes, make_pure, moments, pure_to_block, unpolarized_state,
    UnpolarizedSpec,
)

DEGREES = {
    "P_S": degree_stokes,
    "P_HSb": degree_hs,
    "P_Bb": degree_bures,
    "P_Cb": degree_chernoff,
    "P_Q": degree_q,
    "P_d": degree_d,
    "P_p": degree_p,
}


def table(label, state):
    row = "  ".join(f"{name}={f(state):.4f}" for name, f in DEGREES.items())
    print(f"{label:>10}: {row}")


if __name__ == "__main__":
    hv = pure_to_block(make_pure({(2, 1): 1.0}))
    m = moments(hv)
    print("Stokes means of |1,1>:", np.round(m.vec, 12), "variances:", np.round(m.var, 12))
    table("|1,1>", hv)
    table("|2,0>", pure_to_block(make_pure({(2, 2): 1.0})))
    table("sigma_2", unpolarized_state(UnpolarizedSpec(2, {2: 1.0})))
