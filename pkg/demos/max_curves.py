"""Maximal degree of polarization as a function of the mean photon number."""
import numpy as np

from qpolar import max_curve, max_curve_q, nbar_grid

if __name__ == "__main__":
    nbar = nbar_grid(0.25, 4.0, 0.25)
    curves = {m: [p.value for p in max_curve(m, nbar)] for m in ("hsb", "bb", "cb")}
    for p in max_curve_q(nbar):
        curves.setdefault(p.measure, []).append(p.value)
    print("nbar  " + "  ".join(f"{m:>6}" for m in curves))
    for i, x in enumerate(nbar):
        print(f"{x:4.2f}  " + "  ".join(f"{curves[m][i]:6.4f}" for m in curves))
    # the Bures curve keeps rising between integers while the others plateau
    print("Bures increments positive:", bool(np.all(np.diff(curves["bb"]) > 0)))
