"""
Cross-check of the analytic QFI against finite differences of the Bures
fidelity between image-plane states at d -/+ eps/2.
"""

import numpy as np

from gaussres import GaussianPsf, SourceSpec, oracle_qfi, qfi
from gaussres.qfi import SIMILARITY

psf = GaussianPsf(1.0)
sources = {
    "correlated thermal g=0.7 phi=pi": SourceSpec.correlated_thermal(100.0, 0.7, np.pi),
    "displaced thermal g=0.7 phi=pi/e": SourceSpec.displaced_thermal(1.0, 0.7, np.pi / np.e),
    "coherent phi=0": SourceSpec.coherent(1.0, 0.0),
    "squeezed theta=pi/2": SourceSpec.squeezed_pair(100.0, np.pi / 2),
}

print(f"{'source':>34} {'d/w':>5} {'engine':>14} {'oracle':>14} {'rel err':>9} {'similarity':>11}")
for name, src in sources.items():
    for d in (0.2, 1.0, 3.0):
        eng = qfi(src, 0.1, psf, d).f_total
        ref = oracle_qfi(src, 0.1, psf, d)
        wrong = qfi(src, 0.1, psf, d, transform=SIMILARITY).f_total
        print(f"{name:>34} {d:5.1f} {eng:14.8g} {ref:14.8g} {abs(eng / ref - 1):9.1e} {abs(wrong / ref - 1):11.1e}")

# The last column projects the covariance derivative with a similarity
# transform instead of a congruence; it only matters when the symplectic
# diagonalizer is not orthogonal, i.e. for the squeezed sources.
