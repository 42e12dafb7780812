"""
Size of the residual tests in small samples
===========================================

Under iid Gaussian data each test should reject at the 5% level in about 5%
of samples. A short Monte Carlo study at a sample size of 140 months.
"""

import numpy as np

from macrounc.diagnostics import arch_lm, ljung_box, squared_residual_q
from macrounc.series import summary_stats
from macrounc.simulate import make_rng, standard_normals

tests = {
    "Ljung-Box Q(12)": lambda x: ljung_box(x, 12).p_value,
    "squared Q(1)": lambda x: squared_residual_q(x, 1).p_value,
    "squared Q(12)": lambda x: squared_residual_q(x, 12).p_value,
    "ARCH-LM(1)": lambda x: arch_lm(x, 1).p_value,
    "ARCH-LM(12)": lambda x: arch_lm(x, 12).p_value,
    "Jarque-Bera": lambda x: summary_stats(x).jb_p,
}

reps = 2000
p = np.array([[f(standard_normals(make_rng((1, r)), 140)) for f in tests.values()]
              for r in range(reps)])

for name, rate in zip(tests, (p < 0.05).mean(axis=0)):
    print(f"{name:>16s}  rejects {rate:.3f}")

# The n R^2 form of ARCH-LM with many lags is conservative at this length:
# the chi-square approximation needs more observations per lag.
