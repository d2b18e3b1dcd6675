#Sanity-check the fading model: draw a lot of channel gains and compare the
#empirical statistics against the analytic pdf/cdf for a few K factors.
#K=0 is Rayleigh, larger K means a stronger line-of-sight component.

import numpy as np

from swiptsched import FadingParams, normalized_cdf, normalized_pdf, sample_gains

N_DRAWS = 200_000
SEED = 2024


def moments_check(k):
    params = FadingParams(omega=1.0, k_factor=k)
    rng = np.random.default_rng(SEED)
    draws = sample_gains(params, rng, N_DRAWS)
    # analytic variance of the normalized gain is (1+2K)/(1+K)^2
    var_true = (1.0 + 2.0 * k) / (1.0 + k) ** 2
    print(f"K={k:>4}: mean {draws.mean():.4f} (true 1.0000)  "
          f"var {draws.var():.4f} (true {var_true:.4f})")


def tail_check(k):
    params = FadingParams(omega=1.0, k_factor=k)
    rng = np.random.default_rng(SEED + 1)
    draws = sample_gains(params, rng, N_DRAWS)
    for x in (0.25, 1.0, 2.5):
        emp = np.mean(draws <= x)
        ana = normalized_cdf(k, x)
        print(f"   P[h <= {x:4.2f}]  empirical {emp:.4f}  analytic {ana:.4f}")


def pdf_area(k):
    # crude trapezoid over [0, 40], enough to show the density integrates to 1
    x = np.linspace(1e-9, 40.0, 20_000)
    y = np.array([normalized_pdf(k, xi) for xi in x])
    return np.trapezoid(y, x)


if __name__ == "__main__":
    print("moment comparison over", N_DRAWS, "draws")
    for k in (0.0, 3.0, 6.0, 15.0):
        moments_check(k)
    print()
    print("cdf spot checks, K=6")
    tail_check(6.0)
    print()
    for k in (0.0, 6.0):
        print(f"pdf area K={k}: {pdf_area(k):.6f}")
