"""Where each threshold rule lands on the aLDG-versus-t curve.

The aLDG value is the fraction of points whose local density gap clears t,
so it decreases as t grows. Each rule picks one point on that curve; this
script prints the curve and the chosen thresholds for a correlated Gaussian.
"""

import numpy as np

from depgap import (
    GaussianSpec,
    ThresholdRule,
    aldg,
    aldg_fixed_t,
    default_config,
    gaussian_pair,
)


def main():
    sample = gaussian_pair(GaussianSpec(rho=0.5), n=400, seed=11)
    cfg = default_config(sample)

    print("aLDG as a function of the fixed threshold t:")
    for t in np.linspace(0.0, 0.5, 11):
        value = aldg_fixed_t(sample, cfg, float(t))
        bar = "#" * int(round(40 * value))
        print(f"  t={t:4.2f}  {value:6.3f}  {bar}")
    print()

    for rule in (
        ThresholdRule.uniform_error(seed=11),
        ThresholdRule.asymptotic_norm(),
        ThresholdRule.inflection_point(seed=11),
        ThresholdRule.auto(seed=11),
    ):
        result = aldg(sample, rule, cfg)
        print(f"{rule.kind:16s} -> t={result.t_used:.4f}  aLDG={result.value:.4f}"
              + (f"  (resolved to {result.rule.kind})" if rule.kind == "auto" else ""))


if __name__ == "__main__":
    main()
