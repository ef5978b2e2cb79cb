"""Compare closed-form Trigger-2 values with forced-history Monte-Carlo estimates."""
import argparse

import numpy as np

from entangled_pd import PayoffParams
from entangled_pd.repeated import trigger2_is_equilibrium, trigger2_monte_carlo, trigger2_values


def run():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--params", default="5,4,2,0")
    ap.add_argument("--episodes", type=int, default=100_000)
    ap.add_argument("--seed", type=int, default=0)
    ap.add_argument("--theta", type=float, nargs="+", default=[0.0, np.pi / 4, np.pi / 2])
    ap.add_argument("--delta", type=float, nargs="+", default=[0.5, 0.9])
    args = ap.parse_args()
    params = PayoffParams.from_string(args.params)
    print("theta,delta,value,closed_form,mc_mean,mc_stderr,z")
    for theta in args.theta:
        for delta in args.delta:
            cf = trigger2_values(theta, delta, params).as_dict()
            mc = trigger2_monte_carlo(theta, delta, params, args.episodes, args.seed)
            for name, want in cf.items():
                mean, se = mc[name]
                z = (mean - want) / se if se > 1e-12 else 0.0
                print(f"{theta:.6g},{delta:.6g},{name},{want:.10g},{mean:.10g},{se:.3g},{z:.2f}")
            print(f"# equilibrium at theta={theta:.6g}, delta={delta:.6g}: "
                  f"{trigger2_is_equilibrium(theta, delta, params)}")


if __name__ == "__main__":
    run()
