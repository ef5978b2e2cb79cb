"""Print delta_inf(theta) for Trigger 1 and whether the punishment phase is a stage equilibrium."""
import argparse

import numpy as np

from entangled_pd import PayoffParams
from entangled_pd.repeated import trigger1_delta_inf, trigger1_punishment_ok


def run():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--params", default="5,3,1,0")
    ap.add_argument("--n", type=int, default=11)
    args = ap.parse_args()
    params = PayoffParams.from_string(args.params)
    print("theta,delta_inf,punishment_ok")
    for theta in np.linspace(0, np.pi / 2, args.n):
        print(f"{theta:.6f},{trigger1_delta_inf(theta, params):.12f},"
              f"{int(trigger1_punishment_ok(theta, params))}")


if __name__ == "__main__":
    run()
