"""Write the CSV data behind every figure id into one directory."""
import argparse
import pathlib
import sys

from entangled_pd.cli import FIGURES, main


def run():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("outdir", nargs="?", default="figures")
    ap.add_argument("--sphere-grid", type=int, default=10_000)
    args = ap.parse_args()
    out = pathlib.Path(args.outdir)
    out.mkdir(parents=True, exist_ok=True)
    for fig in FIGURES:
        argv = ["figure", fig, "--out", str(out / f"{fig}.csv"), "--verify"]
        if fig == "minimax-pure":
            argv += ["--sphere-grid", str(args.sphere_grid)]
        code = main(argv)
        print(f"{fig:24s} exit {code}")
        if code:
            return code
    return 0


if __name__ == "__main__":
    sys.exit(run())
