"""How fast i evenly spaced heavy stripes approach the homogeneous plate."""
import argparse

from plategap.config import PlateConfig
from plategap.report import evaluate_weight
from plategap.weights import make_homogeneous, make_xstripes


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--imax", type=int, default=20)
    args = ap.parse_args()
    cfg = PlateConfig()
    hom = evaluate_weight(cfg, make_homogeneous())
    keys = ("nu1", "nu2", "f0", "f1", "f2")
    print(f"{'i':>3s}" + "".join(f"{k:>12s}" for k in keys) + "   (relative to homogeneous)")
    for i in range(1, args.imax + 1):
        r = evaluate_weight(cfg, make_xstripes(i, cfg))
        print(f"{i:3d}" + "".join(f"{r.cell(k) / hom.cell(k) - 1:+12.4%}" for k in keys))


if __name__ == "__main__":
    main()
