"""nu_1, nu_2 and the sign-load gap against basis size (M, K) for each weight."""
import argparse

from plategap.config import PlateConfig
from plategap.fields import sign_force
from plategap.gap import force_coefficients, gap_profile
from plategap.spectrum import compute_spectrum
from plategap.weights import WEIGHT_NAMES, make_weight


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--weights", nargs="+", default=list(WEIGHT_NAMES))
    ap.add_argument("--Ms", nargs="+", type=int, default=[30, 40, 60, 80])
    ap.add_argument("--Ks", nargs="+", type=int, default=[4, 6, 8, 10])
    args = ap.parse_args()

    base = PlateConfig()
    hom = compute_spectrum(base, make_weight("homogeneous", base))
    for name in args.weights:
        p = make_weight(name, base, hom)
        print(f"\n{name}")
        print(f"{'M':>4s} {'K':>3s} {'nu1':>14s} {'nu2':>14s} {'Ginf_f0':>14s}")
        for M in args.Ms:
            for K in args.Ks:
                cfg = base.replace(M=M, K=K, N=min(base.N, M))
                spec = compute_spectrum(cfg, p)
                a = force_coefficients(sign_force(cfg), p, spec, cfg.N).a
                g = gap_profile(a, spec, cfg).g_inf
                print(f"{M:4d} {K:3d} {spec.nu(1):14.8e} {spec.nu(2):14.8e} {g:14.8e}")


if __name__ == "__main__":
    main()
