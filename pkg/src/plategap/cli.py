"""Command-line entry point: `plategap {spectrum,table1,figures,weights}`."""
from __future__ import annotations

import argparse
import logging
import os
import sys
import time
import warnings
from dataclasses import asdict
from pathlib import Path

from scipy import linalg

from .basis import LONGITUDINAL, TORSIONAL
from .config import ConfigError, PlateConfig, load_config
from .gap import InsufficientModesError
from .report import (
    RunManifest,
    raster_filename,
    run_catalog,
    write_gap_csv,
    write_ginf_vs_j,
    write_raster,
    write_table1,
)
from .spectrum import SpectrumError, compute_spectrum, convergence_check
from .weights import WEIGHT_NAMES, make_weight

OUT_ENV = "PLATEGAP_OUT"
EXIT_OK, EXIT_CONFIG, EXIT_NUMERICAL = 0, 1, 2

log = logging.getLogger("plategap")


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_CONFIG, f"{self.prog}: error: {message}\n")


def _parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", type=Path, help="JSON configuration (default: built-in parameters)")
    common.add_argument("--out", type=Path, help=f"output directory (env {OUT_ENV}, default ./out)")
    common.add_argument("--threads", type=int, default=1, help="weights evaluated in parallel")
    common.add_argument("-v", "--verbose", action="store_true")

    ap = _Parser(prog="plategap", description=__doc__)
    sub = ap.add_subparsers(dest="command", required=True, parser_class=_Parser)

    sp = sub.add_parser("spectrum", parents=[common], help="weighted eigenpairs for one weight")
    sp.add_argument("--weight", default="homogeneous")
    sp.add_argument("--neig", type=int, default=None, help="eigenpairs kept per parity")

    tp = sub.add_parser("table1", parents=[common], help="nu_1, nu_2 and maximal gaps for the catalog")
    tp.add_argument("--check-convergence", action="store_true", help="also refine (M, K) for each weight")

    fp = sub.add_parser("figures", parents=[common], help="gap profiles, G_inf versus j, weight rasters")
    fp.add_argument("--jmax", type=int, default=10)
    fp.add_argument("--nx", type=int, default=513)
    fp.add_argument("--ny", type=int, default=33)

    wp = sub.add_parser("weights", parents=[common], help="rasterize a weight to CSV")
    wp.add_argument("--weight", default="star")
    wp.add_argument("--nx", type=int, default=513)
    wp.add_argument("--ny", type=int, default=33)
    return ap


def _out_dir(args) -> Path:
    out = args.out or Path(os.environ.get(OUT_ENV, "out"))
    out.mkdir(parents=True, exist_ok=True)
    return out


def _config(args) -> PlateConfig:
    return load_config(args.config) if args.config else PlateConfig()


def _check_weight(name: str) -> None:
    if name in WEIGHT_NAMES or name in ("homogeneous", "star", "midline", "edges"):
        return
    if name.startswith("stripes:") and name.split(":", 1)[1].isdigit() and int(name.split(":", 1)[1]) >= 1:
        return
    raise ConfigError(f"unknown weight {name!r}; expected homogeneous, star, midline, stripes:i or edges")


def cmd_spectrum(args, cfg, out, manifest) -> None:
    _check_weight(args.weight)
    p = make_weight(args.weight, cfg)
    t = time.perf_counter()
    spec = compute_spectrum(cfg, p, n_eig=args.neig)
    manifest.timings["spectrum"] = time.perf_counter() - t
    manifest.weights.append(p.name)
    path = out / f"spectrum_{p.name.replace(':', '')}.json"
    spec.dump(path)
    manifest.outputs.append(path.name)
    print(f"weight {p.name}: M={cfg.M} K={cfg.K}")
    print(f"  nu_1 = {spec.nu(1):.6e}  ({TORSIONAL})")
    print(f"  nu_2 = {spec.nu(2):.6e}  ({TORSIONAL})")
    for j in range(1, min(11, len(spec.longitudinal)) + 1):
        print(f"  mu_{j:<2d} = {spec.mu(j):.6e}  ({LONGITUDINAL})")


def cmd_table1(args, cfg, out, manifest) -> None:
    results = run_catalog(cfg, WEIGHT_NAMES, args.threads, manifest.timings)
    manifest.weights += list(results)
    manifest.forces += ["f0", "f1", "f2"]
    path = write_table1(results, out)
    manifest.outputs.append(path.name)
    with open(path) as fh:
        print(fh.read(), end="")
    if args.check_convergence:
        for r in results.values():
            manifest.convergence.append(asdict(convergence_check(cfg, r.density)))


def cmd_figures(args, cfg, out, manifest) -> None:
    if args.jmax < 1 or args.jmax > cfg.n_modes:
        raise ConfigError(f"--jmax must be in 1..{cfg.n_modes}")
    results = run_catalog(cfg, WEIGHT_NAMES, args.threads, manifest.timings)
    manifest.weights += list(results)
    manifest.forces += ["f0", "f1"] + [f"f{j}" for j in range(1, args.jmax + 1) if j > 1]
    for force in ("f0", "f1"):
        manifest.outputs.append(write_gap_csv(results, force, out / f"gap_{force}.csv").name)
    t = time.perf_counter()
    manifest.outputs.append(write_ginf_vs_j(results, cfg, args.jmax, out / "ginf_vs_j.csv").name)
    manifest.timings["ginf_vs_j"] = time.perf_counter() - t
    for r in results.values():
        path = write_raster(r.density, cfg, args.nx, args.ny, out / raster_filename(r.name))
        manifest.outputs.append(path.name)
    print("\n".join(manifest.outputs))


def cmd_weights(args, cfg, out, manifest) -> None:
    _check_weight(args.weight)
    p = make_weight(args.weight, cfg)
    manifest.weights.append(p.name)
    path = write_raster(p, cfg, args.nx, args.ny, out / raster_filename(p.name))
    manifest.outputs.append(path.name)
    print(path)


COMMANDS = {"spectrum": cmd_spectrum, "table1": cmd_table1, "figures": cmd_figures, "weights": cmd_weights}


def main(argv=None) -> int:
    args = _parser().parse_args(argv)
    logging.basicConfig(level=logging.DEBUG if args.verbose else logging.WARNING, format="%(levelname)s %(message)s")
    try:
        cfg = _config(args)
        if args.threads < 1:
            raise ConfigError("--threads must be >= 1")
        out = _out_dir(args)
        manifest = RunManifest(args.command, cfg.to_dict())
        with warnings.catch_warnings(record=True) as caught:
            warnings.simplefilter("always")
            COMMANDS[args.command](args, cfg, out, manifest)
        for w in caught:
            log.warning("%s", w.message)
            manifest.warnings.append(str(w.message))
        manifest.write(out)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except ValueError as exc:
        if isinstance(exc, InsufficientModesError):
            print(f"numerical failure: {exc}", file=sys.stderr)
            return EXIT_NUMERICAL
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except (SpectrumError, linalg.LinAlgError, FloatingPointError, RuntimeError) as exc:
        print(f"numerical failure: {exc}", file=sys.stderr)
        return EXIT_NUMERICAL
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
