"""Pipelines behind the CLI: the weight catalog run, table1.csv and figure data."""
from __future__ import annotations

import csv
import json
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import asdict, dataclass, field
from pathlib import Path
from typing import Optional, Sequence

import numpy as np

from .config import PlateConfig
from .fields import DensityField, resonant_force, sign_force
from .gap import GapProfile, force_coefficients, gap_profile, ginf_vs_j
from .spectrum import Spectrum, compute_spectrum
from .weights import WEIGHT_NAMES, make_homogeneous, make_weight

TABLE1_ROWS = (
    ("nu1*1e-4", "nu1", 1e-4),
    ("nu2*1e-4", "nu2", 1e-4),
    ("Ginf_f0*1e4", "f0", 1e4),
    ("Ginf_f1*1e4", "f1", 1e4),
    ("Ginf_f2*1e4", "f2", 1e4),
)
FORCE_NAMES = ("f0", "f1", "f2")


def fmt(v: float) -> str:
    return format(float(v), ".17g")


def write_csv(path: Path, header: Sequence[str], rows) -> Path:
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(header)
        for row in rows:
            w.writerow([fmt(v) if isinstance(v, (float, np.floating)) else v for v in row])
    return path


@dataclass
class WeightResult:
    name: str
    density: DensityField
    spectrum: Spectrum
    gaps: dict[str, GapProfile]

    @property
    def nu1(self) -> float:
        return self.spectrum.nu(1)

    @property
    def nu2(self) -> float:
        return self.spectrum.nu(2)

    def cell(self, key: str) -> float:
        if key == "nu1":
            return self.nu1
        if key == "nu2":
            return self.nu2
        return self.gaps[key].g_inf


@dataclass
class RunManifest:
    command: str
    config: dict
    weights: list[str] = field(default_factory=list)
    forces: list[str] = field(default_factory=list)
    outputs: list[str] = field(default_factory=list)
    timings: dict[str, float] = field(default_factory=dict)
    convergence: list[dict] = field(default_factory=list)
    warnings: list[str] = field(default_factory=list)

    def write(self, out_dir: Path) -> Path:
        path = Path(out_dir) / "run_manifest.json"
        self.outputs.append(path.name)
        path.write_text(json.dumps(asdict(self), indent=2) + "\n")
        return path


def evaluate_weight(cfg: PlateConfig, p: DensityField, spectrum: Optional[Spectrum] = None, N: Optional[int] = None) -> WeightResult:
    """Spectrum plus the gap profiles for f0, f1, f2 under density p."""
    spec = compute_spectrum(cfg, p) if spectrum is None else spectrum
    N = cfg.N if N is None else N
    gaps = {}
    for f in (sign_force(cfg), resonant_force(1), resonant_force(2)):
        co = force_coefficients(f, p, spec, N)
        gaps[f.name] = gap_profile(co.a, spec, cfg)
    return WeightResult(p.name, p, spec, gaps)


def run_catalog(
    cfg: PlateConfig,
    names: Sequence[str] = WEIGHT_NAMES,
    threads: int = 1,
    timings: Optional[dict] = None,
    N: Optional[int] = None,
) -> dict[str, WeightResult]:
    """Evaluate each named weight; columns run in parallel, results keep `names` order."""
    timings = {} if timings is None else timings
    t0 = time.perf_counter()
    hom_p = make_homogeneous()
    hom = compute_spectrum(cfg, hom_p)
    timings["homogeneous_spectrum"] = time.perf_counter() - t0

    def one(name: str) -> tuple[WeightResult, float]:
        t = time.perf_counter()
        if name == "homogeneous":
            res = evaluate_weight(cfg, hom_p, hom, N)
        else:
            res = evaluate_weight(cfg, make_weight(name, cfg, hom), N=N)
        return res, time.perf_counter() - t

    if threads > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            done = list(pool.map(one, names))
    else:
        done = [one(n) for n in names]
    out = {}
    for name, (res, dt) in zip(names, done):
        out[name] = res
        timings[f"weight:{name}"] = dt
    return out


def table1(results: dict[str, WeightResult]) -> list[tuple[str, list[float]]]:
    """Rows of table1.csv (eigenvalues x 1e-4, gaps x 1e4), columns in the order of `results`."""
    return [(label, [r.cell(key) * scale for r in results.values()]) for label, key, scale in TABLE1_ROWS]


def write_table1(results: dict[str, WeightResult], out_dir: Path) -> Path:
    rows = [[label, *vals] for label, vals in table1(results)]
    return write_csv(Path(out_dir) / "table1.csv", ["quantity", *results.keys()], rows)


def write_gap_csv(results: dict[str, WeightResult], force: str, path: Path) -> Path:
    profiles = [r.gaps[force] for r in results.values()]
    x = profiles[0].x_grid
    rows = [[x[i], *(g.values[i] for g in profiles)] for i in range(len(x))]
    return write_csv(path, ["x", *results.keys()], rows)


def write_ginf_vs_j(results: dict[str, WeightResult], cfg: PlateConfig, j_max: int, path: Path,
                    names: Sequence[str] = ("homogeneous", "star")) -> Path:
    cols = [ginf_vs_j(results[n].spectrum, results[n].density, cfg, j_max) for n in names]
    rows = [[j, *(float(c[j - 1][1]) for c in cols)] for j in range(1, j_max + 1)]
    return write_csv(path, ["j", *names], rows)


def raster_filename(name: str) -> str:
    return "weight_" + name.replace(":", "") + ".csv"


def write_raster(p: DensityField, cfg: PlateConfig, nx: int, ny: int, path: Path) -> Path:
    from .weights import rasterize

    X, Y, P = rasterize(p, cfg, nx, ny)
    rows = zip(X.ravel().tolist(), Y.ravel().tolist(), P.ravel().tolist())
    return write_csv(path, ["x", "y", "p"], rows)
