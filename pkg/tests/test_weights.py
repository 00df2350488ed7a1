import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from plategap.config import PlateConfig
from plategap.fields import Family, check_admissible
from plategap.quadrature import AreaGrid, build_panels, integrate, sublevel_area
from plategap.weights import (
    WEIGHT_NAMES,
    edge_interval,
    find_threshold,
    heavy_fraction,
    make_weight,
    make_xstripes,
    midline_half_width,
    rasterize,
    stripe_intervals,
)
from conftest import REFERENCE_TABLE1, SCALE


def test_heavy_fraction_default(cfg):
    assert heavy_fraction(cfg) == 0.5


def test_midline_interval(cfg):
    assert midline_half_width(cfg) == pytest.approx(cfg.ell / 2, rel=1e-15)
    p = make_weight("midline", cfg)
    y = np.array([0.0, 0.49 * cfg.ell, 0.51 * cfg.ell, -0.49 * cfg.ell, -cfg.ell])
    np.testing.assert_array_equal(p(1.0, y), [1.5, 1.5, 0.5, 1.5, 0.5])


def test_single_stripe_and_edges_are_complementary(cfg):
    (a, b), = stripe_intervals(1, cfg)
    assert (a, b) == pytest.approx((math.pi / 4, 3 * math.pi / 4), rel=1e-15)
    assert edge_interval(cfg) == pytest.approx((math.pi / 4, 3 * math.pi / 4), rel=1e-15)
    s1, e = make_weight("stripes:1", cfg), make_weight("edges", cfg)
    x = np.linspace(0.01, math.pi - 0.01, 997)
    x = x[(np.abs(x - a) > 1e-9) & (np.abs(x - b) > 1e-9)]
    np.testing.assert_allclose(s1(x, 0.0) + e(x, 0.0), cfg.alpha + cfg.beta)


@given(st.integers(1, 60))
@settings(max_examples=25, deadline=None)
def test_stripes_mass_and_layout(i):
    cfg = PlateConfig()
    iv = stripe_intervals(i, cfg)
    assert len(iv) == i
    assert all(b0 < a1 for (_, b0), (a1, _) in zip(iv, iv[1:]))
    assert iv[0][0] > 0 and iv[-1][1] < math.pi
    heavy = sum(b - a for a, b in iv)
    assert heavy == pytest.approx(heavy_fraction(cfg) * math.pi, rel=1e-12)
    # mirror symmetric about x = pi/2
    for (a, b), (c, d) in zip(iv, reversed(iv)):
        assert a + d == pytest.approx(math.pi, abs=1e-12)


@pytest.mark.parametrize("name", ["homogeneous", "midline", "stripes:10", "stripes:3", "edges"])
def test_piecewise_weights_have_unit_mean(cfg, name):
    p = make_weight(name, cfg)
    grid = build_panels(cfg, p.x_breakpoints, p.y_breakpoints)
    X, Y = grid.mesh()
    mean = integrate(p(X, Y), grid) / integrate(np.ones_like(X), grid)
    assert mean == pytest.approx(1.0, abs=1e-12)
    assert check_admissible(p, cfg, grid) < 1e-12


def test_star_area_and_midline_membership(cfg, hom_spec):
    p = make_weight("star", cfg, hom_spec)
    assert p.family is Family.LEVELSET_STAR and p.has_curved_interface
    t = p.threshold
    assert t.target_area == pytest.approx(0.5 * cfg.area, rel=1e-15)
    assert abs(t.achieved_area - t.target_area) <= 1e-3 * cfg.area
    # the torsional mode vanishes on the midline, so y = 0 is heavy
    x = np.linspace(0.05, math.pi - 0.05, 50)
    np.testing.assert_array_equal(p(x, 0.0), cfg.beta)
    np.testing.assert_array_equal(p(x, 0.3 * cfg.ell), p(x, -0.3 * cfg.ell))


def test_star_mass_within_tolerance(cfg, hom_spec):
    p = make_weight("star", cfg, hom_spec)
    grid = build_panels(cfg, (), (0.0,))
    assert check_admissible(p, cfg, grid) <= 1e-3


def test_star_area_on_independent_grid(cfg, hom_spec):
    p = make_weight("star", cfg, hom_spec)
    g = AreaGrid(cfg.ell, 2000, 200)
    X, Y = np.meshgrid(g.x, g.y, indexing="ij")
    heavy = np.count_nonzero(p(X, Y) == cfg.beta) * g.cell_area
    assert heavy == pytest.approx(0.5 * cfg.area, rel=5e-3)


def test_threshold_search_on_known_function():
    g = AreaGrid(1.0, 400, 40)
    X, Y = np.meshgrid(g.x, g.y, indexing="ij")
    samples = (X / math.pi) ** 2  # sublevel {x <= pi sqrt(t)}
    target = 0.3 * math.pi * 2
    res = find_threshold(samples, target, g, tol=g.cell_area * 40)
    assert math.pi * math.sqrt(res.t_star) == pytest.approx(0.3 * math.pi, abs=math.pi / 400)
    assert abs(res.achieved_area - target) <= g.cell_area * 40


def test_threshold_search_unreachable_target():
    g = AreaGrid(1.0, 10, 4)
    samples = np.zeros((10, 4))
    with pytest.raises(RuntimeError):
        find_threshold(samples, 0.1, g, tol=1e-6)


def test_sublevel_area_counts_cells():
    g = AreaGrid(1.0, 10, 4)
    s = np.arange(40.0).reshape(10, 4)
    assert sublevel_area(s, 9.0, g) == pytest.approx(10 * g.cell_area)


@pytest.mark.parametrize("bad", ["heavy", "stripes:x", "stripes:0", "star:2"])
def test_unknown_weight_names(cfg, bad):
    with pytest.raises(ValueError):
        make_weight(bad, cfg)


def test_eigenvalues_against_reference_table(catalog):
    for i, name in enumerate(WEIGHT_NAMES):
        res = catalog[name]
        assert res.nu1 * SCALE["nu1"] == pytest.approx(REFERENCE_TABLE1["nu1"][i], rel=0.03), name
        assert res.nu2 * SCALE["nu2"] == pytest.approx(REFERENCE_TABLE1["nu2"][i], rel=0.03), name


def test_rasterize_shape_and_values(cfg):
    X, Y, P = rasterize(make_xstripes(2, cfg), cfg, 33, 5)
    assert P.shape == (33, 5)
    assert set(np.unique(P)) <= {cfg.alpha, cfg.beta}
    assert np.all(P[:, 0] == P[:, -1])
