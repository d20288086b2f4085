import math

import numpy as np
import pytest
from scipy import integrate, stats

from dimscope import (
    CascadeSpec,
    FractalSpec,
    InvalidArgumentError,
    ManifoldSpec,
    sample_ifs_fractal,
    sample_lognormal_cascade,
    sample_manifold,
)
from dimscope.geometry import (
    FRACTAL_DIMENSIONS,
    SWISS_ROLL_T_RANGE,
    ifs_maps,
)
from dimscope import rng as dsrng


class TestSpecs:
    def test_unknown_kind(self):
        with pytest.raises(InvalidArgumentError):
            ManifoldSpec("torus")

    def test_fixed_intrinsic_dim(self):
        with pytest.raises(InvalidArgumentError):
            ManifoldSpec("swiss_roll", intrinsic_dim=3)
        assert ManifoldSpec("mobius_strip").intrinsic_dim == 2

    def test_defaults(self):
        assert ManifoldSpec("unit_cube").intrinsic_dim == 3
        assert ManifoldSpec("unit_sphere", 5).intrinsic_dim == 5

    def test_fractal_dimensions(self):
        assert FRACTAL_DIMENSIONS["sierpinski_triangle"] == pytest.approx(
            math.log(3) / math.log(2)
        )
        assert FRACTAL_DIMENSIONS["sierpinski_carpet"] == pytest.approx(
            math.log(8) / math.log(3)
        )
        assert FRACTAL_DIMENSIONS["menger_sponge"] == pytest.approx(
            math.log(20) / math.log(3)
        )

    def test_cascade_bounds(self):
        with pytest.raises(InvalidArgumentError):
            CascadeSpec(levels=0)
        with pytest.raises(InvalidArgumentError):
            CascadeSpec(levels=25)


class TestSphere:
    def test_unit_norm(self):
        c = sample_manifold(ManifoldSpec("unit_sphere", 2), 5000, 0)
        assert c.d == 3
        np.testing.assert_allclose(np.linalg.norm(c.points, axis=1), 1.0, atol=1e-12)

    def test_mean_near_origin(self):
        n = 20000
        c = sample_manifold(ManifoldSpec("unit_sphere", 3), n, 1)
        assert np.linalg.norm(c.points.mean(axis=0)) < 5 / math.sqrt(n)

    def test_gaussian_mix_on_sphere_and_polar(self):
        c = sample_manifold(ManifoldSpec("unit_sphere_gaussian_mix", 2), 5000, 2)
        np.testing.assert_allclose(np.linalg.norm(c.points, axis=1), 1.0, atol=1e-12)
        # mass concentrates near the poles relative to the uniform value
        assert np.abs(c.points[:, -1]).mean() > 0.6


class TestCube:
    def test_in_unit_box(self):
        c = sample_manifold(ManifoldSpec("unit_cube"), 1000, 3)
        assert c.points.min() >= 0 and c.points.max() <= 1

    def test_ks_uniform(self):
        c = sample_manifold(ManifoldSpec("unit_cube"), 100000, 4)
        for k in range(3):
            assert stats.kstest(c.points[:, k], "uniform").pvalue > 0.01


class TestSwissRoll:
    def test_parameterization(self):
        c = sample_manifold(ManifoldSpec("swiss_roll"), 2000, 5)
        t = np.hypot(c.points[:, 0], c.points[:, 2])
        t0, t1 = SWISS_ROLL_T_RANGE
        assert t.min() >= t0 - 1e-9 and t.max() <= t1 + 1e-9
        np.testing.assert_allclose(c.points[:, 0], t * np.cos(t), atol=1e-9)
        np.testing.assert_allclose(c.points[:, 2], t * np.sin(t), atol=1e-9)
        assert c.points[:, 1].min() >= 0 and c.points[:, 1].max() <= 21

    def test_area_density(self):
        # t marginal must follow the area element sqrt(1 + t^2)
        c = sample_manifold(ManifoldSpec("swiss_roll"), 100000, 6)
        t = np.hypot(c.points[:, 0], c.points[:, 2])
        t0, t1 = SWISS_ROLL_T_RANGE
        edges = np.linspace(t0, t1, 21)
        observed, _ = np.histogram(t, bins=edges)
        probs = np.array(
            [
                integrate.quad(lambda s: math.sqrt(1 + s * s), a, b)[0]
                for a, b in zip(edges[:-1], edges[1:])
            ]
        )
        probs /= probs.sum()
        p = stats.chisquare(observed, probs * len(t)).pvalue
        assert p > 0.01


class TestMobius:
    def test_on_surface(self):
        c = sample_manifold(ManifoldSpec("mobius_strip"), 3000, 7)
        assert c.d == 3
        r = np.hypot(c.points[:, 0], c.points[:, 1])
        assert r.min() >= 0.5 - 1e-9 and r.max() <= 1.5 + 1e-9
        assert np.abs(c.points[:, 2]).max() <= 0.5 + 1e-9

    def test_u_marginal_density(self):
        c = sample_manifold(ManifoldSpec("mobius_strip"), 100000, 8)
        u = np.mod(np.arctan2(c.points[:, 1], c.points[:, 0]), 2 * np.pi)

        def density(uu):
            def j(v):
                r = 1 + (v / 2) * math.cos(uu / 2)
                ru = -(v / 4) * math.sin(uu / 2)
                pu = np.array(
                    [
                        ru * math.cos(uu) - r * math.sin(uu),
                        ru * math.sin(uu) + r * math.cos(uu),
                        (v / 4) * math.cos(uu / 2),
                    ]
                )
                pv = np.array(
                    [
                        0.5 * math.cos(uu / 2) * math.cos(uu),
                        0.5 * math.cos(uu / 2) * math.sin(uu),
                        0.5 * math.sin(uu / 2),
                    ]
                )
                return np.linalg.norm(np.cross(pu, pv))

            return integrate.quad(j, -1, 1)[0]

        edges = np.linspace(0, 2 * np.pi, 13)
        observed, _ = np.histogram(u, bins=edges)
        mids = 0.5 * (edges[:-1] + edges[1:])
        probs = np.array([density(m) for m in mids])
        probs /= probs.sum()
        assert stats.chisquare(observed, probs * len(u)).pvalue > 0.01


class TestParaboloid:
    def test_surface_equation(self):
        c = sample_manifold(ManifoldSpec("paraboloid"), 2000, 9)
        r2 = c.points[:, 0] ** 2 + c.points[:, 1] ** 2
        np.testing.assert_allclose(c.points[:, 2], r2, atol=1e-12)
        assert r2.max() <= 1 + 1e-12


def _base3_digits(x, depth):
    digits = []
    for _ in range(depth):
        x = x * 3
        d = np.minimum(np.floor(x).astype(int), 2)
        digits.append(d)
        x = x - d
    return np.stack(digits)


class TestFractals:
    def test_carpet_level1_cells(self):
        c = sample_ifs_fractal(FractalSpec("sierpinski_carpet"), 5000, 0)
        d0 = _base3_digits(c.points[:, 0], 1)[0]
        d1 = _base3_digits(c.points[:, 1], 1)[0]
        assert not np.any((d0 == 1) & (d1 == 1))

    def test_carpet_depth5_membership(self):
        c = sample_ifs_fractal(FractalSpec("sierpinski_carpet"), 5000, 1)
        dx = _base3_digits(c.points[:, 0], 5)
        dy = _base3_digits(c.points[:, 1], 5)
        assert not np.any((dx == 1) & (dy == 1))

    def test_sponge_depth5_membership(self):
        c = sample_ifs_fractal(FractalSpec("menger_sponge"), 5000, 2)
        digs = [_base3_digits(c.points[:, k], 5) for k in range(3)]
        ones = sum((d == 1).astype(int) for d in digs)
        assert not np.any(ones >= 2)

    def test_triangle_depth5_membership(self):
        c = sample_ifs_fractal(FractalSpec("sierpinski_triangle"), 3000, 3)
        verts = np.array([[0.0, 0.0], [1.0, 0.0], [0.5, math.sqrt(3) / 2]])
        pts = c.points.copy()
        tol = 1e-9
        for _ in range(5):
            nxt = np.empty_like(pts)
            ok = np.zeros(len(pts), dtype=bool)
            for v in verts:
                cand = 2 * pts - v
                # inside the big triangle (barycentric test with tolerance)
                x, y = cand[:, 0], cand[:, 1]
                inside = (
                    (y >= -tol)
                    & (y <= math.sqrt(3) * x + tol)
                    & (y <= math.sqrt(3) * (1 - x) + tol)
                )
                take = inside & ~ok
                nxt[take] = cand[take]
                ok |= inside
            assert ok.all()
            pts = nxt

    def test_points_in_unit_box(self):
        for kind in ("sierpinski_triangle", "sierpinski_carpet", "menger_sponge"):
            c = sample_ifs_fractal(FractalSpec(kind), 1000, 4)
            assert c.points.min() >= 0 and c.points.max() <= 1

    def test_deterministic(self):
        a = sample_ifs_fractal(FractalSpec("menger_sponge"), 500, 5)
        b = sample_ifs_fractal(FractalSpec("menger_sponge"), 500, 5)
        np.testing.assert_array_equal(a.points, b.points)

    def test_map_counts(self):
        assert len(ifs_maps("sierpinski_triangle")[1]) == 3
        assert len(ifs_maps("sierpinski_carpet")[1]) == 8
        assert len(ifs_maps("menger_sponge")[1]) == 20


class TestCascade:
    def test_degenerate_constant(self):
        c = sample_lognormal_cascade(CascadeSpec(levels=1, log_sd=0.0, log_mean=0.0), 0)
        np.testing.assert_allclose(c.points, [[0.0, 1.0], [0.5, 1.0]], atol=1e-15)

    def test_length_and_abscissa(self):
        spec = CascadeSpec(levels=6)
        c = sample_lognormal_cascade(spec, 1)
        assert c.n == 64
        np.testing.assert_allclose(c.points[:, 0], np.arange(64) / 64)

    def test_leaf_is_ancestor_product(self):
        # recompute one leaf's multiplier chain straight from the stream
        spec = CascadeSpec(levels=7, log_sd=0.4)
        seed = 9
        c = sample_lognormal_cascade(spec, seed)
        g = dsrng.stream(seed, "sample_lognormal_cascade", spec.levels)
        weights = [
            spec.log_mean + spec.log_sd * g.standard_normal(2 ** (lev + 1))
            for lev in range(spec.levels)
        ]
        k = 101  # arbitrary leaf
        log_mass = sum(
            weights[lev][k >> (spec.levels - 1 - lev)] for lev in range(spec.levels)
        )
        all_logs = np.zeros(1)
        for lev in range(spec.levels):
            all_logs = np.repeat(all_logs, 2) + weights[lev]
        expected = math.exp(log_mass - all_logs.max())
        assert c.points[k, 1] == pytest.approx(expected, rel=1e-12)

    def test_deterministic(self):
        a = sample_lognormal_cascade(CascadeSpec(levels=8), 3)
        b = sample_lognormal_cascade(CascadeSpec(levels=8), 3)
        np.testing.assert_array_equal(a.points, b.points)
