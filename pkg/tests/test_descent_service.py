"""Descent directions on sets and the eps-shrinking descent loop.

In a non-reflexive sequence space the optimal direction can fail to exist:
the minimizing directions approach the supremum of a functional without ever
attaining it. Finite-dimensional unit balls are compact, so that situation
cannot arise here and is not executed.
"""
import logging
import time

import numpy as np
import pytest

from setgrad.constants.trace import STATUS_ITER_LIMIT, STATUS_SHRINK, STATUS_STATIONARY, STATUS_STEP
from setgrad.exceptions import InputError, NonUniqueDualMapError
from setgrad.models.config import DescentConfig
from setgrad.models.hull import HullSet
from setgrad.models.regions import BallRegion, SegmentRegion
from setgrad.norms import NormSpec, norm_value
from setgrad.oracles import builtin
from setgrad.services.descent_service import (
    approx_direction_quality,
    descent_direction,
    line_search,
    naive_subgradient_run,
    regularity_floor,
    run_descent,
    select_direction,
    stability_check,
    sweep_tau,
)
from setgrad.services.hull_service import exact_hull, support_value


def unit(v):
    v = np.asarray(v, dtype=float)
    return v / np.linalg.norm(v)


class TestDirections:
    def test_valley_certificate(self, valley_hull):
        cert = descent_direction(valley_hull, NormSpec.euclidean(), sigma=1e-6)
        assert np.allclose(cert.a_min, (0.0, 0.01), atol=1e-9)
        assert np.allclose(cert.direction, (0.0, -1.0), atol=1e-9)
        assert cert.directional_value == pytest.approx(-0.01, abs=1e-12)
        assert cert.pairing_residual <= 1e-8
        assert cert.stability_radius == pytest.approx(0.01 / np.hypot(1.0, 0.01))

    def test_skewed_abs_face_selection_under_l1(self, skewed_hull):
        h, value, candidates = select_direction(skewed_hull, (1.0, 1.0), NormSpec.l1())
        scored = {tuple(float(v) + 0.0 for v in c.direction): c.support for c in candidates}
        assert scored[(0.0, -1.0)] == 1.0
        assert scored[(-1.0, 0.0)] == -1.0
        assert tuple(h) == (-1.0, 0.0)
        assert value == -1.0

    def test_skewed_abs_certificate_under_l1(self, skewed_hull):
        cert = descent_direction(skewed_hull, NormSpec.l1(), sigma=1e-6)
        assert tuple(cert.direction) == (-1.0, 0.0)
        assert cert.directional_value == -1.0
        assert cert.a_min_norm == 1.0

    def test_half_max_face_selection_under_linf(self, half_max_hull):
        h, value, candidates = select_direction(half_max_hull, (1.0, 0.0), NormSpec.linf())
        scored = {tuple(float(v) + 0.0 for v in c.direction): c.support for c in candidates}
        assert scored[(-1.0, 1.0)] == 1.0
        assert scored[(-1.0, -1.0)] == -1.0
        assert tuple(h) == (-1.0, -1.0)
        assert value == -1.0

    def test_half_max_certificate_under_linf(self, half_max_hull):
        cert = descent_direction(half_max_hull, NormSpec.linf(), sigma=1e-6)
        assert tuple(cert.direction) == (-1.0, -1.0)
        assert cert.directional_value == -1.0

    def test_solver_direction_is_the_last_candidate(self, skewed_hull):
        cert = descent_direction(skewed_hull, NormSpec.l1(), sigma=1e-6)
        assert len(cert.candidates) == 3
        assert np.allclose(cert.candidates[-1].direction, (-1.0, 0.0), atol=1e-9)
        assert cert.candidates[-1].support == pytest.approx(-1.0, abs=1e-9)

    def test_solver_direction_rescues_an_inexact_minimal_element(self, valley_hull):
        inexact = (1e-17, 0.01)
        h, value, _ = select_direction(valley_hull, inexact, NormSpec.linf())
        assert tuple(h) == (-1.0, -1.0)
        assert value == pytest.approx(0.99)
        h, value, candidates = select_direction(valley_hull, inexact, NormSpec.linf(), dual_direction=(0.0, 1.0))
        assert np.array_equal(h, (0.0, -1.0))
        assert value == pytest.approx(-0.01, abs=1e-15)
        assert len(candidates) == 2

    @pytest.mark.parametrize("spec", [NormSpec.euclidean(), NormSpec.l1(), NormSpec.linf(), NormSpec.p_norm(3)], ids=str)
    def test_hull_containing_origin(self, spec):
        cert = descent_direction(HullSet.of((1.0, 0.0), (-1.0, 0.0), (0.0, 1.0), (0.0, -1.0)), spec, sigma=1e-6)
        assert not cert.has_direction
        assert cert.a_min_norm <= 1e-6
        assert cert.directional_value is None

    def test_renorming_changes_the_direction(self):
        hull = HullSet.of((1.0, 2.0), (3.0, 3.0))
        euclidean = descent_direction(hull, NormSpec.euclidean(), sigma=1e-9).direction
        quartic = descent_direction(hull, NormSpec.p_norm(4), sigma=1e-9).direction
        assert np.allclose(euclidean, -unit((1.0, 2.0)), atol=1e-9)
        assert not np.allclose(euclidean, quartic, atol=1e-3)
        assert norm_value(quartic, NormSpec.p_norm(4)) == pytest.approx(1.0, abs=1e-10)

    def test_exact_hulls_pair_value_norm_and_support(self, rng, make_max_affine):
        checked = 0
        for _ in range(40):
            oracle = make_max_affine(rng, pieces=5)
            hull = exact_hull(oracle, BallRegion(rng.uniform(-1, 1, size=2), rng.uniform(0.1, 0.8)))
            cert = descent_direction(hull, NormSpec.euclidean(), sigma=1e-9)
            if not cert.has_direction:
                continue
            checked += 1
            assert float(cert.a_min @ cert.direction) == pytest.approx(-cert.a_min_norm, abs=1e-8)
            assert support_value(hull, cert.direction) == pytest.approx(-cert.a_min_norm, abs=1e-8)
            assert cert.directional_value < 0
        assert checked > 0

    def test_origin_outside_hull_iff_direction(self, rng):
        for _ in range(50):
            hull = HullSet(rng.normal(size=(3, 2)) + rng.normal(size=2))
            cert = descent_direction(hull, NormSpec.euclidean(), sigma=1e-9)
            inside = cert.a_min_norm <= 1e-9
            assert cert.has_direction is not inside
            if cert.has_direction:
                assert cert.directional_value < 0


class TestStability:
    def test_optimal_direction_is_stable(self, valley_hull):
        cert = descent_direction(valley_hull, NormSpec.euclidean(), sigma=1e-6)
        assert stability_check(cert.direction, cert)

    def test_nearby_direction(self, valley_hull):
        cert = descent_direction(valley_hull, NormSpec.euclidean(), sigma=1e-6)
        h = unit((0.005, -1.0))
        assert stability_check(h, cert, lipschitz=1.0)
        assert support_value(valley_hull, h) < 0

    def test_reversed_direction(self, valley_hull):
        cert = descent_direction(valley_hull, NormSpec.euclidean(), sigma=1e-6)
        assert not stability_check(-cert.direction, cert, lipschitz=1.0)

    def test_needs_a_direction(self):
        cert = descent_direction(HullSet.of((1.0,), (-1.0,)), NormSpec.euclidean(), sigma=1e-6)
        with pytest.raises(InputError):
            stability_check((1.0,), cert)

    def test_stability_ball_is_sharp(self, valley, rng):
        hull = exact_hull(valley, BallRegion((0.02, 5), 0.5))
        cert = descent_direction(hull, NormSpec.euclidean(), sigma=1e-6)
        radius = cert.a_min_norm / cert.lipschitz
        directions = rng.normal(size=(1000, 2))
        directions /= np.linalg.norm(directions, axis=1)[:, None]
        for u, r in zip(directions, rng.uniform(0.0, 0.999, size=1000)):
            h = cert.direction + r * radius * u
            assert stability_check(h, cert)
            assert support_value(hull, h) < 0
        outside = [support_value(hull, cert.direction + 1.5 * radius * u) for u in directions]
        assert max(outside) >= 0


class TestApproximation:
    def test_tiny_tau_keeps_the_optimal_direction(self, valley_hull):
        report = approx_direction_quality(valley_hull, NormSpec.euclidean(), tau=1e-15, delta=0.9, trials=200)
        assert report.trials == 200
        assert report.violations == 0
        assert report.max_support == pytest.approx(-0.01, abs=1e-6)

    def test_tau_sweep_on_valley_hull(self, valley_hull):
        taus = [1e-12, 1e-10, 1e-8, 1e-6, 1e-4]
        best, reports = sweep_tau(valley_hull, NormSpec.euclidean(), delta=0.9, taus=taus, trials=1000, seed=3)
        assert best == 1e-10
        by_tau = {report.tau: report for report in reports}
        assert by_tau[1e-10].violations == 0
        assert by_tau[1e-4].violation_fraction > 0

    def test_large_tau_violates(self, valley_hull):
        report = approx_direction_quality(valley_hull, NormSpec.euclidean(), tau=2.0, delta=0.99, trials=500, seed=1)
        assert report.violation_fraction > 0

    def test_polyhedral_norm_rejected(self, valley_hull):
        with pytest.raises(NonUniqueDualMapError):
            approx_direction_quality(valley_hull, NormSpec.l1(), tau=1e-3, delta=0.5, trials=10)

    def test_parameter_ranges(self, valley_hull):
        with pytest.raises(InputError):
            approx_direction_quality(valley_hull, NormSpec.euclidean(), tau=1e-3, delta=1.5, trials=10)


class TestLineSearch:
    def test_valley_accepts_full_step(self, valley):
        assert line_search(valley, (0.0, 5.0), (0.0, -1.0), -0.01, 0.5) == 0.5

    def test_requires_descent_value(self, valley):
        with pytest.raises(InputError):
            line_search(valley, (0.0, 5.0), (0.0, -1.0), 0.0, 0.5)

    def test_failure_sentinel(self):
        assert line_search(builtin("abs1d"), (1.0,), (-1.0,), -10.0, 0.5, armijo=1.0) == 0.0

    def test_descent_estimate_on_segments(self, rng, make_max_affine):
        checked = 0
        for _ in range(1000):
            oracle = make_max_affine(rng, pieces=4)
            x = rng.uniform(-1, 1, size=2)
            h = unit(rng.normal(size=2))
            eps = float(rng.uniform(0.05, 1.0))
            hull = exact_hull(oracle, SegmentRegion(x, x + eps * h))
            value = support_value(hull, h)
            if value >= 0:
                continue
            checked += 1
            t = float(rng.uniform(0.0, eps))
            assert oracle.eval(x + t * h) <= oracle.eval(x) + t * value + 1e-12
        assert checked > 100

    def test_descent_estimate_on_balls(self, rng, make_max_affine):
        for _ in range(200):
            oracle = make_max_affine(rng, pieces=4)
            x = rng.uniform(-1, 1, size=2)
            eps = float(rng.uniform(0.05, 1.0))
            hull = exact_hull(oracle, BallRegion(x, eps))
            h = unit(rng.normal(size=2))
            value = support_value(hull, h)
            if value >= 0:
                continue
            t = line_search(oracle, x, h, value, eps, armijo=1.0)
            assert oracle.eval(x + t * h) <= oracle.eval(x) + t * value + 1e-12


class TestRunDescent:
    def test_valley_run(self, valley):
        started = time.perf_counter()
        trajectory = run_descent(valley, (0.02, 5.0), DescentConfig(eps0=0.5, sigma=1e-3, eps_min=1e-3))
        elapsed = time.perf_counter() - started
        assert trajectory.status == STATUS_STATIONARY
        assert np.linalg.norm(trajectory.final.x) <= 0.01
        assert trajectory.final.f < 0.01
        assert trajectory.is_monotone()
        accepted = trajectory.accepted_steps()
        assert accepted
        values = [record.f for record in accepted] + [trajectory.final.f]
        assert all(later < earlier for earlier, later in zip(values, values[1:]))
        assert np.allclose(accepted[0].direction, (0.0, -1.0), atol=1e-9)
        assert elapsed < 1.0

    def test_rows_are_numbered_from_zero(self, valley):
        trajectory = run_descent(valley, (0.02, 5.0), DescentConfig(eps0=0.5))
        assert [record.iter for record in trajectory.records] == list(range(len(trajectory.records)))

    def test_linear_steps(self):
        c = np.array([3.0, -4.0])
        oracle = builtin("linear", c=c.tolist())
        trajectory = run_descent(oracle, (1.0, 1.0), DescentConfig(eps0=0.25, max_iter=5))
        steps = [record for record in trajectory.records if record.status == STATUS_STEP]
        assert len(steps) == 5
        assert all(record.step == 0.25 for record in steps)
        assert all(np.allclose(record.direction, -c / 5.0) for record in steps)
        assert all(record.a_min_norm == pytest.approx(5.0) for record in steps)
        assert np.allclose(np.diff(trajectory.f_values()), -0.25 * 5.0, atol=1e-12)
        assert trajectory.status == STATUS_ITER_LIMIT
        assert trajectory.iterations == 5

    def test_stationary_start(self):
        oracle = builtin("weighted_abs", weights=[1.0, 1.0])
        trajectory = run_descent(oracle, (0.0, 0.0), DescentConfig(eps0=0.5, eps_min=1e-3))
        statuses = [record.status for record in trajectory.records]
        assert statuses == [STATUS_SHRINK] * 9 + [STATUS_STATIONARY]
        assert all(record.x == (0.0, 0.0) for record in trajectory.records)
        assert trajectory.records[-1].eps == 0.5 ** 10

    def test_sampled_runs_are_reproducible(self, valley):
        config = DescentConfig(eps0=0.5, exact=False, samples=32, seed=9, max_iter=60)
        first = run_descent(valley, (0.02, 5.0), config)
        second = run_descent(valley, (0.02, 5.0), config)
        assert first.records == second.records
        assert all(record.samples == 32 for record in first.records if record.status != STATUS_ITER_LIMIT)

    def test_streams_records(self, valley):
        seen = []
        trajectory = run_descent(valley, (0.02, 5.0), DescentConfig(eps0=0.5, max_iter=20), on_record=seen.append)
        assert tuple(seen) == trajectory.records

    def test_accepted_steps_obey_the_descent_estimate(self, rng, make_max_affine):
        for _ in range(5):
            oracle = make_max_affine(rng, pieces=5)
            trajectory = run_descent(oracle, rng.uniform(-1, 1, size=2), DescentConfig(eps0=0.3, armijo=1.0, max_iter=30))
            for record in trajectory.accepted_steps():
                x = np.array(record.x)
                hull = exact_hull(oracle, BallRegion(x, record.eps))
                value = support_value(hull, record.direction)
                assert oracle.eval(x + record.step * np.array(record.direction)) <= record.f + record.step * value + 1e-12

    def test_rejects_dimension_mismatch(self, valley):
        with pytest.raises(InputError):
            run_descent(valley, (1.0,), DescentConfig())


class TestNaive:
    def test_valley_oscillates(self, valley):
        trajectory = naive_subgradient_run(valley, (0.02, 5.0), 0.05, 50)
        assert trajectory.sign_alternations()[0] >= 10
        assert trajectory.method == "naive"
        assert trajectory.status == STATUS_ITER_LIMIT
        assert trajectory.iterations == 50

    def test_linear_goes_straight(self):
        trajectory = naive_subgradient_run(builtin("linear", c=[1.0, 2.0]), (5.0, 5.0), 0.1, 20)
        assert trajectory.sign_alternations() == (0, 0)
        assert trajectory.is_monotone()

    def test_start_on_the_axis(self, valley):
        trajectory = naive_subgradient_run(valley, (0.0, 5.0), 0.05, 3)
        assert trajectory.records[0].direction == pytest.approx(tuple(unit((1.0, -0.01))))
        assert trajectory.records[1].x[0] > 0

    def test_step_must_be_positive(self, valley):
        with pytest.raises(InputError):
            naive_subgradient_run(valley, (0.0, 5.0), 0.0, 3)


class TestRegularity:
    def test_floor_along_the_axis(self):
        alpha = 0.01
        valley = builtin("valley", alpha=alpha)
        eps = 0.25
        points = [(0.0, y) for y in np.linspace(2 * eps, 5.0, 25)]
        assert regularity_floor(valley, points, eps) >= alpha - 1e-12

    def test_floor_vanishes_at_the_minimizer(self, valley):
        assert regularity_floor(valley, [(0.0, 0.0), (0.0, 5.0)], 0.25) <= 1e-12

    def test_needs_points(self, valley):
        with pytest.raises(InputError):
            regularity_floor(valley, np.empty((0, 2)), 0.1)


class TestPolyhedralDescent:
    def test_progress_comparable_to_euclidean(self, rng, make_max_affine, caplog):
        x0 = np.array([1.0, 1.0])
        for _ in range(3):
            oracle = make_max_affine(rng, pieces=5)
            drops = {}
            with caplog.at_level(logging.WARNING, logger="setgrad.services.descent_service"):
                for norm in ("euclidean", "l1", "linf"):
                    trajectory = run_descent(oracle, x0, DescentConfig(eps0=0.5, max_iter=40, norm=norm))
                    drops[norm] = oracle.eval(x0) - trajectory.final.f
            assert "min-norm solve failed" not in caplog.text
            assert drops["l1"] >= 0.5 * drops["euclidean"] - 1e-9
            assert drops["linf"] >= 0.5 * drops["euclidean"] - 1e-9
