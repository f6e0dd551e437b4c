import numpy as np
import pytest

from setgrad.exceptions import InputError, UnknownOracleError, UnsupportedError
from setgrad.models.hull import HullSet
from setgrad.models.regions import BallRegion, BoxRegion, SegmentRegion
from setgrad.norms import NormSpec, dual_norm_value, norm_value
from setgrad.oracles import (
    FunctionOracle,
    MaxAffineOracle,
    MaxAffineSpec,
    builtin,
    exact_ball_subdiff_piecewise_affine,
    get_oracle_sources,
    interval_mask,
    oracle_keys,
)
from setgrad.services.minnorm_service import min_norm_point_euclidean

BUILTIN_CASES = [
    ("abs1d", {}),
    ("valley", {"alpha": 0.01}),
    ("skewed_abs", {}),
    ("half_max", {}),
    ("weighted_abs", {"weights": [1.0, 2.0, 0.5]}),
    ("max_affine", {"spec": MaxAffineSpec.from_arrays([[1, 2], [-1, 0.5], [0.3, -1], [0, 0]], [0, 0.2, -0.1, 0.4])}),
    ("linear", {"c": [1.0, -2.0]}),
]


def vertex_set(rows):
    return sorted(tuple(float(v) + 0.0 for v in row) for row in np.atleast_2d(rows))


class Quadratic(FunctionOracle):
    """Smooth oracle without an exact set gradient."""

    name = "quadratic"

    def eval(self, x):
        point = self._point(x)
        return float(point @ point)

    def grad_ae(self, x):
        return 2.0 * self._point(x)

    def lipschitz_bound(self, center, radius, norm):
        return 2.0 * (norm_value(center, NormSpec.euclidean()) + radius)


class TestRegistry:
    def test_keys_in_display_order(self):
        assert oracle_keys() == ["abs1d", "valley", "skewed_abs", "half_max", "weighted_abs", "max_affine", "linear"]
        assert [source.order for source in get_oracle_sources()] == list(range(1, 8))

    def test_valley_value(self):
        assert builtin("valley", alpha=0.01).eval((1, 2)) == pytest.approx(1.02, abs=1e-15)

    def test_unknown_name(self):
        with pytest.raises(UnknownOracleError):
            builtin("rosenbrock")

    def test_missing_parameter(self):
        with pytest.raises(InputError, match="missing"):
            builtin("valley")

    def test_unexpected_parameter(self):
        with pytest.raises(InputError, match="unexpected"):
            builtin("abs1d", alpha=1.0)

    def test_valley_needs_positive_alpha(self):
        with pytest.raises(InputError):
            builtin("valley", alpha=0.0)

    def test_max_affine_accepts_document(self):
        oracle = builtin("max_affine", spec={"dim": 2, "pieces": [{"c": [1, 0], "b": 0}, {"c": [0, 1]}]})
        assert oracle.piece_count == 2
        assert oracle.eval((3.0, 1.0)) == 3.0

    def test_describe(self):
        assert builtin("valley", alpha=0.5).describe() == {"fn": "valley", "dim": 2, "alpha": 0.5}


class TestExactSubdifferentials:
    def test_skewed_abs_at_kink(self):
        oracle = builtin("skewed_abs")
        assert vertex_set(oracle.exact_ball_subdiff((1, 0), 0.0, NormSpec.euclidean())) == [(1.0, -1.0), (1.0, 1.0)]

    def test_half_max_at_origin(self):
        oracle = builtin("half_max")
        assert vertex_set(oracle.exact_ball_subdiff((0, 0), 0.0, NormSpec.euclidean())) == [(0.0, 1.0), (1.0, 0.0)]

    def test_valley_ball_straddling_the_axis(self):
        vertices = exact_ball_subdiff_piecewise_affine(builtin("valley", alpha=0.01), (0.02, 5), 0.5)
        assert vertex_set(vertices) == [(-1.0, 0.01), (1.0, 0.01)]

    @pytest.mark.parametrize("spec", [NormSpec.l1(), NormSpec.linf(), NormSpec.p_norm(3)], ids=str)
    def test_valley_ball_in_other_norms(self, spec):
        vertices = exact_ball_subdiff_piecewise_affine(builtin("valley", alpha=0.01), (0.02, 5), 0.5, spec)
        assert vertex_set(vertices) == [(-1.0, 0.01), (1.0, 0.01)]

    def test_abs_at_zero(self):
        assert vertex_set(builtin("abs1d").exact_ball_subdiff((0.0,), 0.0, NormSpec.euclidean())) == [(-1.0,), (1.0,)]

    @pytest.mark.parametrize("k", [1, 2, 4, 8])
    def test_abs_on_intervals(self, k):
        abs1d = builtin("abs1d")
        assert vertex_set(abs1d.exact_region_subdiff(SegmentRegion.interval(1 / k, 1))) == [(1.0,)]
        nested = SegmentRegion.interval(-1 / k, 1, open_low=True, open_high=True)
        assert vertex_set(abs1d.exact_region_subdiff(nested)) == [(-1.0,), (1.0,)]

    def test_abs_on_open_and_closed_unit_interval(self):
        abs1d = builtin("abs1d")
        assert vertex_set(abs1d.exact_region_subdiff(SegmentRegion.interval(0, 1, open_low=True))) == [(1.0,)]
        assert vertex_set(abs1d.exact_region_subdiff(SegmentRegion.interval(0, 1))) == [(-1.0,), (1.0,)]

    def test_box_region(self):
        valley = builtin("valley", alpha=0.01)
        box = BoxRegion((-1.0, 1.0), (1.0, 2.0))
        assert vertex_set(valley.exact_region_subdiff(box)) == [(-1.0, 0.01), (1.0, 0.01)]

    def test_linear_has_single_piece(self):
        oracle = builtin("linear", c=[1.0, 2.0])
        assert vertex_set(oracle.exact_ball_subdiff((0.1, 0.2), 3.0, NormSpec.euclidean())) == [(1.0, 2.0)]

    def test_max_affine_spec_input(self):
        spec = MaxAffineSpec.from_arrays([[1, 0], [0, 1]], [0, 0])
        assert vertex_set(exact_ball_subdiff_piecewise_affine(spec, (0, 0), 0.1)) == [(0.0, 1.0), (1.0, 0.0)]
        assert vertex_set(exact_ball_subdiff_piecewise_affine(spec, (1, 0), 0.1)) == [(1.0, 0.0)]

    def test_negative_radius(self):
        with pytest.raises(InputError):
            exact_ball_subdiff_piecewise_affine(builtin("abs1d"), (0.0,), -0.1)

    def test_oracle_without_exact_set_gradient(self):
        with pytest.raises(UnsupportedError):
            exact_ball_subdiff_piecewise_affine(Quadratic(2), (0.0, 0.0), 0.1)

    def test_region_dimension_mismatch(self):
        with pytest.raises(InputError):
            builtin("valley", alpha=0.1).exact_region_subdiff(BallRegion((0.0,), 1.0))


class TestMaxAffineActivity:
    def test_lexicographic_grad_at_ties(self):
        oracle = MaxAffineOracle([[0, 1], [1, 0], [-1, 0]], [0, 0, 0])
        assert oracle.grad_ae((0.0, 0.0)).tolist() == [-1.0, 0.0]

    def test_abs_grad_at_zero_is_left_branch(self):
        assert builtin("abs1d").grad_ae((0.0,)).tolist() == [-1.0]

    def test_valley_grad_on_axis(self):
        assert builtin("valley", alpha=0.01).grad_ae((0.0, 5.0)).tolist() == [-1.0, 0.01]

    def test_interval_mask(self):
        # tau -> tau - 0.5 meets [0,1]; -1 never does; tau touches only at an open end
        alphas = np.array([[1.0], [0.0], [1.0]])
        betas = np.array([[-0.5], [-1.0], [-1.0]])
        assert interval_mask(alphas, betas, False, False).tolist() == [True, False, True]
        assert interval_mask(alphas, betas, False, True).tolist() == [True, False, False]

    @pytest.mark.parametrize("spec", [NormSpec.euclidean(), NormSpec.l1(), NormSpec.linf(), NormSpec.p_norm(3)], ids=str)
    def test_exact_hull_covers_sampled_gradients(self, spec, rng, make_max_affine):
        for _ in range(10):
            oracle = make_max_affine(rng, pieces=6)
            ball = BallRegion(rng.uniform(-1, 1, size=2), rng.uniform(0.1, 1.0), spec)
            exact = {tuple(row) for row in oracle.exact_region_subdiff(ball)}
            sampled = {tuple(row) for row in oracle.grad_batch(ball.sample(2000, rng))}
            assert sampled <= exact

    def test_piece_active_only_at_boundary(self):
        oracle = MaxAffineOracle([[1.0, 0.0], [-1.0, 0.0], [0.0, 0.0]], [0.0, 0.0, 0.5])
        # max(x, -x, 0.5) on the ball around (0, 0) of radius 0.5 touches |x| = 0.5 only on its rim
        assert vertex_set(oracle.exact_ball_subdiff((0, 0), 0.5, NormSpec.euclidean())) == [
            (-1.0, 0.0),
            (0.0, 0.0),
            (1.0, 0.0),
        ]
        assert vertex_set(oracle.exact_ball_subdiff((0, 0), 0.49, NormSpec.euclidean())) == [(0.0, 0.0)]

    def test_spec_round_trip(self):
        oracle = MaxAffineOracle([[1, 0], [0, 1]], [0.5, 0.0])
        rebuilt = MaxAffineOracle.from_spec(oracle.to_spec())
        assert np.array_equal(rebuilt.slopes, oracle.slopes)
        assert np.array_equal(rebuilt.offsets, oracle.offsets)

    def test_spec_validation(self):
        with pytest.raises(InputError):
            MaxAffineSpec(())
        with pytest.raises(InputError):
            MaxAffineSpec((((1.0, 0.0), 0.0), ((1.0,), 0.0)))


@pytest.mark.parametrize("name, params", BUILTIN_CASES, ids=[case[0] for case in BUILTIN_CASES])
class TestOracleContracts:
    def random_ball(self, oracle, rng):
        return BallRegion(rng.uniform(-2, 2, size=oracle.dim), rng.uniform(0.1, 1.0))

    def test_gradients_lie_in_exact_hull(self, name, params, rng):
        oracle = builtin(name, params)
        ball = self.random_ball(oracle, rng)
        hull = HullSet(oracle.exact_region_subdiff(ball))
        grads = np.unique(oracle.grad_batch(ball.sample(10000, rng)), axis=0)
        for grad in grads:
            distance = min_norm_point_euclidean(hull.translated(-grad)).norm_value
            assert distance <= 1e-9

    def test_finite_differences_match_gradient(self, name, params, rng):
        oracle = builtin(name, params)
        t = 1e-7
        for y in self.random_ball(oracle, rng).sample(200, rng):
            v = rng.normal(size=oracle.dim)
            v /= np.linalg.norm(v)
            quotient = (oracle.eval(y + t * v) - oracle.eval(y)) / t
            assert quotient == pytest.approx(float(oracle.grad_ae(y) @ v), abs=1e-5)

    def test_lipschitz_bound_holds_on_ball(self, name, params, rng):
        oracle = builtin(name, params)
        ball = self.random_ball(oracle, rng)
        bound = oracle.lipschitz_bound(ball.center, ball.radius, ball.norm)
        points = ball.sample(400, rng)
        for x, y in zip(points[::2], points[1::2]):
            assert abs(oracle.eval(x) - oracle.eval(y)) <= bound * np.linalg.norm(x - y) + 1e-12
            assert dual_norm_value(oracle.grad_ae(x), ball.norm) <= bound + 1e-12

    def test_batch_matches_pointwise(self, name, params, rng):
        oracle = builtin(name, params)
        points = self.random_ball(oracle, rng).sample(50, rng)
        assert np.array_equal(oracle.grad_batch(points), np.array([oracle.grad_ae(p) for p in points]))
