#include "crosp/discrepancy.hpp"

#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <omp.h>

using namespace crosp;

namespace {

constexpr double pi = std::numbers::pi;

Point circle_point(double angle)
{
    return {{std::cos(angle), std::sin(angle)}};
}

PointSet random_set(const std::string& name, std::size_t n, std::uint64_t stream)
{
    RngStream rng = make_stream(17, stream);
    return sample_uniform(parse_space(name), n, rng);
}

class ThreadCount {
public:
    explicit ThreadCount(int n) : saved_(omp_get_max_threads()) { omp_set_num_threads(n); }
    ~ThreadCount() { omp_set_num_threads(saved_); }

private:
    int saved_;
};

} // namespace

TEST_CASE("pair sums")
{
    const SpaceSpec s1 = parse_space("s1");
    PointSet pair{s1, {circle_point(0.0), circle_point(pi)}, ""};
    CHECK(pair_sum(pair, Metric::Chordal) == doctest::Approx(2.0).epsilon(1e-15));
    CHECK(pair_sum(pair, Metric::Geodesic) == doctest::Approx(2.0 * pi).epsilon(1e-15));

    PointSet single{s1, {circle_point(0.3)}, ""};
    CHECK(pair_sum(single, Metric::Chordal) == 0.0);
    CHECK(pair_sum(PointSet{s1, {}, ""}, Metric::Chordal) == 0.0);

    // Half the Euclidean distance sum on the unit sphere.
    const PointSet s3 = random_set("s3", 40, 1);
    double euclid = 0.0;
    for (const Point& x : s3.points)
        for (const Point& y : s3.points) {
            double d2 = 0.0;
            for (std::size_t k = 0; k < x.coords.size(); ++k)
                d2 += (x.coords[k] - y.coords[k]) * (x.coords[k] - y.coords[k]);
            euclid += std::sqrt(d2);
        }
    CHECK(pair_sum(s3, Metric::Chordal) == doctest::Approx(0.5 * euclid).epsilon(1e-13));
}

TEST_CASE("parallel pair sums equal the serial sums")
{
    for (const char* name : {"s2", "rp2", "cp2", "hp2"}) {
        const PointSet set = random_set(name, 150, 2);
        const double serial = pair_sum_serial(set, Metric::Chordal);
        for (int threads : {1, 2, 4}) {
            ThreadCount tc(threads);
            CHECK(pair_sum(set, Metric::Chordal) == serial);
        }
        CHECK(pair_sum(distance_matrix(set), Metric::Chordal) == doctest::Approx(serial).epsilon(1e-14));
    }
}

TEST_CASE("duplicating a point adds twice its distance sum")
{
    PointSet set = random_set("cp2", 30, 3);
    const double before = pair_sum(set, Metric::Chordal);
    double row = 0.0;
    for (const Point& p : set.points)
        row += chordal(set.space, set.points[7], p);
    set.points.push_back(set.points[7]);
    CHECK(pair_sum(set, Metric::Chordal) == doctest::Approx(before + 2.0 * row).epsilon(1e-14));
}

TEST_CASE("closed-form discrepancy")
{
    const SpaceSpec s1 = parse_space("s1");
    PointSet pair{s1, {circle_point(0.0), circle_point(pi)}, ""};
    CHECK(lambda_closed(pair) == doctest::Approx(16.0 / (pi * pi) - 4.0 / pi).epsilon(1e-14));

    for (const SpaceSpec& s : {parse_space("s2"), parse_space("cp2"), parse_space("hp2")}) {
        RngStream rng = make_stream(5, 0);
        const PointSet one = sample_uniform(s, 1, rng);
        CHECK(lambda_closed(one) == doctest::Approx(avg_chordal(s) / gamma_const(s)).epsilon(1e-15));
        PointSet same{s, std::vector<Point>(6, one.points[0]), ""};
        CHECK(lambda_closed(same) == doctest::Approx(36.0 * avg_chordal(s) / gamma_const(s)).epsilon(1e-14));
    }
}

TEST_CASE("discrepancy depends only on the distance multiset")
{
    PointSet set = random_set("s2", 50, 4);
    const double before = lambda_closed(set);
    std::reverse(set.points.begin(), set.points.end());
    std::rotate(set.points.begin(), set.points.begin() + 13, set.points.end());
    // λ is a small difference of O(N²) terms; compare on that scale.
    const double scale = avg_chordal(set.space) * 2500.0;
    CHECK(std::abs(lambda_closed(set) - before) <= 1e-14 * scale);
    CHECK(lambda_closed(set) >= 0.0);
}

TEST_CASE("distance matrices are validated")
{
    CHECK_THROWS_AS(DistanceMatrix(2, {0.0, 1.0, 1.1, 0.0}), UsageError);
    CHECK_THROWS_AS(DistanceMatrix(2, {0.1, 1.0, 1.0, 0.0}), UsageError);
    CHECK_THROWS_AS(DistanceMatrix(2, {0.0, 4.0, 4.0, 0.0}), UsageError);
    CHECK_THROWS_AS(DistanceMatrix(2, {0.0, 1.0, 1.0}), UsageError);
    const PointSet set = random_set("rp2", 12, 5);
    const DistanceMatrix dm = distance_matrix(set);
    CHECK(lambda_closed(set.space, dm) == doctest::Approx(lambda_closed(set)).epsilon(1e-14));
}

TEST_CASE("series discrepancy agrees with the closed form")
{
    const RadiusMeasure xi = RadiusMeasure::canonical();
    const PointSet set = random_set("s2", 30, 6);
    const LambdaSeries ls = lambda_series(set, xi, 1e-9);
    CHECK(std::abs(ls.value - lambda_closed(set)) < 900 * 2e-9);

    const ExpansionCoeffs c(parse_space("cp2"), xi);
    DistanceMatrix single(1, {0.0});
    CHECK(lambda_series(c, single, 1e-9).value == doctest::Approx(avg_symdiff(c.space, xi)).epsilon(1e-14));
}

TEST_CASE("series discrepancy on OP2 chart points")
{
    const SpaceSpec op2 = parse_space("op2");
    RngStream rng = make_stream(9, 0);
    std::normal_distribution<double> normal(0.0, 0.7);
    PointSet set{op2, {}, "chart"};
    for (int i = 0; i < 3; ++i) {
        Octonion a, b;
        for (double& v : a.v)
            v = normal(rng);
        for (double& v : b.v)
            v = normal(rng);
        set.points.push_back(chart_point_oct(a, b));
    }
    const DistanceMatrix dm = distance_matrix(set);
    const ExpansionCoeffs c(op2, RadiusMeasure::canonical());
    const LambdaSeries ls = lambda_series(c, dm, 1e-10);
    CHECK(std::isfinite(ls.value));
    CHECK(std::abs(ls.value - lambda_closed(op2, dm)) < 9 * 1e-9);
    CHECK_THROWS_AS(lambda_mc(set, 1000, 0), UnsupportedError);
}

TEST_CASE("Monte Carlo discrepancy")
{
    const SpaceSpec s1 = parse_space("s1");
    PointSet pair{s1, {circle_point(0.0), circle_point(pi)}, ""};
    const McEstimate e = lambda_mc(pair, 1000000, 11);
    CHECK(e.samples == 1000000);
    CHECK(e.seed == 11);
    CHECK(e.std_error > 0.0);
    CHECK(std::abs(e.value - lambda_closed(pair)) < 3.0 * e.std_error);

    const PointSet set = random_set("s2", 100, 7);
    const McEstimate f = lambda_mc(set, 1000000, 12);
    CHECK(std::abs(f.value - lambda_closed(set)) < 3.0 * f.std_error);

    CHECK_THROWS_AS(lambda_mc(pair, 0, 1), DomainError);
}

TEST_CASE("Monte Carlo estimates do not depend on the thread count")
{
    const PointSet set = random_set("cp2", 40, 8);
    const McEstimate serial = lambda_mc_serial(set, 200000, 3);
    for (int threads : {1, 3}) {
        ThreadCount tc(threads);
        const McEstimate par = lambda_mc(set, 200000, 3);
        CHECK(par.value == serial.value);
        CHECK(par.std_error == serial.std_error);
    }
    CHECK(lambda_mc(set, 200000, 4).value != serial.value);
}

TEST_CASE("direct symmetric-difference distance")
{
    const RadiusMeasure xi = RadiusMeasure::canonical();
    const SpaceSpec s1 = parse_space("s1"), s2 = parse_space("s2");
    for (double theta : {0.7, 2.0}) {
        const McEstimate e = symdiff_direct(s1, circle_point(0.0), circle_point(theta), xi, 200000, 1);
        CHECK(std::abs(e.value - 2.0 / pi * std::sin(0.5 * theta)) < 3.0 * e.std_error);
    }
    const Point north{{0.0, 0.0, 1.0}}, south{{0.0, 0.0, -1.0}};
    const McEstimate anti = symdiff_direct(s2, north, south, xi, 200000, 2);
    CHECK(std::abs(anti.value - 0.5) < 3.0 * anti.std_error);
    const McEstimate same = symdiff_direct(s2, north, north, xi, 200000, 3);
    CHECK(std::abs(same.value) <= 3.0 * same.std_error + 1e-15);

    // Against the series for a non-canonical measure.
    const SpaceSpec cp2 = parse_space("cp2");
    const RadiusMeasure m = RadiusMeasure::quadrature({0.5, 1.5, 2.5}, {1.0, 0.5, 0.5});
    RngStream rng = make_stream(21, 0);
    const PointSet two = sample_uniform(cp2, 2, rng);
    const McEstimate direct = symdiff_direct(cp2, two.points[0], two.points[1], m, 400000, 4);
    const double series = symdiff_series(cp2, geodesic(cp2, two.points[0], two.points[1]), m, 1e-7);
    CHECK(std::abs(direct.value - series) < 3.0 * direct.std_error + 2e-7);
}

TEST_CASE("L_p symmetric-difference metrics")
{
    const ExpansionCoeffs c(parse_space("s2"), RadiusMeasure::canonical());
    CHECK(lp_symdiff(c, pi, 2.0, 1e-10) == doctest::Approx(std::sqrt(0.5)).epsilon(1e-9));
    CHECK(lp_symdiff(c, 1.1, 1.0, 1e-10) == doctest::Approx(symdiff_series(c, 1.1, 1e-10).value).epsilon(1e-14));
    CHECK_THROWS_AS(lp_symdiff(c, 1.0, 0.5, 1e-9), DomainError);

    RngStream rng = make_stream(31, 0);
    for (int trial = 0; trial < 200; ++trial) {
        const PointSet t = sample_uniform(c.space, 3, rng);
        const double a = geodesic(c.space, t.points[0], t.points[1]);
        const double b = geodesic(c.space, t.points[1], t.points[2]);
        const double ab = geodesic(c.space, t.points[0], t.points[2]);
        for (double p : {1.0, 2.0, 5.0})
            CHECK(lp_symdiff(c, ab, p, 1e-10) <= lp_symdiff(c, a, p, 1e-10) + lp_symdiff(c, b, p, 1e-10) + 1e-9);
    }
}

TEST_CASE("invariance residuals")
{
    const PointSet s2 = random_set("s2", 100, 40);
    const double scale = avg_chordal(s2.space) * 100.0 * 100.0;
    CHECK(std::abs(invariance_residual(s2, LambdaRoute::Closed).value) <= 1e-9 * scale);

    const McEstimate mc = invariance_residual(s2, LambdaRoute::MonteCarlo, {1e-9, 1000000, 5});
    CHECK(mc.std_error > 0.0);
    CHECK(std::abs(mc.value) < 3.0 * mc.std_error);

    const PointSet cp2 = random_set("cp2", 25, 41);
    const McEstimate series = invariance_residual(cp2, LambdaRoute::Series);
    CHECK(std::abs(series.value) <= 1e-6 * avg_chordal(cp2.space) * 625.0);
    CHECK(series.std_error == 0.0);
}
