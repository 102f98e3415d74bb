#include "crosp/discrepancy.hpp"

#include "crosp/specfun.hpp"

#include <algorithm>
#include <cmath>
#include <iostream>
#include <numbers>

namespace crosp {

namespace {

constexpr std::uint64_t kShards = 64;

void warn_if_empty(std::size_t n)
{
    if (n == 0)
        std::cerr << "warning: empty point set, distance sum is 0\n";
}

double metric_value(double theta, Metric metric)
{
    return metric == Metric::Chordal ? std::sin(0.5 * theta) : theta;
}

struct Flat {
    std::size_t n = 0;
    std::size_t k = 0;
    std::vector<double> coords;

    std::span<const double> operator[](std::size_t i) const { return {coords.data() + i * k, k}; }
};

Flat flatten(const PointSet& set)
{
    Flat f;
    f.n = set.size();
    f.k = static_cast<std::size_t>(set.space.coord_size());
    f.coords.reserve(f.n * f.k);
    for (const Point& p : set.points) {
        validate_point(set.space, p);
        f.coords.insert(f.coords.end(), p.coords.begin(), p.coords.end());
    }
    return f;
}

// Running mean and sum of squared deviations, merged in a fixed order.
struct Moments {
    std::uint64_t count = 0;
    double mean = 0.0;
    double m2 = 0.0;

    void add(double x)
    {
        ++count;
        const double delta = x - mean;
        mean += delta / static_cast<double>(count);
        m2 += delta * (x - mean);
    }

    void merge(const Moments& o)
    {
        if (o.count == 0)
            return;
        const double n = static_cast<double>(count + o.count);
        const double delta = o.mean - mean;
        mean += delta * static_cast<double>(o.count) / n;
        m2 += o.m2 + delta * delta * static_cast<double>(count) * static_cast<double>(o.count) / n;
        count += o.count;
    }

    double std_error() const
    {
        if (count < 2)
            return 0.0;
        const double var = m2 / static_cast<double>(count - 1);
        return std::sqrt(var / static_cast<double>(count));
    }
};

std::uint64_t shard_size(std::uint64_t samples, std::uint64_t shard)
{
    return samples / kShards + (shard < samples % kShards ? 1 : 0);
}

McEstimate finish(const std::vector<Moments>& shards, double scale, std::uint64_t seed)
{
    Moments total;
    for (const Moments& m : shards)
        total.merge(m);
    return {scale * total.mean, scale * total.std_error(), total.count, seed};
}

void check_samples(std::uint64_t samples)
{
    if (samples == 0)
        throw DomainError("Monte Carlo estimate needs at least one sample");
}

Moments lambda_shard(const SpaceSpec& space, const Flat& pts, std::uint64_t count, std::uint64_t seed,
                     std::uint64_t shard)
{
    RngStream rng = make_stream(seed, shard);
    std::uniform_real_distribution<double> unif(0.0, 1.0);
    std::vector<double> y(static_cast<std::size_t>(space.coord_size()));
    const double half_d = 0.5 * space.d, half_d0 = 0.5 * space.d0;
    const double n = static_cast<double>(pts.n);
    Moments m;
    for (std::uint64_t s = 0; s < count; ++s) {
        sample_uniform_into(space, rng, y);
        // r = arccos(1 - 2u) has density sin(r)/2 and sin²(r/2) = u.
        const double u = unif(rng);
        const double cos_r = 1.0 - 2.0 * u;
        const double v = reg_inc_beta(u, half_d, half_d0);
        std::size_t inside = 0;
        for (std::size_t i = 0; i < pts.n; ++i)
            if (cos_geodesic(space, y, pts[i]) > cos_r)
                ++inside;
        const double dev = static_cast<double>(inside) - n * v;
        m.add(dev * dev);
    }
    return m;
}

} // namespace

DistanceMatrix::DistanceMatrix(std::size_t n, std::vector<double> theta) : n_(n), theta_(std::move(theta))
{
    if (theta_.size() != n_ * n_)
        throw UsageError("distance matrix: expected " + std::to_string(n_ * n_) + " entries");
    for (std::size_t i = 0; i < n_; ++i) {
        if (theta_[i * n_ + i] != 0.0)
            throw UsageError("distance matrix: nonzero diagonal entry");
        for (std::size_t j = 0; j < n_; ++j) {
            const double t = theta_[i * n_ + j];
            if (!(t >= 0.0 && t <= std::numbers::pi))
                throw UsageError("distance matrix: entry outside [0, pi]");
            if (std::abs(t - theta_[j * n_ + i]) > 1e-12)
                throw UsageError("distance matrix: not symmetric");
        }
    }
}

DistanceMatrix distance_matrix(const PointSet& set)
{
    const std::size_t n = set.size();
    for (const Point& p : set.points)
        validate_point(set.space, p);
    std::vector<double> theta(n * n, 0.0);
    const long rows = static_cast<long>(n);
#pragma omp parallel for schedule(dynamic, 4)
    for (long i = 0; i < rows; ++i)
        for (std::size_t j = static_cast<std::size_t>(i) + 1; j < n; ++j) {
            const double t = geodesic(set.space, set.points[i], set.points[j]);
            theta[i * n + j] = t;
            theta[j * n + i] = t;
        }
    return DistanceMatrix(n, std::move(theta));
}

double pair_sum_serial(const PointSet& set, Metric metric)
{
    warn_if_empty(set.size());
    const Flat pts = flatten(set);
    double total = 0.0;
    for (std::size_t i = 0; i < pts.n; ++i) {
        double row = 0.0;
        for (std::size_t j = i + 1; j < pts.n; ++j)
            row += metric_value(geodesic(set.space, set.points[i], set.points[j]), metric);
        total += row;
    }
    return 2.0 * total;
}

double pair_sum(const PointSet& set, Metric metric)
{
    warn_if_empty(set.size());
    const Flat pts = flatten(set);
    std::vector<double> rows(pts.n, 0.0);
    const long n = static_cast<long>(pts.n);
#pragma omp parallel for schedule(dynamic, 4)
    for (long i = 0; i < n; ++i) {
        double row = 0.0;
        for (std::size_t j = static_cast<std::size_t>(i) + 1; j < pts.n; ++j)
            row += metric_value(geodesic(set.space, set.points[i], set.points[j]), metric);
        rows[i] = row;
    }
    double total = 0.0;
    for (double r : rows)
        total += r;
    return 2.0 * total;
}

double pair_sum(const DistanceMatrix& dist, Metric metric)
{
    warn_if_empty(dist.size());
    double total = 0.0;
    for (std::size_t i = 0; i < dist.size(); ++i) {
        double row = 0.0;
        for (std::size_t j = i + 1; j < dist.size(); ++j)
            row += metric_value(dist(i, j), metric);
        total += row;
    }
    return 2.0 * total;
}

double lambda_closed(const PointSet& set)
{
    const double n = static_cast<double>(set.size());
    return (avg_chordal(set.space) * n * n - pair_sum(set, Metric::Chordal)) / gamma_const(set.space);
}

double lambda_closed(const SpaceSpec& space, const DistanceMatrix& dist)
{
    const double n = static_cast<double>(dist.size());
    return (avg_chordal(space) * n * n - pair_sum(dist, Metric::Chordal)) / gamma_const(space);
}

LambdaSeries lambda_series(const ExpansionCoeffs& coeffs, const DistanceMatrix& dist, double tol)
{
    const double avg = avg_symdiff(coeffs.space, coeffs.measure);
    const std::size_t n = dist.size();
    std::vector<double> row_value(n, 0.0), row_error(n, 0.0);
    std::exception_ptr failure;
    const long rows = static_cast<long>(n);
#pragma omp parallel for schedule(dynamic, 1)
    for (long i = 0; i < rows; ++i) {
        try {
            double v = 0.0, e = 0.0;
            for (std::size_t j = static_cast<std::size_t>(i) + 1; j < n; ++j) {
                const SeriesValue s = symdiff_series(coeffs, dist(i, j), tol);
                v += avg - s.value;
                e += s.error_estimate;
            }
            row_value[i] = v;
            row_error[i] = e;
        } catch (...) {
#pragma omp critical(crosp_lambda_series_failure)
            if (!failure)
                failure = std::current_exception();
        }
    }
    if (failure)
        std::rethrow_exception(failure);
    LambdaSeries out;
    out.value = static_cast<double>(n) * avg;
    for (std::size_t i = 0; i < n; ++i) {
        out.value += 2.0 * row_value[i];
        out.error_estimate += 2.0 * row_error[i];
    }
    return out;
}

LambdaSeries lambda_series(const PointSet& set, const RadiusMeasure& measure, double tol)
{
    const ExpansionCoeffs coeffs(set.space, measure);
    return lambda_series(coeffs, distance_matrix(set), tol);
}

McEstimate lambda_mc_serial(const PointSet& set, std::uint64_t samples, std::uint64_t seed)
{
    check_samples(samples);
    if (!supports_sampling(set.space))
        throw UnsupportedError("Monte Carlo discrepancy needs uniform sampling, which " + set.space.name() +
                               " does not provide");
    const Flat pts = flatten(set);
    std::vector<Moments> shards(kShards);
    for (std::uint64_t s = 0; s < kShards; ++s)
        shards[s] = lambda_shard(set.space, pts, shard_size(samples, s), seed, s);
    return finish(shards, 2.0, seed);
}

McEstimate lambda_mc(const PointSet& set, std::uint64_t samples, std::uint64_t seed)
{
    check_samples(samples);
    if (!supports_sampling(set.space))
        throw UnsupportedError("Monte Carlo discrepancy needs uniform sampling, which " + set.space.name() +
                               " does not provide");
    const Flat pts = flatten(set);
    std::vector<Moments> shards(kShards);
    const long count = static_cast<long>(kShards);
#pragma omp parallel for schedule(dynamic, 1)
    for (long s = 0; s < count; ++s)
        shards[s] = lambda_shard(set.space, pts, shard_size(samples, s), seed, static_cast<std::uint64_t>(s));
    return finish(shards, 2.0, seed);
}

McEstimate symdiff_direct(const SpaceSpec& space, const Point& x, const Point& y, const RadiusMeasure& measure,
                          std::uint64_t samples, std::uint64_t seed)
{
    check_samples(samples);
    if (!supports_sampling(space))
        throw UnsupportedError("direct symmetric-difference evaluation needs uniform sampling on " + space.name());
    validate_point(space, x);
    validate_point(space, y);

    // Radius nodes and weights of ξ. For the canonical measure the
    // intersection volume has kinks at θ/2 and π - θ/2, so the 64 nodes are
    // spread over those panels.
    std::vector<double> nodes, weights;
    if (measure.is_canonical()) {
        const double theta = geodesic(space, x, y);
        std::vector<double> cuts{0.0, 0.5 * theta, std::numbers::pi - 0.5 * theta, std::numbers::pi};
        constexpr int kNodes = 64;
        for (std::size_t k = 0; k + 1 < cuts.size(); ++k) {
            const double len = cuts[k + 1] - cuts[k];
            if (len <= 0.0)
                continue;
            const int m = std::max(8, static_cast<int>(std::lround(kNodes * len / std::numbers::pi)));
            const QuadratureRule rule = gauss_legendre(m, cuts[k], cuts[k + 1]);
            for (std::size_t i = 0; i < rule.size(); ++i) {
                nodes.push_back(rule.nodes[i]);
                weights.push_back(rule.weights[i] * std::sin(rule.nodes[i]));
            }
        }
    } else {
        nodes = measure.nodes;
        weights = measure.weights;
    }

    double ball_term = 0.0;
    std::vector<double> cos_r(nodes.size());
    for (std::size_t j = 0; j < nodes.size(); ++j) {
        ball_term += weights[j] * ball_volume(space, nodes[j]);
        cos_r[j] = std::cos(nodes[j]);
    }

    std::vector<Moments> shards(kShards);
    const long count = static_cast<long>(kShards);
#pragma omp parallel for schedule(dynamic, 1)
    for (long s = 0; s < count; ++s) {
        RngStream rng = make_stream(seed, static_cast<std::uint64_t>(s));
        std::vector<double> z(static_cast<std::size_t>(space.coord_size()));
        Moments m;
        const std::uint64_t todo = shard_size(samples, static_cast<std::uint64_t>(s));
        for (std::uint64_t k = 0; k < todo; ++k) {
            sample_uniform_into(space, rng, z);
            const double cx = cos_geodesic(space, z, x.coords);
            const double cy = cos_geodesic(space, z, y.coords);
            const double c = std::min(cx, cy);
            double g = 0.0;
            for (std::size_t j = 0; j < nodes.size(); ++j)
                if (c > cos_r[j])
                    g += weights[j];
            m.add(g);
        }
        shards[s] = m;
    }
    McEstimate est = finish(shards, 1.0, seed);
    est.value = ball_term - est.value;
    return est;
}

double lp_symdiff(const ExpansionCoeffs& coeffs, double theta, double p, double tol)
{
    if (!(p >= 1.0))
        throw DomainError("lp_symdiff: p must be at least 1");
    const double v = symdiff_series(coeffs, theta, tol).value;
    return std::pow(std::max(v, 0.0), 1.0 / p);
}

McEstimate invariance_residual(const PointSet& set, LambdaRoute route, const ResidualOptions& options)
{
    const double n = static_cast<double>(set.size());
    const double gamma = gamma_const(set.space);
    const double tau_sum = pair_sum(set, Metric::Chordal);
    const double target = avg_chordal(set.space) * n * n;
    McEstimate out;
    out.seed = options.seed;
    switch (route) {
    case LambdaRoute::Closed:
        out.value = gamma * lambda_closed(set) + tau_sum - target;
        break;
    case LambdaRoute::Series:
        out.value = gamma * lambda_series(set, RadiusMeasure::canonical(), options.series_tol).value + tau_sum - target;
        break;
    case LambdaRoute::MonteCarlo: {
        const McEstimate lam = lambda_mc(set, options.samples, options.seed);
        out.value = gamma * lam.value + tau_sum - target;
        out.std_error = gamma * lam.std_error;
        out.samples = lam.samples;
        break;
    }
    }
    return out;
}

} // namespace crosp
