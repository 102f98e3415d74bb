#pragma once

// Point-set functionals: distance sums, the ball quadratic discrepancy
// λ[ξ, D] by closed form, zonal series and Monte Carlo, pointwise values of
// the symmetric-difference metric, and invariance-principle residuals.
//
// Monte Carlo work is split into a fixed number of shards, each driven by its
// own stream make_stream(seed, shard), and the shard results are combined in
// shard order. Estimates therefore do not depend on the worker count.

#include "crosp/harmonic.hpp"
#include "crosp/spaces.hpp"

#include <cstdint>

namespace crosp {

struct McEstimate {
    double value = 0.0;
    double std_error = 0.0; ///< sample standard deviation / √samples
    std::uint64_t samples = 0;
    std::uint64_t seed = 0;
};

/// Symmetric N×N matrix of geodesic distances in radians.
class DistanceMatrix {
public:
    DistanceMatrix() = default;
    /// Validates symmetry, zero diagonal and entries in [0, π].
    DistanceMatrix(std::size_t n, std::vector<double> theta);

    std::size_t size() const { return n_; }
    double operator()(std::size_t i, std::size_t j) const { return theta_[i * n_ + j]; }
    const std::vector<double>& data() const { return theta_; }

private:
    std::size_t n_ = 0;
    std::vector<double> theta_;
};

DistanceMatrix distance_matrix(const PointSet& set);

enum class Metric { Geodesic, Chordal };

/// Σ over ordered pairs of ρ(x_i, x_j).
double pair_sum(const PointSet& set, Metric metric);
double pair_sum_serial(const PointSet& set, Metric metric);
double pair_sum(const DistanceMatrix& dist, Metric metric);

/// (⟨τ⟩N² - τ[D]) / γ(Q).
double lambda_closed(const PointSet& set);
double lambda_closed(const SpaceSpec& space, const DistanceMatrix& dist);

struct LambdaSeries {
    double value = 0.0;
    double error_estimate = 0.0; ///< sum of the per-pair series error estimates
};

/// Σ_{i,j} (⟨θ^Δ(ξ)⟩ - θ^Δ(ξ, θ_ij)); tol applies to each pair.
LambdaSeries lambda_series(const ExpansionCoeffs& coeffs, const DistanceMatrix& dist, double tol);
LambdaSeries lambda_series(const PointSet& set, const RadiusMeasure& measure, double tol);

/// 2 · mean of (#(D ∩ B(y, r)) - N v(r))² over uniform y and r with density sin(r)/2.
McEstimate lambda_mc(const PointSet& set, std::uint64_t samples, std::uint64_t seed);
McEstimate lambda_mc_serial(const PointSet& set, std::uint64_t samples, std::uint64_t seed);

/// θ^Δ(ξ, x, y) = ∫ (v(r) - μ(B(x,r) ∩ B(y,r))) dξ(r), intersection volume by Monte Carlo.
McEstimate symdiff_direct(const SpaceSpec& space, const Point& x, const Point& y, const RadiusMeasure& measure,
                          std::uint64_t samples, std::uint64_t seed);

/// (θ^Δ(ξ, θ))^{1/p}, p ≥ 1.
double lp_symdiff(const ExpansionCoeffs& coeffs, double theta, double p, double tol);

enum class LambdaRoute { Closed, Series, MonteCarlo };

struct ResidualOptions {
    double series_tol = 1e-9;
    std::uint64_t samples = 1000000;
    std::uint64_t seed = 0;
};

/// γ(Q)λ + τ[D] - ⟨τ⟩N². For the Monte Carlo route std_error is γ(Q) times
/// the standard error of λ; it is 0 otherwise.
McEstimate invariance_residual(const PointSet& set, LambdaRoute route, const ResidualOptions& options = {});

} // namespace crosp
