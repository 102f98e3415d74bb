#pragma once

// Zonal spherical functions on Q(d, d0) and the expansions of the chordal
// and symmetric-difference metrics in them:
//
//   τ(θ)       = 1/2 Σ_{l≥1} M_l C_l (1 - φ_l(θ))
//   θ^Δ(ξ, θ)  = B(d/2, d0/2)^{-1} Σ_{l≥1} l^{-2} M_l A_l(ξ) (1 - φ_l(θ))
//
// Both coefficient sequences decay like l^{-2}, so plain truncation converges
// only like 1/L. The evaluator sums the θ-independent part of the tail
// (Σ_{l>L} w_l) separately: by Euler-Maclaurin on the closed-form coefficients
// when they exist (chordal series, canonical measure), otherwise from a
// block-averaged l^{-2} model. What remains is the oscillating tail
// Σ_{l>L} w_l φ_l(θ), whose size is estimated from the spread of its partial
// sums over the last doubling block.

#include "crosp/rational.hpp"
#include "crosp/spaces.hpp"

#include <span>
#include <vector>

namespace crosp {

/// φ_l(θ) = P_l^{(d/2-1, d0/2-1)}(cos θ) / P_l^{(d/2-1, d0/2-1)}(1).
double zonal_phi(const SpaceSpec& space, int l, double theta);

double coeff_M(const SpaceSpec& space, int l);
/// C_l; both closed forms are evaluated and must agree to 1e-11.
double coeff_C(const SpaceSpec& space, int l);
/// A_l(ξ): closed form for the canonical measure, node sum otherwise.
double coeff_A(const SpaceSpec& space, int l, const RadiusMeasure& measure);
/// A_l(ξ) by summing the defining integrand at the nodes of a quadrature measure.
double coeff_A_nodes(const SpaceSpec& space, int l, const RadiusMeasure& measure);

/// T_n(α, β) = (α+1)_n (β+1)_n / (α+β+3/2)_n.
double t_closed(int n, double alpha, double beta);

/// W_n(α, β) as the alternating sum over k = 0..2n.
template <class T>
T w_sum(int n, const T& alpha, const T& beta);

/// (1/2)_n 2^{2n} (α+1)_n (β+1)_n (α+β+1)_n.
template <class T>
T w_closed(int n, const T& alpha, const T& beta);

/// The closed form as typeset without the (1/2)_n factor; kept only so the
/// verification suite can demonstrate that it disagrees with w_sum.
template <class T>
T w_closed_printed(int n, const T& alpha, const T& beta);

enum class IntegralRoute { Closed, Quadrature };

/// ∫_{-1}^{1} (P_n^{(α,β)}(t))² (1-t)^{2α} (1+t)^{2β} dt.
double jacobi_sq_integral(int n, double alpha, double beta, IntegralRoute route);

/// Term weights and precomputed tails of one zonal series.
struct SeriesTable {
    std::vector<double> weights; ///< weights[l-1] multiplies (1 - φ_l)
    /// Estimated Σ_{l>L} weights at the checkpoints L = 2^(kFirstCheckpoint + j).
    std::vector<double> tail;
    std::vector<double> tail_err;
};

/// Immutable coefficient tables for one (space, measure) pair.
struct ExpansionCoeffs {
    static constexpr int kFirstCheckpoint = 6; ///< first checkpoint at L = 64
    static constexpr int kDefaultOrder = 1 << 20;

    SpaceSpec space;
    RadiusMeasure measure;
    int order = 0; ///< L
    std::vector<double> m_l, c_l, a_l; ///< index l-1
    SeriesTable chordal;
    SeriesTable symdiff;
    /// Bound on Σ_{l>L} of either positive term sequence times 2 (|1-φ_l| ≤ 2).
    double tail_bound = 0.0;

    ExpansionCoeffs(const SpaceSpec& space, const RadiusMeasure& measure, int order = kDefaultOrder);
};

struct SeriesValue {
    double value = 0.0;
    double error_estimate = 0.0;
    int terms = 0;
};

SeriesValue chordal_series(const ExpansionCoeffs& coeffs, double theta, double tol);
SeriesValue symdiff_series(const ExpansionCoeffs& coeffs, double theta, double tol);

double chordal_series(const SpaceSpec& space, double theta, double tol);
double symdiff_series(const SpaceSpec& space, double theta, const RadiusMeasure& measure, double tol);

/// θ-grid sweeps; OpenMP over grid points, results in input order.
std::vector<SeriesValue> symdiff_series_grid(const ExpansionCoeffs& coeffs, std::span<const double> thetas, double tol);
std::vector<SeriesValue> symdiff_series_grid_serial(const ExpansionCoeffs& coeffs, std::span<const double> thetas,
                                                    double tol);

/// <θ^Δ(ξ)> = ∫ (v(r) - v(r)²) dξ(r).
double avg_symdiff(const SpaceSpec& space, const RadiusMeasure& measure);

/// Integrates f against ξ: 64-node Gauss-Legendre with weight sin r for the
/// canonical measure, node sum otherwise.
template <class F>
double integrate_radius(const RadiusMeasure& measure, F&& f);

} // namespace crosp

#include "crosp/specfun.hpp"

#include <cmath>

namespace crosp {

namespace detail {
const QuadratureRule& radius_rule_64();
}

template <class F>
double integrate_radius(const RadiusMeasure& measure, F&& f)
{
    double s = 0.0;
    if (measure.is_canonical()) {
        const QuadratureRule& rule = detail::radius_rule_64();
        for (std::size_t i = 0; i < rule.size(); ++i)
            s += rule.weights[i] * std::sin(rule.nodes[i]) * f(rule.nodes[i]);
        return s;
    }
    for (std::size_t i = 0; i < measure.nodes.size(); ++i)
        s += measure.weights[i] * f(measure.nodes[i]);
    return s;
}

} // namespace crosp
