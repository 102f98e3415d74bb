#include "crosp/harmonic.hpp"

#include "crosp/specfun.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

namespace crosp {

namespace detail {

const QuadratureRule& radius_rule_64()
{
    static const QuadratureRule rule = gauss_legendre(64, 0.0, std::numbers::pi);
    return rule;
}

} // namespace detail

namespace {

constexpr double kLn2 = std::numbers::ln2;
const double kLogSqrtPi = 0.5 * std::log(std::numbers::pi);

struct Dims {
    double d, d0, h; // h = (d + d0) / 2
    explicit Dims(const SpaceSpec& s) : d(s.d), d0(s.d0), h(0.5 * (s.d + s.d0)) {}
};

void check_order(int l)
{
    if (l < 1)
        throw DomainError("expansion coefficients are indexed from l = 1");
}

// The functions below accept real l so the tails can be summed by Euler-Maclaurin.

double log_M(const Dims& q, double l)
{
    return std::log(2.0 * l - 1.0 + q.h) + log_gamma(l + 1.0) + log_gamma(l - 1.0 + q.h) -
           log_gamma(l + 0.5 * q.d) - log_gamma(l + 0.5 * q.d0);
}

// B((d+1)/2, l+d0/2) Γ(l+1)^{-1} (1/2)_{l-1} P_l^{(d/2-1, d0/2-1)}(1)
double log_C_beta_form(const Dims& q, double l)
{
    const double log_half_rising = log_gamma(l - 0.5) - kLogSqrtPi;
    const double log_p1 = log_gamma(l + 0.5 * q.d) - log_gamma(l + 1.0) - log_gamma(0.5 * q.d);
    return log_beta(0.5 * (q.d + 1.0), l + 0.5 * q.d0) - log_gamma(l + 1.0) + log_half_rising + log_p1;
}

// (l!)^{-2} (1/2)_{l-1} Γ(d/2+1/2) Γ(l+d/2) Γ(l+d0/2) / (Γ(l+1/2+h) Γ(d/2))
double log_C_gamma_form(const Dims& q, double l)
{
    return -2.0 * log_gamma(l + 1.0) + log_gamma(l - 0.5) - kLogSqrtPi + log_gamma(0.5 * q.d + 0.5) +
           log_gamma(l + 0.5 * q.d) + log_gamma(l + 0.5 * q.d0) - log_gamma(l + 0.5 + q.h) - log_gamma(0.5 * q.d);
}

// log of ∫(P_n^{(α,β)})² (1-t)^{2α}(1+t)^{2β} dt in closed form.
double log_jacobi_sq_closed(double n, double a, double b)
{
    const double log_t = log_gamma(a + n + 1.0) + log_gamma(b + n + 1.0) + log_gamma(a + b + 1.5) -
                         log_gamma(a + 1.0) - log_gamma(b + 1.0) - log_gamma(a + b + 1.5 + n);
    return (2.0 * a + 2.0 * b + 1.0) * kLn2 + log_gamma(n + 0.5) - kLogSqrtPi - 2.0 * log_gamma(n + 1.0) +
           log_beta(2.0 * a + 1.0, 2.0 * b + 1.0) + log_t;
}

// A_l(ξ♮) = 2^{-d-d0} × (closed Jacobi integral at n = l-1, α = d/2, β = d0/2)
double log_A_canonical(const Dims& q, double l)
{
    return -(q.d + q.d0) * kLn2 + log_jacobi_sq_closed(l - 1.0, 0.5 * q.d, 0.5 * q.d0);
}

double chordal_weight(const Dims& q, double l)
{
    return 0.5 * std::exp(log_M(q, l) + log_C_beta_form(q, l));
}

double symdiff_weight_canonical(const Dims& q, double l)
{
    return std::exp(log_M(q, l) + log_A_canonical(q, l) - 2.0 * std::log(l) - log_beta(0.5 * q.d, 0.5 * q.d0));
}

// Σ_{l>L} w(l) by Euler-Maclaurin: ∫_L^∞ w - w(L)/2 - w'(L)/12.
template <class W>
std::pair<double, double> euler_maclaurin_tail(W&& w, double L)
{
    static const QuadratureRule unit = gauss_legendre(48, 0.0, 1.0);
    // x = L/u maps [L, ∞) onto (0, 1]
    double integral = 0.0;
    for (std::size_t i = 0; i < unit.size(); ++i) {
        const double u = unit.nodes[i];
        integral += unit.weights[i] * w(L / u) * L / (u * u);
    }
    const double wl = w(L);
    const double dw = w(L + 0.5) - w(L - 0.5);
    const double tail = integral - 0.5 * wl - dw / 12.0;
    const double err = std::abs(wl) / (L * L * L) + 1e-15 * std::abs(tail);
    return {tail, err};
}

void fill_em_tails(SeriesTable& table, int order, const auto& weight_fn)
{
    for (int L = 1 << ExpansionCoeffs::kFirstCheckpoint; L <= order; L *= 2) {
        const auto [tail, err] = euler_maclaurin_tail(weight_fn, static_cast<double>(L));
        table.tail.push_back(tail);
        table.tail_err.push_back(err);
    }
}

// Σ_{l>L} w_l ≈ Σ_{L/2<l≤L} w_l for l^{-2} decay; the error is taken from
// the mismatch between consecutive blocks.
void fill_block_tails(SeriesTable& table, int order)
{
    auto block_sum = [&](int lo, int hi) { // (lo, hi]
        double s = 0.0;
        for (int l = lo + 1; l <= hi; ++l)
            s += table.weights[l - 1];
        return s;
    };
    for (int L = 1 << ExpansionCoeffs::kFirstCheckpoint; L <= order; L *= 2) {
        const double upper = block_sum(L / 2, L);
        const double lower = block_sum(L / 4, L / 2);
        table.tail.push_back(upper);
        table.tail_err.push_back(std::abs(lower - 2.0 * upper));
    }
}

SeriesValue sum_zonal_series(const SpaceSpec& space, const SeriesTable& table, double theta, double tol)
{
    if (!(theta >= 0.0 && theta <= std::numbers::pi))
        throw DomainError("zonal series: theta outside [0, pi]");
    if (!(tol > 0.0))
        throw DomainError("zonal series: tolerance must be positive");
    if (theta == 0.0)
        return {0.0, 0.0, 0};

    const double alpha = 0.5 * space.d - 1.0;
    const double beta = 0.5 * space.d0 - 1.0;
    JacobiRecurrence rec(alpha, beta, std::cos(theta));
    double p_one = 1.0;

    double sum = 0.0, comp = 0.0; // Neumaier
    double osc = 0.0;             // Σ w_l φ_l
    double lo = std::numeric_limits<double>::infinity();
    double hi = -lo;
    int checkpoint = 1 << ExpansionCoeffs::kFirstCheckpoint;
    std::size_t j = 0;
    const int order = static_cast<int>(table.weights.size());

    for (int l = 1; l <= order; ++l) {
        const double p = rec.next();
        p_one *= (l + alpha) / l;
        const double phi = p / p_one;
        const double w = table.weights[l - 1];
        const double term = w * (1.0 - phi);
        const double t = sum + term;
        comp += std::abs(sum) >= std::abs(term) ? (sum - t) + term : (term - t) + sum;
        sum = t;
        osc += w * phi;
        if (2 * l > checkpoint) {
            lo = std::min(lo, osc);
            hi = std::max(hi, osc);
        }
        if (l == checkpoint) {
            const double spread = std::max(hi - osc, osc - lo);
            const double err = spread + table.tail_err[j];
            if (err < tol)
                return {sum + comp + table.tail[j], err, l};
            ++j;
            checkpoint *= 2;
            lo = std::numeric_limits<double>::infinity();
            hi = -lo;
        }
    }
    throw NonConvergenceError("zonal series did not reach tolerance within " + std::to_string(order) + " terms");
}

} // namespace

double zonal_phi(const SpaceSpec& space, int l, double theta)
{
    if (l < 0)
        throw DomainError("zonal_phi: negative degree");
    if (!(theta >= 0.0 && theta <= std::numbers::pi))
        throw DomainError("zonal_phi: theta outside [0, pi]");
    const double alpha = 0.5 * space.d - 1.0;
    const double beta = 0.5 * space.d0 - 1.0;
    return jacobi_eval(l, alpha, beta, std::cos(theta)) / jacobi_at_one(l, alpha, beta);
}

double coeff_M(const SpaceSpec& space, int l)
{
    check_order(l);
    return std::exp(log_M(Dims(space), l));
}

double coeff_C(const SpaceSpec& space, int l)
{
    check_order(l);
    const Dims q(space);
    const double beta_form = std::exp(log_C_beta_form(q, l));
    const double gamma_form = std::exp(log_C_gamma_form(q, l));
    if (std::abs(beta_form - gamma_form) > 1e-11 * std::abs(beta_form))
        throw ConsistencyError("coeff_C: beta and gamma forms disagree at l = " + std::to_string(l));
    return beta_form;
}

double coeff_A_nodes(const SpaceSpec& space, int l, const RadiusMeasure& measure)
{
    check_order(l);
    const double a = 0.5 * space.d, b = 0.5 * space.d0;
    double s = 0.0;
    for (std::size_t i = 0; i < measure.nodes.size(); ++i) {
        const double r = measure.nodes[i];
        const double p = jacobi_eval(l - 1, a, b, std::cos(r));
        s += measure.weights[i] * p * p * std::pow(std::sin(0.5 * r), 2 * space.d) *
             std::pow(std::cos(0.5 * r), 2 * space.d0);
    }
    return s;
}

double coeff_A(const SpaceSpec& space, int l, const RadiusMeasure& measure)
{
    check_order(l);
    if (measure.is_canonical())
        return std::exp(log_A_canonical(Dims(space), l));
    return coeff_A_nodes(space, l, measure);
}

double t_closed(int n, double alpha, double beta)
{
    if (n < 0)
        throw DomainError("t_closed: negative n");
    return rising(alpha + 1.0, n) * rising(beta + 1.0, n) / rising(alpha + beta + 1.5, n);
}

template <class T>
T w_sum(int n, const T& alpha, const T& beta)
{
    if (n < 0)
        throw DomainError("w_sum: negative n");
    const unsigned two_n = 2u * static_cast<unsigned>(n);
    T total(0);
    T k_factorial(1);
    for (unsigned k = 0; k <= two_n; ++k) {
        if (k > 0)
            k_factorial *= T(static_cast<int>(k));
        T term = falling(T(static_cast<int>(two_n)), k) * falling(alpha + T(n), k) *
                 falling(beta + T(n), two_n - k) * rising(T(2) * alpha + T(1), two_n - k) *
                 rising(T(2) * beta + T(1), k) / k_factorial;
        if ((n + k) % 2 == 1)
            term = -term;
        total += term;
    }
    return total;
}

template <class T>
T w_closed_printed(int n, const T& alpha, const T& beta)
{
    if (n < 0)
        throw DomainError("w_closed: negative n");
    T pow4(1);
    for (int i = 0; i < n; ++i)
        pow4 *= T(4);
    const unsigned un = static_cast<unsigned>(n);
    return pow4 * rising(alpha + T(1), un) * rising(beta + T(1), un) * rising(alpha + beta + T(1), un);
}

template <class T>
T w_closed(int n, const T& alpha, const T& beta)
{
    return rising(T(1) / T(2), static_cast<unsigned>(n)) * w_closed_printed(n, alpha, beta);
}

template double w_sum<double>(int, const double&, const double&);
template Rational w_sum<Rational>(int, const Rational&, const Rational&);
template double w_closed<double>(int, const double&, const double&);
template Rational w_closed<Rational>(int, const Rational&, const Rational&);
template double w_closed_printed<double>(int, const double&, const double&);
template Rational w_closed_printed<Rational>(int, const Rational&, const Rational&);

double jacobi_sq_integral(int n, double alpha, double beta, IntegralRoute route)
{
    if (n < 0)
        throw DomainError("jacobi_sq_integral: negative n");
    if (!(alpha > -0.5) || !(beta > -0.5))
        throw DomainError("jacobi_sq_integral: requires alpha, beta > -1/2");
    if (route == IntegralRoute::Closed)
        return std::exp(log_jacobi_sq_closed(n, alpha, beta));
    const QuadratureRule rule = gauss_jacobi(n + 2, 2.0 * alpha, 2.0 * beta);
    return rule.integrate([&](double t) {
        const double p = jacobi_eval(n, alpha, beta, t);
        return p * p;
    });
}

ExpansionCoeffs::ExpansionCoeffs(const SpaceSpec& s, const RadiusMeasure& xi, int L)
    : space(s), measure(xi), order(L)
{
    if (L < (1 << kFirstCheckpoint))
        throw DomainError("ExpansionCoeffs: order must be at least 64");
    const Dims q(space);
    const double half_d = 0.5 * q.d, half_d0 = 0.5 * q.d0;
    m_l.resize(L);
    c_l.resize(L);
    a_l.resize(L);

    // Direct closed forms for small l, exact gamma-ratio recurrences beyond.
    constexpr int kDirect = 256;
    const int direct = std::min(L, kDirect);
    for (int l = 1; l <= direct; ++l) {
        m_l[l - 1] = coeff_M(space, l);
        c_l[l - 1] = coeff_C(space, l);
    }
    for (int l = direct; l < L; ++l) {
        const double x = l;
        m_l[l] = m_l[l - 1] * (2.0 * x + 1.0 + q.h) / (2.0 * x - 1.0 + q.h) * (x + 1.0) * (x - 1.0 + q.h) /
                 ((x + half_d) * (x + half_d0));
        c_l[l] = c_l[l - 1] * (x - 0.5) * (x + half_d) * (x + half_d0) / ((x + 1.0) * (x + 1.0) * (x + 0.5 + q.h));
    }

    if (measure.is_canonical()) {
        for (int l = 1; l <= direct; ++l)
            a_l[l - 1] = coeff_A(space, l, measure);
        for (int l = direct; l < L; ++l) {
            const double x = l;
            a_l[l] = a_l[l - 1] * (x - 0.5) * (x + half_d) * (x + half_d0) / (x * x * (x + q.h + 0.5));
        }
    } else {
        std::fill(a_l.begin(), a_l.end(), 0.0);
        for (std::size_t i = 0; i < measure.nodes.size(); ++i) {
            const double r = measure.nodes[i];
            const double wgt = measure.weights[i] * std::pow(std::sin(0.5 * r), 2 * space.d) *
                               std::pow(std::cos(0.5 * r), 2 * space.d0);
            if (wgt == 0.0)
                continue;
            JacobiRecurrence rec(half_d, half_d0, std::cos(r));
            for (int l = 1; l <= L; ++l) {
                const double p = rec.current(); // degree l-1
                a_l[l - 1] += wgt * p * p;
                rec.next();
            }
        }
    }

    const double inv_b = std::exp(-log_beta(half_d, half_d0));
    chordal.weights.resize(L);
    symdiff.weights.resize(L);
    for (int l = 1; l <= L; ++l) {
        chordal.weights[l - 1] = 0.5 * m_l[l - 1] * c_l[l - 1];
        symdiff.weights[l - 1] = m_l[l - 1] * a_l[l - 1] * inv_b / (static_cast<double>(l) * l);
    }

    fill_em_tails(chordal, L, [&q](double x) { return chordal_weight(q, x); });
    if (measure.is_canonical())
        fill_em_tails(symdiff, L, [&q](double x) { return symdiff_weight_canonical(q, x); });
    else
        fill_block_tails(symdiff, L);

    tail_bound = 2.0 * std::max(chordal.tail.back() + chordal.tail_err.back(),
                                symdiff.tail.back() + symdiff.tail_err.back());
}

SeriesValue chordal_series(const ExpansionCoeffs& coeffs, double theta, double tol)
{
    return sum_zonal_series(coeffs.space, coeffs.chordal, theta, tol);
}

SeriesValue symdiff_series(const ExpansionCoeffs& coeffs, double theta, double tol)
{
    return sum_zonal_series(coeffs.space, coeffs.symdiff, theta, tol);
}

double chordal_series(const SpaceSpec& space, double theta, double tol)
{
    const ExpansionCoeffs coeffs(space, RadiusMeasure::canonical());
    return chordal_series(coeffs, theta, tol).value;
}

double symdiff_series(const SpaceSpec& space, double theta, const RadiusMeasure& measure, double tol)
{
    const ExpansionCoeffs coeffs(space, measure);
    return symdiff_series(coeffs, theta, tol).value;
}

std::vector<SeriesValue> symdiff_series_grid_serial(const ExpansionCoeffs& coeffs, std::span<const double> thetas,
                                                    double tol)
{
    std::vector<SeriesValue> out(thetas.size());
    for (std::size_t i = 0; i < thetas.size(); ++i)
        out[i] = symdiff_series(coeffs, thetas[i], tol);
    return out;
}

std::vector<SeriesValue> symdiff_series_grid(const ExpansionCoeffs& coeffs, std::span<const double> thetas, double tol)
{
    std::vector<SeriesValue> out(thetas.size());
    const long count = static_cast<long>(thetas.size());
    std::exception_ptr failure;
#pragma omp parallel for schedule(dynamic, 1)
    for (long i = 0; i < count; ++i) {
        try {
            out[i] = symdiff_series(coeffs, thetas[i], tol);
        } catch (...) {
#pragma omp critical(crosp_grid_failure)
            if (!failure)
                failure = std::current_exception();
        }
    }
    if (failure)
        std::rethrow_exception(failure);
    return out;
}

double avg_symdiff(const SpaceSpec& space, const RadiusMeasure& measure)
{
    return integrate_radius(measure, [&](double r) {
        const double v = ball_volume(space, r);
        return v - v * v;
    });
}

} // namespace crosp
