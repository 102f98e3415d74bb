#include "crosp/specfun.hpp"

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>

namespace crosp {

namespace {

constexpr double kPi = std::numbers::pi;

// Godfrey's coefficients, g = 607/128, 15 terms.
constexpr double kLanczosG = 607.0 / 128.0;
constexpr std::array<double, 15> kLanczosCoef = {
    0.99999999999999709182,     57.156235665862923517,     -59.597960355475491248,
    14.136097974741747174,      -0.49191381609762019978,   0.33994649984811888699e-4,
    0.46523628927048575665e-4,  -0.98374475304879564677e-4, 0.15808870322491248884e-3,
    -0.21026444172410488319e-3, 0.21743961811521264320e-3, -0.16431810653676389022e-3,
    0.84418223983852743293e-4,  -0.26190838401581408670e-4, 0.36899182659531622704e-5,
};

double lanczos_log_gamma(double x)
{
    // x >= 0.5
    const double z = x - 1.0;
    double sum = kLanczosCoef[0];
    for (std::size_t k = 1; k < kLanczosCoef.size(); ++k)
        sum += kLanczosCoef[k] / (z + static_cast<double>(k));
    const double t = z + kLanczosG + 0.5;
    return 0.5 * std::log(2.0 * kPi) + (z + 0.5) * std::log(t) - t + std::log(sum);
}

bool is_nonpositive_integer(double x)
{
    return x <= 0.0 && x == std::floor(x);
}

// Neumaier's variant of Kahan summation.
struct CompensatedSum {
    double sum = 0.0;
    double comp = 0.0;
    void add(double v)
    {
        const double t = sum + v;
        if (std::abs(sum) >= std::abs(v))
            comp += (sum - t) + v;
        else
            comp += (v - t) + sum;
        sum = t;
    }
    double value() const { return sum + comp; }
};

double betacf(double a, double b, double x)
{
    constexpr int kMaxIter = 20000;
    constexpr double kEps = 1e-16;
    constexpr double kTiny = 1e-300;
    const double qab = a + b;
    const double qap = a + 1.0;
    const double qam = a - 1.0;
    double c = 1.0;
    double d = 1.0 - qab * x / qap;
    if (std::abs(d) < kTiny)
        d = kTiny;
    d = 1.0 / d;
    double h = d;
    for (int m = 1; m <= kMaxIter; ++m) {
        const double m2 = 2.0 * m;
        double aa = m * (b - m) * x / ((qam + m2) * (a + m2));
        d = 1.0 + aa * d;
        if (std::abs(d) < kTiny)
            d = kTiny;
        c = 1.0 + aa / c;
        if (std::abs(c) < kTiny)
            c = kTiny;
        d = 1.0 / d;
        h *= d * c;
        aa = -(a + m) * (qab + m) * x / ((a + m2) * (qap + m2));
        d = 1.0 + aa * d;
        if (std::abs(d) < kTiny)
            d = kTiny;
        c = 1.0 + aa / c;
        if (std::abs(c) < kTiny)
            c = kTiny;
        d = 1.0 / d;
        const double del = d * c;
        h *= del;
        if (std::abs(del - 1.0) < kEps)
            return h;
    }
    throw NonConvergenceError("reg_inc_beta: continued fraction did not converge");
}

void check_jacobi_params(double alpha, double beta)
{
    if (!(alpha > -1.0) || !(beta > -1.0))
        throw DomainError("Jacobi parameters must exceed -1");
}

} // namespace

double sin_pi(double x)
{
    if (!std::isfinite(x))
        return std::numeric_limits<double>::quiet_NaN();
    double r = x - 2.0 * std::round(0.5 * x); // r in [-1, 1]
    if (r == 0.0 || std::abs(r) == 1.0)
        return 0.0;
    if (r > 0.5)
        r = 1.0 - r;
    else if (r < -0.5)
        r = -1.0 - r;
    return std::sin(kPi * r);
}

double cos_pi(double x)
{
    const double r = x - 2.0 * std::round(0.5 * x);
    if (std::abs(r) == 0.5)
        return 0.0;
    return sin_pi(r + 0.5);
}

double log_gamma(double x)
{
    if (!(x > 0.0))
        throw DomainError("log_gamma: argument must be positive, got " + std::to_string(x));
    if (x < 0.5)
        return std::log(kPi / sin_pi(x)) - lanczos_log_gamma(1.0 - x);
    return lanczos_log_gamma(x);
}

SignedLog log_abs_gamma(double x)
{
    if (std::isnan(x) || is_nonpositive_integer(x))
        throw DomainError("gamma: pole at nonpositive integer " + std::to_string(x));
    if (x >= 0.5)
        return {lanczos_log_gamma(x), 1};
    // Γ(x) Γ(1-x) = π / sin(πx)
    const double s = sin_pi(x);
    return {std::log(kPi) - std::log(std::abs(s)) - lanczos_log_gamma(1.0 - x), s > 0.0 ? 1 : -1};
}

double gamma_fn(double x)
{
    const SignedLog g = log_abs_gamma(x);
    return g.sign * std::exp(g.log_abs);
}

double log_beta(double a, double b)
{
    if (!(a > 0.0) || !(b > 0.0))
        throw DomainError("beta: arguments must be positive");
    return log_gamma(a) + log_gamma(b) - log_gamma(a + b);
}

double beta(double a, double b)
{
    return std::exp(log_beta(a, b));
}

double reg_inc_beta(double x, double a, double b)
{
    if (!(a > 0.0) || !(b > 0.0))
        throw DomainError("reg_inc_beta: shape parameters must be positive");
    if (!(x >= 0.0 && x <= 1.0))
        throw DomainError("reg_inc_beta: x must lie in [0, 1]");
    if (x == 0.0)
        return 0.0;
    if (x == 1.0)
        return 1.0;
    const double log_front = a * std::log(x) + b * std::log1p(-x) - log_beta(a, b);
    const double front = std::exp(log_front);
    double v;
    if (x < (a + 1.0) / (a + b + 2.0))
        v = front * betacf(a, b, x) / a;
    else
        v = 1.0 - front * betacf(b, a, 1.0 - x) / b;
    return std::clamp(v, 0.0, 1.0);
}

JacobiRecurrence::JacobiRecurrence(double alpha, double beta, double t)
    : alpha_(alpha), beta_(beta), t_(t)
{
}

double JacobiRecurrence::next()
{
    const double a = alpha_, b = beta_;
    double p;
    if (n_ == 0) {
        p = 0.5 * ((a + b + 2.0) * t_ + (a - b));
    } else {
        const double n = n_ + 1;
        const double s = 2.0 * n + a + b;
        const double a1 = 2.0 * n * (n + a + b) * (s - 2.0);
        const double a2 = (s - 1.0) * (a * a - b * b);
        const double a3 = (s - 2.0) * (s - 1.0) * s;
        const double a4 = 2.0 * (n + a - 1.0) * (n + b - 1.0) * s;
        p = ((a2 + a3 * t_) * p_ - a4 * prev_) / a1;
    }
    prev_ = p_;
    p_ = p;
    ++n_;
    return p_;
}

double jacobi_eval(int n, double alpha, double beta, double t)
{
    if (n < 0)
        throw DomainError("jacobi_eval: negative degree");
    check_jacobi_params(alpha, beta);
    if (!(t >= -1.0 && t <= 1.0))
        throw DomainError("jacobi_eval: argument outside [-1, 1]");
    JacobiRecurrence rec(alpha, beta, t);
    while (rec.degree() < n)
        rec.next();
    return rec.current();
}

double jacobi_at_one(int n, double alpha, double /*beta*/)
{
    if (n < 0)
        throw DomainError("jacobi_at_one: negative degree");
    if (!(alpha + n + 1.0 > 0.0))
        throw DomainError("jacobi_at_one: alpha + n + 1 must be positive");
    if (n <= 64 || !(alpha + 1.0 > 0.0)) {
        double r = 1.0;
        for (int j = 1; j <= n; ++j)
            r *= (alpha + j) / j;
        return r;
    }
    return std::exp(log_gamma(alpha + n + 1.0) - log_gamma(n + 1.0) - log_gamma(alpha + 1.0));
}

QuadratureRule gauss_jacobi(int m, double alpha, double beta)
{
    if (m < 1)
        throw DomainError("gauss_jacobi: need at least one node");
    check_jacobi_params(alpha, beta);

    const double ab = alpha + beta;
    Eigen::VectorXd diag(m);
    Eigen::VectorXd sub(std::max(m - 1, 0));
    diag(0) = (beta - alpha) / (ab + 2.0);
    for (int k = 1; k < m; ++k) {
        const double s = 2.0 * k + ab;
        diag(k) = (beta * beta - alpha * alpha) / (s * (s + 2.0));
        double b2;
        if (k == 1)
            b2 = 4.0 * (1.0 + alpha) * (1.0 + beta) / ((2.0 + ab) * (2.0 + ab) * (3.0 + ab));
        else
            b2 = 4.0 * k * (k + alpha) * (k + beta) * (k + ab) / (s * s * (s + 1.0) * (s - 1.0));
        sub(k - 1) = std::sqrt(b2);
    }

    QuadratureRule rule;
    rule.alpha = alpha;
    rule.beta = beta;
    rule.nodes.resize(m);
    rule.weights.resize(m);
    const double mass = std::exp((ab + 1.0) * std::log(2.0) + log_beta(alpha + 1.0, beta + 1.0));
    if (m == 1) {
        rule.nodes[0] = diag(0);
        rule.weights[0] = mass;
        return rule;
    }
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es;
    es.computeFromTridiagonal(diag, sub, Eigen::ComputeEigenvectors);
    if (es.info() != Eigen::Success)
        throw NonConvergenceError("gauss_jacobi: tridiagonal eigensolver failed");
    // Eigen returns eigenvalues in increasing order.
    for (int i = 0; i < m; ++i) {
        rule.nodes[i] = es.eigenvalues()(i);
        const double v0 = es.eigenvectors()(0, i);
        rule.weights[i] = mass * v0 * v0;
    }
    return rule;
}

QuadratureRule gauss_legendre(int m, double lo, double hi)
{
    QuadratureRule rule = gauss_jacobi(m, 0.0, 0.0);
    const double half = 0.5 * (hi - lo);
    const double mid = 0.5 * (hi + lo);
    for (std::size_t i = 0; i < rule.size(); ++i) {
        rule.nodes[i] = mid + half * rule.nodes[i];
        rule.weights[i] *= half;
    }
    return rule;
}

// ---------------------------------------------------------------------------
// 3F2 at unit argument

namespace {

template <class T>
bool nonpositive_int(const T& x);

template <>
bool nonpositive_int<double>(const double& x)
{
    return is_nonpositive_integer(x);
}

template <>
bool nonpositive_int<Rational>(const Rational& x)
{
    return x <= 0 && denominator(x) == 1;
}

template <class T>
long termination_index(const T& a, const T& b, const T& c)
{
    long k = -1;
    for (const T* p : {&a, &b, &c}) {
        if (nonpositive_int(*p)) {
            long kk;
            if constexpr (std::is_same_v<T, double>)
                kk = static_cast<long>(-*p);
            else
                kk = static_cast<long>(-numerator(*p));
            if (k < 0 || kk < k)
                k = kk;
        }
    }
    return k;
}

} // namespace

double hyp3f2_unit(const Hyp3F2Params& p)
{
    const long K = termination_index(p.a, p.b, p.c);
    if (K >= 0) {
        CompensatedSum sum;
        double term = 1.0;
        sum.add(term);
        for (long k = 0; k < K; ++k) {
            const double dk = p.d + k, ek = p.e + k;
            if (dk == 0.0 || ek == 0.0)
                throw DomainError("hyp3f2_unit: denominator parameter reaches zero before termination");
            term *= (p.a + k) * (p.b + k) * (p.c + k) / (dk * ek * (k + 1.0));
            sum.add(term);
        }
        return sum.value();
    }

    if (is_nonpositive_integer(p.d) || is_nonpositive_integer(p.e))
        throw DomainError("hyp3f2_unit: denominator parameter is a nonpositive integer");
    const double excess = p.d + p.e - p.a - p.b - p.c;
    if (!(excess > 0.0))
        throw DomainError("hyp3f2_unit: nonterminating series diverges (need d + e > a + b + c)");

    // Terms decay like k^{-(excess+1)}, so the tail beyond k is about term*(k/excess - 1/2).
    const double scale = 1.0 + std::abs(p.a) + std::abs(p.b) + std::abs(p.c) + std::abs(p.d) + std::abs(p.e);
    const double k_asym = 4.0 * scale + 2.0;
    constexpr long kMaxTerms = 400'000'000;
    CompensatedSum sum;
    double term = 1.0;
    sum.add(term);
    for (long k = 0; k < kMaxTerms; ++k) {
        term *= (p.a + k) * (p.b + k) * (p.c + k) / ((p.d + k) * (p.e + k) * (k + 1.0));
        sum.add(term);
        const double n = k + 1.0;
        if (n > k_asym && std::abs(term) * scale / excess <= 1e-16 * std::abs(sum.value())) {
            sum.add(term * (n / excess - 0.5));
            return sum.value();
        }
        if (term == 0.0)
            return sum.value();
    }
    throw NonConvergenceError("hyp3f2_unit: series did not converge within the term cap");
}

Rational hyp3f2_unit(const Hyp3F2RationalParams& p)
{
    const long K = termination_index(p.a, p.b, p.c);
    if (K < 0)
        throw DomainError("hyp3f2_unit: exact mode requires a terminating series");
    Rational sum(1);
    Rational term(1);
    for (long k = 0; k < K; ++k) {
        const Rational dk = p.d + k, ek = p.e + k;
        if (dk == 0 || ek == 0)
            throw DomainError("hyp3f2_unit: denominator parameter reaches zero before termination");
        term *= (p.a + k) * (p.b + k) * (p.c + k) / (dk * ek * Rational(k + 1));
        sum += term;
    }
    return sum;
}

Hyp3F2Params watson_params(double a, double b, double c)
{
    return {a, b, c, 0.5 * (a + b + 1.0), 2.0 * c};
}

Hyp3F2RationalParams watson_params(const Rational& a, const Rational& b, const Rational& c)
{
    return {a, b, c, (a + b + 1) / 2, 2 * c};
}

double watson_rhs(double a, double b, double c)
{
    if (!(2.0 * c - a - b + 1.0 > 0.0))
        throw PreconditionError("watson_rhs: requires 2c - a - b + 1 > 0");
    const std::array<double, 4> num = {0.5, c + 0.5, 0.5 * (a + b + 1.0), c - 0.5 * (a + b - 1.0)};
    const std::array<double, 4> den = {0.5 * (a + 1.0), 0.5 * (b + 1.0), c - 0.5 * (a - 1.0), c - 0.5 * (b - 1.0)};
    double log_abs = 0.0;
    int sign = 1;
    for (double x : num) {
        const SignedLog g = log_abs_gamma(x); // throws at a pole
        log_abs += g.log_abs;
        sign *= g.sign;
    }
    for (double x : den) {
        if (is_nonpositive_integer(x))
            return 0.0; // 1/Γ vanishes at its poles
        const SignedLog g = log_abs_gamma(x);
        log_abs -= g.log_abs;
        sign *= g.sign;
    }
    return sign * std::exp(log_abs);
}

} // namespace crosp
