#pragma once

// Scalar special functions: gamma/beta machinery, Pochhammer symbols,
// Jacobi polynomials, Gauss-Jacobi rules and 3F2 at unit argument.

#include "crosp/error.hpp"
#include "crosp/rational.hpp"

#include <cstddef>
#include <vector>

namespace crosp {

/// ln Γ(x) for x > 0 (Lanczos, reflection below 1/2).
double log_gamma(double x);

/// log|Γ(x)| together with the sign of Γ(x); defined off the poles 0, -1, -2, ...
struct SignedLog {
    double log_abs = 0.0;
    int sign = 1;
};
SignedLog log_abs_gamma(double x);

/// Γ(x) as a double; may overflow to ±inf for large x.
double gamma_fn(double x);

/// sin(πx) with exact zeros at the integers.
double sin_pi(double x);
/// cos(πx) with exact zeros at the half-integers.
double cos_pi(double x);

double log_beta(double a, double b);
double beta(double a, double b);

/// Regularized incomplete beta I_x(a, b), continued-fraction evaluation.
double reg_inc_beta(double x, double a, double b);

/// Rising factorial (a)_k = a(a+1)...(a+k-1).
template <class T>
T rising(const T& a, unsigned k)
{
    T r(1);
    for (unsigned j = 0; j < k; ++j)
        r *= a + T(static_cast<int>(j));
    return r;
}

/// Falling factorial <a>_k = a(a-1)...(a-k+1).
template <class T>
T falling(const T& a, unsigned k)
{
    T r(1);
    for (unsigned j = 0; j < k; ++j)
        r *= a - T(static_cast<int>(j));
    return r;
}

/// P_n^{(α,β)}(t) by the three-term recurrence.
double jacobi_eval(int n, double alpha, double beta, double t);

/// P_n^{(α,β)}(1) = Γ(α+n+1) / (Γ(n+1) Γ(α+1)).
double jacobi_at_one(int n, double alpha, double beta);

/// Streams P_0, P_1, P_2, ... at a fixed argument.
class JacobiRecurrence {
public:
    JacobiRecurrence(double alpha, double beta, double t);

    /// Degree of the value returned by current().
    int degree() const { return n_; }
    double current() const { return p_; }
    /// Advance to the next degree and return its value.
    double next();

private:
    double alpha_;
    double beta_;
    double t_;
    int n_ = 0;
    double p_ = 1.0;
    double prev_ = 0.0;
};

/// Gauss rule for the weight (1-t)^α (1+t)^β on [-1, 1].
struct QuadratureRule {
    double alpha = 0.0;
    double beta = 0.0;
    std::vector<double> nodes;   ///< strictly increasing
    std::vector<double> weights; ///< positive

    std::size_t size() const { return nodes.size(); }

    template <class F>
    double integrate(F&& f) const
    {
        double s = 0.0;
        for (std::size_t i = 0; i < nodes.size(); ++i)
            s += weights[i] * f(nodes[i]);
        return s;
    }
};

/// m-node Gauss-Jacobi rule from the Jacobi matrix eigen-decomposition.
QuadratureRule gauss_jacobi(int m, double alpha, double beta);

/// m-node Gauss-Legendre rule mapped to [lo, hi].
QuadratureRule gauss_legendre(int m, double lo, double hi);

/// Parameters of 3F2(a, b, c; d, e; 1).
struct Hyp3F2Params {
    double a = 0.0, b = 0.0, c = 0.0;
    double d = 1.0, e = 1.0;
};

struct Hyp3F2RationalParams {
    Rational a, b, c;
    Rational d{1}, e{1};
};

/// 3F2(a, b, c; d, e; 1) in double precision with compensated summation.
/// Terminating series are summed term by term; otherwise d+e > a+b+c is required.
double hyp3f2_unit(const Hyp3F2Params& p);

/// Exact value of a terminating 3F2(...; 1) with rational parameters.
Rational hyp3f2_unit(const Hyp3F2RationalParams& p);

/// Gamma-quotient side of Watson's summation for 3F2(a, b, c; (a+b+1)/2, 2c; 1).
/// Throws PreconditionError unless 2c - a - b + 1 > 0.
double watson_rhs(double a, double b, double c);

/// Parameters (a, b, c, (a+b+1)/2, 2c) of the series summed by Watson's formula.
Hyp3F2Params watson_params(double a, double b, double c);
Hyp3F2RationalParams watson_params(const Rational& a, const Rational& b, const Rational& c);

} // namespace crosp
