#include "crosp/verify.hpp"

#include "crosp/discrepancy.hpp"
#include "crosp/harmonic.hpp"
#include "crosp/specfun.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <numbers>
#include <sstream>

namespace crosp {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

std::string fmt(const char* pattern, double x)
{
    char buf[64];
    std::snprintf(buf, sizeof buf, pattern, x);
    return buf;
}

std::string num(double x) { return fmt("%.6g", x); }

ReportRow failed_row(std::string label, const std::exception& e, double tolerance, ErrorKind kind)
{
    ReportRow row;
    row.label = std::move(label) + " [" + e.what() + "]";
    row.computed = kNaN;
    row.reference = kNaN;
    row.abs_err = kNaN;
    row.rel_err = kNaN;
    row.measured = kNaN;
    row.tolerance = tolerance;
    row.kind = kind;
    row.pass = false;
    return row;
}

// Runs make(i) for each grid index in parallel and concatenates the rows in index order.
template <class F>
std::vector<ReportRow> collect_rows(std::size_t count, F&& make)
{
    std::vector<std::vector<ReportRow>> parts(count);
    const long n = static_cast<long>(count);
#pragma omp parallel for schedule(dynamic, 1)
    for (long i = 0; i < n; ++i)
        parts[i] = make(static_cast<std::size_t>(i));
    std::vector<ReportRow> rows;
    for (auto& part : parts)
        for (auto& row : part)
            rows.push_back(std::move(row));
    return rows;
}

std::string kind_name(ErrorKind k)
{
    switch (k) {
    case ErrorKind::Absolute:
        return "abs";
    case ErrorKind::Relative:
        return "rel";
    case ErrorKind::Sigma:
        return "sigma";
    }
    return "abs";
}

std::string rational_label(const Rational& q) { return to_string(q); }

} // namespace

std::string identity_name(Identity id)
{
    switch (id) {
    case Identity::ChordalSymdiff:
        return "chordal-symdiff";
    case Identity::CoefficientChain:
        return "coefficient-chain";
    case Identity::JacobiIntegral:
        return "jacobi-integral";
    case Identity::PolynomialForm:
        return "polynomial-form";
    case Identity::WatsonSum:
        return "watson-sum";
    case Identity::ConstantsRatio:
        return "constants-ratio";
    case Identity::Invariance:
        return "invariance";
    }
    return "unknown";
}

ReportRow make_row(std::string label, double computed, double reference, double tolerance, ErrorKind kind,
                   double std_error)
{
    ReportRow row;
    row.label = std::move(label);
    row.computed = computed;
    row.reference = reference;
    row.abs_err = std::abs(computed - reference);
    row.rel_err = reference != 0.0 ? row.abs_err / std::abs(reference) : row.abs_err;
    switch (kind) {
    case ErrorKind::Absolute:
        row.measured = row.abs_err;
        break;
    case ErrorKind::Relative:
        row.measured = row.rel_err;
        break;
    case ErrorKind::Sigma:
        row.measured = std_error > 0.0 ? row.abs_err / std_error
                                       : (row.abs_err == 0.0 ? 0.0 : std::numeric_limits<double>::infinity());
        break;
    }
    row.tolerance = tolerance;
    row.kind = kind;
    row.pass = row.measured <= tolerance; // false for NaN
    return row;
}

void finalize(VerificationReport& report)
{
    report.max_abs_err = 0.0;
    report.max_rel_err = 0.0;
    report.pass = !report.rows.empty();
    for (const ReportRow& row : report.rows) {
        if (std::isnan(row.abs_err)) {
            report.max_abs_err = kNaN;
            report.max_rel_err = kNaN;
        } else if (!std::isnan(report.max_abs_err)) {
            report.max_abs_err = std::max(report.max_abs_err, row.abs_err);
            report.max_rel_err = std::max(report.max_rel_err, row.rel_err);
        }
        report.pass = report.pass && row.pass;
    }
}

VerificationReport verify_chordal_symdiff(const SpaceSpec& space, int grid_size, double tol)
{
    if (grid_size < 2)
        throw DomainError("theta grid needs at least 2 points");
    VerificationReport report;
    report.identity = Identity::ChordalSymdiff;
    report.tolerance = tol;
    report.grid = space.name() + ", " + std::to_string(grid_size) + " equispaced theta in [0, pi]";

    const ExpansionCoeffs coeffs(space, RadiusMeasure::canonical());
    const double gamma = gamma_const(space);
    const double series_tol = tol / 10.0;
    std::vector<int> terms(static_cast<std::size_t>(grid_size), 0);

    report.rows = collect_rows(static_cast<std::size_t>(grid_size), [&](std::size_t i) {
        const double theta = i + 1 == static_cast<std::size_t>(grid_size)
                                 ? std::numbers::pi
                                 : std::numbers::pi * static_cast<double>(i) / (grid_size - 1);
        const double tau = std::sin(0.5 * theta);
        const std::string at = "theta=" + fmt("%.10f", theta);
        std::vector<ReportRow> rows;
        try {
            const SeriesValue sym = symdiff_series(coeffs, theta, series_tol);
            rows.push_back(make_row(at + " gamma*symdiff", gamma * sym.value, tau, tol, ErrorKind::Absolute));
            terms[i] = sym.terms;
        } catch (const Error& e) {
            rows.push_back(failed_row(at + " gamma*symdiff", e, tol, ErrorKind::Absolute));
        }
        try {
            const SeriesValue ch = chordal_series(coeffs, theta, series_tol);
            rows.push_back(make_row(at + " chordal series", ch.value, tau, tol, ErrorKind::Absolute));
        } catch (const Error& e) {
            rows.push_back(failed_row(at + " chordal series", e, tol, ErrorKind::Absolute));
        }
        return rows;
    });
    finalize(report);
    report.notes = "gamma(Q)=" + fmt("%.17g", gamma) + "; per-point series tolerance " + num(series_tol) +
                   "; at most " + std::to_string(*std::max_element(terms.begin(), terms.end())) +
                   " terms before the tail correction";
    return report;
}

VerificationReport verify_coefficients(const SpaceSpec& space, int l_max, double tol)
{
    if (l_max < 1)
        throw DomainError("l_max must be at least 1");
    VerificationReport report;
    report.identity = Identity::CoefficientChain;
    report.tolerance = tol;
    report.grid = space.name() + ", 1 <= l <= " + std::to_string(l_max);

    const double a = 0.5 * space.d, b = 0.5 * space.d0;
    const double gamma = gamma_const(space);
    const double beta_half = beta(a, b);
    const double scale = std::pow(2.0, space.d + space.d0);
    const RadiusMeasure canonical = RadiusMeasure::canonical();

    report.rows = collect_rows(static_cast<std::size_t>(l_max), [&](std::size_t i) {
        const int l = static_cast<int>(i) + 1;
        const int n = l - 1;
        const std::string at = "l=" + std::to_string(l);
        std::vector<ReportRow> rows;
        try {
            const double quad = jacobi_sq_integral(n, a, b, IntegralRoute::Quadrature);
            const double n_fact = rising(1.0, static_cast<unsigned>(n));
            const double closed = 2.0 * scale * rising(0.5, static_cast<unsigned>(n)) / (n_fact * n_fact) *
                                  beta(space.d + 1.0, space.d0 + 1.0) * t_closed(n, a, b);
            rows.push_back(make_row(at + " integral quadrature vs closed", quad, closed, tol, ErrorKind::Relative));

            const double a_closed = coeff_A(space, l, canonical);
            rows.push_back(make_row(at + " A_l closed vs quadrature", a_closed, quad / scale, tol, ErrorKind::Relative));

            const double lhs = gamma * a_closed / (static_cast<double>(l) * l * beta_half);
            rows.push_back(make_row(at + " chain gamma*A_l/(l^2 B) vs C_l/2", lhs, 0.5 * coeff_C(space, l), tol,
                                    ErrorKind::Relative));
        } catch (const Error& e) {
            rows.push_back(failed_row(at, e, tol, ErrorKind::Relative));
        }
        return rows;
    });
    finalize(report);
    report.notes = "A_l for the canonical radius measure; quadrature uses l+1 Gauss-Jacobi nodes";
    return report;
}

VerificationReport verify_jacobi_integral(const JacobiGrid& grid, double tol)
{
    VerificationReport report;
    report.identity = Identity::JacobiIntegral;
    report.tolerance = tol;
    std::string params;
    for (double p : grid.params)
        params += (params.empty() ? "" : ",") + num(p);
    report.grid = "0 <= n <= " + std::to_string(grid.n_max) + ", alpha, beta in {" + params + "}";

    const std::size_t np = grid.params.size();
    const std::size_t count = static_cast<std::size_t>(grid.n_max + 1) * np * np;
    report.rows = collect_rows(count, [&](std::size_t i) {
        const int n = static_cast<int>(i / (np * np));
        const double alpha = grid.params[(i / np) % np];
        const double beta_p = grid.params[i % np];
        const std::string at = "n=" + std::to_string(n) + " alpha=" + num(alpha) + " beta=" + num(beta_p);
        try {
            const double quad = jacobi_sq_integral(n, alpha, beta_p, IntegralRoute::Quadrature);
            const double closed = jacobi_sq_integral(n, alpha, beta_p, IntegralRoute::Closed);
            return std::vector<ReportRow>{make_row(at, quad, closed, tol, ErrorKind::Relative)};
        } catch (const Error& e) {
            return std::vector<ReportRow>{failed_row(at, e, tol, ErrorKind::Relative)};
        }
    });

    // The weight (1-t)^{2α}(1+t)^{2β} is integrable only for α, β > -1/2.
    bool rejected = false;
    try {
        jacobi_sq_integral(1, -0.5, 0.0, IntegralRoute::Quadrature);
    } catch (const DomainError&) {
        rejected = true;
    }
    report.rows.push_back(make_row("alpha=-1/2 outside the convergence region is rejected", rejected ? 1.0 : 0.0, 1.0,
                                   tol, ErrorKind::Absolute));
    finalize(report);
    report.notes = "quadrature: (n+2)-node Gauss-Jacobi rule for the weight (1-t)^{2alpha}(1+t)^{2beta}";
    return report;
}

VerificationReport verify_polynomial(const RationalGrid& grid, ClosedFormVariant variant)
{
    VerificationReport report;
    report.identity = Identity::PolynomialForm;
    report.tolerance = 0.0;
    std::string params;
    for (const Rational& p : grid.params)
        params += (params.empty() ? "" : ",") + rational_label(p);
    report.grid = "0 <= n <= " + std::to_string(grid.n_max) + ", alpha, beta in {" + params + "}, exact rationals";

    const std::size_t np = grid.params.size();
    const std::size_t count = static_cast<std::size_t>(grid.n_max + 1) * np * np;
    report.rows = collect_rows(count, [&](std::size_t i) {
        const int n = static_cast<int>(i / (np * np));
        const Rational& alpha = grid.params[(i / np) % np];
        const Rational& beta_p = grid.params[i % np];
        const Rational sum = w_sum(n, alpha, beta_p);
        const Rational closed = variant == ClosedFormVariant::Corrected ? w_closed(n, alpha, beta_p)
                                                                         : w_closed_printed(n, alpha, beta_p);
        ReportRow row = make_row("n=" + std::to_string(n) + " alpha=" + rational_label(alpha) +
                                     " beta=" + rational_label(beta_p),
                                 to_double(sum), to_double(closed), 0.0, ErrorKind::Relative);
        // Exact comparison decides; the doubles are for display.
        const bool equal = sum == closed;
        row.pass = equal;
        row.measured = equal ? 0.0 : std::max(row.rel_err, std::numeric_limits<double>::min());
        return std::vector<ReportRow>{row};
    });
    finalize(report);

    const Rational zero(0);
    const Rational at_sum = w_sum(1, zero, zero);
    const Rational at_printed = w_closed_printed(1, zero, zero);
    const Rational at_corrected = w_closed(1, zero, zero);
    report.notes = std::string(variant == ClosedFormVariant::Corrected
                                   ? "compared with the closed form including the factor (1/2)_n. "
                                   : "compared with the typeset closed form, which lacks the factor (1/2)_n. ") +
                   "Erratum: the typeset closed form 2^{2n}(alpha+1)_n(beta+1)_n(alpha+beta+1)_n omits (1/2)_n; at "
                   "(n,alpha,beta)=(1,0,0) the sum gives " +
                   to_string(at_sum) + ", the typeset form " + to_string(at_printed) + ", the corrected form " +
                   to_string(at_corrected) + ".";
    return report;
}

std::vector<WatsonPoint> default_watson_points()
{
    std::vector<WatsonPoint> points;
    for (int k = 0; k < 20; ++k)
        points.push_back({Rational(-(300 + 137 * k), 1000), Rational(250 - 83 * k, 1000)});
    return points;
}

VerificationReport verify_watson(int n_max, const std::vector<WatsonPoint>& points, double tol)
{
    VerificationReport report;
    report.identity = Identity::WatsonSum;
    report.tolerance = tol;
    report.grid = "0 <= n <= " + std::to_string(n_max) + ", " + std::to_string(points.size()) +
                  " (alpha, beta) points with alpha+beta < 0; a=-2n, b=2beta+1, c=-alpha-n";

    const std::size_t per_point = static_cast<std::size_t>(n_max + 1);
    report.rows = collect_rows(points.size() * per_point, [&](std::size_t i) {
        const WatsonPoint& p = points[i / per_point];
        const int n = static_cast<int>(i % per_point);
        const std::string at =
            "n=" + std::to_string(n) + " alpha=" + rational_label(p.alpha) + " beta=" + rational_label(p.beta);
        std::vector<ReportRow> rows;
        try {
            auto is_half_integer = [](const Rational& q) {
                const Rational twice = 2 * q;
                return denominator(twice) == 1;
            };
            if (!(p.alpha + p.beta < 0) || is_half_integer(p.alpha) || is_half_integer(p.beta) ||
                is_half_integer(p.alpha + p.beta))
                throw PreconditionError("grid point is not generic or violates alpha+beta < 0");
            const Rational a(-2 * n), b = 2 * p.beta + 1, c = -p.alpha - n;
            const double rhs = watson_rhs(to_double(a), to_double(b), to_double(c));
            const double exact = to_double(hyp3f2_unit(watson_params(a, b, c)));
            const double flt = hyp3f2_unit(watson_params(to_double(a), to_double(b), to_double(c)));
            rows.push_back(make_row(at + " exact series", exact, rhs, tol, ErrorKind::Relative));
            rows.push_back(make_row(at + " double series", flt, rhs, tol, ErrorKind::Relative));
        } catch (const Error& e) {
            rows.push_back(failed_row(at, e, tol, ErrorKind::Relative));
        }
        return rows;
    });
    finalize(report);
    report.notes = "series summed exactly in rationals and in compensated double precision; "
                   "the gamma quotient is evaluated in double precision";
    return report;
}

namespace {

McEstimate mean_chordal_mc(const SpaceSpec& space, std::uint64_t samples, std::uint64_t seed)
{
    constexpr std::uint64_t kShards = 64;
    std::vector<double> sums(kShards, 0.0), squares(kShards, 0.0);
    const long count = static_cast<long>(kShards);
#pragma omp parallel for schedule(dynamic, 1)
    for (long s = 0; s < count; ++s) {
        RngStream rng = make_stream(seed, static_cast<std::uint64_t>(s));
        std::vector<double> x(static_cast<std::size_t>(space.coord_size())), y(x.size());
        const std::uint64_t todo = samples / kShards + (static_cast<std::uint64_t>(s) < samples % kShards ? 1 : 0);
        double sum = 0.0, sq = 0.0;
        for (std::uint64_t k = 0; k < todo; ++k) {
            sample_uniform_into(space, rng, x);
            sample_uniform_into(space, rng, y);
            const double c = cos_geodesic(space, x, y);
            const double tau = std::sqrt(std::max(0.0, 0.5 * (1.0 - c)));
            sum += tau;
            sq += tau * tau;
        }
        sums[s] = sum;
        squares[s] = sq;
    }
    double sum = 0.0, sq = 0.0;
    for (std::uint64_t s = 0; s < kShards; ++s) {
        sum += sums[s];
        sq += squares[s];
    }
    const double n = static_cast<double>(samples);
    const double mean = sum / n;
    const double var = samples > 1 ? std::max(0.0, (sq - n * mean * mean) / (n - 1.0)) : 0.0;
    return {mean, std::sqrt(var / n), samples, seed};
}

} // namespace

VerificationReport verify_constants(const SpaceSpec& space, double tol, std::uint64_t samples, std::uint64_t seed)
{
    VerificationReport report;
    report.identity = Identity::ConstantsRatio;
    report.tolerance = tol;
    report.grid = space.name();

    const double d = space.d, d0 = space.d0;
    const double gamma = gamma_const(space);
    const double mean_tau = avg_chordal(space);
    const RadiusMeasure canonical = RadiusMeasure::canonical();

    const double sphere_form = (d + d0) / (2.0 * d0) * gamma_sphere(space.d0);
    const double gamma_form = 0.25 * std::sqrt(std::numbers::pi) * (d + d0) * gamma_fn(0.5 * d0) / gamma_fn(0.5 * (d0 + 1.0));
    report.rows.push_back(make_row("gamma: sphere-constant form vs gamma-quotient form", sphere_form, gamma_form, tol,
                                   ErrorKind::Relative));

    const double beta_form = beta(0.5 * (d + 1.0), 0.5 * d0) / beta(0.5 * d, 0.5 * d0);
    report.rows.push_back(make_row("<tau>: beta ratio vs closed form", beta_form, mean_tau, tol, ErrorKind::Relative));

    const double mean_sym = avg_symdiff(space, canonical);
    report.rows.push_back(make_row("<tau>/<symdiff> vs gamma", mean_tau / mean_sym, gamma, tol, ErrorKind::Relative));

    try {
        const ExpansionCoeffs coeffs(space, canonical);
        const double diam = symdiff_series(coeffs, std::numbers::pi, tol / 10.0).value;
        report.rows.push_back(make_row("1/symdiff(pi) vs gamma", 1.0 / diam, gamma, tol, ErrorKind::Relative));
    } catch (const Error& e) {
        report.rows.push_back(failed_row("1/symdiff(pi) vs gamma", e, tol, ErrorKind::Relative));
    }

    std::string notes = "gamma(Q)=" + fmt("%.17g", gamma) + ", <tau>=" + fmt("%.17g", mean_tau) +
                        ", <symdiff>=" + fmt("%.17g", mean_sym);
    if (supports_sampling(space) && samples > 0) {
        const McEstimate mc = mean_chordal_mc(space, samples, seed);
        report.rows.push_back(
            make_row("<tau> Monte Carlo pair average", mc.value, mean_tau, 3.0, ErrorKind::Sigma, mc.std_error));
        notes += "; Monte Carlo row: " + std::to_string(samples) + " pairs, seed " + std::to_string(seed) +
                 ", tolerance 3 standard errors";
    } else {
        notes += "; no Monte Carlo cross-check (uniform sampling unavailable)";
    }
    finalize(report);
    report.notes = notes;
    return report;
}

VerificationReport verify_invariance(const SpaceSpec& space, std::size_t n_points, std::uint64_t samples,
                                     std::uint64_t seed, double tol_sigma)
{
    VerificationReport report;
    report.identity = Identity::Invariance;
    report.tolerance = tol_sigma;
    report.grid = space.name() + ", N=" + std::to_string(n_points) + ", " + std::to_string(samples) +
                  " samples, seed " + std::to_string(seed);

    // The point set uses a stream index outside the Monte Carlo shard range.
    RngStream rng = make_stream(seed, std::uint64_t{1} << 32);
    PointSet set = sample_uniform(space, n_points, rng);
    const McEstimate mc = lambda_mc(set, samples, seed);
    const double closed = lambda_closed(set);
    report.rows.push_back(make_row("lambda Monte Carlo vs closed form", mc.value, closed, tol_sigma, ErrorKind::Sigma,
                                   mc.std_error));
    finalize(report);
    report.notes = "Monte Carlo standard error " + fmt("%.6g", mc.std_error) + "; residual gamma*lambda_mc + tau[D] - "
                   "<tau>N^2 = " + fmt("%.6g", gamma_const(space) * (mc.value - closed));
    return report;
}

Json report_to_json(const VerificationReport& report)
{
    Json rows = Json::array();
    for (const ReportRow& r : report.rows)
        rows.push_back(Json{{"label", r.label},
                            {"computed", r.computed},
                            {"reference", r.reference},
                            {"abs_err", r.abs_err},
                            {"rel_err", r.rel_err},
                            {"measured", r.measured},
                            {"tolerance", r.tolerance},
                            {"kind", kind_name(r.kind)},
                            {"pass", r.pass}});
    return Json{{"identity", identity_name(report.identity)},
                {"grid", report.grid},
                {"max_abs_err", report.max_abs_err},
                {"max_rel_err", report.max_rel_err},
                {"tolerance", report.tolerance},
                {"verdict", report.pass ? "pass" : "fail"},
                {"notes", report.notes},
                {"rows", std::move(rows)}};
}

std::string report_table(const VerificationReport& report)
{
    std::ostringstream out;
    out << identity_name(report.identity) << " | " << report.grid << '\n';
    char line[512];
    std::snprintf(line, sizeof line, "%-60s %24s %24s %10s %10s %5s\n", "check", "computed", "reference", "error",
                  "tol", "ok");
    out << line;
    for (const ReportRow& r : report.rows) {
        std::snprintf(line, sizeof line, "%-60s %24.17g %24.17g %10.3e %10.3e %5s\n", r.label.c_str(), r.computed,
                      r.reference, r.measured, r.tolerance, r.pass ? "yes" : "NO");
        out << line;
    }
    std::snprintf(line, sizeof line, "max_abs_err=%.3e max_rel_err=%.3e tolerance=%.3e verdict=%s\n",
                  report.max_abs_err, report.max_rel_err, report.tolerance, report.pass ? "pass" : "fail");
    out << line;
    if (!report.notes.empty())
        out << "notes: " << report.notes << '\n';
    return out.str();
}

std::string report_csv(const VerificationReport& report)
{
    std::string out = "label,computed,reference,abs_err,rel_err,measured,tolerance,kind,pass\n";
    for (const ReportRow& r : report.rows) {
        std::string label = r.label;
        std::replace(label.begin(), label.end(), '"', '\'');
        out += '"' + label + "\"," + format_double(r.computed) + ',' + format_double(r.reference) + ',' +
               format_double(r.abs_err) + ',' + format_double(r.rel_err) + ',' + format_double(r.measured) + ',' +
               format_double(r.tolerance) + ',' + kind_name(r.kind) + ',' + (r.pass ? "true" : "false") + '\n';
    }
    return out;
}

} // namespace crosp
