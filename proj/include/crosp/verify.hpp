#pragma once

// Certification suites. Each suite evaluates an identity on a parameter grid,
// compares the two sides, and returns a report with one row per grid point.
// Rows are computed in parallel and stored in grid order; a failing row never
// stops the suite.

#include "crosp/io.hpp"
#include "crosp/spaces.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace crosp {

enum class Identity {
    ChordalSymdiff,   ///< τ(θ) = γ(Q) θ^Δ(ξ♮, θ)
    CoefficientChain, ///< closed forms of A_l(ξ♮) and the chain A_l ↔ C_l
    JacobiIntegral,   ///< weighted integral of (P_n^{(α,β)})² in closed form
    PolynomialForm,   ///< alternating sum W_n(α, β) in closed form
    WatsonSum,        ///< terminating 3F2 against Watson's gamma quotient
    ConstantsRatio,   ///< γ(Q) as ratios of mean and diameter values
    Invariance,       ///< Monte Carlo λ against the invariance principle
};

std::string identity_name(Identity id);

enum class ErrorKind { Absolute, Relative, Sigma };

struct ReportRow {
    std::string label;
    double computed = 0.0;
    double reference = 0.0;
    double abs_err = 0.0;
    double rel_err = 0.0;
    /// Measured error under the row's ErrorKind, compared against tolerance.
    double measured = 0.0;
    double tolerance = 0.0;
    ErrorKind kind = ErrorKind::Absolute;
    bool pass = false;
};

struct VerificationReport {
    Identity identity = Identity::ChordalSymdiff;
    std::string grid;
    double max_abs_err = 0.0;
    double max_rel_err = 0.0;
    double tolerance = 0.0;
    bool pass = false;
    std::string notes;
    std::vector<ReportRow> rows;
};

/// Fills abs_err, rel_err, measured and pass from computed and reference.
ReportRow make_row(std::string label, double computed, double reference, double tolerance, ErrorKind kind,
                   double std_error = 0.0);
/// Sets the aggregate fields from the rows.
void finalize(VerificationReport& report);

VerificationReport verify_chordal_symdiff(const SpaceSpec& space, int grid_size = 181, double tol = 1e-8);
VerificationReport verify_coefficients(const SpaceSpec& space, int l_max = 20, double tol = 1e-9);

struct JacobiGrid {
    int n_max = 12;
    std::vector<double> params{0.0, 0.25, 0.5, 1.0, 2.0, 4.0};
};
VerificationReport verify_jacobi_integral(const JacobiGrid& grid = {}, double tol = 1e-10);

enum class ClosedFormVariant { Corrected, AsPrinted };
struct RationalGrid {
    int n_max = 8;
    std::vector<Rational> params{Rational(1, 3), Rational(2, 7), Rational(5, 4), Rational(-3, 11)};
};
VerificationReport verify_polynomial(const RationalGrid& grid = {},
                                     ClosedFormVariant variant = ClosedFormVariant::Corrected);

struct WatsonPoint {
    Rational alpha, beta;
};
/// 20 points with α + β < 0 and α, β, α + β away from integers and half-integers.
std::vector<WatsonPoint> default_watson_points();
VerificationReport verify_watson(int n_max = 6, const std::vector<WatsonPoint>& points = default_watson_points(),
                                 double tol = 1e-11);

VerificationReport verify_constants(const SpaceSpec& space, double tol = 1e-8, std::uint64_t samples = 200000,
                                    std::uint64_t seed = 0);

VerificationReport verify_invariance(const SpaceSpec& space, std::size_t n_points = 100,
                                     std::uint64_t samples = 1000000, std::uint64_t seed = 0, double tol_sigma = 3.0);

Json report_to_json(const VerificationReport& report);
/// Fixed-width text table of the report rows.
std::string report_table(const VerificationReport& report);
/// label,computed,reference,abs_err,rel_err,measured,tolerance,kind,pass
std::string report_csv(const VerificationReport& report);

} // namespace crosp
