#include "crosp/verify.hpp"

#include "crosp/harmonic.hpp"

#include <doctest.h>

#include <cmath>
#include <numbers>
#include <omp.h>

using namespace crosp;

namespace {

const ReportRow* find_row(const VerificationReport& r, const std::string& prefix)
{
    for (const ReportRow& row : r.rows)
        if (row.label.rfind(prefix, 0) == 0)
            return &row;
    return nullptr;
}

} // namespace

TEST_CASE("report rows")
{
    const ReportRow ok = make_row("x", 1.0 + 1e-12, 1.0, 1e-10, ErrorKind::Absolute);
    CHECK(ok.pass);
    CHECK(ok.abs_err == doctest::Approx(1e-12).epsilon(1e-3));
    const ReportRow rel = make_row("y", 2e6 + 1.0, 2e6, 1e-6, ErrorKind::Relative);
    CHECK(rel.pass);
    CHECK(rel.measured == doctest::Approx(5e-7));
    const ReportRow sig = make_row("z", 1.4, 1.0, 3.0, ErrorKind::Sigma, 0.1);
    CHECK_FALSE(sig.pass);
    CHECK(sig.measured == doctest::Approx(4.0));

    VerificationReport r;
    r.rows = {ok, sig};
    finalize(r);
    CHECK_FALSE(r.pass);
    CHECK(r.max_abs_err == doctest::Approx(0.4));
}

TEST_CASE("chordal metric equals gamma times the symmetric-difference metric")
{
    for (const SpaceSpec& s : default_catalog()) {
        INFO(s.name());
        const VerificationReport r = verify_chordal_symdiff(s, 181, 1e-8);
        CHECK(r.pass);
        CHECK(r.rows.size() == 2 * 181);
        CHECK(r.max_abs_err <= 1e-8);
        const ReportRow* zero = find_row(r, "theta=0.0000000000 gamma");
        REQUIRE(zero != nullptr);
        CHECK(zero->computed == 0.0);
        CHECK(zero->abs_err == 0.0);
    }
}

TEST_CASE("coefficient closed forms and chain")
{
    for (const SpaceSpec& s : default_catalog()) {
        INFO(s.name());
        const VerificationReport r = verify_coefficients(s, 20, 1e-9);
        CHECK(r.pass);
        CHECK(r.rows.size() == 60);
    }
    const VerificationReport s2 = verify_coefficients(parse_space("s2"), 1, 1e-9);
    for (const ReportRow& row : s2.rows)
        if (row.label.find("A_l closed") != std::string::npos)
            CHECK(row.computed == doctest::Approx(1.0 / 15.0).epsilon(1e-12));
}

TEST_CASE("weighted Jacobi integrals")
{
    const VerificationReport r = verify_jacobi_integral();
    CHECK(r.pass);
    CHECK(r.max_rel_err <= 1e-10);
    bool region_row = false;
    for (const ReportRow& row : r.rows)
        region_row = region_row || row.label.find("alpha=-1/2") != std::string::npos;
    CHECK(region_row);
}

TEST_CASE("alternating sum closed form and its typeset variant")
{
    const VerificationReport ok = verify_polynomial();
    CHECK(ok.pass);
    CHECK(ok.max_abs_err == 0.0);
    CHECK(ok.notes.find("(1/2)_n") != std::string::npos);
    CHECK(ok.notes.find("the sum gives 2, the typeset form 4, the corrected form 2") != std::string::npos);

    const VerificationReport printed = verify_polynomial({}, ClosedFormVariant::AsPrinted);
    CHECK_FALSE(printed.pass);
    const ReportRow* n0 = find_row(printed, "n=0 ");
    REQUIRE(n0 != nullptr);
    CHECK(n0->pass);
}

TEST_CASE("Watson's sum on the terminating grid")
{
    const VerificationReport r = verify_watson();
    CHECK(r.pass);
    CHECK(r.max_rel_err <= 1e-11);

    const std::vector<WatsonPoint> pts{{Rational(-7, 10), Rational(-6, 10)}, {Rational(-12, 10), Rational(-4, 10)}};
    const VerificationReport small = verify_watson(3, pts);
    CHECK(small.pass);
    CHECK(find_row(small, "n=1 alpha=-7/10 beta=-3/5") != nullptr);
    CHECK(find_row(small, "n=3 alpha=-6/5 beta=-2/5") != nullptr);
}

TEST_CASE("invariance constants")
{
    for (const SpaceSpec& s : default_catalog()) {
        INFO(s.name());
        const VerificationReport r = verify_constants(s, 1e-8, 100000, 3);
        CHECK(r.pass);
    }
    CHECK(gamma_const(parse_space("s1")) == doctest::Approx((2.0 / std::numbers::pi) /
                                                           avg_symdiff(parse_space("s1"), RadiusMeasure::canonical())));
}

TEST_CASE("Monte Carlo invariance check")
{
    const VerificationReport s2 = verify_invariance(parse_space("s2"), 100, 1000000, 0, 3.0);
    CHECK(s2.pass);
    const VerificationReport rp3 = verify_invariance(parse_space("rp3"), 50, 1000000, 1, 3.0);
    CHECK(rp3.pass);
    CHECK_THROWS_AS(verify_invariance(parse_space("op2"), 10, 1000, 0, 3.0), UnsupportedError);
}

TEST_CASE("reports are reproducible across thread counts")
{
    const int saved = omp_get_max_threads();
    omp_set_num_threads(1);
    const std::string a = dump_json(report_to_json(verify_invariance(parse_space("cp2"), 30, 100000, 9, 3.0)));
    const std::string c1 = report_csv(verify_chordal_symdiff(parse_space("hp2"), 31, 1e-8));
    omp_set_num_threads(4);
    const std::string b = dump_json(report_to_json(verify_invariance(parse_space("cp2"), 30, 100000, 9, 3.0)));
    const std::string c2 = report_csv(verify_chordal_symdiff(parse_space("hp2"), 31, 1e-8));
    omp_set_num_threads(saved);
    CHECK(a == b);
    CHECK(c1 == c2);
}

TEST_CASE("report serialization")
{
    const VerificationReport r = verify_jacobi_integral({2, {0.0, 1.0}}, 1e-10);
    const Json j = report_to_json(r);
    CHECK(j["identity"] == identity_name(Identity::JacobiIntegral));
    CHECK(j["verdict"] == "pass");
    CHECK(j["rows"].size() == r.rows.size());
    const std::string csv = report_csv(r);
    CHECK(csv.rfind("label,computed,reference,abs_err,rel_err,measured,tolerance,kind,pass\n", 0) == 0);
    CHECK(std::count(csv.begin(), csv.end(), '\n') == static_cast<long>(r.rows.size()) + 1);
    CHECK(report_table(r).find("verdict=pass") != std::string::npos);
}
