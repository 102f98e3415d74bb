#include "crosp/cli.hpp"

#include "crosp/discrepancy.hpp"
#include "crosp/io.hpp"
#include "crosp/verify.hpp"

#include <CLI11.hpp>
#include <omp.h>

#include <algorithm>
#include <chrono>
#include <cstdlib>
#include <ctime>
#include <iostream>
#include <optional>

namespace crosp {

namespace {

constexpr const char* kVersion = "0.1.0";

const std::vector<std::string> kSuites{"chordal-symdiff", "coefficients", "jacobi-integral", "polynomial",
                                       "watson",          "constants",    "invariance",      "all"};

struct Options {
    std::uint64_t seed = 0;
    bool seed_given = false;
    int threads = 0;
    bool no_meta = false;
    std::string out_path;
    std::string format = "json";

    std::string space;
    std::size_t count = 0;
    std::string label;
    std::string in_path;
    std::string distances_path;
    std::string metric = "chordal";
    std::string route = "closed";
    std::uint64_t samples = 1000000;
    double tol = 0.0; // 0 selects the default of each operation

    std::string suite;
    int grid = 181;
    int l_max = 20;
    int n_max = -1;
    std::size_t n_points = 100;
    double sigma = 3.0;
    bool printed = false;
};

std::uint64_t resolve_seed(const Options& o)
{
    if (o.seed_given)
        return o.seed;
    if (const char* env = std::getenv("CROSP_SEED"); env != nullptr && *env != '\0') {
        try {
            std::size_t used = 0;
            const unsigned long long v = std::stoull(env, &used);
            if (used != std::string(env).size())
                throw std::invalid_argument(env);
            return v;
        } catch (const std::exception&) {
            throw UsageError(std::string("CROSP_SEED is not an unsigned integer: '") + env + "'");
        }
    }
    return 0;
}

std::string timestamp()
{
    const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
    char buf[32];
    std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", std::gmtime(&now));
    return buf;
}

class Emitter {
public:
    Emitter(const Options& o, std::ostream& out) : opts_(o), out_(out) {}

    void json(Json doc, const Json& config) const
    {
        doc["config"] = config;
        if (!opts_.no_meta)
            doc["meta"] = Json{{"generated_at", timestamp()}, {"version", kVersion}};
        text(dump_json(doc) + "\n");
    }

    void text(const std::string& s) const
    {
        if (opts_.out_path.empty())
            out_ << s;
        else
            write_text_file(opts_.out_path, s);
    }

private:
    const Options& opts_;
    std::ostream& out_;
};

Json base_config(const std::string& subcommand, const Options& o, std::uint64_t seed)
{
    return Json{{"subcommand", subcommand},
                {"seed", seed},
                {"threads", o.threads > 0 ? o.threads : omp_get_max_threads()},
                {"format", o.format}};
}

Json result_json(const std::string& quantity, double value, const Json& stderr_value, const std::string& route,
                 const SpaceSpec& space, std::size_t n_points)
{
    return Json{{"quantity", quantity}, {"value", value},        {"stderr", stderr_value},
                {"route", route},       {"space", space.name()}, {"n_points", n_points}};
}

void require_json_or_csv(const Options& o, bool csv_allowed)
{
    if (o.format == "table" || (o.format == "csv" && !csv_allowed))
        throw UsageError("format '" + o.format + "' is not available for this subcommand");
}

int cmd_spaces(const Options& o, const Emitter& emit, std::uint64_t seed)
{
    if (o.format == "table")
        throw UsageError("format 'table' is only available for verify");
    if (o.format == "csv") {
        std::string s = "name,family,n,d,d0,m\n";
        for (const SpaceSpec& q : default_catalog())
            s += q.name() + ',' + family_code(q.family) + ',' + std::to_string(q.n) + ',' + std::to_string(q.d) + ',' +
                 std::to_string(q.d0) + ',' + std::to_string(q.m) + '\n';
        emit.text(s);
        return kExitOk;
    }
    Json list = Json::array();
    for (const SpaceSpec& q : default_catalog())
        list.push_back(Json{{"name", q.name()},
                            {"family", family_code(q.family)},
                            {"n", q.n},
                            {"d", q.d},
                            {"d0", q.d0},
                            {"m", q.m},
                            {"uniform_sampling", supports_sampling(q)}});
    emit.json(Json{{"spaces", std::move(list)}}, base_config("spaces", o, seed));
    return kExitOk;
}

int cmd_constants(const Options& o, const Emitter& emit, std::uint64_t seed)
{
    require_json_or_csv(o, false);
    const SpaceSpec space = parse_space(o.space);
    Json config = base_config("constants", o, seed);
    config["space"] = space.name();
    emit.json(Json{{"space", space.name()},
                   {"d", space.d},
                   {"d0", space.d0},
                   {"gamma", gamma_const(space)},
                   {"avg_chordal", avg_chordal(space)},
                   {"avg_symdiff", avg_symdiff(space, RadiusMeasure::canonical())}},
              config);
    return kExitOk;
}

int cmd_gen(const Options& o, const Emitter& emit, std::uint64_t seed)
{
    require_json_or_csv(o, false);
    const SpaceSpec space = parse_space(o.space);
    if (!supports_sampling(space))
        throw UnsupportedError("cannot generate points on " + space.name() +
                               ": uniform sampling on the octonionic projective plane is not implemented; "
                               "supply chart points or a distance matrix instead");
    RngStream rng = make_stream(seed, 0);
    PointSet set = sample_uniform(space, o.count, rng);
    set.label = o.label.empty() ? "uniform " + space.name() + " N=" + std::to_string(o.count) + " seed=" +
                                      std::to_string(seed)
                                : o.label;
    Json config = base_config("gen", o, seed);
    config["space"] = space.name();
    config["n"] = o.count;
    emit.json(point_set_to_json(set), config);
    return kExitOk;
}

struct Input {
    SpaceSpec space;
    std::optional<PointSet> points;
    DistanceMatrix dist;
    std::size_t size() const { return dist.size(); }
};

Input load_input(const Options& o)
{
    if (o.in_path.empty() == o.distances_path.empty())
        throw UsageError("give exactly one of --in (point-set JSON) or --distances (CSV)");
    Input in;
    if (!o.in_path.empty()) {
        Json doc;
        try {
            doc = Json::parse(read_text_file(o.in_path));
        } catch (const nlohmann::json::parse_error& e) {
            throw UsageError("cannot parse '" + o.in_path + "': " + e.what());
        }
        in.points = point_set_from_json(doc);
        in.space = in.points->space;
        if (!o.space.empty() && parse_space(o.space) != in.space)
            throw UsageError("--space " + o.space + " does not match the point set (" + in.space.name() + ")");
        in.dist = distance_matrix(*in.points);
    } else {
        if (o.space.empty())
            throw UsageError("--distances needs --space");
        in.space = parse_space(o.space);
        in.dist = parse_distance_csv(read_text_file(o.distances_path));
    }
    return in;
}

Json input_config(const std::string& subcommand, const Options& o, std::uint64_t seed, const Input& in)
{
    Json config = base_config(subcommand, o, seed);
    config["space"] = in.space.name();
    if (!o.in_path.empty())
        config["in"] = o.in_path;
    else
        config["distances"] = o.distances_path;
    return config;
}

int cmd_energy(const Options& o, const Emitter& emit, std::uint64_t seed)
{
    require_json_or_csv(o, true);
    const Input in = load_input(o);
    if (o.format == "csv") {
        emit.text(distance_csv(in.dist));
        return kExitOk;
    }
    const Metric metric = o.metric == "geodesic" ? Metric::Geodesic : Metric::Chordal;
    const double value = in.points ? pair_sum(*in.points, metric) : pair_sum(in.dist, metric);
    Json config = input_config("energy", o, seed, in);
    config["metric"] = o.metric;
    emit.json(result_json("pair_sum_" + o.metric, value, nullptr, "direct", in.space, in.size()), config);
    return kExitOk;
}

int cmd_discrepancy(const Options& o, const Emitter& emit, std::uint64_t seed)
{
    require_json_or_csv(o, false);
    const Input in = load_input(o);
    Json config = input_config("discrepancy", o, seed, in);
    config["route"] = o.route;
    Json result;
    if (o.route == "closed") {
        const double v = in.points ? lambda_closed(*in.points) : lambda_closed(in.space, in.dist);
        result = result_json("lambda", v, nullptr, "closed", in.space, in.size());
    } else if (o.route == "series") {
        const double tol = o.tol > 0.0 ? o.tol : 1e-9;
        config["tol"] = tol;
        const ExpansionCoeffs coeffs(in.space, RadiusMeasure::canonical());
        const LambdaSeries v = lambda_series(coeffs, in.dist, tol);
        result = result_json("lambda", v.value, nullptr, "series", in.space, in.size());
        result["error_estimate"] = v.error_estimate;
    } else {
        if (!in.points)
            throw UsageError("the Monte Carlo route needs point coordinates (--in)");
        config["samples"] = o.samples;
        const McEstimate v = lambda_mc(*in.points, o.samples, seed);
        result = result_json("lambda", v.value, v.std_error, "mc", in.space, in.size());
        result["samples"] = v.samples;
        result["seed"] = v.seed;
    }
    emit.json(std::move(result), config);
    return kExitOk;
}

std::vector<SpaceSpec> suite_spaces(const Options& o, bool sampling_only)
{
    if (!o.space.empty())
        return {parse_space(o.space)};
    std::vector<SpaceSpec> spaces = default_catalog();
    if (sampling_only)
        std::erase_if(spaces, [](const SpaceSpec& s) { return !supports_sampling(s); });
    return spaces;
}

std::vector<VerificationReport> run_suite(const std::string& suite, const Options& o, std::uint64_t seed)
{
    std::vector<VerificationReport> reports;
    auto tol_or = [&](double fallback) { return o.tol > 0.0 ? o.tol : fallback; };
    if (suite == "chordal-symdiff")
        for (const SpaceSpec& s : suite_spaces(o, false))
            reports.push_back(verify_chordal_symdiff(s, o.grid, tol_or(1e-8)));
    else if (suite == "coefficients")
        for (const SpaceSpec& s : suite_spaces(o, false))
            reports.push_back(verify_coefficients(s, o.l_max, tol_or(1e-9)));
    else if (suite == "jacobi-integral") {
        JacobiGrid grid;
        if (o.n_max >= 0)
            grid.n_max = o.n_max;
        reports.push_back(verify_jacobi_integral(grid, tol_or(1e-10)));
    } else if (suite == "polynomial") {
        RationalGrid grid;
        if (o.n_max >= 0)
            grid.n_max = o.n_max;
        reports.push_back(
            verify_polynomial(grid, o.printed ? ClosedFormVariant::AsPrinted : ClosedFormVariant::Corrected));
    } else if (suite == "watson")
        reports.push_back(verify_watson(o.n_max >= 0 ? o.n_max : 6, default_watson_points(), tol_or(1e-11)));
    else if (suite == "constants")
        for (const SpaceSpec& s : suite_spaces(o, false))
            reports.push_back(verify_constants(s, tol_or(1e-8), std::min<std::uint64_t>(o.samples, 200000), seed));
    else if (suite == "invariance")
        for (const SpaceSpec& s : suite_spaces(o, true))
            reports.push_back(verify_invariance(s, o.n_points, o.samples, seed, o.sigma));
    else
        for (const std::string& name : kSuites)
            if (name != "all")
                for (VerificationReport& r : run_suite(name, o, seed))
                    reports.push_back(std::move(r));
    return reports;
}

int cmd_verify(const Options& o, const Emitter& emit, std::uint64_t seed)
{
    const std::vector<VerificationReport> reports = run_suite(o.suite, o, seed);
    const bool pass = std::all_of(reports.begin(), reports.end(), [](const auto& r) { return r.pass; });
    if (o.format == "table") {
        std::string s;
        for (const VerificationReport& r : reports)
            s += report_table(r) + "\n";
        s += std::string("overall: ") + (pass ? "pass" : "fail") + "\n";
        emit.text(s);
    } else if (o.format == "csv") {
        std::string s;
        for (const VerificationReport& r : reports)
            s += "# " + identity_name(r.identity) + " | " + r.grid + " | " + (r.pass ? "pass" : "fail") + "\n" +
                 report_csv(r);
        emit.text(s);
    } else {
        Json list = Json::array();
        for (const VerificationReport& r : reports)
            list.push_back(report_to_json(r));
        Json config = base_config("verify", o, seed);
        config["suite"] = o.suite;
        if (!o.space.empty())
            config["space"] = o.space;
        if (o.tol > 0.0)
            config["tol"] = o.tol;
        config["grid"] = o.grid;
        config["l_max"] = o.l_max;
        if (o.n_max >= 0)
            config["n_max"] = o.n_max;
        config["samples"] = o.samples;
        config["n_points"] = o.n_points;
        config["sigma"] = o.sigma;
        config["printed"] = o.printed;
        emit.json(Json{{"suite", o.suite}, {"verdict", pass ? "pass" : "fail"}, {"reports", std::move(list)}}, config);
    }
    return pass ? kExitOk : kExitVerificationFailed;
}

} // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err)
{
    Options o;
    CLI::App app{"Discrepancy and invariance-principle computations on compact rank-one symmetric spaces", "crosp"};
    app.fallthrough();
    app.require_subcommand(1);
    app.add_option("--seed", o.seed, "random seed (default: $CROSP_SEED, then 0)")->each([&](const std::string&) {
        o.seed_given = true;
    });
    app.add_option("--threads", o.threads, "worker threads (default: all cores)")->check(CLI::PositiveNumber);
    app.add_flag("--no-meta", o.no_meta, "omit timestamp and version from JSON output");
    app.add_option("--out", o.out_path, "write output to this file instead of stdout");
    app.add_option("--format", o.format, "output format")->check(CLI::IsMember({"json", "csv", "table"}));

    CLI::App* spaces = app.add_subcommand("spaces", "list the space catalog with (d, d0, m)");

    CLI::App* constants = app.add_subcommand("constants", "print gamma(Q), <tau> and <symdiff>");
    constants->add_option("--space", o.space, "space name, e.g. s2, cp2, op2")->required();

    CLI::App* gen = app.add_subcommand("gen", "write uniformly distributed points as point-set JSON");
    gen->add_option("--space", o.space, "space name")->required();
    gen->add_option("--n", o.count, "number of points")->required();
    gen->add_option("--label", o.label, "label stored in the file");

    auto add_input = [&](CLI::App* sub) {
        sub->add_option("--in", o.in_path, "point-set JSON");
        sub->add_option("--distances", o.distances_path, "N x N geodesic distance CSV (needs --space)");
        sub->add_option("--space", o.space, "space of the input");
    };
    CLI::App* energy = app.add_subcommand("energy", "sum of pairwise distances over ordered pairs");
    add_input(energy);
    energy->add_option("--metric", o.metric, "distance")->check(CLI::IsMember({"chordal", "geodesic"}));

    CLI::App* discrepancy = app.add_subcommand("discrepancy", "ball quadratic discrepancy lambda");
    add_input(discrepancy);
    discrepancy->add_option("--route", o.route, "evaluation route")->check(CLI::IsMember({"closed", "series", "mc"}));
    discrepancy->add_option("--samples", o.samples, "Monte Carlo samples")->check(CLI::PositiveNumber);
    discrepancy->add_option("--tol", o.tol, "per-pair series tolerance")->check(CLI::PositiveNumber);

    CLI::App* verify = app.add_subcommand("verify", "run a verification suite");
    verify->add_option("suite", o.suite, "suite name")->required()->check(CLI::IsMember(kSuites));
    verify->add_option("--space", o.space, "restrict space-dependent suites to one space");
    verify->add_option("--tol", o.tol, "tolerance override")->check(CLI::PositiveNumber);
    verify->add_option("--grid", o.grid, "theta grid size")->check(CLI::Range(2, 100000));
    verify->add_option("--l-max", o.l_max, "largest coefficient index")->check(CLI::Range(1, 10000));
    verify->add_option("--n-max", o.n_max, "largest polynomial degree")->check(CLI::Range(0, 64));
    verify->add_option("--samples", o.samples, "Monte Carlo samples")->check(CLI::PositiveNumber);
    verify->add_option("--n-points", o.n_points, "points in the random set")->check(CLI::PositiveNumber);
    verify->add_option("--sigma", o.sigma, "Monte Carlo tolerance in standard errors")->check(CLI::PositiveNumber);
    verify->add_flag("--printed", o.printed, "check the closed form as typeset (expected to fail)");

    std::vector<std::string> reversed(args.rbegin(), args.rend());
    try {
        app.parse(reversed);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? kExitOk : kExitUsage;
    }

    try {
        if (o.threads > 0)
            omp_set_num_threads(o.threads);
        const std::uint64_t seed = resolve_seed(o);
        const Emitter emit(o, out);
        if (spaces->parsed())
            return cmd_spaces(o, emit, seed);
        if (constants->parsed())
            return cmd_constants(o, emit, seed);
        if (gen->parsed())
            return cmd_gen(o, emit, seed);
        if (energy->parsed())
            return cmd_energy(o, emit, seed);
        if (discrepancy->parsed())
            return cmd_discrepancy(o, emit, seed);
        if (verify->parsed())
            return cmd_verify(o, emit, seed);
    } catch (const UsageError& e) {
        err << "error: " << e.what() << '\n';
        return kExitUsage;
    } catch (const Error& e) {
        err << "error: " << e.what() << '\n';
        return kExitNumeric;
    }
    return kExitUsage;
}

} // namespace crosp
