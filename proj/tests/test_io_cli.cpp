#include "crosp/cli.hpp"
#include "crosp/discrepancy.hpp"
#include "crosp/io.hpp"

#include <doctest.h>

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <numbers>
#include <sstream>

using namespace crosp;

namespace {

struct CliResult {
    int code;
    std::string out, err;
};

CliResult cli(std::vector<std::string> args)
{
    std::ostringstream out, err;
    const int code = crosp::run(args, out, err);
    return {code, out.str(), err.str()};
}

std::string temp_path(const std::string& name)
{
    const auto dir = std::filesystem::temp_directory_path() / "crosp_tests";
    std::filesystem::create_directories(dir);
    return (dir / name).string();
}

} // namespace

TEST_CASE("point-set JSON round trip")
{
    RngStream rng = make_stream(1, 0);
    for (const char* name : {"s2", "rp3", "cp2", "hp2"}) {
        const PointSet set = sample_uniform(parse_space(name), 5, rng);
        const Json j = point_set_to_json(set);
        const PointSet back = point_set_from_json(Json::parse(dump_json(j)));
        CHECK(back.space == set.space);
        REQUIRE(back.size() == set.size());
        for (std::size_t i = 0; i < set.size(); ++i)
            CHECK(back.points[i].coords == set.points[i].coords);
    }
    CHECK_THROWS_AS(point_set_from_json(Json::parse(R"({"space": {"family": "x", "n": 2}, "points": []})")),
                    UsageError);
    CHECK_THROWS_AS(point_set_from_json(Json::parse(R"({"space": {"family": "s", "n": 2}, "points": [[1, 1, 0]]})")),
                    UsageError);
    CHECK_THROWS_AS(point_set_from_json(Json::parse(R"({"points": []})")), UsageError);
}

TEST_CASE("distance CSV")
{
    const DistanceMatrix dm = parse_distance_csv("# header\n0,1.5\n\n1.5,0\n");
    CHECK(dm.size() == 2);
    CHECK(dm(0, 1) == 1.5);
    CHECK(parse_distance_csv(distance_csv(dm)).data() == dm.data());
    CHECK_THROWS_AS(parse_distance_csv("0,1\n1\n"), UsageError);
    CHECK_THROWS_AS(parse_distance_csv("0,1,2\n1,0,2\n"), UsageError);
    CHECK_THROWS_AS(parse_distance_csv("0,abc\nabc,0\n"), UsageError);
}

TEST_CASE("floating output keeps 17 significant digits")
{
    CHECK(format_double(0.1) == "0.10000000000000001");
    CHECK(std::stod(format_double(std::numbers::pi)) == std::numbers::pi);
    CHECK(format_double(std::nan("")) == "null");
    CHECK(dump_json(Json{{"x", 1.0 / 3.0}}).find("0.33333333333333331") != std::string::npos);
}

TEST_CASE("usage errors exit with code 2")
{
    CHECK(cli({}).code == 2);
    CHECK(cli({"spaces", "--bogus"}).code == 2);
    CHECK(cli({"frobnicate"}).code == 2);
    CHECK(cli({"constants"}).code == 2);
    CHECK(cli({"constants", "--space", "xx9"}).code == 2);
    CHECK(cli({"energy", "--in", temp_path("missing.json")}).code == 2);
    CHECK(cli({"verify", "nonsense"}).code == 2);
}

TEST_CASE("spaces and constants")
{
    const CliResult spaces = cli({"--no-meta", "spaces"});
    REQUIRE(spaces.code == 0);
    const Json s = Json::parse(spaces.out);
    CHECK(s["spaces"].size() == 7);
    CHECK(s["config"]["subcommand"] == "spaces");

    const CliResult c = cli({"--no-meta", "constants", "--space", "s2"});
    REQUIRE(c.code == 0);
    const Json j = Json::parse(c.out);
    CHECK(j["gamma"].get<double>() == doctest::Approx(2.0).epsilon(1e-14));
    CHECK(j["avg_chordal"].get<double>() == doctest::Approx(2.0 / 3.0).epsilon(1e-14));
    CHECK(j["avg_symdiff"].get<double>() == doctest::Approx(1.0 / 3.0).epsilon(1e-14));
    CHECK_FALSE(j.contains("meta"));
    CHECK(Json::parse(cli({"constants", "--space", "s2"}).out)["meta"].contains("generated_at"));
}

TEST_CASE("antipodal pair on the circle")
{
    const std::string path = temp_path("antipodal_s1.json");
    write_text_file(path, R"({"space": {"family": "s", "n": 1}, "points": [[1, 0], [-1, 0]], "label": "antipodal"})");
    const CliResult r = cli({"--no-meta", "discrepancy", "--in", path, "--route", "closed"});
    REQUIRE(r.code == 0);
    const Json j = Json::parse(r.out);
    CHECK(j["quantity"] == "lambda");
    CHECK(j["value"].get<double>() == doctest::Approx(16.0 / (std::numbers::pi * std::numbers::pi) - 4.0 / std::numbers::pi).epsilon(1e-14));
    CHECK(j["stderr"].is_null());
    CHECK(j["route"] == "closed");
    CHECK(j["n_points"] == 2);

    const Json e = Json::parse(cli({"--no-meta", "energy", "--in", path, "--metric", "chordal"}).out);
    CHECK(e["value"].get<double>() == doctest::Approx(2.0).epsilon(1e-15));
}

TEST_CASE("generated sets feed every consumer")
{
    const std::string path = temp_path("gen_cp2.json");
    REQUIRE(cli({"--no-meta", "--seed", "5", "gen", "--space", "cp2", "--n", "20", "--out", path}).code == 0);
    const PointSet set = point_set_from_json(Json::parse(read_text_file(path)));
    CHECK(set.size() == 20);

    const Json closed = Json::parse(cli({"--no-meta", "discrepancy", "--in", path, "--route", "closed"}).out);
    const Json series = Json::parse(cli({"--no-meta", "discrepancy", "--in", path, "--route", "series"}).out);
    const Json mc =
        Json::parse(cli({"--no-meta", "discrepancy", "--in", path, "--route", "mc", "--samples", "200000"}).out);
    CHECK(closed["value"].get<double>() == doctest::Approx(lambda_closed(set)).epsilon(1e-14));
    CHECK(std::abs(series["value"].get<double>() - closed["value"].get<double>()) < 1e-6);
    CHECK(std::abs(mc["value"].get<double>() - closed["value"].get<double>()) < 3.0 * mc["stderr"].get<double>());
    CHECK(cli({"--no-meta", "energy", "--in", path}).code == 0);

    const CliResult csv = cli({"--no-meta", "--format", "csv", "energy", "--in", path});
    REQUIRE(csv.code == 0);
    const DistanceMatrix dm = parse_distance_csv(csv.out);
    CHECK(dm.size() == 20);

    const std::string dpath = temp_path("gen_cp2.csv");
    write_text_file(dpath, csv.out);
    const Json via_matrix =
        Json::parse(cli({"--no-meta", "discrepancy", "--distances", dpath, "--space", "cp2", "--route", "closed"}).out);
    CHECK(via_matrix["value"].get<double>() == doctest::Approx(closed["value"].get<double>()).epsilon(1e-12));
}

TEST_CASE("output is byte-identical for a fixed seed")
{
    const std::vector<std::string> args{"--no-meta", "--seed", "11", "gen", "--space", "hp2", "--n", "7"};
    CHECK(cli(args).out == cli(args).out);
    CHECK(cli(args).out != cli({"--no-meta", "--seed", "12", "gen", "--space", "hp2", "--n", "7"}).out);

    const std::string path = temp_path("gen_s2.json");
    REQUIRE(cli({"--no-meta", "gen", "--space", "s2", "--n", "30", "--out", path}).code == 0);
    const std::vector<std::string> mc{"--no-meta", "discrepancy", "--in", path, "--route", "mc", "--samples", "50000"};
    std::vector<std::string> one = mc, three = mc;
    one.insert(one.begin(), {"--threads", "1"});
    three.insert(three.begin(), {"--threads", "3"});
    const Json a = Json::parse(cli(one).out), b = Json::parse(cli(three).out);
    CHECK(a["value"] == b["value"]);
    CHECK(a["stderr"] == b["stderr"]);
}

TEST_CASE("seed falls back to the environment")
{
    setenv("CROSP_SEED", "77", 1);
    const Json env = Json::parse(cli({"--no-meta", "gen", "--space", "s2", "--n", "3"}).out);
    const Json flag = Json::parse(cli({"--no-meta", "--seed", "77", "gen", "--space", "s2", "--n", "3"}).out);
    unsetenv("CROSP_SEED");
    CHECK(env["config"]["seed"] == 77);
    CHECK(env["points"] == flag["points"]);
    CHECK(Json::parse(cli({"--no-meta", "gen", "--space", "s2", "--n", "3"}).out)["config"]["seed"] == 0);
}

TEST_CASE("unsupported sampling exits with code 3")
{
    const CliResult r = cli({"gen", "--space", "op2", "--n", "10"});
    CHECK(r.code == 3);
    CHECK(r.err.find("octonionic projective plane") != std::string::npos);
}

TEST_CASE("verify subcommand exit codes")
{
    CHECK(cli({"--no-meta", "verify", "polynomial"}).code == 0);
    const CliResult printed = cli({"--no-meta", "verify", "polynomial", "--printed"});
    CHECK(printed.code == 1);
    CHECK(Json::parse(printed.out)["verdict"] == "fail");
    const CliResult table = cli({"--no-meta", "--format", "table", "verify", "jacobi-integral", "--n-max", "3"});
    CHECK(table.code == 0);
    CHECK(table.out.find("verdict=pass") != std::string::npos);
    const CliResult cs = cli({"--no-meta", "verify", "chordal-symdiff", "--space", "rp2", "--grid", "19"});
    CHECK(cs.code == 0);
}
