#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <filesystem>
#include <fstream>
#include <sstream>
#include <unistd.h>

#include "cli.hpp"

using namespace nlsdbar;
using namespace nlsdbar::cli;
using nlohmann::json;
namespace fs = std::filesystem;

namespace {

fs::path scratch(const std::string& name) {
    const fs::path p = fs::temp_directory_path() / ("nlsdbar_cli_" + std::to_string(::getpid())) / name;
    fs::remove_all(p);
    fs::create_directories(p.parent_path());
    return p;
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

int invoke(std::vector<std::string> args) {
    args.insert(args.begin(), "nlsdbar");
    std::vector<char*> argv;
    for (auto& a : args) argv.push_back(a.data());
    return main_entry(static_cast<int>(argv.size()), argv.data());
}

}  // namespace

TEST_CASE("config precedence: defaults, file, flags") {
    RunConfig d = make_config("decay", json(), json::object());
    CHECK(d.model == "nls");
    CHECK(d.t.size() == 5);

    const json file = {{"window", 0.5}, {"t", {1, 2, 3, 4}}, {"nx", 7}};
    RunConfig f = make_config("asymptotic", file, json::object());
    CHECK(f.window == 0.5);
    CHECK(f.t == std::vector<double>{1, 2, 3, 4});
    CHECK(f.nx == 7);

    RunConfig g = make_config("asymptotic", file, json{{"window", "0.25"}, {"t", "5,6"}});
    CHECK(g.window == 0.25);
    CHECK(g.t == std::vector<double>{5, 6});
    CHECK(g.nx == 7);
}

TEST_CASE("config validation") {
    const json none = json::object();
    CHECK_THROWS_AS(make_config("evolve", json(), json{{"t", "2,1"}}), ConfigError);
    CHECK_THROWS_AS(make_config("evolve", json(), json{{"t", "1,1"}}), ConfigError);
    CHECK_THROWS_AS(make_config("evolve", json(), json{{"t", "-1,2"}}), ConfigError);
    CHECK_THROWS_AS(make_config("evolve", json(), json{{"t", "1,x"}}), ConfigError);
    CHECK_THROWS_AS(make_config("evolve", json(), json{{"tol", "0"}}), ConfigError);
    CHECK_THROWS_AS(make_config("evolve", json(), json{{"selftest_tol", "-1"}}), ConfigError);
    CHECK_THROWS_AS(make_config("evolve", json(), json{{"dt", "0"}}), ConfigError);
    CHECK_THROWS_AS(make_config("evolve", json(), json{{"nx", "2.5"}}), ConfigError);
    CHECK_THROWS_AS(make_config("evolve", json(), json{{"q0", "/no/such/file.csv"}}), ConfigError);
    CHECK_THROWS_AS(make_config("evolve", json(), json{{"scattering", "/no/such.json"}}), ConfigError);
    CHECK_THROWS_AS(make_config("decay", json(), json{{"model", "kdv"}}), ConfigError);
    CHECK_THROWS_AS(make_config("decay", json(), json{{"rule", "slow"}}), ConfigError);
    CHECK_THROWS_AS(make_config("pc-selftest", json(), json{{"m", "1"}}), ConfigError);
    CHECK_THROWS_AS(make_config("pc-selftest", json{{"bogus", 1}}, none), ConfigError);
    CHECK_THROWS_AS(make_config("pc-selftest", json::array(), none), ConfigError);
    CHECK_THROWS_AS(make_config("pc-selftest", json{{"command", "scatter"}}, none), ConfigError);
    CHECK_THROWS_AS(make_config("frobnicate", json(), none), ConfigError);
}

TEST_CASE("config hash ignores the output directory only") {
    const RunConfig a = make_config("pc-selftest", json(), json{{"out", "x"}});
    const RunConfig b = make_config("pc-selftest", json(), json{{"out", "y"}});
    const RunConfig c = make_config("pc-selftest", json(), json{{"m", "0.25"}});
    CHECK(a.hash() == b.hash());
    CHECK(a.hash() != c.hash());
    CHECK(a.hash().size() == 16);
}

TEST_CASE("builtin potentials") {
    const Potential g = load_potential("gaussian(0.5,2)");
    CHECK(std::abs(g(0.0) - cplx(0.5)) < 1e-12);
    CHECK(std::abs(g(2.0) - cplx(0.5 * std::exp(-1.0))) < 1e-12);
    const Potential b = load_potential("box");
    CHECK(std::abs(b(0.0) - cplx(0.5)) < 1e-12);
    CHECK(std::abs(load_potential("sech(0.7)")(0.0) - cplx(0.7)) < 1e-12);
    CHECK_THROWS_AS(load_potential("gaussian(1,2,3)"), ConfigError);
    CHECK_THROWS_AS(load_potential("gaussian(1"), ConfigError);
}

TEST_CASE("potential CSV round trip is bit exact") {
    const Potential p = Potential::sampled(-6.0, 6.0, 601, [](double x) {
        return cplx(std::exp(-x * x) / 3.0, std::sin(x) * std::exp(-x * x) / 7.0);
    });
    const fs::path f = scratch("q0.csv");
    std::ofstream(f) << potential_csv(p, "# saved potential\n");
    const Potential back = load_potential(f.string());
    REQUIRE(back.size() == p.size());
    CHECK(back.x_min == p.x_min);
    CHECK(back.dx == p.dx);
    for (std::size_t k = 0; k < p.size(); ++k) CHECK(back.samples[k] == p.samples[k]);
}

TEST_CASE("potential CSV errors") {
    const fs::path f = scratch("bad.csv");
    std::ofstream(f) << "x,re_q,im_q\n0,0,0\n0.1,0,0\n0.3,0,0\n";
    CHECK_THROWS_AS(load_potential(f.string()), ConfigError);
    std::ofstream(f, std::ios::trunc) << "0,0\n0.1,0,0\n";
    CHECK_THROWS_AS(load_potential(f.string()), ConfigError);
    std::ofstream(f, std::ios::trunc) << "0,0,0\n";
    CHECK_THROWS_AS(load_potential(f.string()), ConfigError);
}

TEST_CASE("exit codes and no partial output") {
    const fs::path out = scratch("codes");
    CHECK(invoke({"pc-selftest", "--out", out.string()}) == 0);
    CHECK(fs::exists(out / "pc_selftest.csv"));

    const fs::path bad = scratch("bad_config");
    CHECK(invoke({"evolve", "--t", "3,2", "--out", bad.string()}) == 1);
    CHECK(!fs::exists(bad));
    CHECK(invoke({"evolve", "--no-such-flag"}) == 1);
    CHECK(invoke({}) == 1);

    const fs::path cfgfile = scratch("cfg.json");
    std::ofstream(cfgfile) << "{not json";
    CHECK(invoke({"pc-selftest", "--config", cfgfile.string()}) == 1);

    const fs::path fail = scratch("numerical");
    CHECK(invoke({"pc-selftest", "--selftest-tol", "1e-30", "--out", fail.string()}) == 2);
    CHECK((!fs::exists(fail) || fs::is_empty(fail)));
}

TEST_CASE("config file drives a run and flags override it") {
    const fs::path cfgfile = scratch("run.json");
    const fs::path out = scratch("from_file");
    std::ofstream(cfgfile) << json{{"m", 0.3}, {"radii", {1.0, 2.0}}, {"out", out.string()}}.dump();
    CHECK(invoke({"pc-selftest", "--config", cfgfile.string(), "--radii", "4"}) == 0);
    const std::string csv = slurp(out / "pc_selftest.csv");
    CHECK(csv.find(",4,0.29999999999999999,") != std::string::npos);
    CHECK(csv.find(",1,0.29999999999999999,") == std::string::npos);
}

TEST_CASE("runs are deterministic and carry metadata") {
    const RunConfig c = make_config("linear-demo", json(), json{{"t", "10,20"}, {"nx", "4"}});
    std::string s1, s2;
    const auto a = run(c, s1);
    const auto b = run(c, s2);
    REQUIRE(a.size() == 1);
    CHECK(a[0].content == b[0].content);
    CHECK(a[0].content.find("# config_hash " + c.hash()) != std::string::npos);
    CHECK(a[0].content.find("# command linear-demo") != std::string::npos);
    CHECK(a[0].content.find("timestamp") == std::string::npos);

    const RunConfig ts = make_config("linear-demo", json(), json{{"t", "10"}, {"nx", "1"}, {"timestamp", true}});
    std::string s3;
    CHECK(run(ts, s3)[0].content.find("# timestamp ") != std::string::npos);
}

TEST_CASE("scatter output reloads as scattering data") {
    const fs::path out = scratch("scatter");
    RunConfig c = make_config("scatter", json(),
                              json{{"q0", "gaussian(0.3,1)"}, {"nz", "129"}, {"window_points", "3"}, {"out", out.string()}});
    std::string summary;
    write_outputs(c, run(c, summary));
    const ScatteringData sd = ScatteringData::from_json(slurp(out / "scattering.json"));
    CHECK(sd.size() >= 129);
    const json phase = json::parse(slurp(out / "phase.json"));
    CHECK(phase["rows"].size() == 3);
    CHECK(phase["meta"]["config_hash"] == c.hash());

    // the saved data can stand in for q0
    const RunConfig c2 = make_config("asymptotic", json(),
                                     json{{"scattering", (out / "scattering.json").string()}, {"nx", "2"}, {"t", "30"}});
    std::string s2;
    const auto files = run(c2, s2);
    CHECK(files[0].content.find("x,t,re_q0,im_q0\n") != std::string::npos);
}

TEST_CASE("evolve flags wrap-around in the sidecar") {
    const RunConfig c = make_config("evolve", json(),
                                    json{{"q0", "gaussian(1,1)"}, {"n", "256"}, {"half_width", "16"},
                                         {"dt", "0.01"}, {"t", "0.5,20"}});
    std::string summary;
    const auto files = run(c, summary);
    REQUIRE(files.size() == 4);
    CHECK(json::parse(files[1].content)["wrapped"] == false);
    CHECK(json::parse(files[3].content)["wrapped"] == true);
    CHECK(summary.find("WRAPPED") != std::string::npos);

    const RunConfig d = make_config("compare", json(),
                                    json{{"q0", "gaussian(1,1)"}, {"n", "256"}, {"half_width", "16"}, {"dt", "0.01"},
                                         {"t", "20"}, {"window_points", "3"}});
    CHECK_THROWS_AS(run(d, summary), NumericalError);
}
