#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "llf/config.hpp"
#include "llf/errors.hpp"
#include "llf/geometry.hpp"

namespace fs = std::filesystem;
using namespace llf;

namespace {

int run_tool(const std::string& args) {
    std::string cmd = std::string(LLF_TOOL_PATH) + " " + args + " >/dev/null 2>&1";
    int rc = std::system(cmd.c_str());
    return WEXITSTATUS(rc);
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

fs::path fresh_dir(const std::string& name) {
    fs::path d = fs::temp_directory_path() / name;
    fs::remove_all(d);
    fs::create_directories(d);
    return d;
}

} // namespace

TEST_CASE("usage errors exit 2") {
    CHECK(run_tool("profile --bogus") == 2);
    CHECK(run_tool("not-a-subcommand") == 2);
    CHECK(run_tool("") == 2);
}

TEST_CASE("profile subcommand writes deterministic CSVs") {
    auto d1 = fresh_dir("llf_cli_prof1");
    auto d2 = fresh_dir("llf_cli_prof2");
    std::string args = "profile --b 0.2 --eta 0.01 --out ";
    CHECK(run_tool(args + d1.string()) == 0);
    CHECK(run_tool(args + d2.string()) == 0);
    CHECK(fs::exists(d1 / "profile_summary.csv"));
    CHECK(fs::exists(d1 / "profile_b0.2000.csv"));
    CHECK(slurp(d1 / "profile_summary.csv") == slurp(d2 / "profile_summary.csv"));
    CHECK(slurp(d1 / "profile_b0.2000.csv") == slurp(d2 / "profile_b0.2000.csv"));
    // LF endings only
    auto text = slurp(d1 / "profile_summary.csv");
    CHECK(text.find('\r') == std::string::npos);
}

TEST_CASE("spectral subcommand") {
    auto d = fresh_dir("llf_cli_spec");
    CHECK(run_tool("spectral --L 16 --N 1000 --out " + d.string()) == 0);
    CHECK(fs::exists(d / "coercivity.csv"));
}

TEST_CASE("config round trip is bit-identical and rejects unknown keys") {
    cfg::RunConfig c;
    c.lambda0 = 0.0375;
    c.metric_kind = "round-sphere";
    std::string s1 = cfg::serialize(c);
    cfg::RunConfig c2 = cfg::parse(s1);
    std::string s2 = cfg::serialize(c2);
    CHECK(s1 == s2);

    bool threw = false;
    try {
        cfg::parse("[grid]\nbogus_key = 1\n");
    } catch (const Error& e) {
        threw = e.kind() == "config-error";
    }
    CHECK(threw);
    threw = false;
    try {
        cfg::parse("[nope]\n");
    } catch (const Error& e) {
        threw = e.kind() == "config-error";
    }
    CHECK(threw);
}

TEST_CASE("binary snapshot round trip") {
    auto d = fresh_dir("llf_cli_snap");
    auto m = geom::make_metric(geom::MetricKind::RoundSphere);
    auto g = geom::make_grid(m, 0.4, 1.6, 64);
    auto u = geom::make_field(g, [](double r) {
        return geom::cplx(std::sin(r), std::cos(2 * r));
    });
    cfg::write_snapshot_bin((d / "snap.bin").string(), u);
    auto v = cfg::read_snapshot_bin((d / "snap.bin").string(), m);
    REQUIRE(v.grid.n == u.grid.n);
    for (std::size_t i = 0; i < u.grid.n; ++i) {
        CHECK(v.values[i] == u.values[i]);
        CHECK(v.grid.node(i) == doctest::Approx(u.grid.node(i)).epsilon(1e-14));
    }
}

TEST_CASE("simulate + check-init + fit pipeline") {
    auto d = fresh_dir("llf_cli_sim");
    cfg::RunConfig c;
    c.metric_kind = "s2-normalized";
    c.grid_n = 2600;
    c.lambda0 = 2e-2;
    c.b0 = 0.25;
    c.strict_loglog = false;
    c.eps0_kind = "none";
    c.record_every = 5;
    c.snapshot_every = 20;
    c.out_dir = (d / "out").string();
    std::ofstream(d / "run.cfg") << cfg::serialize(c);

    CHECK(run_tool("check-init --config " + (d / "run.cfg").string()) == 0);
    CHECK(fs::exists(d / "out" / "init_conditions.csv"));

    CHECK(run_tool("simulate --config " + (d / "run.cfg").string()) == 0);
    CHECK(fs::exists(d / "out" / "trajectory.csv"));
    CHECK(fs::exists(d / "out" / "laws.csv"));
    CHECK(fs::exists(d / "out" / "modulation.csv"));
    CHECK(fs::exists(d / "out" / "concentration.csv"));
    CHECK(fs::exists(d / "out" / "snapshot_000000.csv"));
    // nothing written outside the configured output directory
    CHECK(!fs::exists(d / "trajectory.csv"));

    CHECK(run_tool("fit --trajectory " + (d / "out" / "trajectory.csv").string() +
                   " --out " + (d / "fit").string() + " --delta 0.254") == 0);
    CHECK(fs::exists(d / "fit" / "fit.csv"));
    CHECK(fs::exists(d / "fit" / "laws.csv"));

    // determinism of the full simulate pipeline
    auto d2 = fresh_dir("llf_cli_sim2");
    cfg::RunConfig c2 = c;
    c2.out_dir = (d2 / "out").string();
    std::ofstream(d2 / "run.cfg") << cfg::serialize(c2);
    CHECK(run_tool("simulate --config " + (d2 / "run.cfg").string()) == 0);
    CHECK(slurp(d / "out" / "trajectory.csv") == slurp(d2 / "out" / "trajectory.csv"));
    CHECK(slurp(d / "out" / "laws.csv") == slurp(d2 / "out" / "laws.csv"));

    // config errors exit 2
    std::ofstream(d / "bad.cfg") << "[grid]\nwhat = 1\n";
    CHECK(run_tool("simulate --config " + (d / "bad.cfg").string()) == 2);
    CHECK(run_tool("simulate --config " + (d / "missing.cfg").string()) == 2);
}

TEST_CASE("metric table config") {
    auto d = fresh_dir("llf_cli_metric");
    std::ofstream t(d / "metric.csv");
    t.precision(17);
    t << "r,h,h_prime\n";
    int n = 2048;
    for (int i = 0; i <= n; ++i) {
        double r = M_PI * i / n;
        t << r << "," << std::sin(r) << "," << std::cos(r) << "\n";
    }
    t.close();
    cfg::RunConfig c;
    c.metric_kind = "table";
    c.metric_table = (d / "metric.csv").string();
    auto m = cfg::metric_from(c);
    CHECK(m.h(1.0) == doctest::Approx(std::sin(1.0)).epsilon(1e-8));
    CHECK(m.compact());
}
