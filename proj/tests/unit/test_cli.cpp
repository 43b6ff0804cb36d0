#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <sstream>

#include "chainlab/table.hpp"
#include "cli.hpp"

using namespace chainlab;
namespace fs = std::filesystem;
using nlohmann::json;

namespace {

struct Run {
    int code;
    std::string out;
    std::string err;
};

Run run(std::vector<std::string> args) {
    std::ostringstream out, err;
    const int code = cli::run(args, out, err);
    return {code, out.str(), err.str()};
}

fs::path scratch(const std::string& name) {
    const auto p = fs::temp_directory_path() / ("chainlab_cli_" + name);
    fs::remove_all(p);
    return p;
}

}  // namespace

TEST_SUITE("cli") {

TEST_CASE("bessel spot values") {
    auto r = run({"bessel", "--n", "0", "--t", "0", "--format", "plain"});
    CHECK(r.code == cli::kPass);
    CHECK(r.out == "1\n");
    r = run({"bessel", "--n", "5", "--t", "12.3"});
    CHECK(r.code == cli::kPass);
    const auto j = json::parse(r.out);
    CHECK(j.at("report_version") == 1);
    CHECK(j.at("experiment") == "bessel");
    CHECK(j.at("config").at("n") == 5);
    CHECK(std::abs(j.at("metrics").at("value").get<double>() + 0.008405035965524805) < 1e-14);
}

TEST_CASE("every subcommand has documented defaults") {
    for (const auto& name : cli::subcommands()) {
        CHECK(cli::defaults(name).is_object());
        CHECK(!cli::defaults(name).empty());
    }
}

TEST_CASE("schema violations are usage errors") {
    CHECK(run({}).code == cli::kUsage);
    CHECK(run({"frobnicate"}).code == cli::kUsage);
    CHECK(run({"bessel", "--bogus", "1"}).code == cli::kUsage);
    CHECK(run({"bessel", "--t", "abc"}).code == cli::kUsage);
    CHECK(run({"bessel", "--n", "1.5"}).code == cli::kUsage);
    CHECK(run({"bessel", "--t", "nan"}).code == cli::kUsage);
    CHECK(run({"propagate"}).code == cli::kUsage);
    CHECK(run({"suite", "--only", "c99"}).code == cli::kUsage);
    CHECK_THROWS(cli::resolve_config("bessel", json{{"extra", 1}}, json::object()));
    CHECK_THROWS(cli::resolve_config("ensemble", json{{"t_grid", "10"}}, json::object()));
}

TEST_CASE("precedence: flags over file over defaults") {
    const auto cfg = cli::resolve_config("bessel", json{{"n", 3}, {"t", 2.0}}, json{{"t", 4.0}});
    CHECK(cfg.at("n") == 3);
    CHECK(cfg.at("t") == 4.0);
    CHECK(cfg.at("panels") == 0);

    const auto dir = scratch("precedence");
    fs::create_directories(dir);
    table::write_atomic(dir / "cfg.json", R"({"n": 2, "t": 1.0})");
    const auto r = run({"bessel", "--config", (dir / "cfg.json").string(), "--t", "0", "--format", "plain"});
    CHECK(r.code == cli::kPass);
    CHECK(r.out == "0\n");
    table::write_atomic(dir / "broken.json", "{not json");
    CHECK(run({"bessel", "--config", (dir / "broken.json").string()}).code == cli::kUsage);
    fs::remove_all(dir);
}

TEST_CASE("propagate reads and writes windows") {
    const auto dir = scratch("propagate");
    fs::create_directories(dir);
    table::save_window(dir / "in.csv", LatticeWindow::delta(0));
    const auto r = run({"propagate", "--input", (dir / "in.csv").string(), "--t", "1", "--out_window", "-2,2",
                        "--out", (dir / "out").string()});
    CHECK(r.code == cli::kPass);
    const auto q = table::load_window(dir / "out" / "q_t.json");
    CHECK(q.offset() == -2);
    CHECK(std::abs(q[0] - 0.22389077914123567) < 1e-15);
    const auto rep = json::parse(table::read_file(dir / "out" / "report.json"));
    CHECK(rep.at("artifact_paths") == json{"q_t.json", "q_t.csv"});
    fs::remove_all(dir);
}

TEST_CASE("adversarial end to end") {
    const auto dir = scratch("adversarial");
    const auto r = run({"adversarial", "--T", "10000", "--omega1", "0.5", "--out", dir.string()});
    CHECK(r.code == cli::kPass);
    CHECK(fs::exists(dir / "plan.json"));
    CHECK(fs::exists(dir / "growth.csv"));
    const auto plan = json::parse(table::read_file(dir / "plan.json"));
    CHECK(plan.at("plan").at("support_ranges").is_array());
    CHECK(plan.at("plan").at("support_size").get<int>() > 0);
    fs::remove_all(dir);
}

TEST_CASE("exit codes for failures") {
    // an impossible tolerance is an assertion failure
    auto r = run({"oracle", "--input", "delta", "--t_end", "1", "--size", "256", "--tolerance", "1e-30"});
    CHECK(r.code == cli::kAssertionFailed);
    CHECK(r.err.find("verlet_vs_propagator") != std::string::npos);
    // a construction that cannot finish is reported as an internal error
    r = run({"adversarial", "--T", "1000", "--multiscale_count", "3", "--T_max", "1000"});
    CHECK(r.code == cli::kInternal);
    CHECK(!r.err.empty());
}

TEST_CASE("artifacts are byte-identical across runs") {
    const auto a = scratch("det_a"), b = scratch("det_b");
    const std::vector<std::string> base{"ensemble", "--n_samples", "300", "--sup_samples", "100",
                                        "--horizons", "10,20", "--t_grid", "10", "--normality_t", "50"};
    auto args_a = base, args_b = base;
    args_a.insert(args_a.end(), {"--out", a.string()});
    args_b.insert(args_b.end(), {"--out", b.string()});
    const auto ra = run(args_a), rb = run(args_b);
    CHECK(ra.out == rb.out);
    for (const auto& entry : fs::directory_iterator(a)) {
        const auto name = entry.path().filename();
        CHECK(table::read_file(a / name) == table::read_file(b / name));
    }
    fs::remove_all(a);
    fs::remove_all(b);
}

TEST_CASE("output does not depend on the thread count") {
    const std::vector<std::string> base{"ensemble", "--n_samples", "300", "--run", "covariance,normality",
                                        "--t_grid", "10", "--normality_t", "50"};
    auto one = base, four = base;
    one.insert(one.end(), {"--threads", "1"});
    four.insert(four.end(), {"--threads", "4"});
    const auto a = run(one), b = run(four);
    CHECK(a.code == cli::kPass);
    CHECK(a.out == b.out);
    unsetenv("CHAINLAB_THREADS");
}

}
