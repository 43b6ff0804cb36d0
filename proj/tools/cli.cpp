#include "cli.hpp"

#include <cstdlib>
#include <filesystem>
#include <functional>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>

#include <CLI11.hpp>

#include "chainlab/adversarial.hpp"
#include "chainlab/bessel.hpp"
#include "chainlab/bounds.hpp"
#include "chainlab/errors.hpp"
#include "chainlab/finite_chain.hpp"
#include "chainlab/gaussian.hpp"
#include "chainlab/propagator.hpp"
#include "chainlab/stochastic.hpp"
#include "chainlab/suite.hpp"
#include "chainlab/table.hpp"

namespace chainlab::cli {

namespace {

using nlohmann::json;
namespace fs = std::filesystem;

// Collects emitted files; names are recorded relative to the output
// directory so reports do not depend on where they were written.
class Artifacts {
public:
    explicit Artifacts(std::optional<fs::path> dir) : dir_(std::move(dir)) {}

    void emit(ExperimentReport& report, const std::string& name, const std::string& content) {
        if (!dir_) return;
        table::write_atomic(*dir_ / name, content);
        report.artifact_paths.push_back(name);
    }
    void emit(ExperimentReport& report, const std::string& name, const table::CsvTable& t) {
        emit(report, name, t.to_string());
    }
    void emit_window(ExperimentReport& report, const std::string& stem, const LatticeWindow& w) {
        emit(report, stem + ".json", table::window_to_json(w).dump(2) + "\n");
        emit(report, stem + ".csv", table::window_to_csv(w));
    }
    const std::optional<fs::path>& dir() const { return dir_; }

private:
    std::optional<fs::path> dir_;
};

struct Context {
    json cfg;
    Artifacts artifacts;
    ExperimentReport report;
    std::string plain;  // text for --format plain
};

double num(const json& cfg, const char* key) { return cfg.at(key).get<double>(); }
std::int64_t integer(const json& cfg, const char* key) { return cfg.at(key).get<std::int64_t>(); }
std::string str(const json& cfg, const char* key) { return cfg.at(key).get<std::string>(); }
std::vector<double> numbers(const json& cfg, const char* key) {
    return cfg.at(key).get<std::vector<double>>();
}

std::optional<IndexRange> window_option(const json& cfg, const char* key) {
    const auto v = cfg.at(key).get<std::vector<std::int64_t>>();
    if (v.empty()) return std::nullopt;
    if (v.size() != 2 || v[0] > v[1]) throw DomainError(std::string(key) + " must be [lo, hi] with lo <= hi");
    return IndexRange{v[0], v[1]};
}

LatticeWindow input_window(const json& cfg, const char* key) {
    const auto path = str(cfg, key);
    if (path.empty()) throw DomainError(std::string(key) + " is required");
    if (path == "delta") return LatticeWindow::delta(0);
    return table::load_window(path);
}

// Maximal runs of consecutive integers.
json index_ranges(const std::vector<std::int64_t>& sorted) {
    json out = json::array();
    for (std::size_t i = 0; i < sorted.size();) {
        std::size_t j = i;
        while (j + 1 < sorted.size() && sorted[j + 1] == sorted[j] + 1) ++j;
        out.push_back({sorted[i], sorted[j]});
        i = j + 1;
    }
    return out;
}

json plan_json(const adversarial::AdversarialPlan& p) {
    return {{"T", p.target_T},
            {"omega1", p.omega1},
            {"t", p.t},
            {"a", p.a},
            {"b", p.b},
            {"sign", p.sign},
            {"k_lo", p.k_lo},
            {"k_hi", p.k_hi},
            {"support_size", p.support.size()},
            {"support_ranges", index_ranges(p.support)},
            {"main_term", p.main_term},
            {"predicted_lower", p.predicted_lower},
            {"phase_eps", p.phase_eps}};
}

void run_bessel(Context& c) {
    const auto n = integer(c.cfg, "n");
    const double t = num(c.cfg, "t");
    const auto panels = integer(c.cfg, "panels");
    if (n < -100000000 || n > 100000000) throw DomainError("n is out of range");
    const double value = bessel::bessel_j(static_cast<int>(n), t);
    c.report.metrics["value"] = value;
    if (std::abs(n) <= 500 && std::abs(t) <= 1e4) {
        const double oracle = panels > 0 ? bessel::bessel_j_oracle(static_cast<int>(n), t, static_cast<int>(panels))
                                         : bessel::bessel_j_oracle(static_cast<int>(n), t);
        c.report.metrics["oracle"] = oracle;
        c.report.check_le("abs_diff_vs_oracle", std::abs(value - oracle), 1e-11);
    }
    c.plain = table::format_double(value) + "\n";
}

void run_propagate(Context& c) {
    const auto q0 = input_window(c.cfg, "input");
    const double omega1 = num(c.cfg, "omega1");
    const double t = num(c.cfg, "t");
    const double eps = num(c.cfg, "eps");
    const auto out = window_option(c.cfg, "out_window");
    LatticeWindow q;
    if (str(c.cfg, "p_input").empty()) {
        q = propagator::evolve(q0, omega1, t, eps, out);
    } else {
        q = propagator::evolve(q0, input_window(c.cfg, "p_input"), omega1, t, eps, out);
    }
    c.report.metrics["half_width"] = static_cast<double>(propagator::light_cone_window(omega1, t, eps));
    c.report.metrics["q_inf_norm"] = q.inf_norm();
    c.report.metrics["q0_l2_norm"] = q0.l2_norm();
    if (q0.fill() == Fill::zero && str(c.cfg, "p_input").empty()) {
        c.report.check_le("sup_q_le_l2_plus_eps", q.inf_norm(), q0.l2_norm() + eps);
    }
    c.artifacts.emit_window(c.report, "q_t", q);
    c.plain = table::window_to_csv(q);
}

void run_oracle(Context& c) {
    const auto q0 = input_window(c.cfg, "input");
    const double omega1 = num(c.cfg, "omega1");
    const double t_end = num(c.cfg, "t_end");
    double dt = num(c.cfg, "dt");
    if (dt == 0.0) dt = 1e-3 / omega1;
    const auto size = integer(c.cfg, "size");
    if (size < 3) throw DomainError("size must be >= 3");
    const auto bname = str(c.cfg, "boundary");
    finite::Boundary boundary;
    if (bname == "fixed_zero") {
        boundary = finite::Boundary::fixed_zero;
    } else if (bname == "periodic") {
        boundary = finite::Boundary::periodic;
    } else {
        throw DomainError("boundary must be 'fixed_zero' or 'periodic'");
    }
    const auto chain = finite::embed(q0, LatticeWindow::zeros(q0.range()), static_cast<std::size_t>(size),
                                     omega1, boundary);
    const auto res = finite::integrate(chain, dt, t_end);
    const IndexRange range = window_option(c.cfg, "out_window").value_or(q0.range());
    const auto q = finite::extract(res.chain, range);

    c.report.metrics["steps"] = static_cast<double>(res.steps);
    c.report.metrics["dt"] = dt;
    c.report.metrics["energy_initial"] = res.energy_initial;
    c.report.metrics["energy_final"] = res.energy_final;
    c.report.metrics["max_relative_energy_deviation"] = res.max_relative_energy_deviation;
    if (c.cfg.at("compare").get<bool>()) {
        const auto exact = propagator::evolve(q0, omega1, t_end, propagator::kDefaultEps, range);
        double worst = 0.0;
        for (std::int64_t n = range.lo; n <= range.hi; ++n) worst = std::max(worst, std::abs(exact[n] - q[n]));
        c.report.metrics["max_abs_diff_vs_propagator"] = worst;
        c.report.check_le("verlet_vs_propagator", worst, num(c.cfg, "tolerance"));
    }
    c.artifacts.emit_window(c.report, "q_verlet", q);
    c.plain = table::window_to_csv(q);
}

void run_bounds(Context& c) {
    const double omega1 = num(c.cfg, "omega1");
    bounds::UpperBoundOptions opts;
    const auto sampler = str(c.cfg, "sampler");
    if (sampler == "rademacher") {
        opts.sampler = bounds::UnitSampler::rademacher;
    } else if (sampler == "uniform_pm1") {
        opts.sampler = bounds::UnitSampler::uniform_pm1;
    } else if (sampler == "zero") {
        opts.sampler = bounds::UnitSampler::zero;
    } else {
        throw DomainError("sampler must be rademacher, uniform_pm1 or zero");
    }
    opts.eps = num(c.cfg, "eps");
    opts.eval_half_width = integer(c.cfg, "eval_half_width");
    const auto grid = numbers(c.cfg, "t_grid");
    const auto rep = bounds::verify_upper_bound(static_cast<int>(integer(c.cfg, "n_samples")), omega1, grid,
                                                static_cast<std::uint64_t>(integer(c.cfg, "seed")), opts);
    c.report.absorb(rep, "upper_envelope");
    const auto scan_grid = numbers(c.cfg, "scan_grid");
    if (!scan_grid.empty()) {
        auto scan = bounds::cos_norm_scan(omega1, scan_grid, opts.eps);
        const auto range = numbers(c.cfg, "slope_range");
        if (range.size() != 2) throw DomainError("slope_range must be [lo, hi]");
        scan.report.check_in("slope", scan.report.metrics.at("slope"), range[0], range[1]);
        c.report.absorb(scan.report, "cos_norm_scan");
        table::CsvTable tab{{"t", "cos_norm"}, {}};
        for (const auto& [t, n] : scan.table) tab.add({t, n});
        c.artifacts.emit(c.report, "cos_norm_scan.csv", tab);
    }
}

void run_adversarial(Context& c) {
    adversarial::PlanOptions po;
    po.a = num(c.cfg, "a");
    po.b = num(c.cfg, "b");
    po.t_min_scaled = num(c.cfg, "t_min_scaled");
    po.sign = static_cast<int>(integer(c.cfg, "sign"));
    const double omega1 = num(c.cfg, "omega1");
    const double T = num(c.cfg, "T");
    const auto plan = adversarial::build_support_set(T, omega1, po);
    const auto rep = adversarial::measure_growth(plan, num(c.cfg, "eps"));
    c.report.absorb(rep, "growth");
    const double c_floor = num(c.cfg, "c_floor");
    c.report.check_ge("signed_ratio_sqrt_T_ge_floor", plan.sign * rep.metrics.at("ratio_sqrt_T"), c_floor);

    json doc = {{"report_version", kReportVersion}, {"plan", plan_json(plan)},
                {"measured", {{"q0_T", rep.metrics.at("q0_T")},
                              {"ratio_sqrt_T", rep.metrics.at("ratio_sqrt_T")},
                              {"ratio_main_term", rep.metrics.at("ratio_main_term")},
                              {"ratio_predicted_lower", rep.metrics.at("ratio_predicted_lower")}}}};
    table::CsvTable growth{{"T", "q0", "ratio_sqrt_T"}, {}};
    growth.add({T, rep.metrics.at("q0_T"), rep.metrics.at("ratio_sqrt_T")});

    const auto count = integer(c.cfg, "multiscale_count");
    if (count > 0) {
        adversarial::MultiscaleOptions mo;
        mo.safety = num(c.cfg, "safety");
        mo.grid_factor = num(c.cfg, "grid_factor");
        mo.a = po.a;
        mo.b = po.b;
        mo.t_min_scaled = po.t_min_scaled;
        mo.T_max = num(c.cfg, "T_max");
        const auto ms = adversarial::build_multiscale(num(c.cfg, "T1"), static_cast<int>(count), omega1, mo);
        c.report.absorb(ms.report, "multiscale");
        json scales = json::array();
        table::CsvTable mtab{{"T", "q0", "ratio_sqrt_T"}, {}};
        for (std::size_t j = 0; j < ms.times.size(); ++j) {
            json s = plan_json(ms.bumps[j]);
            s["q0_full_data"] = ms.central_values[j];
            scales.push_back(std::move(s));
            mtab.add({ms.times[j], ms.central_values[j], ms.central_values[j] / std::sqrt(ms.times[j])});
        }
        doc["multiscale"] = {{"c", ms.c}, {"scales", std::move(scales)}};
        c.artifacts.emit(c.report, "multiscale.csv", mtab);
    }
    c.artifacts.emit(c.report, "plan.json", doc.dump(2) + "\n");
    c.artifacts.emit(c.report, "growth.csv", growth);
}

void run_ensemble(Context& c) {
    stochastic::EnsembleSpec spec;
    spec.distribution = stochastic::parse_distribution(str(c.cfg, "distribution"));
    spec.sigma2 = num(c.cfg, "sigma2");
    spec.n_samples = integer(c.cfg, "n_samples");
    spec.seed = static_cast<std::uint64_t>(integer(c.cfg, "seed"));
    spec.window_half_width = integer(c.cfg, "window_half_width");
    const double omega1 = num(c.cfg, "omega1");
    const auto runs = c.cfg.at("run").get<std::vector<std::string>>();
    auto wants = [&](const std::string& what) {
        return std::find(runs.begin(), runs.end(), what) != runs.end();
    };
    for (const auto& r : runs) {
        if (r != "covariance" && r != "normality" && r != "sup_growth") {
            throw DomainError("run entries must be covariance, normality or sup_growth");
        }
    }
    if (wants("covariance")) {
        table::CsvTable tab{{"t", "s", "empirical", "se", "exact", "limit"}, {}};
        const auto s_grid = numbers(c.cfg, "s_grid");
        for (double t : numbers(c.cfg, "t_grid")) {
            const auto cov = stochastic::empirical_covariance(spec, omega1, t, s_grid);
            for (const auto& p : cov.pairs) tab.add({p.t, p.s, p.empirical, p.standard_error, p.exact, p.limit});
            std::ostringstream key;
            key << "covariance.t=" << t;
            c.report.absorb(cov.report, key.str());
        }
        c.artifacts.emit(c.report, "covariance.csv", tab);
    }
    if (wants("normality")) {
        c.report.absorb(stochastic::normality_check(spec, omega1, num(c.cfg, "normality_t")), "normality");
    }
    if (wants("sup_growth")) {
        auto sup_spec = spec;
        sup_spec.n_samples = integer(c.cfg, "sup_samples");
        const auto res = stochastic::sup_growth_mc(sup_spec, omega1, numbers(c.cfg, "thresholds"),
                                                   numbers(c.cfg, "horizons"), num(c.cfg, "dt"));
        c.report.absorb(res.report, "sup_growth");
        table::CsvTable tab{{"threshold", "horizon", "fraction", "se"}, {}};
        for (const auto& row : res.rows) tab.add({row.threshold, row.horizon, row.fraction, row.se});
        c.artifacts.emit(c.report, "sup_growth.csv", tab);
    }
}

void run_gaussian(Context& c) {
    const auto seed = static_cast<std::uint64_t>(integer(c.cfg, "seed"));
    const auto lags = numbers(c.cfg, "lags");
    if (!lags.empty()) {
        const auto study = gaussian::covariance_study(lags, num(c.cfg, "base"),
                                                      static_cast<int>(integer(c.cfg, "n_trunc")),
                                                      integer(c.cfg, "cov_samples"), seed);
        c.report.absorb(study.report, "covariance");
        table::CsvTable tab{{"s", "empirical_cov", "J0"}, {}};
        for (const auto& r : study.rows) tab.add({r.lag, r.empirical, r.j0});
        c.artifacts.emit(c.report, "gaussian_covariance.csv", tab);
    }
    const auto spec = gaussian::make_grid_spec(num(c.cfg, "a"), num(c.cfg, "delta"),
                                               static_cast<int>(integer(c.cfg, "N")));
    const auto rep = gaussian::sup_probability_mc(spec, integer(c.cfg, "n_samples"), seed);
    c.report.absorb(rep, "sup_probability");
    table::CsvTable tab{{"a", "delta", "N", "empirical_p", "bound"}, {}};
    tab.add({spec.a, spec.delta, static_cast<double>(spec.n), rep.metrics.at("empirical_p"),
             rep.metrics.at("bound")});
    c.artifacts.emit(c.report, "gaussian_sup.csv", tab);
}

void run_suite(Context& c) {
    suite::SuiteConfig sc;
    sc.seed = static_cast<std::uint64_t>(integer(c.cfg, "seed"));
    sc.verlet_dt = num(c.cfg, "verlet_dt");
    sc.only = c.cfg.at("only").get<std::vector<std::string>>();
    auto out = suite::run_suite(sc);
    c.report.absorb(out.report, "suite");
    for (const auto& [stem, tab] : out.tables) c.artifacts.emit(c.report, stem + ".csv", tab);
}

const std::map<std::string, std::function<void(Context&)>>& runners() {
    static const std::map<std::string, std::function<void(Context&)>> m{
        {"bessel", run_bessel},     {"propagate", run_propagate}, {"oracle", run_oracle},
        {"bounds", run_bounds},     {"adversarial", run_adversarial}, {"ensemble", run_ensemble},
        {"gaussian", run_gaussian}, {"suite", run_suite}};
    return m;
}

// Array keys holding names rather than numbers.
bool string_array_key(const std::string& key) { return key == "only" || key == "run"; }

std::string kind(const json& v) {
    if (v.is_boolean()) return "boolean";
    if (v.is_number_integer()) return "integer";
    if (v.is_number()) return "number";
    if (v.is_string()) return "string";
    if (v.is_array()) return "array";
    if (v.is_object()) return "object";
    return "null";
}

bool same_kind(const std::string& key, const json& want, const json& got) {
    if (want.is_number_integer()) {
        if (got.is_number_integer()) return true;
        return got.is_number_float() && std::isfinite(got.get<double>()) &&
               got.get<double>() == std::floor(got.get<double>());
    }
    if (want.is_number()) return got.is_number();
    if (want.is_array()) {
        if (!got.is_array()) return false;
        const bool strings = string_array_key(key);
        for (const auto& e : got) {
            if (strings ? !e.is_string() : !e.is_number()) return false;
        }
        return true;
    }
    return kind(want) == kind(got);
}

// Integral floats become integers so the echoed config has one spelling.
json normalize(const json& want, const json& got) {
    if (want.is_number_integer() && got.is_number_float()) {
        return static_cast<std::int64_t>(got.get<double>());
    }
    if (want.is_number_float() && got.is_number_integer()) return got.get<double>();
    if (want.is_array() && !want.empty() && want.front().is_number_float()) {
        json out = json::array();
        for (const auto& e : got) out.push_back(e.is_number() ? json(e.get<double>()) : e);
        return out;
    }
    return got;
}

// Flag text -> JSON value of the key's kind.
json parse_flag(const std::string& key, const json& want, const std::string& text) {
    if (want.is_string()) return text;
    if (want.is_array()) {
        const bool strings = string_array_key(key);
        if (!text.empty() && text.front() == '[') return json::parse(text, nullptr, false);
        json out = json::array();
        std::istringstream in(text);
        std::string cell;
        while (std::getline(in, cell, ',')) {
            if (cell.empty()) continue;
            if (strings) {
                out.push_back(cell);
            } else {
                const json v = json::parse(cell, nullptr, false);
                out.push_back(v.is_discarded() ? json(cell) : v);
            }
        }
        return out;
    }
    if (want.is_boolean()) {
        if (text == "true" || text == "1") return true;
        if (text == "false" || text == "0") return false;
        return text;
    }
    const json v = json::parse(text, nullptr, false);
    return v.is_discarded() ? json(text) : v;
}

}  // namespace

const std::vector<std::string>& subcommands() {
    static const std::vector<std::string> names{"bessel",      "propagate", "oracle",   "bounds",
                                                "adversarial", "ensemble",  "gaussian", "suite"};
    return names;
}

json defaults(const std::string& sub) {
    if (sub == "bessel") return {{"n", 0}, {"t", 0.0}, {"panels", 0}};
    if (sub == "propagate") {
        return {{"input", ""}, {"p_input", ""}, {"omega1", 1.0}, {"t", 1.0}, {"eps", 1e-8},
                {"out_window", json::array()}};
    }
    if (sub == "oracle") {
        return {{"input", ""},        {"omega1", 1.0},        {"t_end", 20.0},  {"dt", 0.0},
                {"size", 4096},       {"boundary", "fixed_zero"}, {"compare", true},
                {"tolerance", 1e-6},  {"out_window", json::array()}};
    }
    if (sub == "bounds") {
        return {{"omega1", 0.5},     {"t_grid", {1.0, 10.0, 100.0}}, {"n_samples", 100},
                {"seed", 1},         {"sampler", "rademacher"},      {"eps", 1e-8},
                {"eval_half_width", 8}, {"scan_grid", {100.0, 1000.0, 10000.0}},
                {"slope_range", {0.47, 0.53}}};
    }
    if (sub == "adversarial") {
        return {{"T", 10000.0},  {"omega1", 0.5},       {"a", adversarial::kDefaultA},
                {"b", adversarial::kDefaultB}, {"sign", 1}, {"eps", 1e-8},
                {"t_min_scaled", 50.0}, {"c_floor", 0.0}, {"multiscale_count", 0},
                {"T1", 100.0},   {"safety", 1.2},       {"grid_factor", 1.1},
                {"T_max", 1e9}};
    }
    if (sub == "ensemble") {
        return {{"distribution", "rademacher"}, {"sigma2", 1.0}, {"n_samples", 10000},
                {"seed", 1}, {"window_half_width", 0}, {"omega1", 0.5},
                {"t_grid", {10.0, 200.0}}, {"s_grid", {0.0, 1.0, 2.0, 5.0}},
                {"normality_t", 500.0}, {"thresholds", {2.0}},
                {"horizons", {10.0, 100.0, 1000.0}}, {"dt", 0.5}, {"sup_samples", 2000},
                {"run", {"covariance", "normality", "sup_growth"}}};
    }
    if (sub == "gaussian") {
        return {{"a", 1.0},       {"delta", 0.1},  {"N", 20},        {"n_samples", 5000},
                {"seed", 1},      {"lags", {0.0, 0.5, 1.0, 2.0, 5.0, 10.0}},
                {"base", 0.0},    {"n_trunc", 60}, {"cov_samples", 10000}};
    }
    if (sub == "suite") {
        const suite::SuiteConfig sc;
        return {{"seed", sc.seed}, {"verlet_dt", sc.verlet_dt}, {"only", json::array()}};
    }
    throw DomainError("unknown subcommand '" + sub + "'");
}

json resolve_config(const std::string& sub, const json& file, const json& flags) {
    json cfg = defaults(sub);
    for (const json* layer : {&file, &flags}) {
        if (layer->is_null()) continue;
        if (!layer->is_object()) throw DomainError("config must be a JSON object");
        for (const auto& [key, value] : layer->items()) {
            if (!cfg.contains(key)) throw DomainError("unknown config key '" + key + "' for " + sub);
            if (!same_kind(key, cfg[key], value)) {
                throw DomainError("config key '" + key + "' expects " + kind(cfg[key]) + ", got " +
                                  kind(value));
            }
            cfg[key] = normalize(cfg[key], value);
        }
    }
    return cfg;
}

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"chainlab: harmonic chain numerical laboratory"};
    app.require_subcommand(1, 1);
    std::string format = "json";
    std::string config_path;
    std::string out_dir;
    int threads = 0;

    std::map<std::string, std::map<std::string, std::string>> flag_text;
    for (const auto& name : subcommands()) {
        auto* sub = app.add_subcommand(name, "run the " + name + " experiment");
        sub->add_option("--config", config_path, "JSON config file");
        sub->add_option("--out", out_dir, "directory for CSV/JSON artifacts");
        sub->add_option("--format", format, "stdout format")->check(CLI::IsMember({"json", "plain"}));
        sub->add_option("--threads", threads, "worker threads (sets CHAINLAB_THREADS)");
        const json d = defaults(name);
        for (const auto& [key, value] : d.items()) {
            sub->add_option("--" + key, flag_text[name][key], "default " + value.dump());
        }
    }

    std::vector<std::string> argv(args.rbegin(), args.rend());
    try {
        app.parse(argv);
    } catch (const CLI::CallForHelp& e) {
        out << app.help();
        return kPass;
    } catch (const CLI::CallForAllHelp& e) {
        out << app.help("", CLI::AppFormatMode::All);
        return kPass;
    } catch (const CLI::ParseError& e) {
        err << "usage error: " << e.what() << "\n";
        return kUsage;
    }

    const std::string name = app.get_subcommands().front()->get_name();
    if (threads > 0) setenv("CHAINLAB_THREADS", std::to_string(threads).c_str(), 1);

    json cfg;
    try {
        json file;
        if (!config_path.empty()) {
            file = json::parse(table::read_file(config_path), nullptr, false);
            if (file.is_discarded()) throw DomainError(config_path + ": not valid JSON");
        }
        const json want = defaults(name);
        json flags = json::object();
        auto* sub = app.get_subcommand(name);
        for (const auto& [key, text] : flag_text[name]) {
            if (sub->count("--" + key) == 0) continue;
            const json v = parse_flag(key, want.at(key), text);
            if (v.is_discarded()) throw DomainError("--" + key + ": cannot parse '" + text + "'");
            flags[key] = v;
        }
        cfg = resolve_config(name, file, flags);
    } catch (const std::exception& e) {
        err << "usage error: " << e.what() << "\n";
        return kUsage;
    }

    std::optional<fs::path> dir;
    if (!out_dir.empty()) dir = fs::path(out_dir);
    Context ctx{cfg, Artifacts(dir), {}, {}};
    ctx.report.experiment = name;
    ctx.report.config = cfg;
    try {
        runners().at(name)(ctx);
    } catch (const DomainError& e) {
        err << "usage error: " << e.what() << "\n";
        return kUsage;
    } catch (const PreconditionError& e) {
        err << "usage error: " << e.what() << "\n";
        return kUsage;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return kInternal;
    }

    const json report = ctx.report.to_json();
    if (dir) table::write_atomic(*dir / "report.json", report.dump(2) + "\n");
    if (format == "plain") {
        if (!ctx.plain.empty()) {
            out << ctx.plain;
        } else {
            for (const auto& [k, v] : ctx.report.metrics) out << k << "=" << table::format_double(v) << "\n";
            out << (ctx.report.passed() ? "PASS" : "FAIL") << "\n";
        }
    } else {
        out << report.dump(2) << "\n";
    }
    if (!ctx.report.passed()) {
        for (const auto& a : ctx.report.assertions) {
            if (!a.passed) err << "assertion failed: " << a.name << " (observed " << a.observed << ")\n";
        }
        return kAssertionFailed;
    }
    return kPass;
}

}  // namespace chainlab::cli
