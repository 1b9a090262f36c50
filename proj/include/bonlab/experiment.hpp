#pragma once

#include <atomic>
#include <cstdint>
#include <filesystem>
#include <string>
#include <thread>
#include <vector>

#include "bonlab/analysis.hpp"
#include "bonlab/io.hpp"
#include "bonlab/svg.hpp"
#include "bonlab/version.hpp"

namespace bonlab {

// A batch experiment: one instance, a list of jobs, a seed. Serializes
// losslessly; identical (config, seed) produce byte-identical outputs.
struct ExperimentConfig {
    json instance_spec;
    std::vector<json> jobs;
    std::uint64_t seed = 1;
    std::uint64_t trials = 100000;
    double confidence = 0.99;
    std::string output_dir;
    bool plots = false;

    json to_json() const {
        json j;
        j["instance"] = instance_spec;
        j["jobs"] = jobs;
        j["seed"] = seed;
        j["trials"] = trials;
        j["confidence"] = confidence;
        j["output_dir"] = output_dir;
        j["plots"] = plots;
        return j;
    }

    static ExperimentConfig from_json(const json& j) {
        ExperimentConfig c;
        if (!j.is_object()) throw configuration_error("config: root must be an object");
        if (!j.contains("instance")) throw configuration_error("config: missing field 'instance'");
        if (!j.contains("jobs") || !j.at("jobs").is_array()) {
            throw configuration_error("config: missing or non-array field 'jobs'");
        }
        c.instance_spec = j.at("instance");
        for (const auto& job : j.at("jobs")) {
            if (!job.is_object() || !job.contains("type")) {
                throw configuration_error("config: each job needs a 'type' field");
            }
            c.jobs.push_back(job);
        }
        c.seed = j.value("seed", std::uint64_t{1});
        c.trials = j.value("trials", std::uint64_t{100000});
        c.confidence = j.value("confidence", 0.99);
        if (!(c.confidence > 0.0 && c.confidence < 1.0)) {
            throw configuration_error("config: field 'confidence' must lie in (0, 1)");
        }
        c.output_dir = j.value("output_dir", std::string());
        c.plots = j.value("plots", false);
        return c;
    }
};

// Builds the instance a config names: a generator with params, a catalog
// name, or an inline instance document.
inline Instance make_instance_from_spec(const json& spec) {
    if (spec.contains("inline")) return instance_from_json(spec.at("inline"));
    if (spec.contains("catalog")) return catalog_instance(spec.at("catalog").get<std::string>());
    if (!spec.contains("generator")) {
        throw configuration_error("config.instance: needs 'generator', 'catalog' or 'inline'");
    }
    const std::string gen = spec.at("generator").get<std::string>();
    const json p = spec.value("params", json::object());
    auto rp = [&](const char* key) -> double {
        if (!p.contains(key)) {
            throw configuration_error("config.instance: generator '" + gen +
                                      "' missing param '" + key + "'");
        }
        return p.at(key).get<double>();
    };
    auto rn = [&](const char* key) -> std::size_t {
        return static_cast<std::size_t>(rp(key));
    };
    try {
        if (gen == "separation") {
            return make_separation(rp("c"), rp("k"), rp("delta"), rp("epsilon"));
        }
        if (gen == "computational_lb") return make_computational_lb(rp("m"), rn("grid"));
        if (gen == "skyline") return make_skyline(rp("m_star"), rp("epsilon"), rn("grid"));
        if (gen == "impossibility") {
            return make_impossibility(rp("m"), rp("epsilon"), rp("gamma"), rn("grid"));
        }
        if (gen == "scale_gap") {
            return make_scale_gap(rp("c"), FiniteDist({0, 1, 2}, {0.5, 0.3, 0.2}),
                                  RewardModel::from_dense({0.2, 0.5, 1.0}, 1.0));
        }
        if (gen == "mse_pw") {
            return make_mse_small_pw_large(rp("p"), rp("r_max"), rp("epsilon"), rn("grid"));
        }
        if (gen == "corrupted") return make_corrupted(rp("good_mass"), rp("spike_mass"));
        if (gen == "smooth") {
            const bool with_q = p.value("with_q", false);
            return make_smooth(rp("m"), rn("grid"), with_q, p.value("l", 4.0),
                               static_cast<std::size_t>(p.value("window", 64.0)));
        }
    } catch (const validation_error& e) {
        throw configuration_error(std::string("config.instance: ") + e.what());
    }
    throw configuration_error("config.instance: unknown generator '" + gen + "'");
}

namespace detail {

struct JobOutput {
    std::string csv_name;
    std::string csv;
    std::string svg_name; // empty when no plot
    std::string svg;
};

inline std::vector<std::int64_t> parse_n_grid(const json& job) {
    std::vector<std::int64_t> grid;
    if (job.contains("n_grid")) {
        for (const auto& v : job.at("n_grid")) grid.push_back(v.get<std::int64_t>());
    } else if (job.contains("n_max_pow2")) {
        for (std::int64_t n = 1; n <= job.at("n_max_pow2").get<std::int64_t>(); n *= 2) {
            grid.push_back(n);
        }
    } else {
        throw configuration_error("job: needs 'n_grid' or 'n_max_pow2'");
    }
    if (grid.empty()) throw configuration_error("job: empty n grid");
    for (std::int64_t n : grid) {
        if (n < 1) throw configuration_error("job: field n_grid entries must be >= 1");
    }
    return grid;
}

inline JobOutput run_job(const json& job, std::size_t index, const Instance& inst,
                         const ExperimentConfig& cfg) {
    const std::string type = job.at("type").get<std::string>();
    const std::string hash = instance_hash(inst);
    const Rng job_rng(cfg.seed, index);
    JobOutput out;
    out.csv_name = "job" + std::to_string(index) + "_" + type + ".csv";

    if (type == "reward_hacking_curve") {
        const double m = job.value("m", 4.0);
        const auto grid = parse_n_grid(job);
        const auto rows = reward_hacking_curve(inst, grid, m);
        CsvWriter csv(hash, cfg.seed, kVersion, {"n", "bon_regret", "em_bon_regret"});
        SvgSeries bon_series{"bon", "#c0392b", {}, {}};
        SvgSeries em_series{"em_bon m=" + format_double(m), "#2980b9", {}, {}};
        for (const auto& r : rows) {
            csv.row({std::to_string(r.n), format_double(r.bon_regret),
                     format_double(r.em_bon_regret)});
            bon_series.x.push_back(static_cast<double>(r.n));
            bon_series.y.push_back(r.bon_regret);
            em_series.x.push_back(static_cast<double>(r.n));
            em_series.y.push_back(r.em_bon_regret);
        }
        out.csv = csv.str();
        if (cfg.plots) {
            out.svg_name = "job" + std::to_string(index) + "_" + type + ".svg";
            out.svg = render_line_svg("regret vs batch size", "n", "regret",
                                      {bon_series, em_series}, true);
        }
        return out;
    }

    if (type == "separation_sweep") {
        const std::size_t points = static_cast<std::size_t>(job.value("points_per_regime", 50));
        const bool endpoints = job.value("include_endpoints", true);
        const double eps_delta = inst.param("epsilon") * inst.param("delta");
        const double mu = inst.param("mu");
        std::vector<double> grid;
        for (double b : log_spaced(eps_delta / 100.0, eps_delta, points)) grid.push_back(b);
        for (double b : log_spaced(eps_delta * 1.0000001, mu, points)) grid.push_back(b);
        for (double b : log_spaced(mu * 1.0000001, mu * 1000.0, points)) grid.push_back(b);
        const SeparationSweepReport report = separation_sweep(inst, grid, endpoints);
        CsvWriter csv(hash, cfg.seed, kVersion,
                      {"beta", "regime", "chi_regret", "em_regret", "ratio"});
        SvgSeries chi_series{"chi_bon", "#c0392b", {}, {}};
        for (const auto& pt : report.points) {
            csv.row({format_double(pt.beta), std::to_string(pt.regime),
                     format_double(pt.chi_regret), format_double(report.em_regret),
                     format_double(pt.chi_regret / report.em_regret)});
            if (std::isfinite(pt.beta)) {
                chi_series.x.push_back(pt.beta);
                chi_series.y.push_back(pt.chi_regret);
            }
        }
        out.csv = csv.str();
        if (cfg.plots) {
            SvgSeries em_series{"top_quantile", "#2980b9", chi_series.x, {}};
            em_series.y.assign(chi_series.x.size(), report.em_regret);
            out.svg_name = "job" + std::to_string(index) + "_" + type + ".svg";
            out.svg = render_line_svg("score-tilt regret vs beta", "beta", "regret",
                                      {chi_series, em_series}, true);
        }
        return out;
    }

    if (type == "divergence_sweep") {
        std::vector<double> m_grid;
        if (job.contains("m_grid")) {
            for (const auto& v : job.at("m_grid")) m_grid.push_back(v.get<double>());
        } else {
            m_grid = log_spaced(job.value("m_min", 0.5), job.value("m_max", 16.0),
                                static_cast<std::size_t>(job.value("points", 25)));
        }
        const auto rows = divergence_sweep(inst.comparator(), inst.ref, m_grid);
        CsvWriter csv(hash, cfg.seed, kVersion, {"m", "em", "coverage", "chi2", "bound_rhs"});
        for (const auto& r : rows) {
            csv.row({format_double(r.m), format_double(r.em), format_double(r.coverage),
                     format_double(r.chi2), format_double(r.bound_rhs)});
        }
        out.csv = csv.str();
        return out;
    }

    if (type == "win_rate_mc") {
        const SelectorSpec spec = SelectorSpec::parse(job.at("selector").get<std::string>());
        const std::string reward = job.value("reward", "r_hat");
        const RewardChoice which = reward == "r_star" ? RewardChoice::RStar : RewardChoice::RHat;
        const std::string comp_name = job.value("comparator", "ref");
        const FiniteDist* comp = &inst.ref;
        if (comp_name == "q") {
            if (!inst.q) throw configuration_error("win_rate_mc job: instance has no q");
            comp = &*inst.q;
        }
        const WinRateReport report =
            win_rate_mc(spec, inst, which, *comp, cfg.trials, job_rng, cfg.confidence);
        CsvWriter csv(hash, cfg.seed, kVersion,
                      {"selector", "reward", "method", "value", "half_width", "trials", "seed"});
        std::vector<std::string> cells{spec.to_string(), reward};
        for (auto& c : win_rate_report_cells(report)) cells.push_back(c);
        csv.row(cells);
        out.csv = csv.str();
        return out;
    }

    if (type == "regret") {
        const SelectorSpec spec = SelectorSpec::parse(job.at("selector").get<std::string>());
        const std::string method = job.value("method", "exact");
        RegretReport rep;
        if (method == "mc") {
            rep = regret(inst, spec, EvalMethod::MonteCarlo, cfg.trials, job_rng, cfg.confidence);
        } else if (method == "exact") {
            rep = regret(inst, spec);
            if (job.contains("decompose_m")) {
                rep = regret_decomposition(inst, spec, job.at("decompose_m").get<double>());
            }
        } else {
            throw configuration_error("regret job: field method must be 'exact' or 'mc'");
        }
        CsvWriter csv(hash, cfg.seed, kVersion,
                      {"selector", "method", "regret", "comparator_winrate", "policy_winrate",
                       "t1", "t2", "t3"});
        const auto& d = rep.decomposition;
        csv.row({spec.to_string(), method, format_double(rep.regret),
                 format_double(rep.comparator_winrate), format_double(rep.policy_winrate),
                 d ? format_double((*d)[0]) : "nan", d ? format_double((*d)[1]) : "nan",
                 d ? format_double((*d)[2]) : "nan"});
        out.csv = csv.str();
        return out;
    }

    if (type == "bound_check") {
        const std::string bound = job.value("bound", "bon");
        const double constant = job.value("constant", 8.0);
        CsvWriter csv(hash, cfg.seed, kVersion,
                      {"name", "m", "n", "eps_pw", "lhs", "rhs", "constant", "holds"});
        auto emit = [&](const BoundCheck& c, double m, std::int64_t n) {
            csv.row({c.name, format_double(m), std::to_string(n),
                     format_double(c.params.count("eps_pw") ? c.params.at("eps_pw") : 0.0),
                     format_double(c.lhs), format_double(c.rhs), format_double(constant),
                     c.holds ? "1" : "0"});
        };
        if (bound == "bon") {
            for (std::int64_t n : parse_n_grid(job)) emit(check_bon_regret_bound(inst, n, constant), 0.0, n);
        } else if (bound == "em_bon") {
            for (const auto& mv : job.at("m_grid")) {
                for (std::int64_t n : parse_n_grid(job)) {
                    emit(check_em_bon_regret_bound(inst, mv.get<double>(), n, constant), mv.get<double>(), n);
                }
            }
        } else if (bound == "bon_q" || bound == "em_bon_q") {
            for (std::int64_t n : parse_n_grid(job)) {
                if (bound == "bon_q") {
                    emit(check_general_q(inst, SelectorSpec::bon(n), constant), 0.0, n);
                } else {
                    const double m = job.value("m", 4.0);
                    emit(check_general_q(inst, SelectorSpec::em_bon(m, n), constant), m, n);
                }
            }
        } else {
            throw configuration_error("bound_check job: unknown bound '" + bound + "'");
        }
        out.csv = csv.str();
        return out;
    }

    throw configuration_error("job " + std::to_string(index) + ": unknown type '" + type + "'");
}

} // namespace detail

struct RunResult {
    std::filesystem::path output_dir;
    std::vector<std::string> files;
};

// Executes every job in a worker pool (one derived stream per job index)
// and writes one CSV per job plus a manifest. Output bytes are a pure
// function of (config, seed, artifact version).
inline RunResult run_experiment(const ExperimentConfig& cfg,
                                const std::string& output_override = "") {
    const std::string out_dir = !output_override.empty() ? output_override : cfg.output_dir;
    if (out_dir.empty()) {
        throw configuration_error("config: field 'output_dir' is empty and no override given");
    }
    const Instance inst = make_instance_from_spec(cfg.instance_spec);
    std::filesystem::create_directories(out_dir);

    std::vector<detail::JobOutput> outputs(cfg.jobs.size());
    std::vector<std::string> errors(cfg.jobs.size());
    std::vector<bool> config_fault(cfg.jobs.size(), false);
    std::atomic<std::size_t> next{0};
    auto work = [&]() {
        for (;;) {
            const std::size_t i = next.fetch_add(1);
            if (i >= cfg.jobs.size()) break;
            try {
                outputs[i] = detail::run_job(cfg.jobs[i], i, inst, cfg);
            } catch (const configuration_error& e) {
                errors[i] = e.what();
                config_fault[i] = true;
            } catch (const std::exception& e) {
                errors[i] = e.what();
            }
        }
    };
    const unsigned threads = std::max(1u, std::min<unsigned>(
        std::thread::hardware_concurrency(), static_cast<unsigned>(cfg.jobs.size())));
    if (threads <= 1 || cfg.jobs.size() <= 1) {
        work();
    } else {
        std::vector<std::thread> pool;
        for (unsigned i = 0; i < threads; ++i) pool.emplace_back(work);
        for (auto& th : pool) th.join();
    }
    for (std::size_t i = 0; i < cfg.jobs.size(); ++i) {
        if (!errors[i].empty()) {
            const std::string what = "job " + std::to_string(i) + " (" +
                                     cfg.jobs[i].value("type", "?") + "): " + errors[i];
            if (config_fault[i]) throw configuration_error(what);
            throw numeric_error(what);
        }
    }

    RunResult result;
    result.output_dir = out_dir;
    json manifest;
    manifest["config_hash"] = hash_hex(cfg.to_json().dump());
    manifest["seed"] = cfg.seed;
    manifest["version"] = kVersion;
    manifest["instance"] = inst.name;
    manifest["instance_hash"] = instance_hash(inst);
    json jobs = json::array();
    for (std::size_t i = 0; i < outputs.size(); ++i) {
        write_file_atomic(std::filesystem::path(out_dir) / outputs[i].csv_name, outputs[i].csv);
        result.files.push_back(outputs[i].csv_name);
        json entry;
        entry["index"] = i;
        entry["type"] = cfg.jobs[i].value("type", "?");
        entry["file"] = outputs[i].csv_name;
        if (!outputs[i].svg_name.empty()) {
            write_file_atomic(std::filesystem::path(out_dir) / outputs[i].svg_name,
                              outputs[i].svg);
            result.files.push_back(outputs[i].svg_name);
            entry["plot"] = outputs[i].svg_name;
        }
        jobs.push_back(entry);
    }
    manifest["jobs"] = jobs;
    write_file_atomic(std::filesystem::path(out_dir) / "manifest.json", manifest.dump(2) + "\n");
    result.files.push_back("manifest.json");
    return result;
}

// ------------------------------ built-ins -----------------------------------

inline ExperimentConfig builtin_config(const std::string& name) {
    if (name == "separation-default") {
        json j;
        j["instance"] = {{"generator", "separation"},
                         {"params", {{"c", 2.0}, {"k", 2.0}, {"delta", 0.75}, {"epsilon", 0.01}}}};
        j["seed"] = 20250810;
        j["trials"] = 200000;
        j["confidence"] = 0.99;
        j["output_dir"] = "bonlab-out/separation-default";
        j["plots"] = true;
        j["jobs"] = json::array({
            {{"type", "separation_sweep"}, {"points_per_regime", 50}, {"include_endpoints", true}},
            {{"type", "reward_hacking_curve"}, {"m", 5.0}, {"n_max_pow2", 256}},
            {{"type", "divergence_sweep"}, {"m_min", 0.5}, {"m_max", 16.0}, {"points", 25}},
            {{"type", "win_rate_mc"}, {"selector", "em_bon:m=4,n=8"}, {"reward", "r_hat"}},
            {{"type", "regret"}, {"selector", "top_quantile:m=5"}, {"method", "exact"},
             {"decompose_m", 5.0}},
        });
        return ExperimentConfig::from_json(j);
    }
    throw configuration_error("no built-in config named '" + name + "'");
}

inline bool is_builtin_config(const std::string& name) {
    return name == "separation-default";
}

// ------------------------------- verify -------------------------------------

struct VerifyLine {
    std::string label;
    bool pass = false;
    std::string detail;
};

struct VerifyResult {
    std::vector<VerifyLine> lines;
    bool ok = true;

    void add(const std::string& label, bool pass, const std::string& detail = "") {
        lines.push_back({label, pass, detail});
        ok = ok && pass;
    }
};

// Self-checks every catalog instance and certifies the bound-check catalog.
// The recorded constants are artifact regression values, not claims; see
// the analysis module for the sweeps behind them.
inline VerifyResult verify_catalog() {
    VerifyResult result;
    const std::vector<Instance> instances = catalog();

    for (const Instance& inst : instances) {
        const SelfCheckReport report = self_check(inst);
        result.add("self_check " + inst.name, report.pass,
                   report.pass ? "max_dev=" + format_double(report.max_abs_dev)
                               : "failed: " + report.first_failure);
    }

    const std::vector<std::int64_t> n_grid{1, 2, 4, 8, 16, 32, 64, 128, 256};
    for (const Instance& inst : instances) {
        if (!inst.comparator_star) continue;
        const double eps = pairwise_error_exact(inst.r_hat, inst.r_star, inst.ref);
        bool all = true;
        double worst = 0.0;
        for (std::int64_t n : n_grid) {
            const BoundCheck c = check_bon_regret_bound(inst, n, 8.0, eps);
            all = all && c.holds;
            if (c.rhs > 0.0) worst = std::max(worst, c.lhs / (c.rhs / 8.0));
        }
        result.add("bound bon_regret " + inst.name, all, "min_constant=" + format_double(worst));
    }

    const std::vector<double> m_grid{2.0, 4.0, 8.0, 16.0};
    const std::vector<std::int64_t> n42{16, 64, 256};
    for (const Instance& inst : instances) {
        if (!inst.comparator_star) continue;
        const double eps = pairwise_error_exact(inst.r_hat, inst.r_star, inst.ref);
        bool all = true;
        double worst = 0.0;
        for (double m : m_grid) {
            for (std::int64_t n : n42) {
                const BoundCheck c = check_em_bon_regret_bound(inst, m, n, 8.0, eps);
                all = all && c.holds;
                if (c.rhs > 0.0) worst = std::max(worst, c.lhs / (c.rhs / 8.0));
            }
        }
        result.add("bound em_bon_regret " + inst.name, all,
                   "min_constant=" + format_double(worst));
    }

    {
        const Instance inst = catalog_instance("smooth_q");
        const double eps = pairwise_error_exact(inst.r_hat, inst.r_star, inst.ref);
        bool all = true;
        for (std::int64_t n : {4, 16, 64, 256}) {
            all = all && check_general_q(inst, SelectorSpec::bon(n), 8.0, eps).holds;
            all = all && check_general_q(inst, SelectorSpec::em_bon(2.0, n), 8.0, eps).holds;
            all = all && check_general_q(inst, SelectorSpec::em_bon(4.0, n), 8.0, eps).holds;
        }
        result.add("bound general_q smooth_q", all);
    }

    for (const Instance& inst : instances) {
        if (!inst.comparator_star) continue;
        bool all = true;
        for (double m : {1.5, 2.0, 4.0}) {
            for (const FDivSpec& spec : {FDivSpec::chi_square(), FDivSpec::tv()}) {
                all = all && excess_mass_fdiv_bound_check(inst.comparator(), inst.ref, spec, m).holds;
            }
            const ProjectionResult proj = tv_projection(inst.comparator(), inst.ref, m);
            all = all && std::fabs(proj.tv_to_target -
                                   excess_mass(inst.comparator(), inst.ref, m)) <= 1e-12;
            all = all && max_density_ratio(proj.projected, inst.ref) <= m + 1e-12;
        }
        result.add("divergence suite " + inst.name, all);
    }

    // Order-statistics win-rates: the rank evaluators against their closed
    // forms on every catalog instance.
    for (const Instance& inst : instances) {
        bool all = true;
        double worst = 0.0;
        for (double m : m_grid) {
            const double got = selector_rank_win_rate(inst.ref, inst.r_hat,
                                                      SelectorSpec::top_quantile(m));
            worst = std::max(worst, std::fabs(got - (1.0 - 1.0 / (2.0 * m))));
            all = all && std::fabs(got - (1.0 - 1.0 / (2.0 * m))) <= 1e-12;
        }
        for (double m : m_grid) {
            for (std::int64_t n : {8, 64}) {
                const SelectorSpec spec = SelectorSpec::em_bon(m, n);
                const double k = static_cast<double>(spec.em_bon_k());
                const double expect = 1.0 - (k + 1.0) / (2.0 * (static_cast<double>(n) + 1.0));
                const double got = selector_rank_win_rate(inst.ref, inst.r_hat, spec);
                worst = std::max(worst, std::fabs(got - expect));
                all = all && std::fabs(got - expect) <= 1e-9;
            }
        }
        result.add("order_statistics " + inst.name, all, "max_dev=" + format_double(worst));
    }

    return result;
}

} // namespace bonlab
