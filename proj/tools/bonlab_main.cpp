// Command-line front end: batch experiment runs, the verification catalog,
// and instance emission. Exit codes: 0 success, 1 verification or numeric
// failure, 2 usage/config errors.

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "bonlab/bonlab.hpp"

namespace {

int cmd_run(const std::string& config_arg, const std::string& out_override) {
    bonlab::ExperimentConfig cfg;
    if (bonlab::is_builtin_config(config_arg)) {
        cfg = bonlab::builtin_config(config_arg);
    } else {
        std::string text;
        try {
            text = bonlab::read_file(config_arg);
        } catch (const std::exception& e) {
            std::cerr << "error: " << e.what() << "\n";
            return 2;
        }
        bonlab::json parsed;
        try {
            parsed = bonlab::json::parse(text);
        } catch (const bonlab::json::parse_error& e) {
            std::cerr << "error: config is not valid JSON: " << e.what() << "\n";
            return 2;
        }
        cfg = bonlab::ExperimentConfig::from_json(parsed);
    }
    std::string out = out_override;
    if (out.empty()) {
        if (const char* env = std::getenv("BONLAB_OUT")) out = env;
    }
    const bonlab::RunResult result = bonlab::run_experiment(cfg, out);
    std::cout << "wrote " << result.files.size() << " files to " << result.output_dir.string()
              << "\n";
    for (const auto& f : result.files) std::cout << "  " << f << "\n";
    return 0;
}

int cmd_verify() {
    const bonlab::VerifyResult result = bonlab::verify_catalog();
    std::size_t width = 0;
    for (const auto& line : result.lines) width = std::max(width, line.label.size());
    for (const auto& line : result.lines) {
        std::printf("%-*s  %s  %s\n", static_cast<int>(width), line.label.c_str(),
                    line.pass ? "PASS" : "FAIL", line.detail.c_str());
    }
    std::printf("%zu checks, %s\n", result.lines.size(), result.ok ? "all passed" : "FAILURES");
    return result.ok ? 0 : 1;
}

bonlab::json parse_params(const std::string& text) {
    bonlab::json params = bonlab::json::object();
    std::size_t pos = 0;
    while (pos < text.size()) {
        std::size_t comma = text.find(',', pos);
        if (comma == std::string::npos) comma = text.size();
        const std::string kv = text.substr(pos, comma - pos);
        const auto eq = kv.find('=');
        if (eq == std::string::npos) {
            throw bonlab::configuration_error("--params: malformed entry '" + kv +
                                              "' (expected key=value)");
        }
        const std::string key = kv.substr(0, eq);
        const std::string val = kv.substr(eq + 1);
        try {
            std::size_t used = 0;
            const double x = std::stod(val, &used);
            if (used != val.size()) throw std::invalid_argument(val);
            params[key] = x;
        } catch (const std::exception&) {
            if (val == "true" || val == "false") params[key] = (val == "true");
            else throw bonlab::configuration_error("--params: field " + key +
                                                   " is not a number: '" + val + "'");
        }
        pos = comma + 1;
    }
    return params;
}

int cmd_instance(const std::string& name, const std::string& params_text,
                 const std::string& emit_path) {
    bonlab::json spec;
    if (params_text.empty()) {
        // Catalog defaults when no params are given.
        try {
            const bonlab::Instance inst = bonlab::catalog_instance(name);
            spec = {{"inline", bonlab::to_json(inst)}};
        } catch (const bonlab::configuration_error&) {
            spec = {{"generator", name}, {"params", bonlab::json::object()}};
        }
    } else {
        spec = {{"generator", name}, {"params", parse_params(params_text)}};
    }
    const bonlab::Instance inst = bonlab::make_instance_from_spec(spec);
    const bonlab::SelfCheckReport report = bonlab::self_check(inst);
    if (!emit_path.empty()) {
        bonlab::write_file_atomic(emit_path, bonlab::to_json(inst).dump(2) + "\n");
        std::cout << "wrote " << emit_path << "\n";
    }
    std::cout << "instance " << inst.name << ": " << inst.ref.size() << " outcomes, "
              << inst.truths.size() << " truths, self_check "
              << (report.pass ? "PASS" : ("FAIL (" + report.first_failure + ")")) << "\n";
    return report.pass ? 0 : 1;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"finite-support win-rate laboratory for best-of-n style selectors"};
    app.require_subcommand(1);

    std::string config_arg, out_override;
    CLI::App* run = app.add_subcommand("run", "run an experiment config (path or built-in name)");
    run->add_option("config", config_arg, "config JSON path or built-in name")->required();
    run->add_option("--out", out_override, "output directory override (also BONLAB_OUT)");

    CLI::App* verify = app.add_subcommand("verify", "run the instance and bound-check catalog");

    std::string inst_name, inst_params, emit_path;
    CLI::App* instance = app.add_subcommand("instance", "build an instance and emit it as JSON");
    instance->add_option("name", inst_name, "generator or catalog name")->required();
    instance->add_option("--params", inst_params, "comma-separated key=value generator params");
    instance->add_option("--emit", emit_path, "output JSON path");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    try {
        if (run->parsed()) return cmd_run(config_arg, out_override);
        if (verify->parsed()) return cmd_verify();
        if (instance->parsed()) return cmd_instance(inst_name, inst_params, emit_path);
    } catch (const bonlab::configuration_error& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 2;
    } catch (const bonlab::validation_error& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 2;
    } catch (const bonlab::numeric_error& e) {
        std::cerr << "numeric failure: " << e.what() << "\n";
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 2;
}
