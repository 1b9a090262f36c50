// End-to-end checks against the installed CLI binary (path in argv[1]):
// demo run artifacts, byte-level determinism, verify exit status, usage
// and config error codes, and instance emission.

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>

#include <json.hpp>

namespace fs = std::filesystem;

namespace {

int g_failures = 0;

void expect(bool ok, const std::string& what) {
    std::printf("%s  %s\n", ok ? "ok  " : "FAIL", what.c_str());
    if (!ok) ++g_failures;
}

int run_cmd(const std::string& cmd) {
    const int status = std::system(cmd.c_str());
    if (status == -1) return -1;
    return WEXITSTATUS(status);
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    return std::string(std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>());
}

} // namespace

int main(int argc, char** argv) {
    if (argc < 2) {
        std::fprintf(stderr, "usage: cli_smoke <path-to-cli>\n");
        return 2;
    }
    const std::string cli = argv[1];
    const fs::path work = fs::temp_directory_path() / "bonlab_cli_smoke";
    fs::remove_all(work);
    fs::create_directories(work);

    // Usage errors exit 2.
    expect(run_cmd(cli + " > /dev/null 2>&1") == 2, "no subcommand exits 2");
    expect(run_cmd(cli + " run > /dev/null 2>&1") == 2, "run without config exits 2");
    expect(run_cmd(cli + " run /nonexistent.json > /dev/null 2>&1") == 2,
           "missing config file exits 2");

    // Demo run produces the artifact files; the sweep's ratio column stays
    // above the separation constant.
    const fs::path out_a = work / "a";
    expect(run_cmd(cli + " run separation-default --out " + out_a.string() +
                   " > /dev/null 2>&1") == 0,
           "demo run exits 0");
    expect(fs::exists(out_a / "manifest.json"), "manifest written");
    expect(fs::exists(out_a / "job0_separation_sweep.csv"), "sweep csv written");
    expect(fs::exists(out_a / "job0_separation_sweep.svg"), "sweep plot written");
    {
        std::ifstream in(out_a / "job0_separation_sweep.csv");
        std::string line;
        std::getline(in, line); // hash comment
        std::getline(in, line); // header
        bool ratios_ok = true;
        int rows = 0;
        while (std::getline(in, line)) {
            const auto last_comma = line.rfind(',');
            ratios_ok = ratios_ok && std::stod(line.substr(last_comma + 1)) >= 2.0;
            ++rows;
        }
        expect(ratios_ok && rows > 100, "ratio column >= 2 on every row");
    }

    // Identical config and seed: byte-identical outputs (env override path).
    const fs::path out_b = work / "b";
    expect(run_cmd("BONLAB_OUT=" + out_b.string() + " " + cli +
                   " run separation-default > /dev/null 2>&1") == 0,
           "env-dir run exits 0");
    bool identical = true;
    int compared = 0;
    for (const auto& entry : fs::directory_iterator(out_a)) {
        identical = identical && slurp(entry.path()) == slurp(out_b / entry.path().filename());
        ++compared;
    }
    expect(identical && compared >= 6, "reruns are byte-identical");

    // Malformed selector: exit 2 and a message naming the field.
    const fs::path bad_cfg = work / "bad.json";
    {
        std::ofstream out(bad_cfg);
        out << R"({"instance":{"catalog":"separation"},"seed":1,"output_dir":")"
            << (work / "bad_out").string()
            << R"(","jobs":[{"type":"regret","selector":"bon:n=-1"}]})";
    }
    const fs::path err_file = work / "stderr.txt";
    expect(run_cmd(cli + " run " + bad_cfg.string() + " > /dev/null 2> " + err_file.string()) ==
               2,
           "malformed selector exits 2");
    {
        const std::string err = slurp(err_file);
        expect(err.find("n") != std::string::npos && err.find("bon") != std::string::npos,
               "error message names the selector field");
    }

    // Verification catalog on a pristine build.
    expect(run_cmd(cli + " verify > " + (work / "verify.txt").string() + " 2>&1") == 0,
           "verify exits 0");
    {
        const std::string text = slurp(work / "verify.txt");
        expect(text.find("all passed") != std::string::npos, "verify prints a pass table");
        // Inventory: the seven construction families appear in the table.
        bool families = true;
        for (const char* name : {"separation", "computational_lb", "skyline", "impossibility",
                                 "scale_gap", "mse_pw", "corrupted"}) {
            families = families && text.find(std::string("self_check ") + name) !=
                                       std::string::npos;
        }
        expect(families, "catalog listing covers the seven families");
    }

    // Instance emission round-trips through the CLI.
    const fs::path inst_file = work / "skyline.json";
    expect(run_cmd(cli + " instance skyline --params m_star=8,epsilon=0.05,grid=100 --emit " +
                   inst_file.string() + " > /dev/null 2>&1") == 0,
           "instance emission exits 0");
    {
        nlohmann::json parsed;
        bool parse_ok = true;
        try {
            parsed = nlohmann::json::parse(slurp(inst_file));
        } catch (...) {
            parse_ok = false;
        }
        expect(parse_ok && parsed.contains("ref") && parsed.contains("truths"),
               "emitted instance parses with the expected fields");
    }
    expect(run_cmd(cli + " instance separation --params c=2,k=2,delta=0.75,epsilon=0.3 "
                         "> /dev/null 2>&1") == 2,
           "instance precondition violations exit 2");

    fs::remove_all(work);
    std::printf("%s\n", g_failures == 0 ? "cli smoke: all passed" : "cli smoke: FAILURES");
    return g_failures == 0 ? 0 : 1;
}
