#pragma once

#include <charconv>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <string>
#include <system_error>
#include <vector>

#include <json.hpp>

#include "bonlab/dist.hpp"
#include "bonlab/errors.hpp"
#include "bonlab/instance.hpp"
#include "bonlab/reward.hpp"
#include "bonlab/winrate.hpp"

namespace bonlab {

using nlohmann::json;

// Shortest round-trip decimal form of a double; locale-free and identical
// across runs, so emitted files are byte-stable.
inline std::string format_double(double x) {
    if (std::isnan(x)) return "nan";
    if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof(buf), x);
    return std::string(buf, res.ptr);
}

// FNV-1a over bytes; used for config/instance fingerprints in emitted files.
inline std::uint64_t fnv1a(const std::string& bytes) {
    std::uint64_t h = 1469598103934665603ULL;
    for (unsigned char c : bytes) {
        h ^= c;
        h *= 1099511628211ULL;
    }
    return h;
}

inline std::string hash_hex(const std::string& bytes) {
    char buf[17];
    std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(fnv1a(bytes)));
    return buf;
}

// ------------------------------ JSON forms ----------------------------------

inline json to_json(const FiniteDist& d) {
    json j;
    j["outcomes"] = d.outcomes();
    j["probs"] = d.probs();
    return j;
}

inline FiniteDist dist_from_json(const json& j) {
    if (!j.contains("outcomes") || !j.contains("probs")) {
        throw validation_error("FiniteDist json: needs 'outcomes' and 'probs'");
    }
    return FiniteDist(j.at("outcomes").get<std::vector<OutcomeId>>(),
                      j.at("probs").get<std::vector<double>>());
}

inline json to_json(const RewardModel& r) {
    json values = json::object();
    for (const auto& [id, v] : r.values()) values[std::to_string(id)] = v;
    json j;
    j["r_max"] = r.r_max();
    j["values"] = values;
    return j;
}

inline RewardModel reward_from_json(const json& j) {
    if (!j.contains("r_max") || !j.contains("values")) {
        throw validation_error("RewardModel json: needs 'r_max' and 'values'");
    }
    std::vector<std::pair<OutcomeId, double>> kv;
    for (const auto& [key, val] : j.at("values").items()) {
        kv.emplace_back(static_cast<OutcomeId>(std::stoll(key)), val.get<double>());
    }
    return RewardModel(std::move(kv), j.at("r_max").get<double>());
}

inline json to_json(const Instance& inst) {
    json j;
    j["name"] = inst.name;
    j["ref"] = to_json(inst.ref);
    j["r_hat"] = to_json(inst.r_hat);
    j["r_star"] = to_json(inst.r_star);
    if (inst.comparator_star) j["pi_star"] = to_json(*inst.comparator_star);
    if (inst.q) {
        j["q"] = to_json(*inst.q);
        j["q_l_bound"] = inst.q_l_bound;
    }
    json truths = json::object();
    json truth_kinds = json::object();
    for (const auto& [name, truth] : inst.truths) {
        truths[name] = truth.value;
        switch (truth.kind) {
            case TruthKind::Exact: truth_kinds[name] = "exact"; break;
            case TruthKind::LowerBound: truth_kinds[name] = "lower"; break;
            case TruthKind::UpperBound: truth_kinds[name] = "upper"; break;
        }
    }
    j["truths"] = truths;
    j["truth_kinds"] = truth_kinds;
    j["params"] = inst.params;
    return j;
}

inline Instance instance_from_json(const json& j) {
    Instance inst(j.value("name", std::string("instance")), dist_from_json(j.at("ref")),
                  reward_from_json(j.at("r_hat")), reward_from_json(j.at("r_star")));
    if (j.contains("pi_star")) inst.comparator_star = dist_from_json(j.at("pi_star"));
    if (j.contains("q")) {
        inst.q = dist_from_json(j.at("q"));
        inst.q_l_bound = j.value("q_l_bound", 0.0);
    }
    if (j.contains("truths")) {
        for (const auto& [name, val] : j.at("truths").items()) {
            Truth t{val.get<double>(), TruthKind::Exact};
            if (j.contains("truth_kinds") && j.at("truth_kinds").contains(name)) {
                const std::string k = j.at("truth_kinds").at(name).get<std::string>();
                if (k == "lower") t.kind = TruthKind::LowerBound;
                else if (k == "upper") t.kind = TruthKind::UpperBound;
            }
            inst.truths[name] = t;
        }
    }
    if (j.contains("params")) {
        for (const auto& [name, val] : j.at("params").items()) {
            inst.params[name] = val.get<double>();
        }
    }
    return inst;
}

inline std::string instance_hash(const Instance& inst) { return hash_hex(to_json(inst).dump()); }

// ------------------------------ CSV emission --------------------------------

// CSV with a fixed header row and a leading comment line carrying the
// instance hash, seed and artifact version. Doubles are written in
// shortest round-trip form.
class CsvWriter {
public:
    CsvWriter(std::string instance_hash, std::uint64_t seed, std::string version,
              std::vector<std::string> header)
        : header_(std::move(header)) {
        body_ += "# instance=" + instance_hash + " seed=" + std::to_string(seed) +
                 " version=" + version + "\n";
        for (std::size_t i = 0; i < header_.size(); ++i) {
            body_ += header_[i];
            body_ += (i + 1 < header_.size()) ? ',' : '\n';
        }
    }

    void row(const std::vector<std::string>& cells) {
        if (cells.size() != header_.size()) {
            throw validation_error("CsvWriter: row width does not match header");
        }
        for (std::size_t i = 0; i < cells.size(); ++i) {
            body_ += quoted_if_needed(cells[i]);
            body_ += (i + 1 < cells.size()) ? ',' : '\n';
        }
    }

    // RFC-4180 style quoting for cells carrying separators (selector
    // strings contain commas).
    static std::string quoted_if_needed(const std::string& cell) {
        if (cell.find_first_of(",\"\n") == std::string::npos) return cell;
        std::string out = "\"";
        for (char c : cell) {
            if (c == '"') out += '"';
            out += c;
        }
        out += '"';
        return out;
    }

    const std::string& str() const { return body_; }

private:
    std::vector<std::string> header_;
    std::string body_;
};

// Atomic file write: temp file in the same directory, then rename.
inline void write_file_atomic(const std::filesystem::path& path, const std::string& contents) {
    const std::filesystem::path tmp = path.string() + ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw validation_error("cannot open for writing: " + tmp.string());
        out.write(contents.data(), static_cast<std::streamsize>(contents.size()));
        if (!out) throw validation_error("short write: " + tmp.string());
    }
    std::error_code ec;
    std::filesystem::rename(tmp, path, ec);
    if (ec) throw validation_error("cannot rename " + tmp.string() + ": " + ec.message());
}

inline std::string read_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw validation_error("cannot open: " + path.string());
    return std::string(std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>());
}

// One-line CSV form of a win-rate report: method,value,half_width,trials,seed.
inline std::vector<std::string> win_rate_report_cells(const WinRateReport& r) {
    std::vector<std::string> cells;
    cells.push_back(r.method == EvalMethod::Exact ? "exact" : "monte-carlo");
    cells.push_back(format_double(r.value));
    if (r.estimate) {
        cells.push_back(format_double(r.estimate->half_width));
        cells.push_back(std::to_string(r.estimate->trials));
        cells.push_back(std::to_string(r.estimate->seed));
    } else {
        cells.push_back("0");
        cells.push_back("0");
        cells.push_back("0");
    }
    return cells;
}

} // namespace bonlab
