#include "parrondo/report.hpp"

#include <openssl/evp.h>

#include <chrono>
#include <cstdlib>
#include <ctime>
#include <fstream>
#include <iterator>
#include <ostream>
#include <sstream>
#include <stdexcept>

#include "parrondo/errors.hpp"

#ifndef PARRONDO_VERSION
#define PARRONDO_VERSION "0.0.0"
#endif

namespace parrondo::report {

using market::format_double;

json to_json(const market::SawtoothSpec& spec) {
    json j{{"tickers", spec.tickers},       {"endpoints", spec.endpoints},
           {"days", spec.days},             {"amplitude", spec.amplitude},
           {"period", spec.period},         {"seed", spec.seed},
           {"start_date", spec.start_date}};
    if (!spec.note.empty()) j["note"] = spec.note;
    return j;
}

market::SawtoothSpec sawtooth_from_json(const json& j) {
    market::SawtoothSpec spec;
    spec.tickers = j.at("tickers").get<std::vector<std::string>>();
    spec.endpoints = j.at("endpoints").get<std::vector<double>>();
    spec.days = j.value("days", spec.days);
    spec.amplitude = j.value("amplitude", spec.amplitude);
    spec.period = j.value("period", spec.period);
    spec.seed = j.value("seed", spec.seed);
    spec.start_date = j.value("start_date", spec.start_date);
    spec.note = j.value("note", std::string());
    spec.validate();
    return spec;
}

json to_json(const ExperimentConfig& config) {
    json source;
    if (const auto* path = std::get_if<std::string>(&config.source)) {
        source = {{"type", "file"}, {"path", *path}};
    } else {
        source = {{"type", "sawtooth"},
                  {"spec", to_json(std::get<market::SawtoothSpec>(config.source))}};
    }
    json strategies = json::array();
    for (auto k : config.strategies) strategies.push_back(std::string(token(k)));
    return json{{"source", source},
                {"days", config.days},
                {"reps", config.reps},
                {"per_stock_value", config.per_stock_value},
                {"strategies", strategies},
                {"hint_probs", config.hint_probs},
                {"master_seed", config.master_seed},
                {"reinvest_mode", std::string(to_string(config.reinvest_mode))}};
}

ExperimentConfig config_from_json(const json& input) {
    const json& j = input.contains("config") ? input.at("config") : input;
    ExperimentConfig config;
    if (j.contains("source")) {
        const auto& src = j.at("source");
        const auto type = src.at("type").get<std::string>();
        if (type == "file") {
            config.source = src.at("path").get<std::string>();
        } else if (type == "sawtooth") {
            config.source = sawtooth_from_json(src.at("spec"));
        } else {
            throw ValidationError("unknown price source type '" + type + "'");
        }
    }
    config.days = j.value("days", config.days);
    config.reps = j.value("reps", config.reps);
    config.per_stock_value = j.value("per_stock_value", config.per_stock_value);
    if (j.contains("strategies")) {
        config.strategies.clear();
        for (const auto& t : j.at("strategies")) {
            const auto kind = parse_strategy(t.get<std::string>());
            if (!kind) throw ValidationError("unknown strategy '" + t.get<std::string>() + "'");
            config.strategies.push_back(*kind);
        }
    }
    config.hint_probs = j.value("hint_probs", config.hint_probs);
    config.master_seed = j.value("master_seed", config.master_seed);
    if (j.contains("reinvest_mode")) {
        const auto mode = parse_reinvest_mode(j.at("reinvest_mode").get<std::string>());
        if (!mode) throw ValidationError("unknown reinvest mode");
        config.reinvest_mode = *mode;
    }
    config.validate();
    return config;
}

void write_summary_csv(std::ostream& out, const ExperimentResult& result) {
    out << "strategy,hint_prob,mean_final,std_final,stderr\n";
    for (const auto& s : result.ranking()) {
        out << token(s.entry.kind) << ','
            << (s.entry.hint_prob ? format_double(*s.entry.hint_prob) : std::string()) << ','
            << format_double(s.mean_final) << ',' << format_double(s.std_final) << ','
            << format_double(s.standard_error) << '\n';
    }
}

void write_trajectories_csv(std::ostream& out, const ExperimentResult& result) {
    out << "strategy,day,mean_value\n";
    for (const auto& s : result.summaries) {
        const auto label = s.entry.label();
        for (std::size_t d = 0; d < s.mean_trajectory.size(); ++d) {
            out << label << ',' << d << ',' << format_double(s.mean_trajectory[d]) << '\n';
        }
    }
}

void write_single_run_csv(std::ostream& out, const ExperimentResult& result) {
    out << "strategy,day,value\n";
    for (std::size_t e = 0; e < result.entries.size(); ++e) {
        const auto label = result.entries[e].label();
        const auto& traj = result.single_run[e];
        for (std::size_t d = 0; d < traj.size(); ++d) {
            out << label << ',' << d << ',' << format_double(traj[d]) << '\n';
        }
    }
}

json summary_json(const ExperimentResult& result) {
    json rows = json::array();
    for (const auto& s : result.ranking()) {
        rows.push_back({{"strategy", std::string(token(s.entry.kind))},
                        {"label", s.entry.label()},
                        {"hint_prob", s.entry.hint_prob ? json(*s.entry.hint_prob) : json()},
                        {"mean_final", s.mean_final},
                        {"std_final", s.std_final},
                        {"stderr", s.standard_error}});
    }
    return rows;
}

std::string sha256_hex(std::string_view bytes) {
    unsigned char digest[EVP_MAX_MD_SIZE];
    unsigned int length = 0;
    if (EVP_Digest(bytes.data(), bytes.size(), digest, &length, EVP_sha256(), nullptr) != 1) {
        throw std::runtime_error("SHA-256 digest failed");
    }
    static constexpr char kHex[] = "0123456789abcdef";
    std::string hex;
    hex.reserve(2 * length);
    for (unsigned int i = 0; i < length; ++i) {
        hex.push_back(kHex[digest[i] >> 4]);
        hex.push_back(kHex[digest[i] & 0x0f]);
    }
    return hex;
}

std::string file_sha256_hex(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot read '" + path.string() + "'");
    const std::string bytes{std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
    return sha256_hex(bytes);
}

std::string utc_timestamp() {
    std::time_t now = std::time(nullptr);
    if (const char* epoch = std::getenv("SOURCE_DATE_EPOCH"); epoch && *epoch) {
        now = static_cast<std::time_t>(std::strtoll(epoch, nullptr, 10));
    }
    std::tm tm{};
    gmtime_r(&now, &tm);
    char buf[32];
    std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
    return buf;
}

std::string tool_version() { return PARRONDO_VERSION; }

void write_text_file(const std::filesystem::path& path, std::string_view content) {
    if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write '" + path.string() + "'");
    out.write(content.data(), static_cast<std::streamsize>(content.size()));
    if (!out) throw std::runtime_error("write to '" + path.string() + "' failed");
}

}  // namespace parrondo::report
