#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>
#include <string_view>

#include <json.hpp>

#include "parrondo/engine.hpp"
#include "parrondo/games.hpp"
#include "parrondo/market_data.hpp"

namespace parrondo::report {

using nlohmann::json;

json to_json(const market::SawtoothSpec& spec);
market::SawtoothSpec sawtooth_from_json(const json& j);

json to_json(const ExperimentConfig& config);
/// Accepts either a bare config object or a run manifest carrying one under
/// "config". Missing keys keep their defaults. Throws ValidationError on
/// unknown strategy or reinvest tokens.
ExperimentConfig config_from_json(const json& j);

/// summary.csv: strategy,hint_prob,mean_final,std_final,stderr (ranking order).
void write_summary_csv(std::ostream& out, const ExperimentResult& result);
/// trajectories.csv: strategy,day,mean_value; strategy is the entry label.
void write_trajectories_csv(std::ostream& out, const ExperimentResult& result);
/// single_run.csv: strategy,day,value for repetition 0.
void write_single_run_csv(std::ostream& out, const ExperimentResult& result);

json summary_json(const ExperimentResult& result);

/// Hex SHA-256 of a byte string.
std::string sha256_hex(std::string_view bytes);
std::string file_sha256_hex(const std::filesystem::path& path);

/// UTC time as YYYY-MM-DDTHH:MM:SSZ; honours SOURCE_DATE_EPOCH when set.
std::string utc_timestamp();

std::string tool_version();

/// Writes `content` to `path`, creating parent directories.
void write_text_file(const std::filesystem::path& path, std::string_view content);

}  // namespace parrondo::report
