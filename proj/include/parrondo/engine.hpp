#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "parrondo/market_data.hpp"
#include "parrondo/stats.hpp"
#include "parrondo/strategies.hpp"

namespace parrondo {

/// Where the experiment's prices come from: a CSV file or a synthetic spec.
using PriceSource = std::variant<std::string, market::SawtoothSpec>;

struct ExperimentConfig {
    PriceSource source = market::table2_spec();
    std::size_t days = 252;  // 0 uses every day in the source
    std::size_t reps = 1000;
    double per_stock_value = 10000.0;
    std::vector<StrategyKind> strategies{kAllStrategies.begin(), kAllStrategies.end()};
    std::vector<double> hint_probs{0.01, 0.05, 0.10};  // one Insider run per level
    std::uint64_t master_seed = 42;
    ReinvestMode reinvest_mode = ReinvestMode::multiplicity;

    /// Throws ValidationError on reps == 0, days == 1, an empty or repeated
    /// strategy list, a hint probability outside [0, 1] or repeated, an
    /// Insider run without hint levels, or a negative per-stock value.
    void validate() const;
};

/// One simulated trader: a strategy, plus its hint level for Insider.
struct RunEntry {
    StrategyKind kind = StrategyKind::bah;
    std::optional<double> hint_prob;

    /// "blsr", or "insider@0.05" for hint-driven entries.
    [[nodiscard]] std::string label() const;

    bool operator==(const RunEntry&) const = default;
};

/// Strategies in config order; Insider expands to one entry per hint level.
std::vector<RunEntry> expand_entries(const ExperimentConfig& config);

/// Loads or generates the configured prices and trims them to config.days.
market::PriceSeries resolve_prices(const ExperimentConfig& config);

struct StrategySummary {
    RunEntry entry;
    double mean_final = 0.0;
    double std_final = 0.0;
    double standard_error = 0.0;
    std::vector<double> mean_trajectory;
};

/// Value trajectories (one per entry, T values each) for one repetition.
struct RepetitionResult {
    std::vector<std::vector<double>> trajectories;
};

struct ExperimentResult {
    std::vector<RunEntry> entries;
    std::vector<StrategySummary> summaries;          // entry order
    std::vector<std::vector<double>> final_values;  // [entry][rep]
    std::vector<std::vector<double>> single_run;    // repetition 0 trajectories

    /// Summaries ordered by mean_final, highest first (ties keep entry order).
    [[nodiscard]] std::vector<StrategySummary> ranking() const;

    /// Index of the entry with the given label; throws std::out_of_range.
    [[nodiscard]] std::size_t entry_index(const std::string& label) const;

    /// Paired comparison of final values, entry a minus entry b.
    [[nodiscard]] stats::PairedComparison paired(const std::string& a, const std::string& b) const;
};

/**
 * Repeated multi-strategy trading experiment over exogenous prices.
 *
 * Every strategy in a repetition trades the same price matrix. Repetition i
 * draws its hints from split_stream(seed, {"rep", i, "hints"}); each hint
 * level regenerates from a fresh copy of that stream, so all levels share
 * draws and the levels are nested. Strategy k trades with
 * split_stream(seed, {"rep", i, "strategy", token(k)}); Insider runs at
 * different hint levels therefore share their trading randomness.
 */
class Experiment {
public:
    explicit Experiment(ExperimentConfig config);
    Experiment(ExperimentConfig config, market::PriceSeries prices);

    [[nodiscard]] const ExperimentConfig& config() const noexcept { return config_; }
    [[nodiscard]] const market::PriceSeries& prices() const noexcept { return prices_; }
    [[nodiscard]] const std::vector<RunEntry>& entries() const noexcept { return entries_; }

    /// Hint streams for a repetition, one per configured hint level.
    [[nodiscard]] std::vector<HintStream> hints_for(std::size_t rep) const;

    /// Daily loop per entry: decide, execute at the close, mark to market.
    /// Throws std::logic_error if a trade fails to conserve value (1e-9 relative).
    [[nodiscard]] RepetitionResult run_repetition(std::size_t rep) const;

    /// All repetitions, fanned out over `threads` workers (0 = hardware).
    /// Aggregation happens in repetition order, so output is identical for
    /// every thread count.
    [[nodiscard]] ExperimentResult run(unsigned threads = 1) const;

private:
    ExperimentConfig config_;
    market::PriceSeries prices_;
    std::vector<RunEntry> entries_;
};

ExperimentResult run_experiment(const ExperimentConfig& config, unsigned threads = 1);

struct HintLevelReport {
    std::vector<StrategySummary> insider;               // ascending hint_prob
    std::vector<stats::PairedComparison> adjacent_gaps;  // level k+1 minus level k
    ExperimentResult result;
};

/// Runs Insider at every configured hint level on paired repetitions.
/// Other configured strategies run alongside for reference. Throws
/// ValidationError with fewer than two hint levels.
HintLevelReport compare_hint_levels(ExperimentConfig config, unsigned threads = 1);

}  // namespace parrondo
