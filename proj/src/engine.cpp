#include "parrondo/engine.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "parrondo/errors.hpp"
#include "parrondo/parallel.hpp"
#include "parrondo/portfolio.hpp"
#include "parrondo/stream.hpp"

namespace parrondo {

namespace {

constexpr double kConservationTolerance = 1e-9;

RandomStream hint_stream(std::uint64_t seed, std::size_t rep) {
    return split_stream(seed, {std::string_view("rep"), static_cast<std::uint64_t>(rep),
                               std::string_view("hints")});
}

RandomStream strategy_stream(std::uint64_t seed, std::size_t rep, StrategyKind kind) {
    return split_stream(seed, {std::string_view("rep"), static_cast<std::uint64_t>(rep),
                               std::string_view("strategy"), token(kind)});
}

}  // namespace

void ExperimentConfig::validate() const {
    if (reps == 0) throw ValidationError("reps must be >= 1");
    if (days == 1) throw ValidationError("an experiment needs at least 2 days");
    if (!(per_stock_value >= 0.0) || !std::isfinite(per_stock_value)) {
        throw ValidationError("per-stock value must be non-negative");
    }
    if (strategies.empty()) throw ValidationError("no strategies configured");
    for (std::size_t i = 0; i < strategies.size(); ++i) {
        for (std::size_t j = 0; j < i; ++j) {
            if (strategies[i] == strategies[j]) {
                throw ValidationError("strategy '" + std::string(token(strategies[i])) +
                                      "' listed twice");
            }
        }
    }
    for (std::size_t i = 0; i < hint_probs.size(); ++i) {
        if (!(hint_probs[i] >= 0.0 && hint_probs[i] <= 1.0)) {
            throw ValidationError("hint probabilities must lie in [0, 1]");
        }
        for (std::size_t j = 0; j < i; ++j) {
            if (hint_probs[i] == hint_probs[j]) throw ValidationError("hint probability repeated");
        }
    }
    const bool has_insider =
        std::find(strategies.begin(), strategies.end(), StrategyKind::insider) != strategies.end();
    if (has_insider && hint_probs.empty()) {
        throw ValidationError("insider requires at least one hint probability");
    }
    if (const auto* spec = std::get_if<market::SawtoothSpec>(&source)) spec->validate();
}

std::string RunEntry::label() const {
    std::string out(token(kind));
    if (hint_prob) out += "@" + market::format_double(*hint_prob);
    return out;
}

std::vector<RunEntry> expand_entries(const ExperimentConfig& config) {
    std::vector<RunEntry> entries;
    for (auto kind : config.strategies) {
        if (kind == StrategyKind::insider) {
            for (double p : config.hint_probs) entries.push_back({kind, p});
        } else {
            entries.push_back({kind, std::nullopt});
        }
    }
    return entries;
}

market::PriceSeries resolve_prices(const ExperimentConfig& config) {
    market::PriceSeries series = std::visit(
        [](const auto& src) -> market::PriceSeries {
            using T = std::decay_t<decltype(src)>;
            if constexpr (std::is_same_v<T, std::string>) {
                return market::load_prices_file(src);
            } else {
                return market::generate_sawtooth(src);
            }
        },
        config.source);
    if (config.days == 0 || config.days == series.days()) return series;
    if (config.days > series.days()) {
        throw ValidationError("configured " + std::to_string(config.days) +
                              " days but the price source has only " +
                              std::to_string(series.days()));
    }
    return series.first_days(config.days);
}

Experiment::Experiment(ExperimentConfig config)
    : Experiment(config, resolve_prices(config)) {}

Experiment::Experiment(ExperimentConfig config, market::PriceSeries prices)
    : config_(std::move(config)), prices_(std::move(prices)) {
    config_.validate();
    if (prices_.days() < 2) throw ValidationError("an experiment needs at least 2 days");
    entries_ = expand_entries(config_);
}

std::vector<HintStream> Experiment::hints_for(std::size_t rep) const {
    std::vector<HintStream> streams;
    streams.reserve(config_.hint_probs.size());
    for (double p : config_.hint_probs) {
        RandomStream rng = hint_stream(config_.master_seed, rep);
        streams.push_back(generate_hints(prices_, p, rng));
    }
    return streams;
}

RepetitionResult Experiment::run_repetition(std::size_t rep) const {
    const bool needs_hints = std::any_of(entries_.begin(), entries_.end(),
                                         [](const RunEntry& e) { return e.hint_prob.has_value(); });
    const auto hints = needs_hints ? hints_for(rep) : std::vector<HintStream>{};
    const std::size_t days = prices_.days();

    RepetitionResult result;
    result.trajectories.reserve(entries_.size());
    for (const auto& entry : entries_) {
        const HintStream* stream = nullptr;
        if (entry.hint_prob) {
            const auto it = std::find(config_.hint_probs.begin(), config_.hint_probs.end(),
                                      *entry.hint_prob);
            stream = &hints[static_cast<std::size_t>(it - config_.hint_probs.begin())];
        }

        RandomStream rng = strategy_stream(config_.master_seed, rep, entry.kind);
        Portfolio portfolio = init_portfolio(prices_, config_.per_stock_value);
        std::vector<double> trajectory(days);

        for (std::size_t day = 0; day < days; ++day) {
            const double before = portfolio_value(portfolio, prices_, day);
            const DecisionContext ctx{prices_, day,
                                      stream ? stream->for_day(day) : std::span<const Hint>{},
                                      portfolio, config_.reinvest_mode};
            const TradeDecision decision = decide(entry.kind, ctx, rng);
            if (decision.actionable()) {
                portfolio = execute(std::move(portfolio), decision, prices_, day);
            }
            const double after = portfolio_value(portfolio, prices_, day);
            if (std::abs(after - before) > kConservationTolerance * std::abs(before)) {
                throw std::logic_error("trade on day " + std::to_string(day) + " by " +
                                       entry.label() + " did not conserve value");
            }
            trajectory[day] = after;
        }
        result.trajectories.push_back(std::move(trajectory));
    }
    return result;
}

ExperimentResult Experiment::run(unsigned threads) const {
    const std::size_t reps = config_.reps;
    const std::size_t days = prices_.days();
    std::vector<RepetitionResult> per_rep(reps);
    parallel_for(reps, threads, [&](std::size_t rep) { per_rep[rep] = run_repetition(rep); });

    ExperimentResult out;
    out.entries = entries_;
    out.single_run = per_rep.front().trajectories;
    out.final_values.assign(entries_.size(), std::vector<double>(reps));
    for (std::size_t e = 0; e < entries_.size(); ++e) {
        StrategySummary summary;
        summary.entry = entries_[e];
        summary.mean_trajectory.assign(days, 0.0);
        for (std::size_t rep = 0; rep < reps; ++rep) {
            const auto& traj = per_rep[rep].trajectories[e];
            for (std::size_t d = 0; d < days; ++d) summary.mean_trajectory[d] += traj[d];
            out.final_values[e][rep] = traj.back();
        }
        for (auto& v : summary.mean_trajectory) v /= static_cast<double>(reps);
        const auto s = stats::summarize(out.final_values[e]);
        summary.mean_final = s.mean;
        summary.std_final = s.std_dev;
        summary.standard_error = s.standard_error;
        out.summaries.push_back(std::move(summary));
    }
    return out;
}

std::vector<StrategySummary> ExperimentResult::ranking() const {
    auto sorted = summaries;
    std::stable_sort(sorted.begin(), sorted.end(),
                     [](const StrategySummary& a, const StrategySummary& b) {
                         return a.mean_final > b.mean_final;
                     });
    return sorted;
}

std::size_t ExperimentResult::entry_index(const std::string& label) const {
    for (std::size_t i = 0; i < entries.size(); ++i) {
        if (entries[i].label() == label) return i;
    }
    throw std::out_of_range("no run entry labelled '" + label + "'");
}

stats::PairedComparison ExperimentResult::paired(const std::string& a, const std::string& b) const {
    return stats::paired_compare(final_values[entry_index(a)], final_values[entry_index(b)]);
}

ExperimentResult run_experiment(const ExperimentConfig& config, unsigned threads) {
    return Experiment(config).run(threads);
}

HintLevelReport compare_hint_levels(ExperimentConfig config, unsigned threads) {
    if (config.hint_probs.size() < 2) {
        throw ValidationError("comparing hint levels needs at least two probabilities");
    }
    if (std::find(config.strategies.begin(), config.strategies.end(), StrategyKind::insider) ==
        config.strategies.end()) {
        config.strategies.push_back(StrategyKind::insider);
    }

    HintLevelReport report;
    report.result = run_experiment(config, threads);

    std::vector<std::size_t> order;
    for (std::size_t e = 0; e < report.result.entries.size(); ++e) {
        if (report.result.entries[e].hint_prob) order.push_back(e);
    }
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        return *report.result.entries[a].hint_prob < *report.result.entries[b].hint_prob;
    });
    for (std::size_t k = 0; k < order.size(); ++k) {
        report.insider.push_back(report.result.summaries[order[k]]);
        if (k > 0) {
            report.adjacent_gaps.push_back(stats::paired_compare(
                report.result.final_values[order[k]], report.result.final_values[order[k - 1]]));
        }
    }
    return report;
}

}  // namespace parrondo
