#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "parrondo/market_data.hpp"
#include "parrondo/portfolio.hpp"
#include "parrondo/stream.hpp"

namespace parrondo {

enum class StrategyKind { bah, random, insider, blsh, blsr, brsh, bhsl };

/// Table order: BaH, Random, Insider, BLSH, BLSR, BRSH, BHSL.
inline constexpr std::array<StrategyKind, 7> kAllStrategies = {
    StrategyKind::bah,  StrategyKind::random, StrategyKind::insider, StrategyKind::blsh,
    StrategyKind::blsr, StrategyKind::brsh,   StrategyKind::bhsl};

/// Display name, e.g. "BLSR".
std::string_view display_name(StrategyKind kind);
/// Lower-case CLI token, e.g. "blsr".
std::string_view token(StrategyKind kind);
/// Case-insensitive token lookup.
std::optional<StrategyKind> parse_strategy(std::string_view text);

/// How proceeds are split over a randomly selected buy side.
enum class ReinvestMode {
    multiplicity,  // by how often the ticker came up in the modulo draw
    holdings,      // by the current market value held in each selected ticker
};

std::string_view to_string(ReinvestMode mode);
std::optional<ReinvestMode> parse_reinvest_mode(std::string_view text);

/// Multiset of ticker indices produced by the modulo draw, stored as counts.
struct Selection {
    std::vector<std::uint32_t> counts;

    [[nodiscard]] std::vector<std::size_t> distinct() const;
    [[nodiscard]] bool contains(std::size_t ticker) const { return counts[ticker] > 0; }

    bool operator==(const Selection&) const = default;
};

/// Reduces each draw modulo n.
Selection selection_from_draws(std::span<const std::uint32_t> draws, std::size_t n);

/// Draws exactly n 32-bit integers and reduces each modulo n.
Selection random_selection(RandomStream& rng, std::size_t n);

enum class Direction { down, up };

struct Hint {
    std::size_t day = 0;
    std::size_t ticker = 0;
    Direction direction = Direction::up;  // sign of the day -> day+1 move

    bool operator==(const Hint&) const = default;
};

/// At most one hint per (day, ticker), grouped by day.
class HintStream {
public:
    HintStream(double hint_prob, std::size_t days, std::vector<Hint> hints);

    [[nodiscard]] double hint_prob() const noexcept { return hint_prob_; }
    [[nodiscard]] std::span<const Hint> for_day(std::size_t day) const;
    [[nodiscard]] std::span<const Hint> all() const noexcept { return hints_; }
    [[nodiscard]] std::size_t size() const noexcept { return hints_.size(); }

private:
    double hint_prob_;
    std::vector<Hint> hints_;          // sorted by (day, ticker)
    std::vector<std::size_t> offsets_;  // day d occupies [offsets_[d], offsets_[d+1])
};

/**
 * For every day d in [0, T-2] and every ticker, consumes one uniform u and
 * emits a hint when u < hint_prob and the d -> d+1 move is not flat.
 *
 * Because draws are consumed identically for every probability, streams built
 * from the same RandomStream state are nested: the hints at a lower
 * probability are a subset of those at a higher one.
 */
HintStream generate_hints(const market::PriceSeries& prices, double hint_prob, RandomStream& rng);

/// Randomness consumed by a trading strategy on one day: a sell-side
/// selection, a buy-side selection, then one sell fraction per ticker.
struct DailyDraws {
    Selection sell;
    Selection buy;
    std::vector<double> fractions;  // U[0.2, 0.8)

    static DailyDraws draw(RandomStream& rng, std::size_t n);
};

struct DecisionContext {
    const market::PriceSeries& prices;
    std::size_t day = 0;
    std::span<const Hint> hints;  // hints delivered for `day`
    const Portfolio& portfolio;
    ReinvestMode reinvest = ReinvestMode::multiplicity;
};

/// Pure decision rule given the day's draws. Only prices at day-1 and day
/// are read.
TradeDecision decide_with(StrategyKind kind, const DecisionContext& ctx, const DailyDraws& draws);

/// Draws the day's randomness (nothing for BaH) and applies decide_with.
TradeDecision decide(StrategyKind kind, const DecisionContext& ctx, RandomStream& rng);

}  // namespace parrondo
