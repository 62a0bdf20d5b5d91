#include "parrondo/strategies.hpp"

#include <algorithm>
#include <cctype>
#include <string>

#include "parrondo/errors.hpp"

namespace parrondo {

namespace {

std::string lower(std::string_view text) {
    std::string out(text);
    std::transform(out.begin(), out.end(), out.begin(),
                   [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
    return out;
}

std::vector<std::size_t> movers(const DecisionContext& ctx, market::Move wanted) {
    std::vector<std::size_t> out;
    for (std::size_t i = 0; i < ctx.prices.num_tickers(); ++i) {
        if (market::daily_move(ctx.prices, i, ctx.day) == wanted) out.push_back(i);
    }
    return out;
}

std::vector<std::size_t> hinted(std::span<const Hint> hints, Direction wanted) {
    std::vector<std::size_t> out;
    for (const auto& h : hints) {
        if (h.direction == wanted) out.push_back(h.ticker);
    }
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
}

bool contains(const std::vector<std::size_t>& sorted, std::size_t ticker) {
    return std::binary_search(sorted.begin(), sorted.end(), ticker);
}

std::vector<SellOrder> sell_orders(const std::vector<std::size_t>& tickers,
                                   const DailyDraws& draws) {
    std::vector<SellOrder> out;
    out.reserve(tickers.size());
    for (auto t : tickers) out.push_back({t, draws.fractions[t]});
    return out;
}

std::vector<std::size_t> tickers_of(const std::vector<SellOrder>& sells) {
    std::vector<std::size_t> out;
    for (const auto& s : sells) out.push_back(s.ticker);
    return out;
}

// Random side with the rule-derived (or already chosen) side removed.
std::vector<std::size_t> selected_except(const Selection& selection,
                                         const std::vector<std::size_t>& excluded) {
    std::vector<std::size_t> out;
    for (auto t : selection.distinct()) {
        if (!contains(excluded, t)) out.push_back(t);
    }
    return out;
}

std::vector<BuyAllocation> equal_buys(const std::vector<std::size_t>& tickers) {
    std::vector<BuyAllocation> out;
    const double w = tickers.empty() ? 0.0 : 1.0 / static_cast<double>(tickers.size());
    for (auto t : tickers) out.push_back({t, w});
    return out;
}

std::vector<BuyAllocation> weighted_buys(const std::vector<std::size_t>& tickers,
                                         const std::vector<double>& raw_weight) {
    double total = 0.0;
    for (auto t : tickers) total += raw_weight[t];
    if (!(total > 0.0)) return equal_buys(tickers);
    std::vector<BuyAllocation> out;
    for (auto t : tickers) out.push_back({t, raw_weight[t] / total});
    return out;
}

std::vector<BuyAllocation> random_buys(const DecisionContext& ctx, const DailyDraws& draws,
                                       const std::vector<std::size_t>& excluded) {
    const auto tickers = selected_except(draws.buy, excluded);
    std::vector<double> raw(ctx.prices.num_tickers(), 0.0);
    if (ctx.reinvest == ReinvestMode::holdings) {
        const auto row = ctx.prices.day_prices(ctx.day);
        for (auto t : tickers) raw[t] = ctx.portfolio.holdings[t] * row[t];
    } else {
        for (auto t : tickers) raw[t] = static_cast<double>(draws.buy.counts[t]);
    }
    return weighted_buys(tickers, raw);
}

TradeDecision assemble(std::vector<SellOrder> sells, std::vector<BuyAllocation> buys) {
    TradeDecision d{std::move(sells), std::move(buys)};
    if (!d.actionable()) return {};
    return d;
}

}  // namespace

std::string_view display_name(StrategyKind kind) {
    switch (kind) {
        case StrategyKind::bah: return "BaH";
        case StrategyKind::random: return "Random";
        case StrategyKind::insider: return "Insider";
        case StrategyKind::blsh: return "BLSH";
        case StrategyKind::blsr: return "BLSR";
        case StrategyKind::brsh: return "BRSH";
        case StrategyKind::bhsl: return "BHSL";
    }
    return "?";
}

std::string_view token(StrategyKind kind) {
    switch (kind) {
        case StrategyKind::bah: return "bah";
        case StrategyKind::random: return "random";
        case StrategyKind::insider: return "insider";
        case StrategyKind::blsh: return "blsh";
        case StrategyKind::blsr: return "blsr";
        case StrategyKind::brsh: return "brsh";
        case StrategyKind::bhsl: return "bhsl";
    }
    return "?";
}

std::optional<StrategyKind> parse_strategy(std::string_view text) {
    const auto key = lower(text);
    for (auto kind : kAllStrategies) {
        if (key == token(kind)) return kind;
    }
    return std::nullopt;
}

std::string_view to_string(ReinvestMode mode) {
    return mode == ReinvestMode::holdings ? "holdings" : "multiplicity";
}

std::optional<ReinvestMode> parse_reinvest_mode(std::string_view text) {
    const auto key = lower(text);
    if (key == "multiplicity") return ReinvestMode::multiplicity;
    if (key == "holdings") return ReinvestMode::holdings;
    return std::nullopt;
}

std::vector<std::size_t> Selection::distinct() const {
    std::vector<std::size_t> out;
    for (std::size_t i = 0; i < counts.size(); ++i) {
        if (counts[i] > 0) out.push_back(i);
    }
    return out;
}

Selection selection_from_draws(std::span<const std::uint32_t> draws, std::size_t n) {
    if (n == 0) throw ValidationError("selection universe must be non-empty");
    Selection s;
    s.counts.assign(n, 0);
    for (auto d : draws) ++s.counts[d % n];
    return s;
}

Selection random_selection(RandomStream& rng, std::size_t n) {
    if (n == 0) throw ValidationError("selection universe must be non-empty");
    Selection s;
    s.counts.assign(n, 0);
    for (std::size_t k = 0; k < n; ++k) ++s.counts[rng.next_u32() % n];
    return s;
}

HintStream::HintStream(double hint_prob, std::size_t days, std::vector<Hint> hints)
    : hint_prob_(hint_prob), hints_(std::move(hints)), offsets_(days + 1, 0) {
    std::sort(hints_.begin(), hints_.end(), [](const Hint& a, const Hint& b) {
        return a.day != b.day ? a.day < b.day : a.ticker < b.ticker;
    });
    for (std::size_t k = 0; k < hints_.size(); ++k) {
        if (hints_[k].day >= days) throw ValidationError("hint day outside the series");
        if (k > 0 && hints_[k].day == hints_[k - 1].day && hints_[k].ticker == hints_[k - 1].ticker) {
            throw ValidationError("more than one hint for a (day, ticker) pair");
        }
        ++offsets_[hints_[k].day + 1];
    }
    for (std::size_t d = 0; d < days; ++d) offsets_[d + 1] += offsets_[d];
}

std::span<const Hint> HintStream::for_day(std::size_t day) const {
    if (day + 1 >= offsets_.size()) return {};
    return std::span<const Hint>(hints_).subspan(offsets_[day], offsets_[day + 1] - offsets_[day]);
}

HintStream generate_hints(const market::PriceSeries& prices, double hint_prob,
                          RandomStream& rng) {
    if (!(hint_prob >= 0.0 && hint_prob <= 1.0)) {
        throw ValidationError("hint probability must lie in [0, 1]");
    }
    std::vector<Hint> hints;
    for (std::size_t d = 0; d + 1 < prices.days(); ++d) {
        for (std::size_t i = 0; i < prices.num_tickers(); ++i) {
            const double u = rng.uniform();
            if (u >= hint_prob) continue;
            const auto move = market::daily_move(prices, i, d + 1);
            if (move == market::Move::flat) continue;
            hints.push_back({d, i, move == market::Move::up ? Direction::up : Direction::down});
        }
    }
    return {hint_prob, prices.days(), std::move(hints)};
}

DailyDraws DailyDraws::draw(RandomStream& rng, std::size_t n) {
    DailyDraws d;
    d.sell = random_selection(rng, n);
    d.buy = random_selection(rng, n);
    d.fractions.resize(n);
    for (auto& f : d.fractions) f = rng.uniform(kMinSellFraction, kMaxSellFraction);
    return d;
}

TradeDecision decide_with(StrategyKind kind, const DecisionContext& ctx, const DailyDraws& draws) {
    using market::Move;
    const bool has_previous_move = ctx.day >= 1;

    switch (kind) {
        case StrategyKind::bah:
            return {};

        case StrategyKind::random: {
            auto sells = sell_orders(draws.sell.distinct(), draws);
            auto buys = random_buys(ctx, draws, tickers_of(sells));
            return assemble(std::move(sells), std::move(buys));
        }

        case StrategyKind::blsh:
        case StrategyKind::bhsl: {
            if (!has_previous_move) return {};
            const auto gainers = movers(ctx, Move::up);
            const auto droppers = movers(ctx, Move::down);
            const bool value = kind == StrategyKind::blsh;
            return assemble(sell_orders(value ? gainers : droppers, draws),
                            equal_buys(value ? droppers : gainers));
        }

        case StrategyKind::blsr: {
            if (!has_previous_move) return {};
            const auto droppers = movers(ctx, Move::down);
            return assemble(sell_orders(selected_except(draws.sell, droppers), draws),
                            equal_buys(droppers));
        }

        case StrategyKind::brsh: {
            if (!has_previous_move) return {};
            auto sells = sell_orders(movers(ctx, Move::up), draws);
            auto buys = random_buys(ctx, draws, tickers_of(sells));
            return assemble(std::move(sells), std::move(buys));
        }

        case StrategyKind::insider: {
            const auto up = hinted(ctx.hints, Direction::up);
            const auto down = hinted(ctx.hints, Direction::down);
            auto sells = down.empty() ? sell_orders(selected_except(draws.sell, up), draws)
                                      : sell_orders(down, draws);
            auto buys = up.empty() ? random_buys(ctx, draws, tickers_of(sells)) : equal_buys(up);
            return assemble(std::move(sells), std::move(buys));
        }
    }
    return {};
}

TradeDecision decide(StrategyKind kind, const DecisionContext& ctx, RandomStream& rng) {
    if (kind == StrategyKind::bah) return {};
    const auto draws = DailyDraws::draw(rng, ctx.prices.num_tickers());
    return decide_with(kind, ctx, draws);
}

}  // namespace parrondo
