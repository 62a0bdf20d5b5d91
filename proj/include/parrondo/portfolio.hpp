#pragma once

#include <cstddef>
#include <vector>

#include "parrondo/market_data.hpp"

namespace parrondo {

inline constexpr double kMinSellFraction = 0.2;
inline constexpr double kMaxSellFraction = 0.8;

/// Share holdings per ticker (fractional shares allowed). Cash is zero at the
/// end of every day because sale proceeds are reinvested immediately.
struct Portfolio {
    std::vector<double> holdings;
    double cash = 0.0;

    bool operator==(const Portfolio&) const = default;
};

struct SellOrder {
    std::size_t ticker = 0;
    double fraction = 0.0;  // share of the position sold, in [0.2, 0.8]

    bool operator==(const SellOrder&) const = default;
};

struct BuyAllocation {
    std::size_t ticker = 0;
    double weight = 0.0;  // share of the day's proceeds

    bool operator==(const BuyAllocation&) const = default;
};

/// One day's trade. Only actionable when both sides are non-empty;
/// otherwise the strategy holds.
struct TradeDecision {
    std::vector<SellOrder> sells;
    std::vector<BuyAllocation> buys;

    [[nodiscard]] bool actionable() const noexcept { return !sells.empty() && !buys.empty(); }

    /// Throws ValidationError on a ticker >= num_tickers, a fraction outside
    /// [0.2, 0.8], a negative weight, weights not summing to 1 (1e-9), a
    /// ticker repeated on one side, or a ticker on both sides.
    void validate(std::size_t num_tickers) const;

    bool operator==(const TradeDecision&) const = default;
};

/// holdings[i] = per_stock_value / prices[0][i].
Portfolio init_portfolio(const market::PriceSeries& prices, double per_stock_value = 10000.0);

/// Mark-to-market value at the close of `day`.
double portfolio_value(const Portfolio& portfolio, const market::PriceSeries& prices,
                       std::size_t day);

/**
 * Executes a decision at the close of `day`: each sell (i, p) realises
 * p * holdings[i] * price[i], the pooled proceeds are spent on the buy side by
 * weight, and cash ends at zero. Same-day portfolio value is unchanged.
 * Non-actionable decisions return the portfolio untouched.
 */
Portfolio execute(Portfolio portfolio, const TradeDecision& decision,
                  const market::PriceSeries& prices, std::size_t day);

}  // namespace parrondo
