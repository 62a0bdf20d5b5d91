#include "parrondo/portfolio.hpp"

#include <cmath>
#include <string>

#include "parrondo/errors.hpp"

namespace parrondo {

void TradeDecision::validate(std::size_t num_tickers) const {
    std::vector<char> side(num_tickers, 0);
    for (const auto& s : sells) {
        if (s.ticker >= num_tickers) {
            throw ValidationError("sell order for unknown ticker index " + std::to_string(s.ticker));
        }
        if (!(s.fraction >= kMinSellFraction && s.fraction <= kMaxSellFraction)) {
            throw ValidationError("sell fraction " + std::to_string(s.fraction) +
                                  " outside [0.2, 0.8]");
        }
        if (side[s.ticker] != 0) throw ValidationError("ticker sold twice in one decision");
        side[s.ticker] = 's';
    }
    double total = 0.0;
    for (const auto& b : buys) {
        if (b.ticker >= num_tickers) {
            throw ValidationError("buy allocation for unknown ticker index " +
                                  std::to_string(b.ticker));
        }
        if (!(b.weight >= 0.0) || !std::isfinite(b.weight)) {
            throw ValidationError("buy weight must be non-negative");
        }
        if (side[b.ticker] == 's') throw ValidationError("ticker on both sides of a decision");
        if (side[b.ticker] == 'b') throw ValidationError("ticker bought twice in one decision");
        side[b.ticker] = 'b';
        total += b.weight;
    }
    if (!buys.empty() && std::abs(total - 1.0) > 1e-9) {
        throw ValidationError("buy weights sum to " + std::to_string(total) + ", expected 1");
    }
}

Portfolio init_portfolio(const market::PriceSeries& prices, double per_stock_value) {
    if (!(per_stock_value >= 0.0) || !std::isfinite(per_stock_value)) {
        throw ValidationError("per-stock value must be non-negative");
    }
    Portfolio p;
    p.holdings.resize(prices.num_tickers());
    for (std::size_t i = 0; i < prices.num_tickers(); ++i) {
        p.holdings[i] = per_stock_value / prices.price(0, i);
    }
    return p;
}

double portfolio_value(const Portfolio& portfolio, const market::PriceSeries& prices,
                       std::size_t day) {
    const auto row = prices.day_prices(day);
    double total = portfolio.cash;
    for (std::size_t i = 0; i < row.size(); ++i) total += portfolio.holdings[i] * row[i];
    return total;
}

Portfolio execute(Portfolio portfolio, const TradeDecision& decision,
                  const market::PriceSeries& prices, std::size_t day) {
    if (portfolio.holdings.size() != prices.num_tickers()) {
        throw ValidationError("portfolio does not match the price universe");
    }
    decision.validate(prices.num_tickers());
    if (!decision.actionable()) return portfolio;

    const auto row = prices.day_prices(day);
    for (const auto& s : decision.sells) {
        const double sold = s.fraction * portfolio.holdings[s.ticker];
        portfolio.holdings[s.ticker] -= sold;
        portfolio.cash += sold * row[s.ticker];
    }
    const double proceeds = portfolio.cash;
    for (const auto& b : decision.buys) {
        portfolio.holdings[b.ticker] += b.weight * proceeds / row[b.ticker];
    }
    portfolio.cash = 0.0;
    return portfolio;
}

}  // namespace parrondo
