#include <gtest/gtest.h>

#include <cmath>

#include "parrondo/errors.hpp"
#include "parrondo/market_data.hpp"
#include "parrondo/portfolio.hpp"
#include "parrondo/stream.hpp"

using namespace parrondo;
using market::PriceSeries;

namespace {

PriceSeries flat_series(std::size_t n, double price, std::size_t days = 2) {
    std::vector<std::string> tickers;
    for (std::size_t i = 0; i < n; ++i) tickers.push_back("S" + std::to_string(i));
    std::vector<std::string> dates;
    for (std::size_t d = 0; d < days; ++d) dates.push_back("d" + std::to_string(d));
    return {tickers, dates, std::vector<double>(n * days, price)};
}

// Random valid decision: disjoint sides, fractions in range, weights summing to 1.
TradeDecision random_decision(RandomStream& rng, std::size_t n) {
    std::vector<int> side(n);
    for (auto& s : side) s = static_cast<int>(rng.next_u32() % 3);  // 0 none, 1 sell, 2 buy
    TradeDecision d;
    double total = 0.0;
    std::vector<double> raw(n, 0.0);
    for (std::size_t i = 0; i < n; ++i) {
        if (side[i] == 1) d.sells.push_back({i, rng.uniform(kMinSellFraction, kMaxSellFraction)});
        if (side[i] == 2) {
            raw[i] = rng.uniform(0.01, 1.0);
            total += raw[i];
        }
    }
    for (std::size_t i = 0; i < n; ++i) {
        if (side[i] == 2) d.buys.push_back({i, raw[i] / total});
    }
    return d;
}

}  // namespace

TEST(InitPortfolio, TenNormalizedStocks) {
    const auto prices = flat_series(10, 100.0);
    const auto p = init_portfolio(prices, 10000.0);
    for (double h : p.holdings) EXPECT_EQ(h, 100.0);
    EXPECT_EQ(p.cash, 0.0);
    EXPECT_EQ(portfolio_value(p, prices, 0), 100000.0);
}

TEST(InitPortfolio, SingleStockAndDegenerate) {
    const auto prices = flat_series(1, 50.0);
    EXPECT_EQ(init_portfolio(prices, 10000.0).holdings[0], 200.0);
    const auto empty = init_portfolio(prices, 0.0);
    EXPECT_EQ(portfolio_value(empty, prices, 0), 0.0);
    EXPECT_THROW(init_portfolio(prices, -1.0), ValidationError);
}

TEST(PortfolioValue, BuyAndHoldOnFixture) {
    const auto prices = market::load_prices_file(std::string(PARRONDO_FIXTURE_DIR) +
                                                 "/table2_sawtooth.csv");
    const auto p = init_portfolio(prices, 10000.0);
    EXPECT_NEAR(portfolio_value(p, prices, prices.days() - 1), 52196.00, 1e-6);
}

TEST(PortfolioValue, LinearInPrices) {
    const PriceSeries base({"A", "B"}, {"d0", "d1"}, {10.0, 20.0, 11.0, 19.0});
    const PriceSeries doubled({"A", "B"}, {"d0", "d1"}, {20.0, 40.0, 22.0, 38.0});
    const Portfolio p{{3.0, 7.0}, 0.0};
    EXPECT_DOUBLE_EQ(portfolio_value(p, doubled, 1), 2.0 * portfolio_value(p, base, 1));
}

TEST(Execute, SellHalfIntoCheaperStock) {
    const PriceSeries prices({"A", "B"}, {"d0", "d1"}, {10.0, 5.0, 10.0, 5.0});
    const Portfolio before{{100.0, 0.0}, 0.0};
    const TradeDecision d{{{0, 0.5}}, {{1, 1.0}}};
    const auto after = execute(before, d, prices, 0);
    EXPECT_EQ(after.holdings[0], 50.0);
    EXPECT_EQ(after.holdings[1], 100.0);
    EXPECT_EQ(after.cash, 0.0);
    EXPECT_EQ(portfolio_value(after, prices, 0), portfolio_value(before, prices, 0));
}

TEST(Execute, NonActionableDecisionHolds) {
    const auto prices = flat_series(3, 10.0);
    const Portfolio before{{1.5, 2.5, 3.5}, 0.0};
    EXPECT_EQ(execute(before, TradeDecision{}, prices, 0), before);
    EXPECT_EQ(execute(before, TradeDecision{{}, {{1, 1.0}}}, prices, 0), before);
    EXPECT_EQ(execute(before, TradeDecision{{{0, 0.5}}, {}}, prices, 0), before);
}

TEST(Execute, RejectsInvalidDecisions) {
    const auto prices = flat_series(3, 10.0);
    const Portfolio p{{1.0, 1.0, 1.0}, 0.0};
    EXPECT_THROW(execute(p, {{{5, 0.5}}, {{1, 1.0}}}, prices, 0), ValidationError);
    EXPECT_THROW(execute(p, {{{0, 0.5}}, {{7, 1.0}}}, prices, 0), ValidationError);
    EXPECT_THROW(execute(p, {{{0, 0.9}}, {{1, 1.0}}}, prices, 0), ValidationError);
    EXPECT_THROW(execute(p, {{{0, 0.1}}, {{1, 1.0}}}, prices, 0), ValidationError);
    EXPECT_THROW(execute(p, {{{0, 0.5}}, {{0, 1.0}}}, prices, 0), ValidationError);
    EXPECT_THROW(execute(p, {{{0, 0.5}}, {{1, 0.5}}}, prices, 0), ValidationError);
    EXPECT_THROW(execute(p, {{{0, 0.5}, {0, 0.5}}, {{1, 1.0}}}, prices, 0), ValidationError);
    EXPECT_THROW(execute(Portfolio{{1.0}, 0.0}, {{{0, 0.5}}, {{1, 1.0}}}, prices, 0),
                 ValidationError);
}

TEST(Execute, RandomDecisionsConserveValue) {
    RandomStream rng(2718);
    for (int trial = 0; trial < 2000; ++trial) {
        const std::size_t n = 2 + rng.next_u32() % 12;
        std::vector<std::string> tickers;
        for (std::size_t i = 0; i < n; ++i) tickers.push_back("S" + std::to_string(i));
        std::vector<double> raw(2 * n);
        for (auto& p : raw) p = std::exp(rng.uniform(-3.0, 6.0));
        const PriceSeries prices(tickers, {"d0", "d1"}, raw);

        Portfolio p;
        for (std::size_t i = 0; i < n; ++i) p.holdings.push_back(std::exp(rng.uniform(-4.0, 8.0)));
        const auto decision = random_decision(rng, n);
        const std::size_t day = rng.next_u32() % 2;
        const double before = portfolio_value(p, prices, day);
        const auto after = execute(p, decision, prices, day);
        const double value_after = portfolio_value(after, prices, day);
        ASSERT_LE(std::abs(value_after - before), 1e-9 * before);
        ASSERT_EQ(after.cash, 0.0);
        for (double h : after.holdings) ASSERT_GE(h, 0.0);
        if (!decision.actionable()) ASSERT_EQ(after, p);
    }
}
