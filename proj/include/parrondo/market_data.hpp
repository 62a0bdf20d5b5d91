#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace parrondo::market {

enum class Move { down, flat, up };

std::string_view to_string(Move move);

/**
 * Daily close prices for a fixed ticker universe, stored day-major.
 *
 * Dates are ISO-8601 labels only; the simulation works on day indices
 * 0..days()-1 and day 0 is the normalization base.
 */
class PriceSeries {
public:
    /// Throws ValidationError unless dimensions agree, there is at least one
    /// ticker and one day, tickers are unique and all prices are finite and > 0.
    PriceSeries(std::vector<std::string> tickers, std::vector<std::string> dates,
                std::vector<double> prices);

    [[nodiscard]] std::size_t days() const noexcept { return dates_.size(); }
    [[nodiscard]] std::size_t num_tickers() const noexcept { return tickers_.size(); }
    [[nodiscard]] const std::vector<std::string>& tickers() const noexcept { return tickers_; }
    [[nodiscard]] const std::vector<std::string>& dates() const noexcept { return dates_; }

    [[nodiscard]] double price(std::size_t day, std::size_t ticker) const {
        return prices_[day * tickers_.size() + ticker];
    }
    [[nodiscard]] std::span<const double> day_prices(std::size_t day) const {
        return {prices_.data() + day * tickers_.size(), tickers_.size()};
    }
    [[nodiscard]] std::span<const double> raw() const noexcept { return prices_; }

    [[nodiscard]] std::optional<std::size_t> find_ticker(std::string_view name) const;

    /// The first `count` days. Throws ValidationError if count is 0 or too large.
    [[nodiscard]] PriceSeries first_days(std::size_t count) const;

    bool operator==(const PriceSeries&) const = default;

private:
    std::vector<std::string> tickers_;
    std::vector<std::string> dates_;
    std::vector<double> prices_;
};

/// Parameters of a synthetic receding saw-tooth market.
struct SawtoothSpec {
    std::vector<std::string> tickers;
    std::vector<double> endpoints;  // terminal normalized value per ticker
    std::size_t days = 252;
    double amplitude = 0.03;        // log-space half height of the zig-zag
    double period = 5.0;            // days per tooth
    std::uint64_t seed = 0;
    std::string start_date = "2000-03-01";
    std::string note;  // free-form provenance, carried into the spec JSON

    /// Structural checks: matching sizes, endpoints > 0, days >= 2,
    /// amplitude in [0, 0.2), period > 0, valid start date.
    void validate() const;

    /// Additionally requires every endpoint to lie strictly inside (0, 100).
    void validate_receding() const;

    bool operator==(const SawtoothSpec&) const = default;
};

/// Ten-stock receding market with the terminal values of the March 2000 -
/// March 2001 Stockholm portfolio, and the frozen oscillation calibration
/// used for the committed fixture.
SawtoothSpec table2_spec();

/**
 * Reads `date,ticker,close` CSV. Tickers keep first-appearance order; rows
 * may come in any order and are arranged by ascending date.
 *
 * Throws ParseError (with line number) for malformed rows and
 * ValidationError for non-positive prices, duplicate (date, ticker) pairs,
 * missing cells, or fewer than two days.
 */
PriceSeries load_prices(std::istream& in);
PriceSeries load_prices_file(const std::filesystem::path& path);

/// Writes `date,ticker,close` rows in (day, ticker) order using the shortest
/// decimal form that round-trips each double.
void write_prices(std::ostream& out, const PriceSeries& series);
std::string prices_to_csv(const PriceSeries& series);

/// Scales every ticker so its day-0 price equals `base`; day 0 is set to
/// `base` exactly so normalization is idempotent.
PriceSeries normalize(const PriceSeries& series, double base = 100.0);

/**
 * Geometric trend from 100 to each endpoint, multiplied by a log-space
 * triangle wave (per-ticker seeded phase) and Gaussian noise with
 * sigma = amplitude / 3. The oscillation is bridged to zero at both ends, so
 * day 0 is exactly 100 and the last day is exactly the endpoint. Dates are
 * consecutive weekdays from start_date.
 */
PriceSeries generate_sawtooth(const SawtoothSpec& spec);

/// Sign of prices[day] - prices[day-1]. Throws std::out_of_range unless
/// 1 <= day < days() and ticker < num_tickers().
Move daily_move(const PriceSeries& series, std::size_t ticker, std::size_t day);

/// Shortest round-trip decimal representation, in plain notation for
/// magnitudes in [1e-4, 1e15).
std::string format_double(double value);

}  // namespace parrondo::market
