#include "parrondo/market_data.hpp"

#include <charconv>
#include <chrono>
#include <cmath>
#include <fstream>
#include <istream>
#include <map>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <unordered_map>
#include <unordered_set>

#include "parrondo/errors.hpp"
#include "parrondo/stream.hpp"

namespace parrondo::market {

namespace {

std::string_view trim(std::string_view s) {
    const auto first = s.find_first_not_of(" \t\r");
    if (first == std::string_view::npos) return {};
    const auto last = s.find_last_not_of(" \t\r");
    return s.substr(first, last - first + 1);
}

std::optional<std::chrono::year_month_day> parse_iso_date(std::string_view s) {
    if (s.size() != 10 || s[4] != '-' || s[7] != '-') return std::nullopt;
    int y = 0;
    unsigned m = 0;
    unsigned d = 0;
    auto ok = [](std::string_view part, auto& value) {
        auto [ptr, ec] = std::from_chars(part.data(), part.data() + part.size(), value);
        return ec == std::errc{} && ptr == part.data() + part.size();
    };
    if (!ok(s.substr(0, 4), y) || !ok(s.substr(5, 2), m) || !ok(s.substr(8, 2), d)) {
        return std::nullopt;
    }
    std::chrono::year_month_day ymd{std::chrono::year{y}, std::chrono::month{m},
                                    std::chrono::day{d}};
    if (!ymd.ok()) return std::nullopt;
    return ymd;
}

std::string format_iso_date(std::chrono::year_month_day ymd) {
    char buf[16];
    std::snprintf(buf, sizeof buf, "%04d-%02u-%02u", static_cast<int>(ymd.year()),
                  static_cast<unsigned>(ymd.month()), static_cast<unsigned>(ymd.day()));
    return buf;
}

std::vector<std::string> weekday_dates(std::string_view start, std::size_t count) {
    const auto ymd = parse_iso_date(start);
    if (!ymd) throw ValidationError("invalid start date '" + std::string(start) + "'");
    std::chrono::sys_days day{*ymd};
    std::vector<std::string> dates;
    dates.reserve(count);
    while (dates.size() < count) {
        const std::chrono::weekday wd{day};
        if (wd != std::chrono::Saturday && wd != std::chrono::Sunday) {
            dates.push_back(format_iso_date(std::chrono::year_month_day{day}));
        }
        day += std::chrono::days{1};
    }
    return dates;
}

// Triangle wave with unit period: -1 at integers, +1 at half-integers.
double triangle(double x) {
    const double frac = x - std::floor(x);
    return 1.0 - 4.0 * std::abs(frac - 0.5);
}

}  // namespace

std::string_view to_string(Move move) {
    switch (move) {
        case Move::down: return "down";
        case Move::flat: return "flat";
        case Move::up: return "up";
    }
    return "?";
}

PriceSeries::PriceSeries(std::vector<std::string> tickers, std::vector<std::string> dates,
                         std::vector<double> prices)
    : tickers_(std::move(tickers)), dates_(std::move(dates)), prices_(std::move(prices)) {
    if (tickers_.empty()) throw ValidationError("price series needs at least one ticker");
    if (dates_.empty()) throw ValidationError("price series needs at least one day");
    if (prices_.size() != tickers_.size() * dates_.size()) {
        throw ValidationError("price matrix size does not match days x tickers");
    }
    std::unordered_set<std::string_view> seen;
    for (const auto& t : tickers_) {
        if (t.empty()) throw ValidationError("empty ticker name");
        if (!seen.insert(t).second) throw ValidationError("duplicate ticker '" + t + "'");
    }
    for (std::size_t i = 0; i < prices_.size(); ++i) {
        const double p = prices_[i];
        if (!std::isfinite(p) || p <= 0.0) {
            throw ValidationError("price for " + tickers_[i % tickers_.size()] + " on " +
                                  dates_[i / tickers_.size()] + " must be positive, got " +
                                  format_double(p));
        }
    }
}

std::optional<std::size_t> PriceSeries::find_ticker(std::string_view name) const {
    for (std::size_t i = 0; i < tickers_.size(); ++i) {
        if (tickers_[i] == name) return i;
    }
    return std::nullopt;
}

PriceSeries PriceSeries::first_days(std::size_t count) const {
    if (count == 0 || count > days()) {
        throw ValidationError("requested " + std::to_string(count) + " days from a " +
                              std::to_string(days()) + "-day series");
    }
    std::vector<std::string> dates(dates_.begin(), dates_.begin() + static_cast<long>(count));
    std::vector<double> prices(prices_.begin(),
                               prices_.begin() + static_cast<long>(count * num_tickers()));
    return {tickers_, std::move(dates), std::move(prices)};
}

void SawtoothSpec::validate() const {
    if (tickers.empty()) throw ValidationError("sawtooth spec needs at least one ticker");
    if (tickers.size() != endpoints.size()) {
        throw ValidationError("sawtooth spec: tickers and endpoints differ in length");
    }
    for (double e : endpoints) {
        if (!std::isfinite(e) || e <= 0.0) {
            throw ValidationError("sawtooth endpoint must be positive, got " + format_double(e));
        }
    }
    if (days < 2) throw ValidationError("sawtooth spec needs at least 2 days");
    if (!(amplitude >= 0.0 && amplitude < 0.2)) {
        throw ValidationError("sawtooth amplitude must lie in [0, 0.2), got " +
                              format_double(amplitude));
    }
    if (!(period > 0.0) || !std::isfinite(period)) {
        throw ValidationError("sawtooth period must be positive");
    }
    if (!parse_iso_date(start_date)) {
        throw ValidationError("invalid start date '" + start_date + "'");
    }
}

void SawtoothSpec::validate_receding() const {
    validate();
    for (std::size_t i = 0; i < endpoints.size(); ++i) {
        if (!(endpoints[i] > 0.0 && endpoints[i] < 100.0)) {
            throw ValidationError("endpoint for " + tickers[i] + " must lie in (0, 100), got " +
                                  format_double(endpoints[i]));
        }
    }
}

SawtoothSpec table2_spec() {
    SawtoothSpec spec;
    spec.tickers = {"ABB",      "Allgon",   "Boliden", "EneaData",  "HennesMauritz",
                    "Ericsson", "OM",       "Scania",  "Securitas", "Skandia"};
    spec.endpoints = {83.33, 24.55, 37.19, 20.09, 60.40, 36.36, 48.67, 77.80, 80.35, 53.22};
    spec.days = 252;
    spec.amplitude = 0.013;
    spec.period = 5.0;
    spec.seed = 20000301;
    spec.start_date = "2000-03-01";
    spec.note =
        "amplitude calibrated once and frozen: mean final BLSR/BaH ratio 1.126 over 1000 "
        "repetitions (master seed 42) against a target of 1.135; amplitude 0.0135 gives 1.144";
    return spec;
}

PriceSeries load_prices(std::istream& in) {
    std::string line;
    std::size_t line_no = 0;

    if (!std::getline(in, line)) throw ParseError(1, "empty input, expected header");
    ++line_no;
    {
        std::string_view header = trim(line);
        if (header.size() >= 3 && header.substr(0, 3) == "\xEF\xBB\xBF") header.remove_prefix(3);
        if (header != "date,ticker,close") {
            throw ParseError(line_no, "expected header 'date,ticker,close'");
        }
    }

    struct Row {
        std::string date;
        std::size_t ticker;
        double close;
        std::size_t line;
    };
    std::vector<Row> rows;
    std::vector<std::string> tickers;
    std::unordered_map<std::string, std::size_t> ticker_index;

    while (std::getline(in, line)) {
        ++line_no;
        const std::string_view text = trim(line);
        if (text.empty()) continue;

        std::string_view fields[3];
        std::size_t start = 0;
        std::size_t count = 0;
        for (;;) {
            const auto comma = text.find(',', start);
            const auto field = trim(text.substr(start, comma == std::string_view::npos
                                                           ? std::string_view::npos
                                                           : comma - start));
            if (count == 3) throw ParseError(line_no, "expected 3 fields");
            fields[count++] = field;
            if (comma == std::string_view::npos) break;
            start = comma + 1;
        }
        if (count != 3) throw ParseError(line_no, "expected 3 fields");
        if (!parse_iso_date(fields[0])) {
            throw ParseError(line_no, "invalid ISO-8601 date '" + std::string(fields[0]) + "'");
        }
        if (fields[1].empty()) throw ParseError(line_no, "empty ticker");

        double close = 0.0;
        const auto* first = fields[2].data();
        const auto* last = first + fields[2].size();
        if (!fields[2].empty() && *first == '+') ++first;
        auto [ptr, ec] = std::from_chars(first, last, close);
        if (fields[2].empty() || ec != std::errc{} || ptr != last) {
            throw ParseError(line_no, "invalid price '" + std::string(fields[2]) + "'");
        }
        if (!std::isfinite(close) || close <= 0.0) {
            throw ValidationError("line " + std::to_string(line_no) +
                                  ": price must be positive, got '" + std::string(fields[2]) +
                                  "'");
        }

        std::string ticker(fields[1]);
        auto [it, inserted] = ticker_index.try_emplace(ticker, tickers.size());
        if (inserted) tickers.push_back(ticker);
        rows.push_back({std::string(fields[0]), it->second, close, line_no});
    }

    if (tickers.empty()) throw ValidationError("no price rows");

    std::map<std::string, std::size_t> date_index;
    for (const auto& r : rows) date_index.emplace(r.date, 0);
    if (date_index.size() < 2) throw ValidationError("price file needs at least 2 days");
    std::vector<std::string> dates;
    dates.reserve(date_index.size());
    for (auto& [date, idx] : date_index) {
        idx = dates.size();
        dates.push_back(date);
    }

    const std::size_t n = tickers.size();
    std::vector<double> prices(dates.size() * n, 0.0);
    std::vector<bool> filled(prices.size(), false);
    for (const auto& r : rows) {
        const std::size_t cell = date_index.at(r.date) * n + r.ticker;
        if (filled[cell]) {
            throw ValidationError("line " + std::to_string(r.line) + ": duplicate row for (" +
                                  r.date + ", " + tickers[r.ticker] + ")");
        }
        filled[cell] = true;
        prices[cell] = r.close;
    }
    for (std::size_t cell = 0; cell < filled.size(); ++cell) {
        if (!filled[cell]) {
            throw ValidationError("missing price for (" + dates[cell / n] + ", " +
                                  tickers[cell % n] + ")");
        }
    }
    return {std::move(tickers), std::move(dates), std::move(prices)};
}

PriceSeries load_prices_file(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open price file '" + path.string() + "'");
    return load_prices(in);
}

std::string format_double(double value) {
    char buf[64];
    const double magnitude = std::abs(value);
    const bool plain = magnitude == 0.0 || (magnitude >= 1e-4 && magnitude < 1e15);
    const auto [ptr, ec] = plain ? std::to_chars(buf, buf + sizeof buf, value, std::chars_format::fixed)
                                 : std::to_chars(buf, buf + sizeof buf, value);
    if (ec != std::errc{}) throw std::runtime_error("format_double: conversion failed");
    return {buf, ptr};
}

void write_prices(std::ostream& out, const PriceSeries& series) {
    out << "date,ticker,close\n";
    for (std::size_t d = 0; d < series.days(); ++d) {
        for (std::size_t i = 0; i < series.num_tickers(); ++i) {
            out << series.dates()[d] << ',' << series.tickers()[i] << ','
                << format_double(series.price(d, i)) << '\n';
        }
    }
}

std::string prices_to_csv(const PriceSeries& series) {
    std::ostringstream out;
    write_prices(out, series);
    return out.str();
}

PriceSeries normalize(const PriceSeries& series, double base) {
    if (!(base > 0.0) || !std::isfinite(base)) {
        throw ValidationError("normalization base must be positive");
    }
    const std::size_t n = series.num_tickers();
    std::vector<double> prices(series.raw().begin(), series.raw().end());
    for (std::size_t i = 0; i < n; ++i) {
        const double first = series.price(0, i);
        if (first == base) continue;
        const double scale = base / first;
        prices[i] = base;
        for (std::size_t d = 1; d < series.days(); ++d) prices[d * n + i] *= scale;
    }
    return {series.tickers(), series.dates(), std::move(prices)};
}

PriceSeries generate_sawtooth(const SawtoothSpec& spec) {
    spec.validate();
    const std::size_t days = spec.days;
    const std::size_t n = spec.tickers.size();
    const double last = static_cast<double>(days - 1);
    const double sigma = spec.amplitude / 3.0;

    RandomStream rng = split_stream(spec.seed, {std::string_view("sawtooth")});
    std::vector<double> phase(n);
    for (auto& p : phase) p = rng.uniform();

    std::vector<double> prices(days * n);
    std::vector<double> deviation(days);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t d = 0; d < days; ++d) {
            const double wave = triangle(static_cast<double>(d) / spec.period + phase[i]);
            deviation[d] = spec.amplitude * wave + sigma * rng.normal();
        }
        const double head = deviation.front();
        const double tail = deviation.back();
        const double log_growth = std::log(spec.endpoints[i] / 100.0) / last;
        for (std::size_t d = 0; d < days; ++d) {
            const double t = static_cast<double>(d);
            const double bridged = deviation[d] - head * (1.0 - t / last) - tail * (t / last);
            prices[d * n + i] = 100.0 * std::exp(log_growth * t + bridged);
        }
        prices[i] = 100.0;
        prices[(days - 1) * n + i] = spec.endpoints[i];
    }
    return {spec.tickers, weekday_dates(spec.start_date, days), std::move(prices)};
}

Move daily_move(const PriceSeries& series, std::size_t ticker, std::size_t day) {
    if (day == 0 || day >= series.days()) {
        throw std::out_of_range("daily_move: day " + std::to_string(day) +
                                " outside [1, " + std::to_string(series.days()) + ")");
    }
    if (ticker >= series.num_tickers()) {
        throw std::out_of_range("daily_move: ticker index out of range");
    }
    const double now = series.price(day, ticker);
    const double before = series.price(day - 1, ticker);
    if (now > before) return Move::up;
    if (now < before) return Move::down;
    return Move::flat;
}

}  // namespace parrondo::market
