#include "parrondo/cli.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <map>
#include <ostream>
#include <sstream>

#include "parrondo/engine.hpp"
#include "parrondo/errors.hpp"
#include "parrondo/games.hpp"
#include "parrondo/market_data.hpp"
#include "parrondo/report.hpp"

namespace parrondo::cli {

namespace fs = std::filesystem;
using report::json;

namespace {

/// Bad flag values detected after CLI11 parsing.
class UsageError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

std::vector<std::string> split_list(const std::string& text) {
    std::vector<std::string> out;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
        const auto first = item.find_first_not_of(' ');
        const auto last = item.find_last_not_of(' ');
        if (first != std::string::npos) out.push_back(item.substr(first, last - first + 1));
    }
    return out;
}

std::vector<double> parse_doubles(const std::string& text, const char* flag) {
    std::vector<double> out;
    for (const auto& item : split_list(text)) {
        try {
            std::size_t used = 0;
            out.push_back(std::stod(item, &used));
            if (used != item.size()) throw std::invalid_argument(item);
        } catch (const std::exception&) {
            throw UsageError(std::string(flag) + ": '" + item + "' is not a number");
        }
    }
    return out;
}

std::vector<StrategyKind> parse_strategy_list(const std::string& text) {
    std::vector<StrategyKind> out;
    for (const auto& item : split_list(text)) {
        std::string lower = item;
        std::transform(lower.begin(), lower.end(), lower.begin(),
                       [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
        if (lower == "all") {
            for (auto k : kAllStrategies) {
                if (std::find(out.begin(), out.end(), k) == out.end()) out.push_back(k);
            }
            continue;
        }
        const auto kind = parse_strategy(item);
        if (!kind) throw UsageError("--strategies: unknown strategy '" + item + "'");
        if (std::find(out.begin(), out.end(), *kind) == out.end()) out.push_back(*kind);
    }
    if (out.empty()) throw UsageError("--strategies: empty list");
    return out;
}

std::string fixed(double value, int precision) {
    std::ostringstream os;
    os << std::fixed << std::setprecision(precision) << value;
    return os.str();
}

json output_digests(const fs::path& dir, const std::vector<std::string>& files) {
    json digests = json::object();
    for (const auto& f : files) digests[f] = "sha256:" + report::file_sha256_hex(dir / f);
    return digests;
}

void write_manifest(const fs::path& dir, const std::string& command, std::uint64_t seed,
                    json config, json options, std::string input_digest,
                    const std::vector<std::string>& outputs) {
    json manifest{{"tool", "parrondo"},
                  {"version", report::tool_version()},
                  {"command", command},
                  {"created_utc", report::utc_timestamp()},
                  {"master_seed", seed},
                  {"config", std::move(config)},
                  {"options", std::move(options)},
                  {"input_digest", std::move(input_digest)},
                  {"outputs", output_digests(dir, outputs)}};
    report::write_text_file(dir / "run_manifest.json", manifest.dump(2) + "\n");
}

// ---------------------------------------------------------------- games

struct GamesOptions {
    double epsilon = 0.005;
    double mix = 0.5;
    std::uint64_t rounds = 1'000'000;
    std::uint64_t reps = 100;
    std::uint64_t seed = 7;
    unsigned threads = 0;
    std::string out_dir;
    bool json_output = false;
};

int cmd_games(const GamesOptions& opt, std::ostream& out) {
    games::GameParams params;
    try {
        params = games::GameParams::standard(opt.epsilon, opt.mix);
    } catch (const ValidationError& e) {
        throw UsageError(e.what());
    }
    if (opt.rounds < 1 || opt.reps < 1) throw UsageError("--rounds and --reps must be >= 1");

    constexpr games::Game kGames[] = {games::Game::a, games::Game::b, games::Game::combined};
    json rows = json::array();
    bool paradox = true;
    bool agreement = true;
    std::ostringstream text;
    text << "Parrondo games: epsilon=" << market::format_double(opt.epsilon)
         << " mix=" << market::format_double(opt.mix) << " rounds=" << opt.rounds
         << " reps=" << opt.reps << " seed=" << opt.seed << "\n";
    text << std::left << std::setw(10) << "game" << std::right << std::setw(16) << "analytic"
         << std::setw(16) << "simulated" << std::setw(14) << "std_error" << std::setw(9) << "z"
         << "\n";

    for (auto game : kGames) {
        const auto exact = games::markov_drift(params, game);
        const auto sim =
            games::simulate_games(params, game, opt.rounds, opt.reps, opt.seed, opt.threads);
        const double z = sim.standard_error > 0.0
                             ? (sim.drift - exact.drift_per_round) / sim.standard_error
                             : 0.0;
        const bool within = std::abs(sim.drift - exact.drift_per_round) <= 3.0 * sim.standard_error;
        agreement = agreement && within;
        if (game == games::Game::combined) {
            paradox = paradox && sim.drift > 0.0;
        } else {
            paradox = paradox && sim.drift < 0.0;
        }
        rows.push_back({{"game", std::string(games::to_string(game))},
                        {"analytic_drift", exact.drift_per_round},
                        {"stationary", exact.stationary},
                        {"simulated_drift", sim.drift},
                        {"standard_error", sim.standard_error},
                        {"within_3se", within}});
        text << std::left << std::setw(10) << games::to_string(game) << std::right
             << std::setw(16) << fixed(exact.drift_per_round, 8) << std::setw(16)
             << fixed(sim.drift, 8) << std::setw(14) << fixed(sim.standard_error, 8)
             << std::setw(9) << fixed(z, 2) << "\n";
    }
    text << "paradox: " << (paradox ? "PASS" : "FAIL") << " (A<0, B<0, combined>0)\n";
    text << "oracle agreement: " << (agreement ? "PASS" : "FAIL")
         << " (simulated within 3 standard errors of analytic)\n";

    json config{{"epsilon", opt.epsilon}, {"mix_prob", opt.mix},  {"modulus", params.modulus},
                {"rounds", opt.rounds},   {"reps", opt.reps},     {"seed", opt.seed}};
    json doc{{"config", config}, {"games", rows}, {"paradox", paradox}, {"agreement", agreement}};

    if (opt.json_output) {
        out << doc.dump(2) << "\n";
    } else {
        out << text.str();
    }
    if (!opt.out_dir.empty()) {
        const fs::path dir(opt.out_dir);
        report::write_text_file(dir / "games.json", doc.dump(2) + "\n");
        write_manifest(dir, "games", opt.seed, config, json::object(), "", {"games.json"});
    }
    return kExitOk;
}

// ------------------------------------------------------------- simulate

struct SimulateOptions {
    std::string fixture;
    std::string data;
    std::string spec;
    std::string config_path;
    std::size_t reps = 1000;
    std::size_t days = 252;
    std::uint64_t seed = 42;
    std::string strategies = "all";
    std::string hint_probs = "0.01,0.05,0.10";
    double per_stock = 10000.0;
    std::string reinvest = "multiplicity";
    unsigned threads = 0;
    std::string out_dir = "results";
    bool json_output = false;
    bool emit_single_run = false;
};

struct SimulateFlags {
    CLI::Option* reps = nullptr;
    CLI::Option* days = nullptr;
    CLI::Option* seed = nullptr;
    CLI::Option* strategies = nullptr;
    CLI::Option* hint_probs = nullptr;
    CLI::Option* per_stock = nullptr;
    CLI::Option* reinvest = nullptr;
};

ExperimentConfig build_config(const SimulateOptions& opt, const SimulateFlags& flags,
                              bool& emit_single_run) {
    ExperimentConfig config;
    emit_single_run = opt.emit_single_run;
    const bool replay = !opt.config_path.empty();
    if (replay) {
        std::ifstream in(opt.config_path);
        if (!in) throw std::runtime_error("cannot open config '" + opt.config_path + "'");
        json j;
        try {
            j = json::parse(in);
        } catch (const json::exception& e) {
            throw ValidationError("config '" + opt.config_path + "': " + e.what());
        }
        config = report::config_from_json(j);
        if (j.contains("options")) {
            emit_single_run = emit_single_run || j["options"].value("emit_single_run", false);
        }
    }

    auto given = [&](CLI::Option* o) { return !replay || o->count() > 0; };

    if (!opt.data.empty()) {
        config.source = opt.data;
    } else if (!opt.spec.empty()) {
        std::ifstream in(opt.spec);
        if (!in) throw std::runtime_error("cannot open spec '" + opt.spec + "'");
        config.source = report::sawtooth_from_json(json::parse(in));
    } else if (!opt.fixture.empty()) {
        if (opt.fixture != "table2") {
            throw UsageError("--fixture: unknown fixture '" + opt.fixture + "'");
        }
        config.source = market::table2_spec();
    }

    if (given(flags.reps)) config.reps = opt.reps;
    if (given(flags.days)) config.days = opt.days;
    if (given(flags.seed)) config.master_seed = opt.seed;
    if (given(flags.strategies)) config.strategies = parse_strategy_list(opt.strategies);
    if (given(flags.hint_probs)) config.hint_probs = parse_doubles(opt.hint_probs, "--hint-probs");
    if (given(flags.per_stock)) config.per_stock_value = opt.per_stock;
    if (given(flags.reinvest)) {
        const auto mode = parse_reinvest_mode(opt.reinvest);
        if (!mode) throw UsageError("--reinvest: expected multiplicity or holdings");
        config.reinvest_mode = *mode;
    }
    if (config.reps == 0) throw UsageError("--reps must be >= 1");
    for (double p : config.hint_probs) {
        if (!(p >= 0.0 && p <= 1.0)) throw UsageError("--hint-probs: values must lie in [0, 1]");
    }
    return config;
}

int cmd_simulate(const SimulateOptions& opt, const SimulateFlags& flags, std::ostream& out,
                 std::ostream& err) {
    bool emit_single_run = false;
    const ExperimentConfig config = build_config(opt, flags, emit_single_run);
    const Experiment experiment(config);
    const ExperimentResult result = experiment.run(opt.threads);

    const fs::path dir(opt.out_dir);
    std::vector<std::string> outputs{"summary.csv", "trajectories.csv"};
    {
        std::ostringstream summary;
        report::write_summary_csv(summary, result);
        report::write_text_file(dir / "summary.csv", summary.str());
        std::ostringstream traj;
        report::write_trajectories_csv(traj, result);
        report::write_text_file(dir / "trajectories.csv", traj.str());
    }
    if (emit_single_run) {
        std::ostringstream single;
        report::write_single_run_csv(single, result);
        report::write_text_file(dir / "single_run.csv", single.str());
        outputs.emplace_back("single_run.csv");
    }
    const std::string input_digest =
        "sha256:" + report::sha256_hex(market::prices_to_csv(experiment.prices()));
    write_manifest(dir, "simulate", config.master_seed, report::to_json(config),
                   json{{"emit_single_run", emit_single_run}}, input_digest, outputs);

    if (opt.json_output) {
        out << report::summary_json(result).dump(2) << "\n";
        return kExitOk;
    }

    const auto ranking = result.ranking();
    out << "Mean final portfolio value over " << config.reps << " repetitions ("
        << experiment.prices().days() << " days, " << experiment.prices().num_tickers()
        << " stocks, seed " << config.master_seed << ")\n";
    out << std::left << std::setw(6) << "rank" << std::setw(16) << "strategy" << std::right
        << std::setw(14) << "mean_final" << std::setw(14) << "std_final" << std::setw(12)
        << "stderr" << "\n";
    for (std::size_t i = 0; i < ranking.size(); ++i) {
        const auto& s = ranking[i];
        out << std::left << std::setw(6) << (i + 1) << std::setw(16)
            << (std::string(display_name(s.entry.kind)) +
                (s.entry.hint_prob ? "@" + market::format_double(*s.entry.hint_prob) : ""))
            << std::right << std::setw(14) << fixed(s.mean_final, 2) << std::setw(14)
            << fixed(s.std_final, 2) << std::setw(12) << fixed(s.standard_error, 2) << "\n";
    }

    std::vector<std::size_t> insider;
    for (std::size_t e = 0; e < result.entries.size(); ++e) {
        if (result.entries[e].hint_prob) insider.push_back(e);
    }
    std::sort(insider.begin(), insider.end(), [&](std::size_t a, std::size_t b) {
        return *result.entries[a].hint_prob < *result.entries[b].hint_prob;
    });
    if (insider.size() >= 2 && config.reps >= 2) {
        out << "paired hint-level gaps (higher minus lower):\n";
        for (std::size_t k = 1; k < insider.size(); ++k) {
            const auto cmp = stats::paired_compare(result.final_values[insider[k]],
                                                   result.final_values[insider[k - 1]]);
            out << "  " << result.entries[insider[k]].label() << " - "
                << result.entries[insider[k - 1]].label() << ": " << fixed(cmp.mean_difference, 2)
                << " (se " << fixed(cmp.standard_error, 2) << ", t " << fixed(cmp.t_statistic, 2)
                << ")\n";
        }
    }
    err << "wrote " << (dir / "summary.csv").string() << ", " << (dir / "trajectories.csv").string()
        << ", " << (dir / "run_manifest.json").string() << "\n";
    return kExitOk;
}

// ------------------------------------------------------------- gen-data

struct GenDataOptions {
    std::string tickers;
    std::string endpoints;
    std::size_t days = 252;
    double amplitude = 0.0;
    double period = 0.0;
    std::uint64_t seed = 0;
    std::string start_date;
    std::string out_dir = ".";
    std::string csv_name = "table2_sawtooth.csv";
    std::string spec_name = "table2_spec.json";
    bool json_output = false;
};

int cmd_gen_data(const GenDataOptions& opt, std::ostream& out, std::ostream& err) {
    market::SawtoothSpec spec = market::table2_spec();
    if (!opt.tickers.empty()) spec.tickers = split_list(opt.tickers);
    if (!opt.endpoints.empty()) spec.endpoints = parse_doubles(opt.endpoints, "--endpoints");
    if (!opt.tickers.empty() && opt.endpoints.empty()) {
        throw UsageError("--tickers requires --endpoints");
    }
    if (opt.tickers.empty() && !opt.endpoints.empty() &&
        spec.endpoints.size() != spec.tickers.size()) {
        spec.tickers.clear();
        for (std::size_t i = 0; i < spec.endpoints.size(); ++i) {
            spec.tickers.push_back("S" + std::to_string(i + 1));
        }
    }
    spec.days = opt.days;
    spec.amplitude = opt.amplitude;
    spec.period = opt.period;
    spec.seed = opt.seed;
    spec.start_date = opt.start_date;
    // The calibration note only describes the unmodified table2 spec.
    if (!(spec == market::table2_spec())) spec.note.clear();
    try {
        spec.validate_receding();
    } catch (const ValidationError& e) {
        throw UsageError(e.what());
    }

    const auto series = market::generate_sawtooth(spec);
    const std::string csv = market::prices_to_csv(series);
    const std::string spec_text = report::to_json(spec).dump(2) + "\n";

    const fs::path dir(opt.out_dir);
    report::write_text_file(dir / opt.csv_name, csv);
    report::write_text_file(dir / opt.spec_name, spec_text);
    write_manifest(dir, "gen-data", spec.seed, report::to_json(spec), json::object(), "",
                   {opt.csv_name, opt.spec_name});

    if (opt.json_output) {
        out << json{{"csv", (dir / opt.csv_name).string()},
                    {"spec", report::to_json(spec)},
                    {"sha256", report::sha256_hex(csv)}}
                   .dump(2)
            << "\n";
    } else {
        out << "wrote " << series.days() << " days x " << series.num_tickers() << " tickers to "
            << (dir / opt.csv_name).string() << "\n";
    }
    (void)err;
    return kExitOk;
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Parrondo coin games and artificial-trader market experiments", "parrondo"};
    app.require_subcommand(1);
    app.set_version_flag("--version", report::tool_version());

    GamesOptions games_opt;
    auto* games = app.add_subcommand("games", "Coin games A, B and their random mixture");
    games->add_option("--epsilon", games_opt.epsilon, "Coin bias epsilon in [0, 0.1)")
        ->capture_default_str();
    games->add_option("--mix", games_opt.mix, "Probability of playing game A in the mixture")
        ->capture_default_str();
    games->add_option("--rounds", games_opt.rounds, "Rounds per repetition")->capture_default_str();
    games->add_option("--reps", games_opt.reps, "Repetitions")->capture_default_str();
    games->add_option("--seed", games_opt.seed, "Master seed")->capture_default_str();
    games->add_option("--threads", games_opt.threads, "Worker threads (0 = all cores)")
        ->capture_default_str();
    games->add_option("--out", games_opt.out_dir, "Write games.json and run_manifest.json here");
    games->add_flag("--json", games_opt.json_output, "Print the report as JSON");

    SimulateOptions sim_opt;
    SimulateFlags sim_flags;
    auto* simulate = app.add_subcommand("simulate", "Run the multi-strategy trading experiment");
    auto* fixture = simulate->add_option("--fixture", sim_opt.fixture,
                                         "Built-in synthetic market (table2)");
    auto* data = simulate->add_option("--data", sim_opt.data, "Price CSV (date,ticker,close)");
    auto* spec = simulate->add_option("--spec", sim_opt.spec, "Saw-tooth spec JSON");
    fixture->excludes(data)->excludes(spec);
    data->excludes(spec);
    simulate->add_option("--config", sim_opt.config_path,
                         "ExperimentConfig JSON or a run_manifest.json to replay");
    sim_flags.reps = simulate->add_option("--reps", sim_opt.reps, "Repetitions")
                         ->capture_default_str();
    sim_flags.days = simulate->add_option("--days", sim_opt.days, "Trading days (0 = all)")
                         ->capture_default_str();
    sim_flags.seed = simulate->add_option("--seed", sim_opt.seed, "Master seed")
                         ->capture_default_str();
    sim_flags.strategies =
        simulate->add_option("--strategies", sim_opt.strategies,
                             "Comma list of bah,random,insider,blsh,blsr,brsh,bhsl or 'all'")
            ->capture_default_str();
    sim_flags.hint_probs =
        simulate->add_option("--hint-probs", sim_opt.hint_probs, "Insider hint probabilities")
            ->capture_default_str();
    sim_flags.per_stock =
        simulate->add_option("--per-stock", sim_opt.per_stock, "Initial value held per stock")
            ->capture_default_str();
    sim_flags.reinvest =
        simulate->add_option("--reinvest", sim_opt.reinvest,
                             "Random buy-side weights: multiplicity or holdings")
            ->capture_default_str();
    simulate->add_option("--threads", sim_opt.threads, "Worker threads (0 = all cores)")
        ->capture_default_str();
    simulate->add_option("--out", sim_opt.out_dir, "Output directory")->capture_default_str();
    simulate->add_flag("--json", sim_opt.json_output, "Print the ranking as JSON");
    simulate->add_flag("--emit-single-run", sim_opt.emit_single_run,
                       "Also write single_run.csv for repetition 0");

    const auto defaults = market::table2_spec();
    GenDataOptions gen_opt;
    gen_opt.days = defaults.days;
    gen_opt.amplitude = defaults.amplitude;
    gen_opt.period = defaults.period;
    gen_opt.seed = defaults.seed;
    gen_opt.start_date = defaults.start_date;
    auto* gen = app.add_subcommand("gen-data", "Write a synthetic receding saw-tooth price CSV");
    gen->add_option("--tickers", gen_opt.tickers, "Comma list of ticker names");
    gen->add_option("--endpoints", gen_opt.endpoints, "Comma list of terminal values in (0, 100)");
    gen->add_option("--days", gen_opt.days, "Trading days")->capture_default_str();
    gen->add_option("--amplitude", gen_opt.amplitude, "Log-space oscillation amplitude")
        ->capture_default_str();
    gen->add_option("--period", gen_opt.period, "Days per tooth")->capture_default_str();
    gen->add_option("--seed", gen_opt.seed, "Noise and phase seed")->capture_default_str();
    gen->add_option("--start-date", gen_opt.start_date, "First date (YYYY-MM-DD)")
        ->capture_default_str();
    gen->add_option("--out", gen_opt.out_dir, "Output directory")->capture_default_str();
    gen->add_option("--csv-name", gen_opt.csv_name, "CSV file name")->capture_default_str();
    gen->add_option("--spec-name", gen_opt.spec_name, "Spec JSON file name")->capture_default_str();
    gen->add_flag("--json", gen_opt.json_output, "Print a JSON description");

    std::vector<std::string> reversed(args.rbegin(), args.rend());
    try {
        app.parse(reversed);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? kExitOk : kExitUsage;
    }

    try {
        if (games->parsed()) return cmd_games(games_opt, out);
        if (simulate->parsed()) return cmd_simulate(sim_opt, sim_flags, out, err);
        if (gen->parsed()) return cmd_gen_data(gen_opt, out, err);
    } catch (const UsageError& e) {
        err << "usage error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const ParseError& e) {
        err << "parse error: " << e.what() << "\n";
        return kExitFailure;
    } catch (const ValidationError& e) {
        err << "validation error: " << e.what() << "\n";
        return kExitFailure;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return kExitFailure;
    }
    return kExitUsage;
}

}  // namespace parrondo::cli
