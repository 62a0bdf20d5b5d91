#include "parrondo/games.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "parrondo/errors.hpp"
#include "parrondo/parallel.hpp"
#include "parrondo/stream.hpp"

namespace parrondo::games {

namespace {

constexpr double kMaxEpsilon = 0.1;

bool is_probability(double p) { return p >= 0.0 && p <= 1.0; }

// Solves A x = b in place; A is row-major n x n.
std::vector<double> solve_linear(std::vector<double> a, std::vector<double> b) {
    const std::size_t n = b.size();
    for (std::size_t col = 0; col < n; ++col) {
        std::size_t pivot = col;
        for (std::size_t row = col + 1; row < n; ++row) {
            if (std::abs(a[row * n + col]) > std::abs(a[pivot * n + col])) pivot = row;
        }
        if (std::abs(a[pivot * n + col]) < 1e-300) {
            throw ValidationError("markov_drift: singular stationary system");
        }
        if (pivot != col) {
            for (std::size_t k = 0; k < n; ++k) std::swap(a[col * n + k], a[pivot * n + k]);
            std::swap(b[col], b[pivot]);
        }
        for (std::size_t row = col + 1; row < n; ++row) {
            const double factor = a[row * n + col] / a[col * n + col];
            if (factor == 0.0) continue;
            for (std::size_t k = col; k < n; ++k) a[row * n + k] -= factor * a[col * n + k];
            b[row] -= factor * b[col];
        }
    }
    std::vector<double> x(n);
    for (std::size_t i = n; i-- > 0;) {
        double acc = b[i];
        for (std::size_t k = i + 1; k < n; ++k) acc -= a[i * n + k] * x[k];
        x[i] = acc / a[i * n + i];
    }
    return x;
}

struct RunningMoments {
    std::uint64_t n = 0;
    double mean = 0.0;
    double m2 = 0.0;

    void add(double x) {
        ++n;
        const double delta = x - mean;
        mean += delta / static_cast<double>(n);
        m2 += delta * (x - mean);
    }
    [[nodiscard]] double standard_error() const {
        if (n < 2) return 0.0;
        return std::sqrt(m2 / static_cast<double>(n - 1) / static_cast<double>(n));
    }
};

}  // namespace

std::string_view to_string(Game game) {
    switch (game) {
        case Game::a: return "A";
        case Game::b: return "B";
        case Game::combined: return "combined";
    }
    return "?";
}

std::optional<Game> parse_game(std::string_view token) {
    std::string lower(token);
    std::transform(lower.begin(), lower.end(), lower.begin(),
                   [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
    if (lower == "a") return Game::a;
    if (lower == "b") return Game::b;
    if (lower == "combined" || lower == "ab" || lower == "mix") return Game::combined;
    return std::nullopt;
}

GameParams GameParams::standard(double epsilon, double mix_prob, int modulus) {
    GameParams p;
    p.epsilon = epsilon;
    p.coin_a_win = 0.5 - epsilon;
    p.coin_b_bad_win = 0.10 - epsilon;
    p.coin_b_good_win = 0.75 - epsilon;
    p.modulus = modulus;
    p.mix_prob = mix_prob;
    p.validate();
    return p;
}

void GameParams::validate() const {
    if (!(epsilon >= 0.0 && epsilon < kMaxEpsilon)) {
        throw ValidationError("epsilon must lie in [0, 0.1), got " + std::to_string(epsilon));
    }
    if (!is_probability(coin_a_win) || !is_probability(coin_b_bad_win) ||
        !is_probability(coin_b_good_win)) {
        throw ValidationError("coin probabilities must lie in [0, 1]");
    }
    if (!is_probability(mix_prob)) {
        throw ValidationError("mix_prob must lie in [0, 1]");
    }
    if (modulus < 1) {
        throw ValidationError("modulus must be a positive integer");
    }
}

double GameParams::win_probability(Game game, int residue) const {
    const double b = residue == 0 ? coin_b_bad_win : coin_b_good_win;
    switch (game) {
        case Game::a: return coin_a_win;
        case Game::b: return b;
        case Game::combined: return mix_prob * coin_a_win + (1.0 - mix_prob) * b;
    }
    return 0.0;
}

int capital_residue(std::int64_t capital, int modulus) {
    const auto m = static_cast<std::int64_t>(modulus);
    return static_cast<int>(((capital % m) + m) % m);
}

GameState play_game_a(const GameParams& params, GameState state, double rand) {
    state.capital += rand < params.coin_a_win ? 1 : -1;
    ++state.rounds_played;
    return state;
}

GameState play_game_b(const GameParams& params, GameState state, double rand) {
    const bool divisible = capital_residue(state.capital, params.modulus) == 0;
    const double win = divisible ? params.coin_b_bad_win : params.coin_b_good_win;
    state.capital += rand < win ? 1 : -1;
    ++state.rounds_played;
    return state;
}

GameState play_combined(const GameParams& params, GameState state, double rand_choice,
                        double rand_flip) {
    return rand_choice < params.mix_prob ? play_game_a(params, state, rand_flip)
                                         : play_game_b(params, state, rand_flip);
}

DriftReport markov_drift(const GameParams& params, Game game) {
    params.validate();
    const int states = game == Game::a ? 1 : params.modulus;

    std::vector<double> win(static_cast<std::size_t>(states));
    for (int s = 0; s < states; ++s) {
        win[s] = params.win_probability(game, s);
        if (win[s] <= 0.0 || win[s] >= 1.0) {
            throw ValidationError("markov_drift: win probability " + std::to_string(win[s]) +
                                  " in state " + std::to_string(s) +
                                  " makes the chain non-ergodic");
        }
    }

    DriftReport report;
    if (states == 1) {
        report.stationary = {1.0};
    } else {
        // Transition matrix P, then solve (P^T - I) pi = 0 with the last
        // equation replaced by sum(pi) = 1.
        const auto n = static_cast<std::size_t>(states);
        std::vector<double> p(n * n, 0.0);
        for (std::size_t s = 0; s < n; ++s) {
            p[s * n + (s + 1) % n] += win[s];
            p[s * n + (s + n - 1) % n] += 1.0 - win[s];
        }
        std::vector<double> a(n * n, 0.0);
        for (std::size_t i = 0; i < n; ++i) {
            for (std::size_t j = 0; j < n; ++j) {
                a[i * n + j] = p[j * n + i] - (i == j ? 1.0 : 0.0);
            }
        }
        std::vector<double> b(n, 0.0);
        for (std::size_t j = 0; j < n; ++j) a[(n - 1) * n + j] = 1.0;
        b[n - 1] = 1.0;
        report.stationary = solve_linear(std::move(a), std::move(b));
    }

    double drift = 0.0;
    for (std::size_t s = 0; s < report.stationary.size(); ++s) {
        drift += report.stationary[s] * (2.0 * win[s] - 1.0);
    }
    report.drift_per_round = drift;
    return report;
}

DriftEstimate simulate_games(const GameParams& params, Game game, std::uint64_t rounds,
                             std::uint64_t reps, std::uint64_t seed, unsigned threads) {
    params.validate();
    if (rounds < 1 || reps < 1) {
        throw ValidationError("simulate_games: rounds and reps must be >= 1");
    }

    // With one repetition the standard error comes from batch means.
    const std::uint64_t batches = reps == 1 ? std::min<std::uint64_t>(20, rounds) : 1;
    std::vector<std::vector<double>> per_rep(reps);

    parallel_for(reps, threads, [&](std::size_t rep) {
        RandomStream rng = split_stream(seed, {std::string_view("games"), to_string(game),
                                               static_cast<std::uint64_t>(rep)});
        GameState state;
        std::vector<double> batch_drifts;
        batch_drifts.reserve(batches);
        std::int64_t batch_start_capital = 0;
        std::uint64_t batch_start_round = 0;
        for (std::uint64_t b = 0; b < batches; ++b) {
            const std::uint64_t end = rounds * (b + 1) / batches;
            for (std::uint64_t r = batch_start_round; r < end; ++r) {
                switch (game) {
                    case Game::a: state = play_game_a(params, state, rng.uniform()); break;
                    case Game::b: state = play_game_b(params, state, rng.uniform()); break;
                    case Game::combined: {
                        const double choice = rng.uniform();
                        state = play_combined(params, state, choice, rng.uniform());
                        break;
                    }
                }
            }
            batch_drifts.push_back(static_cast<double>(state.capital - batch_start_capital) /
                                   static_cast<double>(end - batch_start_round));
            batch_start_capital = state.capital;
            batch_start_round = end;
        }
        batch_drifts.push_back(static_cast<double>(state.capital) / static_cast<double>(rounds));
        per_rep[rep] = std::move(batch_drifts);
    });

    DriftEstimate estimate;
    estimate.rounds = rounds;
    estimate.reps = reps;
    if (reps == 1) {
        const auto& only = per_rep.front();
        RunningMoments moments;
        for (std::size_t i = 0; i + 1 < only.size(); ++i) moments.add(only[i]);
        estimate.drift = only.back();
        estimate.standard_error = moments.standard_error();
    } else {
        RunningMoments moments;
        for (const auto& rep : per_rep) moments.add(rep.back());
        estimate.drift = moments.mean;
        estimate.standard_error = moments.standard_error();
    }
    return estimate;
}

}  // namespace parrondo::games
