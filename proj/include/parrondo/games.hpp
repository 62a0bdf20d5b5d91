#pragma once

#include <cstdint>
#include <optional>
#include <string_view>
#include <vector>

namespace parrondo::games {

enum class Game { a, b, combined };

std::string_view to_string(Game game);
std::optional<Game> parse_game(std::string_view token);

/**
 * Coin probabilities for games A and B and the mixing rule.
 *
 * Game A flips one coin. Game B flips the "bad" coin when the capital is
 * divisible by `modulus` and the "good" coin otherwise. The combined game
 * picks A with probability `mix_prob`, else B.
 */
struct GameParams {
    double epsilon = 0.005;
    double coin_a_win = 0.495;
    double coin_b_bad_win = 0.095;
    double coin_b_good_win = 0.745;
    int modulus = 3;
    double mix_prob = 0.5;

    /// Standard parameterisation: 0.5 - eps, 0.10 - eps, 0.75 - eps.
    /// Throws ValidationError when eps is outside [0, 0.1).
    static GameParams standard(double epsilon, double mix_prob = 0.5, int modulus = 3);

    /// Checks probabilities lie in [0, 1], modulus >= 1, and for the
    /// standard parameterisation that epsilon lies in [0, 0.1).
    void validate() const;

    /// Win probability of `game` when the capital residue is `residue`.
    /// For the combined game this is the mixture of A and B.
    [[nodiscard]] double win_probability(Game game, int residue) const;
};

struct GameState {
    std::int64_t capital = 0;
    std::uint64_t rounds_played = 0;
};

/// Mathematical (non-negative) residue, so -3 is divisible by 3.
int capital_residue(std::int64_t capital, int modulus);

GameState play_game_a(const GameParams& params, GameState state, double rand);
GameState play_game_b(const GameParams& params, GameState state, double rand);

/// rand_choice selects the game (A iff rand_choice < mix_prob), rand_flip
/// decides the coin. Both draws are always consumed.
GameState play_combined(const GameParams& params, GameState state, double rand_choice,
                        double rand_flip);

struct DriftReport {
    std::vector<double> stationary;
    double drift_per_round = 0.0;
};

/**
 * Exact long-run drift from the residue Markov chain.
 *
 * State s moves to s+1 with probability w(s) and to s-1 otherwise (mod
 * modulus); game A is a single-state chain. The stationary vector is the
 * solution of pi P = pi, sum(pi) = 1, found by Gaussian elimination with
 * partial pivoting. Throws ValidationError if any w(s) is 0 or 1.
 */
DriftReport markov_drift(const GameParams& params, Game game);

struct DriftEstimate {
    double drift = 0.0;
    double standard_error = 0.0;
    std::uint64_t rounds = 0;
    std::uint64_t reps = 0;
};

/**
 * Monte Carlo estimate of drift per round: mean over reps of
 * capital / rounds. The standard error is taken across repetitions; with a
 * single repetition it falls back to batch means within that run.
 *
 * Repetition i draws from split_stream(seed, {"games", <game>, i}), so the
 * result is independent of `threads`.
 */
DriftEstimate simulate_games(const GameParams& params, Game game, std::uint64_t rounds,
                             std::uint64_t reps, std::uint64_t seed, unsigned threads = 1);

}  // namespace parrondo::games
