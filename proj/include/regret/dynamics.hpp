// Learning dynamics on the regret game: asynchronous revision where one
// uniformly chosen player updates per step, either by best response with
// inertia or by logit choice. Replications draw from counter-based streams
// keyed by (seed, replication), so runs are reproducible regardless of
// scheduling.
#pragma once

#include <cmath>
#include <cstdint>
#include <optional>
#include <thread>
#include <variant>
#include <vector>

#include "regret/errors.hpp"
#include "regret/game.hpp"
#include "regret/rng.hpp"
#include "regret/stats.hpp"

namespace regret {

struct BestResponseRule {
    double inertia = 0.0;  // probability the revising player keeps its action
};

struct LogitRule {
    double beta = 1.0;  // choice sensitivity; 0 is a fair coin
};

using RevisionRule = std::variant<BestResponseRule, LogitRule>;

struct DynamicsConfig {
    RevisionRule rule;
    int steps = 1;
    std::uint64_t seed = 0;
    int replications = 1;

    void validate() const {
        if (const auto* br = std::get_if<BestResponseRule>(&rule)) {
            if (!(br->inertia >= 0.0 && br->inertia < 1.0)) {
                throw InvalidArgument("inertia must lie in [0,1)");
            }
        } else if (std::get<LogitRule>(rule).beta < 0) {
            throw InvalidArgument("logit beta must be >= 0");
        }
        if (steps < 0) throw InvalidArgument("dynamics needs steps >= 0");
        if (replications < 1) throw InvalidArgument("dynamics needs replications >= 1");
    }
};

struct Trajectory {
    std::vector<int> risky_counts;  // one entry per step, plus the initial count
    std::optional<int> absorbed_at;
    ActionProfile terminal{0};
};

/// One revision: a uniformly chosen player updates per the rule.
/// Consumes a fixed number of draws per step so streams stay aligned.
inline ActionProfile step_dynamics(const RegretGame& game, const ActionProfile& profile,
                                   const RevisionRule& rule, rng::Stream& stream) {
    ActionProfile next = profile;
    const int i = static_cast<int>(stream.next_below(game.n_players));
    const double draw = stream.next_double();
    if (const auto* br = std::get_if<BestResponseRule>(&rule)) {
        if (draw >= br->inertia) {
            next.actions[i] = best_response(game, profile, i);
        }
    } else {
        const double beta = std::get<LogitRule>(rule).beta;
        const int others = profile.risky_count() - (profile.actions[i] == Action::Risky ? 1 : 0);
        const double delta = utility_risky(game, i) - utility_safe(game, i, others);
        const double p_risky = 1.0 / (1.0 + std::exp(-beta * delta));
        next.actions[i] = draw < p_risky ? Action::Risky : Action::Safe;
    }
    return next;
}

/// No revising player would move away.
inline bool is_rest_point(const RegretGame& game, const ActionProfile& profile) {
    for (int i = 0; i < game.n_players; ++i) {
        if (best_response(game, profile, i) != profile.actions[i]) return false;
    }
    return true;
}

/// Iterates revisions from `initial`. Best-response runs halt once the
/// profile is a rest point; identical (game, config, seed, replication)
/// yields identical trajectories.
inline Trajectory run_trajectory(const RegretGame& game, const ActionProfile& initial,
                                 const DynamicsConfig& config, int replication = 0) {
    config.validate();
    if (initial.size() != game.n_players) throw InvalidArgument("initial profile size mismatch");
    rng::Stream stream(config.seed, {0x7261656Aull, static_cast<std::uint64_t>(replication)});
    Trajectory traj;
    traj.risky_counts.push_back(initial.risky_count());
    ActionProfile profile = initial;
    const bool br_rule = std::holds_alternative<BestResponseRule>(config.rule);
    if (br_rule && is_rest_point(game, profile)) {
        traj.absorbed_at = 0;
    }
    for (int t = 0; t < config.steps && !traj.absorbed_at; ++t) {
        profile = step_dynamics(game, profile, config.rule, stream);
        traj.risky_counts.push_back(profile.risky_count());
        if (br_rule && is_rest_point(game, profile)) {
            traj.absorbed_at = t + 1;
        }
    }
    traj.terminal = profile;
    return traj;
}

struct SharesReport {
    int replications = 0;
    stats::Proportion all_safe;
    stats::Proportion all_risky;
    stats::Proportion other;
    std::vector<int> terminal_risky_counts;  // per replication, in replication order
};

/// Uniformly random action profile.
inline ActionProfile random_profile(int n_players, rng::Stream& stream) {
    ActionProfile p(n_players);
    for (int i = 0; i < n_players; ++i) {
        p.actions[i] = stream.bernoulli(0.5) ? Action::Risky : Action::Safe;
    }
    return p;
}

/// Terminal-profile shares across logit replications started from random
/// profiles. Replications run concurrently; each writes only its own slot,
/// so the result does not depend on thread count.
inline SharesReport long_run_shares(const RegretGame& game, const DynamicsConfig& config) {
    config.validate();
    if (!std::holds_alternative<LogitRule>(config.rule)) {
        throw InvalidArgument("long-run shares are defined for the logit rule");
    }
    if (config.replications < 100) {
        throw InvalidArgument("long-run shares need at least 100 replications");
    }
    const int reps = config.replications;
    std::vector<int> terminal(reps, 0);

    auto run_range = [&](int lo, int hi) {
        for (int r = lo; r < hi; ++r) {
            rng::Stream init_stream(config.seed, {0x74696E69ull, static_cast<std::uint64_t>(r)});
            const ActionProfile start = random_profile(game.n_players, init_stream);
            const Trajectory traj = run_trajectory(game, start, config, r);
            terminal[r] = traj.terminal.risky_count();
        }
    };
    const unsigned hw = std::thread::hardware_concurrency();
    const int n_threads = static_cast<int>(std::min<unsigned>(hw == 0 ? 1 : hw, 8));
    if (n_threads <= 1 || reps < 64) {
        run_range(0, reps);
    } else {
        std::vector<std::thread> workers;
        const int chunk = (reps + n_threads - 1) / n_threads;
        for (int t = 0; t < n_threads; ++t) {
            const int lo = t * chunk;
            const int hi = std::min(reps, lo + chunk);
            if (lo < hi) workers.emplace_back(run_range, lo, hi);
        }
        for (auto& w : workers) w.join();
    }

    SharesReport report;
    report.replications = reps;
    report.terminal_risky_counts = terminal;
    int n_safe = 0, n_risky = 0;
    for (int rc : terminal) {
        if (rc == 0) ++n_safe;
        if (rc == game.n_players) ++n_risky;
    }
    report.all_safe = stats::proportion(n_safe, reps);
    report.all_risky = stats::proportion(n_risky, reps);
    report.other = stats::proportion(reps - n_safe - n_risky, reps);
    return report;
}

}  // namespace regret
