// Synthetic experiment harness. Model agents with regret/rejoice
// preferences are run through the two-part protocol: BDM threshold
// elicitation under full and withheld feedback, a partner-dependent
// elicitation, the three two-player game decisions (dominant-safe,
// dominant-risky, coordination) with repeated play of the coordination
// round, and the one-shot find-out variant. Emits per-round records plus
// the summary tables.
#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <optional>
#include <string>
#include <thread>
#include <utility>
#include <vector>

#include "regret/decide.hpp"
#include "regret/errors.hpp"
#include "regret/game.hpp"
#include "regret/money.hpp"
#include "regret/rng.hpp"
#include "regret/stats.hpp"

namespace regret::xp {

struct BeliefRule {
    enum class Kind { Cournot, Fixed };
    Kind kind = Kind::Cournot;
    double fixed_prob = 0.5;  // Fixed only

    static BeliefRule cournot() { return {Kind::Cournot, 0.0}; }
    static BeliefRule fixed(double prob) {
        if (!(prob >= 0.0 && prob <= 1.0)) throw InvalidArgument("fixed belief must lie in [0,1]");
        return {Kind::Fixed, prob};
    }
};

struct SyntheticAgent {
    RegretPreference pref;
    UtilityFunction u = UtilityFunction::linear();
    BeliefRule belief = BeliefRule::cournot();
    double noise = 0.0;  // tremble probability

    void validate() const {
        if (!(noise >= 0.0 && noise < 0.5)) throw InvalidArgument("choice noise must lie in [0,0.5)");
    }
};

struct SessionConfig {
    std::vector<SyntheticAgent> population;
    std::vector<Money> grid;  // ascending money grid for the threshold decisions
    Money safe_value = Money::from_cents(500);
    double p = 0.5;
    int rounds_d6 = 20;
    std::uint64_t seed = 0;
    int replications = 1;

    static std::vector<Money> default_grid() {
        std::vector<Money> g;
        for (int v = 5; v <= 15; ++v) g.push_back(Money::from_cents(v * 100));
        return g;
    }

    void validate() const {
        if (population.empty() || population.size() % 2 != 0) {
            throw InvalidArgument("session population must be nonempty and even");
        }
        for (const auto& a : population) a.validate();
        if (grid.size() < 2) throw InvalidArgument("session grid needs at least two values");
        for (std::size_t i = 1; i < grid.size(); ++i) {
            if (!(grid[i - 1] < grid[i])) throw InvalidArgument("session grid must be ascending");
        }
        if (!(p > 0.0 && p < 1.0)) throw InvalidArgument("session p must lie in (0,1)");
        if (rounds_d6 < 1) throw InvalidArgument("session needs at least one coordination round");
        if (replications < 1) throw InvalidArgument("session needs replications >= 1");
    }

    /// Never-switch sentinel: one grid step past the top.
    Money no_switch_value() const {
        const Money step = grid.size() >= 2 ? grid[grid.size() - 1] - grid[grid.size() - 2]
                                            : Money::from_cents(100);
        return grid.back() + step;
    }
};

enum class AgentType { RegretAverse, RegretNeutral, RejoiceLover };

inline const char* to_string(AgentType t) {
    switch (t) {
        case AgentType::RegretAverse: return "regret_averse";
        case AgentType::RegretNeutral: return "regret_neutral";
        case AgentType::RejoiceLover: return "rejoice_lover";
    }
    return "?";
}

/// Type label from the two elicited thresholds: a higher threshold without
/// feedback marks regret aversion, a lower one rejoice love.
inline AgentType classify_type(Money x1, Money x2) {
    if (x2 > x1) return AgentType::RegretAverse;
    if (x2 < x1) return AgentType::RejoiceLover;
    return AgentType::RegretNeutral;
}

namespace detail {

/// BDM threshold mapped onto the extended grid (sentinel for no switch).
inline Money threshold_or_sentinel(const SyntheticAgent& agent, const SessionConfig& cfg,
                                   double q) {
    const auto x = bdm_threshold(agent.pref, agent.u, cfg.p, cfg.safe_value, cfg.grid, q);
    return x ? *x : cfg.no_switch_value();
}

/// +/- one grid step with probability epsilon, clamped to the extended grid.
/// Draws are consumed unconditionally to keep streams aligned.
inline Money perturb(Money x, const SessionConfig& cfg, double epsilon, rng::Stream& stream) {
    const bool tremble = stream.bernoulli(epsilon);
    const bool up = stream.bernoulli(0.5);
    if (!tremble) return x;
    std::vector<Money> extended = cfg.grid;
    extended.push_back(cfg.no_switch_value());
    auto it = std::lower_bound(extended.begin(), extended.end(), x);
    if (it == extended.end() || *it != x) return x;  // off-grid: leave untouched
    if (up) {
        return (it + 1 == extended.end()) ? x : *(it + 1);
    }
    return (it == extended.begin()) ? x : *(it - 1);
}

/// Probability that the grid draw selects the lottery for a participant
/// who reported threshold x (draw at or above x plays the lottery).
inline double lottery_play_prob(Money x, const SessionConfig& cfg) {
    int at_or_above = 0;
    for (Money g : cfg.grid) {
        if (g >= x) ++at_or_above;
    }
    return static_cast<double>(at_or_above) / static_cast<double>(cfg.grid.size());
}

inline Action tremble(Action a, double epsilon, rng::Stream& stream) {
    const bool flip = stream.bernoulli(epsilon);
    if (!flip) return a;
    return a == Action::Risky ? Action::Safe : Action::Risky;
}

}  // namespace detail

/// Decision 1 and 2 thresholds: full feedback (q=1) and withheld feedback
/// (q=0), each perturbed by one grid step with the agent's tremble
/// probability.
inline std::pair<Money, Money> elicit_thresholds(const SyntheticAgent& agent,
                                                 const SessionConfig& cfg, rng::Stream& stream) {
    const Money x1 = detail::perturb(detail::threshold_or_sentinel(agent, cfg, 1.0), cfg,
                                     agent.noise, stream);
    const Money x2 = detail::perturb(detail::threshold_or_sentinel(agent, cfg, 0.0), cfg,
                                     agent.noise, stream);
    return {x1, x2};
}

/// Decision 3 threshold under belief `b` that the partner plays the
/// lottery: the agent expects feedback with probability b.
inline Money decision3_threshold(const SyntheticAgent& agent, double b, const SessionConfig& cfg) {
    if (!(b >= 0.0 && b <= 1.0)) throw InvalidArgument("belief must lie in [0,1]");
    return detail::threshold_or_sentinel(agent, cfg, b);
}

/// Best response in the two-player game with the agent's own high outcome,
/// believing the partner plays risky with probability b. Feedback arrives
/// exactly when the partner plays risky, so the subjective learning
/// probability equals b. Ties go to risky.
inline Action myopic_choice(const SyntheticAgent& agent, Money high, double b,
                            const SessionConfig& cfg) {
    const TwoLotteryUtils utils{agent.u(Money::from_cents(0)), agent.u(cfg.safe_value),
                                agent.u(high)};
    const double eu_r = eu_risky_two_lottery(utils, cfg.p, agent.pref);
    const double eu_s = eu_safe_two_lottery(utils, cfg.p, b, agent.pref);
    return eu_r >= eu_s ? Action::Risky : Action::Safe;
}

struct ThresholdRecord {
    int session = 0;  // replication index
    int agent = 0;
    Money x1, x2, x3;
    double d3_belief = 0;  // believed probability the partner plays the lottery
    Money d3_guess;        // believed partner threshold behind that probability
    AgentType type = AgentType::RegretNeutral;
};

struct RoundRecord {
    int session = 0;
    int group = 0;
    int pair = 0;
    int round = 0;        // 1-based within the pair's game sequence
    int decision_id = 0;  // 4, 5, then 6..(5 + rounds_d6)
    int agent = 0;
    AgentType type = AgentType::RegretNeutral;
    Action choice = Action::Safe;
    double belief = 0;  // believed probability the partner plays risky
    bool past_regret = false;
    Money payoff;
};

struct SessionResult {
    std::vector<ThresholdRecord> thresholds;
    std::vector<RoundRecord> rounds;
};

namespace detail {

struct PairContext {
    int session = 0;
    int group = 0;
    int pair = 0;
    std::array<int, 2> agent_ids{};
    std::array<const SyntheticAgent*, 2> agents{};
    std::array<Money, 2> x1{}, x2{};
    std::array<AgentType, 2> types{};
};

/// Prior for the first round of a decision: the probability the agent
/// itself would play risky in this round's game under an even belief,
/// folding in its own tremble rate.
inline double self_projection_prior(const SyntheticAgent& agent, Money high,
                                    const SessionConfig& cfg) {
    const Action a = myopic_choice(agent, high, 0.5, cfg);
    const double pr = a == Action::Risky ? 1.0 : 0.0;
    return pr * (1.0 - agent.noise) + (1.0 - pr) * agent.noise;
}

/// Plays one decision for the pair, appends both records, and returns the
/// chosen actions.
inline std::array<Action, 2> play_round(const PairContext& ctx, int round, int decision_id,
                                        const std::array<Money, 2>& highs,
                                        const std::array<double, 2>& beliefs,
                                        const std::array<bool, 2>& past_regret, bool success,
                                        const SessionConfig& cfg, rng::Stream& stream,
                                        std::vector<RoundRecord>& out) {
    std::array<Action, 2> actions{};
    for (int s = 0; s < 2; ++s) {
        actions[s] = tremble(myopic_choice(*ctx.agents[s], highs[s], beliefs[s], cfg),
                             ctx.agents[s]->noise, stream);
    }
    for (int s = 0; s < 2; ++s) {
        RoundRecord r;
        r.session = ctx.session;
        r.group = ctx.group;
        r.pair = ctx.pair;
        r.round = round;
        r.decision_id = decision_id;
        r.agent = ctx.agent_ids[s];
        r.type = ctx.types[s];
        r.choice = actions[s];
        r.belief = beliefs[s];
        r.past_regret = past_regret[s];
        r.payoff = actions[s] == Action::Risky ? (success ? highs[s] : Money::from_cents(0))
                                               : cfg.safe_value;
        out.push_back(r);
    }
    return actions;
}

/// The game block for one fixed pair: the dominant-safe decision (own
/// high = x1 - 2), the dominant-risky decision (x2 + 2), and rounds_d6
/// repetitions of the coordination decision (high = (x1 + x2) / 2).
/// Beliefs follow the agent's rule: the first round of each decision uses
/// a self-projection prior; later coordination rounds repeat the partner's
/// last action. `successes` holds the per-round lottery draw, common to
/// all participants of the session.
inline void play_pair(const PairContext& ctx, const SessionConfig& cfg,
                      const std::vector<bool>& successes, rng::Stream& stream,
                      std::vector<RoundRecord>& out) {
    if (static_cast<int>(successes.size()) < 2 + cfg.rounds_d6) {
        throw InvalidArgument("not enough success draws for the round schedule");
    }
    const Money two = Money::from_cents(200);
    const std::array<Money, 2> d4{ctx.x1[0] - two, ctx.x1[1] - two};
    const std::array<Money, 2> d5{ctx.x2[0] + two, ctx.x2[1] + two};
    const std::array<Money, 2> d6{midpoint(ctx.x1[0], ctx.x2[0]), midpoint(ctx.x1[1], ctx.x2[1])};

    auto belief_for = [&](int s, const std::array<Money, 2>& highs,
                          std::optional<Action> partner_last) {
        const SyntheticAgent& agent = *ctx.agents[s];
        if (agent.belief.kind == BeliefRule::Kind::Fixed) return agent.belief.fixed_prob;
        if (partner_last) return *partner_last == Action::Risky ? 1.0 : 0.0;
        return self_projection_prior(agent, highs[s], cfg);
    };

    int round = 1;
    for (const auto& highs : {d4, d5}) {
        const std::array<double, 2> beliefs{belief_for(0, highs, std::nullopt),
                                            belief_for(1, highs, std::nullopt)};
        play_round(ctx, round, round == 1 ? 4 : 5, highs, beliefs, {false, false},
                   successes[round - 1], cfg, stream, out);
        ++round;
    }

    std::array<std::optional<Action>, 2> partner_last{};
    std::array<Action, 2> prev_actions{};
    bool prev_success = false;
    for (int rep = 0; rep < cfg.rounds_d6; ++rep) {
        const bool success = successes[round - 1];
        const std::array<double, 2> beliefs{belief_for(0, d6, partner_last[0]),
                                            belief_for(1, d6, partner_last[1])};
        std::array<bool, 2> past_regret{false, false};
        if (rep > 0) {
            for (int s = 0; s < 2; ++s) {
                const Action mine = prev_actions[s];
                const Action theirs = prev_actions[1 - s];
                past_regret[s] =
                    (mine == Action::Safe && theirs == Action::Risky && prev_success) ||
                    (mine == Action::Risky && !prev_success);
            }
        }
        const auto actions = play_round(ctx, round++, 6 + rep, d6, beliefs, past_regret, success,
                                        cfg, stream, out);
        partner_last = {actions[1], actions[0]};
        prev_actions = actions;
        prev_success = success;
    }
}

}  // namespace detail

/// Game block for one standalone pair (both agents' thresholds already
/// elicited). Round lottery draws come from the pair's stream.
inline std::vector<RoundRecord> play_game_rounds(const SyntheticAgent& a,
                                                 const SyntheticAgent& b,
                                                 std::pair<Money, Money> thresholds_a,
                                                 std::pair<Money, Money> thresholds_b,
                                                 const SessionConfig& cfg, rng::Stream& stream) {
    for (Money x : {thresholds_a.first, thresholds_a.second, thresholds_b.first,
                    thresholds_b.second}) {
        if (x < cfg.grid.front() || x > cfg.no_switch_value()) {
            throw InvalidArgument("pair thresholds lie off the session grid");
        }
    }
    detail::PairContext ctx;
    ctx.agents = {&a, &b};
    ctx.agent_ids = {0, 1};
    ctx.x1 = {thresholds_a.first, thresholds_b.first};
    ctx.x2 = {thresholds_a.second, thresholds_b.second};
    ctx.types = {classify_type(ctx.x1[0], ctx.x2[0]), classify_type(ctx.x1[1], ctx.x2[1])};
    std::vector<bool> successes;
    for (int r = 0; r < 2 + cfg.rounds_d6; ++r) successes.push_back(stream.bernoulli(cfg.p));
    std::vector<RoundRecord> out;
    detail::play_pair(ctx, cfg, successes, stream, out);
    return out;
}

/// One full session: elicitation for every agent, then the game block for
/// fixed pairs formed inside shuffled matching groups of four. The round
/// lottery draws are common to every pair of the session.
inline SessionResult run_session(const SessionConfig& cfg, int replication = 0) {
    cfg.validate();
    SessionResult result;
    const int n = static_cast<int>(cfg.population.size());

    // Elicitation (Decisions 1-3).
    std::vector<Money> x1(n), x2(n);
    std::vector<AgentType> types(n);
    for (int i = 0; i < n; ++i) {
        const SyntheticAgent& agent = cfg.population[i];
        rng::Stream stream(cfg.seed, {0x63696C65ull, static_cast<std::uint64_t>(replication),
                                      static_cast<std::uint64_t>(i)});
        std::tie(x1[i], x2[i]) = elicit_thresholds(agent, cfg, stream);
        types[i] = classify_type(x1[i], x2[i]);

        ThresholdRecord rec;
        rec.session = replication;
        rec.agent = i;
        rec.x1 = x1[i];
        rec.x2 = x2[i];
        rec.type = types[i];
        // Partner threshold guessed by self-projection at an even prior,
        // trembling like any other elicited number; the guess induces the
        // believed probability of seeing the lottery played through the
        // grid draw.
        rec.d3_guess = detail::perturb(detail::threshold_or_sentinel(agent, cfg, 0.5), cfg,
                                       agent.noise, stream);
        rec.d3_belief = detail::lottery_play_prob(rec.d3_guess, cfg);
        rec.x3 = detail::perturb(decision3_threshold(agent, rec.d3_belief, cfg), cfg, agent.noise,
                                 stream);
        result.thresholds.push_back(rec);
    }

    // Common per-round lottery draws.
    rng::Stream success_stream(cfg.seed,
                               {0x77617264ull, static_cast<std::uint64_t>(replication)});
    std::vector<bool> successes;
    for (int r = 0; r < 2 + cfg.rounds_d6; ++r) successes.push_back(success_stream.bernoulli(cfg.p));

    // Matching: shuffled order, then groups of four holding two fixed pairs.
    std::vector<int> order(n);
    for (int i = 0; i < n; ++i) order[i] = i;
    rng::Stream match_stream(cfg.seed, {0x6863746Dull, static_cast<std::uint64_t>(replication)});
    for (int i = n - 1; i > 0; --i) {
        const int j = static_cast<int>(match_stream.next_below(static_cast<std::uint64_t>(i) + 1));
        std::swap(order[i], order[j]);
    }

    for (int base = 0, pair_id = 0; base + 1 < n; base += 2, ++pair_id) {
        const int a = order[base];
        const int b = order[base + 1];
        detail::PairContext ctx{replication,
                                base / 4,
                                pair_id,
                                {a, b},
                                {&cfg.population[a], &cfg.population[b]},
                                {x1[a], x1[b]},
                                {x2[a], x2[b]},
                                {types[a], types[b]}};
        rng::Stream stream(cfg.seed, {0x73646E72ull, static_cast<std::uint64_t>(replication),
                                      static_cast<std::uint64_t>(pair_id)});
        detail::play_pair(ctx, cfg, successes, stream, result.rounds);
    }
    return result;
}

/// All replications pooled in replication order; the session column in the
/// records carries the replication index. Replications own disjoint rng
/// streams and write disjoint slots, so they run concurrently without
/// changing the output.
inline SessionResult run_sessions(const SessionConfig& cfg) {
    cfg.validate();
    std::vector<SessionResult> per_rep(cfg.replications);
    auto run_range = [&](int lo, int hi) {
        for (int r = lo; r < hi; ++r) per_rep[r] = run_session(cfg, r);
    };
    const unsigned hw = std::thread::hardware_concurrency();
    const int n_threads = static_cast<int>(std::min<unsigned>(hw == 0 ? 1 : hw, 8));
    if (n_threads <= 1 || cfg.replications < 4) {
        run_range(0, cfg.replications);
    } else {
        std::vector<std::thread> workers;
        const int chunk = (cfg.replications + n_threads - 1) / n_threads;
        for (int t = 0; t < n_threads; ++t) {
            const int lo = t * chunk;
            const int hi = std::min(cfg.replications, lo + chunk);
            if (lo < hi) workers.emplace_back(run_range, lo, hi);
        }
        for (auto& w : workers) w.join();
    }
    SessionResult pooled;
    for (auto& one : per_rep) {
        pooled.thresholds.insert(pooled.thresholds.end(), one.thresholds.begin(),
                                 one.thresholds.end());
        pooled.rounds.insert(pooled.rounds.end(), one.rounds.begin(), one.rounds.end());
    }
    return pooled;
}

}  // namespace regret::xp
