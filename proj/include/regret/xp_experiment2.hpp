// The find-out variant: agents value a long-shot lottery, lock in the sure
// amount, then decide whether to pay attention to the foregone outcome -
// alone first, then in a one-shot game where ignorance requires the
// partner's cooperation.
#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "regret/xp.hpp"

namespace regret::xp {

struct Experiment2Config {
    Money lottery_high = Money::from_cents(8000);
    Money lottery_low = Money::from_cents(0);
    double p = 0.2;
    Money markup = Money::from_cents(200);  // sure amount is the valuation plus this
    Money bonus = Money::from_cents(4);     // paid for finding out
    Money grid_min = Money::from_cents(100);
    Money grid_max = Money::from_cents(8000);
    Money grid_step = Money::from_cents(100);
    std::uint64_t seed = 0;

    void validate() const {
        if (!(p > 0.0 && p < 1.0)) throw InvalidArgument("find-out game needs p in (0,1)");
        if (!(lottery_low < lottery_high)) throw InvalidArgument("lottery needs low < high");
        if (!(grid_min < grid_max) || grid_step.cents() <= 0) {
            throw InvalidArgument("valuation grid is malformed");
        }
        if (bonus.cents() < 0 || markup.cents() < 0) {
            throw InvalidArgument("bonus and markup must be >= 0");
        }
    }
};

enum class FindOutChoice { FindOut, NotFindOut };

inline const char* to_string(FindOutChoice c) {
    return c == FindOutChoice::FindOut ? "find_out" : "not_find_out";
}

struct Exp2Record {
    int session = 0;
    int pair = 0;
    int agent = 0;
    Money valuation;                // Decision 1: certainty equivalent on the grid
    bool d2_consistent = true;      // chose the sure amount in Decision 2
    bool excluded = false;          // inconsistent agents drop out of the analysis
    FindOutChoice d3 = FindOutChoice::FindOut;
    AgentType type = AgentType::RegretNeutral;  // averse iff D3 avoided information
    FindOutChoice d4 = FindOutChoice::FindOut;
    double d4_belief_find_out = 1.0;  // believed probability the partner finds out
};

namespace detail {

/// Smallest grid amount weakly preferred to the lottery. Thresholds under
/// full feedback reduce to the choiceless certainty equivalent, which is
/// what the valuation list elicits.
inline Money certainty_equivalent(const SyntheticAgent& agent, const Experiment2Config& cfg) {
    const double eu_lottery =
        cfg.p * agent.u(cfg.lottery_high) + (1.0 - cfg.p) * agent.u(cfg.lottery_low);
    for (std::int64_t c = cfg.grid_min.cents(); c <= cfg.grid_max.cents();
         c += cfg.grid_step.cents()) {
        if (agent.u(Money::from_cents(c)) >= eu_lottery) return Money::from_cents(c);
    }
    return cfg.grid_max;
}

/// Net psychological cost of learning the foregone outcome after locking
/// in the sure amount: expected regret on a win minus expected rejoice on
/// a loss.
inline double learning_cost(const SyntheticAgent& agent, Money sure, const Experiment2Config& cfg) {
    const double regret =
        agent.pref.kappa1 * std::max(0.0, agent.u(cfg.lottery_high) - agent.u(sure));
    const double rejoice =
        agent.pref.kappa2 * std::max(0.0, agent.u(sure) - agent.u(cfg.lottery_low));
    return cfg.p * regret - (1.0 - cfg.p) * rejoice;
}

inline double bonus_gain(const SyntheticAgent& agent, Money sure, const Experiment2Config& cfg) {
    return agent.u(sure + cfg.bonus) - agent.u(sure);
}

}  // namespace detail

/// Decision 3: find out iff the bonus is worth the net cost of learning.
inline FindOutChoice find_out_alone(const SyntheticAgent& agent, Money sure,
                                    const Experiment2Config& cfg) {
    return detail::bonus_gain(agent, sure, cfg) >= detail::learning_cost(agent, sure, cfg)
               ? FindOutChoice::FindOut
               : FindOutChoice::NotFindOut;
}

/// Decision 4: not finding out only works when the partner cooperates, so
/// the comparison scales the avoidable cost by the believed probability
/// `belief_find_out` that the partner finds out.
inline FindOutChoice find_out_in_game(const SyntheticAgent& agent, Money sure,
                                      double belief_find_out, const Experiment2Config& cfg) {
    if (!(belief_find_out >= 0.0 && belief_find_out <= 1.0)) {
        throw InvalidArgument("belief must lie in [0,1]");
    }
    const double cost = detail::learning_cost(agent, sure, cfg);
    const double gain = detail::bonus_gain(agent, sure, cfg);
    // find out: gain - cost; not find out: -belief * cost
    return gain - cost >= -belief_find_out * cost ? FindOutChoice::FindOut
                                                  : FindOutChoice::NotFindOut;
}

/// One pair through the full protocol. Cournot agents read the partner's
/// solitary Decision 3 as the last observed action; fixed-belief agents
/// use their configured probability.
inline std::vector<Exp2Record> run_experiment2_pair(const SyntheticAgent& a,
                                                    const SyntheticAgent& b,
                                                    const Experiment2Config& cfg,
                                                    rng::Stream& stream, int session = 0,
                                                    int pair = 0) {
    cfg.validate();
    std::array<const SyntheticAgent*, 2> agents{&a, &b};
    std::array<Exp2Record, 2> recs;
    for (int s = 0; s < 2; ++s) {
        const SyntheticAgent& agent = *agents[s];
        Exp2Record r;
        r.session = session;
        r.pair = pair;
        r.agent = s;
        r.valuation = detail::certainty_equivalent(agent, cfg);
        const Money sure = r.valuation + cfg.markup;
        // Decision 2 restates the valuation choice; only a tremble picks
        // the lottery, and such agents are logged and excluded.
        r.d2_consistent = !stream.bernoulli(agent.noise);
        r.excluded = !r.d2_consistent;
        r.d3 = find_out_alone(agent, sure, cfg);
        r.type = r.d3 == FindOutChoice::NotFindOut ? AgentType::RegretAverse
                                                   : AgentType::RegretNeutral;
        recs[s] = r;
    }
    for (int s = 0; s < 2; ++s) {
        const SyntheticAgent& agent = *agents[s];
        const Money sure = recs[s].valuation + cfg.markup;
        double belief_find_out;
        if (agent.belief.kind == BeliefRule::Kind::Fixed) {
            belief_find_out = agent.belief.fixed_prob;
        } else {
            belief_find_out = recs[1 - s].d3 == FindOutChoice::FindOut ? 1.0 : 0.0;
        }
        recs[s].d4_belief_find_out = belief_find_out;
        FindOutChoice choice = find_out_in_game(agent, sure, belief_find_out, cfg);
        if (stream.bernoulli(agent.noise)) {
            choice = choice == FindOutChoice::FindOut ? FindOutChoice::NotFindOut
                                                      : FindOutChoice::FindOut;
        }
        recs[s].d4 = choice;
    }
    return {recs[0], recs[1]};
}

/// Whole-population run: consecutive pairs in seeded shuffled order.
inline std::vector<Exp2Record> run_experiment2(const std::vector<SyntheticAgent>& population,
                                               const Experiment2Config& cfg, int replication = 0) {
    cfg.validate();
    if (population.empty() || population.size() % 2 != 0) {
        throw InvalidArgument("find-out game population must be nonempty and even");
    }
    const int n = static_cast<int>(population.size());
    std::vector<int> order(n);
    for (int i = 0; i < n; ++i) order[i] = i;
    rng::Stream match_stream(cfg.seed, {0x32747874ull, static_cast<std::uint64_t>(replication)});
    for (int i = n - 1; i > 0; --i) {
        const int j = static_cast<int>(match_stream.next_below(static_cast<std::uint64_t>(i) + 1));
        std::swap(order[i], order[j]);
    }
    std::vector<Exp2Record> out;
    for (int base = 0, pair_id = 0; base + 1 < n; base += 2, ++pair_id) {
        rng::Stream stream(cfg.seed, {0x32726E72ull, static_cast<std::uint64_t>(replication),
                                      static_cast<std::uint64_t>(pair_id)});
        auto recs = run_experiment2_pair(population[order[base]], population[order[base + 1]], cfg,
                                         stream, replication, pair_id);
        recs[0].agent = order[base];
        recs[1].agent = order[base + 1];
        out.insert(out.end(), recs.begin(), recs.end());
    }
    return out;
}

}  // namespace regret::xp
