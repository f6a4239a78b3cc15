// Summary tables over session records: type shares, dominant-decision
// choice rates, mean thresholds with paired sign tests, belief-choice
// agreement and co-movement, threshold-belief correlations, and the
// find-out game contingency tables.
#pragma once

#include <string>
#include <vector>

#include "regret/stats.hpp"
#include "regret/xp.hpp"
#include "regret/xp_experiment2.hpp"

namespace regret::xp {

struct SessionSummary {
    struct TypeShare {
        std::string group;
        int count = 0;
        double share = 0;
    };
    std::vector<TypeShare> type_shares;

    /// Lottery-choice rates in the two dominant-strategy decisions.
    struct LotteryRates {
        std::string group;
        stats::Proportion d4;
        stats::Proportion d5;
    };
    std::vector<LotteryRates> choice_rates;

    /// Mean elicited thresholds with paired sign tests of x1 and x2
    /// against the partner-dependent x3.
    struct ThresholdRow {
        std::string group;
        int n = 0;
        double mean_x1 = 0, sd_x1 = 0;
        double mean_x2 = 0, sd_x2 = 0;
        double mean_x3 = 0, sd_x3 = 0;
        double p_x1_vs_x3 = 1;
        double p_x2_vs_x3 = 1;
    };
    std::vector<ThresholdRow> thresholds;

    /// Coordination rounds with binary beliefs: how choices track beliefs.
    struct BeliefChoiceRow {
        std::string group;
        int rounds = 0;
        stats::Proportion agreement;
        stats::Proportion risky_given_belief_risky;
        stats::Proportion risky_given_belief_safe;
        double comovement = 0;  // rate difference
    };
    std::vector<BeliefChoiceRow> belief_choice;

    /// Correlation between own partner-dependent threshold and the guessed
    /// partner threshold.
    struct CorrelationRow {
        std::string group;
        int n = 0;
        double corr = 0;
    };
    std::vector<CorrelationRow> threshold_belief_corr;
};

namespace detail {

inline bool in_group(AgentType t, const std::string& group) {
    if (group == "all") return true;
    if (group == "non_regret_averse") return t != AgentType::RegretAverse;
    return group == to_string(t);
}

inline const std::vector<std::string>& summary_groups() {
    static const std::vector<std::string> groups{"regret_averse", "regret_neutral",
                                                 "rejoice_lover", "non_regret_averse", "all"};
    return groups;
}

}  // namespace detail

inline SessionSummary summarize_session(const SessionResult& result) {
    if (result.thresholds.empty()) throw InvalidArgument("cannot summarize an empty session");
    SessionSummary summary;

    for (AgentType t : {AgentType::RegretAverse, AgentType::RegretNeutral,
                        AgentType::RejoiceLover}) {
        SessionSummary::TypeShare share;
        share.group = to_string(t);
        for (const auto& rec : result.thresholds) {
            if (rec.type == t) ++share.count;
        }
        share.share = static_cast<double>(share.count) /
                      static_cast<double>(result.thresholds.size());
        summary.type_shares.push_back(share);
    }

    for (const std::string& group : detail::summary_groups()) {
        // Dominant-decision lottery rates.
        SessionSummary::LotteryRates rates;
        rates.group = group;
        int d4_risky = 0, d4_total = 0, d5_risky = 0, d5_total = 0;
        for (const auto& r : result.rounds) {
            if (!detail::in_group(r.type, group)) continue;
            if (r.decision_id == 4) {
                ++d4_total;
                d4_risky += r.choice == Action::Risky;
            } else if (r.decision_id == 5) {
                ++d5_total;
                d5_risky += r.choice == Action::Risky;
            }
        }
        rates.d4 = stats::proportion(d4_risky, d4_total);
        rates.d5 = stats::proportion(d5_risky, d5_total);
        summary.choice_rates.push_back(rates);

        // Threshold means and paired sign tests.
        SessionSummary::ThresholdRow row;
        row.group = group;
        std::vector<double> v1, v2, v3;
        int pos13 = 0, neg13 = 0, pos23 = 0, neg23 = 0;
        std::vector<double> own_x3, guess;
        for (const auto& rec : result.thresholds) {
            if (!detail::in_group(rec.type, group)) continue;
            v1.push_back(rec.x1.units());
            v2.push_back(rec.x2.units());
            v3.push_back(rec.x3.units());
            if (rec.x1 > rec.x3) ++pos13;
            if (rec.x1 < rec.x3) ++neg13;
            if (rec.x2 > rec.x3) ++pos23;
            if (rec.x2 < rec.x3) ++neg23;
            own_x3.push_back(rec.x3.units());
            guess.push_back(rec.d3_guess.units());
        }
        row.n = static_cast<int>(v1.size());
        row.mean_x1 = stats::mean(v1);
        row.sd_x1 = stats::stddev(v1);
        row.mean_x2 = stats::mean(v2);
        row.sd_x2 = stats::stddev(v2);
        row.mean_x3 = stats::mean(v3);
        row.sd_x3 = stats::stddev(v3);
        row.p_x1_vs_x3 = stats::sign_test_two_sided(pos13, neg13);
        row.p_x2_vs_x3 = stats::sign_test_two_sided(pos23, neg23);
        summary.thresholds.push_back(row);

        SessionSummary::CorrelationRow corr;
        corr.group = group;
        corr.n = static_cast<int>(own_x3.size());
        corr.corr = stats::pearson(own_x3, guess);
        summary.threshold_belief_corr.push_back(corr);

        // Belief-choice co-movement over coordination rounds where the
        // belief is a definite partner action.
        SessionSummary::BeliefChoiceRow bc;
        bc.group = group;
        int agree = 0, total = 0;
        int risky_br = 0, total_br = 0, risky_bs = 0, total_bs = 0;
        for (const auto& r : result.rounds) {
            if (!detail::in_group(r.type, group)) continue;
            if (r.decision_id < 6) continue;
            if (r.belief != 0.0 && r.belief != 1.0) continue;
            const bool believe_risky = r.belief == 1.0;
            const bool chose_risky = r.choice == Action::Risky;
            ++total;
            agree += believe_risky == chose_risky;
            if (believe_risky) {
                ++total_br;
                risky_br += chose_risky;
            } else {
                ++total_bs;
                risky_bs += chose_risky;
            }
        }
        bc.rounds = total;
        bc.agreement = stats::proportion(agree, total);
        bc.risky_given_belief_risky = stats::proportion(risky_br, total_br);
        bc.risky_given_belief_safe = stats::proportion(risky_bs, total_bs);
        bc.comovement = bc.risky_given_belief_risky.value - bc.risky_given_belief_safe.value;
        summary.belief_choice.push_back(bc);
    }
    return summary;
}

struct Exp2Summary {
    int total = 0;
    int excluded = 0;
    struct TypeShare {
        std::string group;
        int count = 0;
        double share = 0;
    };
    std::vector<TypeShare> type_shares;

    /// Choice-by-belief counts in the one-shot find-out game.
    struct Contingency {
        std::string group;
        int find_believe_find = 0;
        int find_believe_not = 0;
        int not_believe_find = 0;
        int not_believe_not = 0;
    };
    std::vector<Contingency> tables;
};

inline Exp2Summary summarize_experiment2(const std::vector<Exp2Record>& records) {
    if (records.empty()) throw InvalidArgument("cannot summarize an empty session");
    Exp2Summary summary;
    summary.total = static_cast<int>(records.size());
    int included = 0;
    int averse = 0;
    for (const auto& r : records) {
        if (r.excluded) {
            ++summary.excluded;
            continue;
        }
        ++included;
        averse += r.type == AgentType::RegretAverse;
    }
    summary.type_shares.push_back(
        {"regret_averse", averse,
         included > 0 ? static_cast<double>(averse) / included : 0.0});
    summary.type_shares.push_back(
        {"non_regret_averse", included - averse,
         included > 0 ? static_cast<double>(included - averse) / included : 0.0});

    for (const std::string& group : {std::string("regret_averse"), std::string("non_regret_averse")}) {
        Exp2Summary::Contingency table;
        table.group = group;
        for (const auto& r : records) {
            if (r.excluded) continue;
            const bool is_averse = r.type == AgentType::RegretAverse;
            if ((group == "regret_averse") != is_averse) continue;
            const bool believes_find = r.d4_belief_find_out >= 0.5;
            if (r.d4 == FindOutChoice::FindOut) {
                (believes_find ? table.find_believe_find : table.find_believe_not)++;
            } else {
                (believes_find ? table.not_believe_find : table.not_believe_not)++;
            }
        }
        summary.tables.push_back(table);
    }
    return summary;
}

}  // namespace regret::xp
