// Single-agent preference evaluation: choiceless and total utility with
// regret and rejoice terms, stochastic ex-post information, preference
// thresholds and BDM-style threshold elicitation on a money grid.
#pragma once

#include <algorithm>
#include <cmath>
#include <optional>
#include <span>
#include <variant>
#include <vector>

#include "regret/env.hpp"
#include "regret/errors.hpp"

namespace regret {

/// Strictly increasing map from money to utils.
class UtilityFunction {
public:
    struct Linear {
        double scale = 1.0;
        double shift = 0.0;
    };
    /// Affine form anchored at u(low) = 0 and u(safe) = 1, the scale used
    /// for the one-risky-lottery threshold formulas.
    struct Normalized2 {
        Money low;
        Money safe;
    };
    /// Piecewise linear between strictly increasing knots; end segments
    /// extrapolate so the map stays strictly increasing everywhere.
    struct Table {
        std::vector<std::pair<Money, double>> knots;
    };

    static UtilityFunction linear(double scale = 1.0, double shift = 0.0) {
        if (!(scale > 0)) throw InvalidArgument("linear utility needs scale > 0");
        return UtilityFunction(Linear{scale, shift});
    }

    static UtilityFunction normalized2(Money low, Money safe) {
        if (!(low < safe)) throw InvalidArgument("normalized utility needs low < safe");
        return UtilityFunction(Normalized2{low, safe});
    }

    static UtilityFunction table(std::vector<std::pair<Money, double>> knots) {
        if (knots.size() < 2) throw InvalidArgument("utility table needs at least two knots");
        for (std::size_t i = 1; i < knots.size(); ++i) {
            if (!(knots[i - 1].first < knots[i].first && knots[i - 1].second < knots[i].second)) {
                throw InvalidArgument("utility table knots must be strictly increasing");
            }
        }
        return UtilityFunction(Table{std::move(knots)});
    }

    double operator()(Money m) const {
        if (const auto* lin = std::get_if<Linear>(&form_)) {
            return lin->scale * m.units() + lin->shift;
        }
        if (const auto* nrm = std::get_if<Normalized2>(&form_)) {
            return (m.units() - nrm->low.units()) / (nrm->safe.units() - nrm->low.units());
        }
        const auto& knots = std::get<Table>(form_).knots;
        std::size_t hi = 1;
        while (hi + 1 < knots.size() && knots[hi].first < m) ++hi;
        const auto& [x0, y0] = knots[hi - 1];
        const auto& [x1, y1] = knots[hi];
        const double t = (m.units() - x0.units()) / (x1.units() - x0.units());
        return y0 + t * (y1 - y0);
    }

    /// Money value mapping to `utils`; exact for all three forms since each
    /// is piecewise affine, but only meaningful when the result lands on the
    /// cent grid.
    std::optional<Money> invert(double utils) const {
        double units;
        if (const auto* lin = std::get_if<Linear>(&form_)) {
            units = (utils - lin->shift) / lin->scale;
        } else if (const auto* nrm = std::get_if<Normalized2>(&form_)) {
            units = nrm->low.units() + utils * (nrm->safe.units() - nrm->low.units());
        } else {
            const auto& knots = std::get<Table>(form_).knots;
            std::size_t hi = 1;
            while (hi + 1 < knots.size() && knots[hi].second < utils) ++hi;
            const auto& [x0, y0] = knots[hi - 1];
            const auto& [x1, y1] = knots[hi];
            const double t = (utils - y0) / (y1 - y0);
            units = x0.units() + t * (x1.units() - x0.units());
        }
        if (!std::isfinite(units)) return std::nullopt;
        return Money::from_cents(static_cast<std::int64_t>(std::llround(units * 100.0)));
    }

    bool is_linear_form() const { return !std::holds_alternative<Table>(form_); }

private:
    using Form = std::variant<Linear, Normalized2, Table>;
    explicit UtilityFunction(Form f) : form_(std::move(f)) {}
    Form form_;
};

struct RegretPreference {
    double kappa1 = 0.0;  // regret weight
    double kappa2 = 0.0;  // rejoice weight

    RegretPreference() = default;
    RegretPreference(double k1, double k2 = 0.0) : kappa1(k1), kappa2(k2) {
        if (kappa1 < 0 || kappa2 < 0) throw InvalidArgument("regret coefficients must be >= 0");
    }
};

/// Ex-post total utility of one realized state: choiceless utility minus
/// regret against the best observed performer, plus rejoice on the margin
/// over the best observed alternative when the choice was ex-post optimal.
inline double total_utility(const ChoiceSet& cs, int chosen, const State& state,
                            int space_risky_count, const ObservationMap& obs,
                            const RegretPreference& pref, const UtilityFunction& u) {
    if (chosen < 0 || chosen >= cs.size()) throw UnknownLottery("chosen index out of range");
    if (obs.size() != cs.size()) throw DomainMismatch("observation map size mismatch");
    const double own = u(lottery_outcome(cs, chosen, state, space_risky_count));
    double best_other = 0;
    bool has_other = false;
    for (int j = 0; j < cs.size(); ++j) {
        if (j == chosen || !obs.observes(chosen, j)) continue;
        const double uj = u(lottery_outcome(cs, j, state, space_risky_count));
        if (!has_other || uj > best_other) {
            best_other = uj;
            has_other = true;
        }
    }
    if (!has_other) return own;  // nothing to compare against
    const double regret = std::max(0.0, best_other - own);
    const double rejoice = std::max(0.0, own - best_other);
    return own - pref.kappa1 * regret + pref.kappa2 * rejoice;
}

/// Distribution over observation maps per choice. Either the scalar
/// learning probability q of the one-risky-lottery setting (learn the
/// risky outcome with probability q when choosing safe), or an explicit
/// per-choice distribution.
class StochasticInfo {
public:
    struct WeightedMap {
        double weight;
        ObservationMap map;
    };

    static StochasticInfo learn_prob(double q) {
        if (!(q >= 0.0 && q <= 1.0)) throw InvalidArgument("learning probability q must lie in [0,1]");
        StochasticInfo info;
        info.q_ = q;
        return info;
    }

    static StochasticInfo deterministic(ObservationMap obs) {
        StochasticInfo info;
        info.per_choice_.resize(obs.size());
        for (int k = 0; k < obs.size(); ++k) info.per_choice_[k] = {{1.0, obs}};
        return info;
    }

    static StochasticInfo general(std::vector<std::vector<WeightedMap>> per_choice) {
        StochasticInfo info;
        for (const auto& dist : per_choice) {
            if (dist.empty()) throw InvalidArgument("empty observation-map distribution");
            double total = 0;
            for (const auto& wm : dist) {
                if (wm.weight < 0 || wm.weight > 1) {
                    throw InvalidArgument("distribution weights must lie in [0,1]");
                }
                total += wm.weight;
            }
            if (std::abs(total - 1.0) > 1e-12) {
                throw InvalidArgument("distribution weights must sum to 1");
            }
        }
        info.per_choice_ = std::move(per_choice);
        return info;
    }

    bool is_learn_prob() const { return q_.has_value(); }
    double q() const { return q_.value(); }

    /// Distribution for one choice, materialized for q-form infos.
    std::vector<WeightedMap> distribution(const ChoiceSet& cs, int choice) const {
        if (!q_) {
            if (static_cast<int>(per_choice_.size()) != cs.size()) {
                throw DomainMismatch("stochastic info built for a different choice set");
            }
            return per_choice_.at(choice);
        }
        if (cs.risky_count() != 1) {
            throw DomainMismatch("scalar q form requires exactly one risky lottery");
        }
        const ObservationMap full = ObservationMap::full(cs);
        if (choice != cs.safe_index()) return {{1.0, full}};
        if (*q_ >= 1.0) return {{1.0, full}};
        if (*q_ <= 0.0) return {{1.0, ObservationMap::minimal(cs)}};
        return {{*q_, full}, {1.0 - *q_, ObservationMap::minimal(cs)}};
    }

private:
    StochasticInfo() = default;
    std::optional<double> q_;
    std::vector<std::vector<WeightedMap>> per_choice_;
};

/// Expected total utility of a choice under a fixed observation map.
inline double expected_total_utility(const ChoiceSet& cs, int chosen, const ObservationMap& obs,
                                     const RegretPreference& pref, const UtilityFunction& u) {
    const StateSpace space = build_state_space(cs);
    double eu = 0;
    for (const State& s : space.states) {
        eu += s.prob * total_utility(cs, chosen, s, space.risky_count, obs, pref, u);
    }
    return eu;
}

/// Expected total utility of a choice, averaging over states and over the
/// observation-map distribution attached to the choice.
inline double expected_total_utility(const ChoiceSet& cs, int chosen, const StochasticInfo& info,
                                     const RegretPreference& pref, const UtilityFunction& u) {
    if (chosen < 0 || chosen >= cs.size()) throw UnknownLottery("chosen index out of range");
    double eu = 0;
    for (const auto& wm : info.distribution(cs, chosen)) {
        eu += wm.weight * expected_total_utility(cs, chosen, wm.map, pref, u);
    }
    return eu;
}

/// Expected choiceless utility (no regret adjustment).
inline double expected_choiceless_utility(const ChoiceSet& cs, int chosen,
                                          const UtilityFunction& u) {
    const StateSpace space = build_state_space(cs);
    double eu = 0;
    for (const State& s : space.states) {
        eu += s.prob * u(lottery_outcome(cs, chosen, s, space.risky_count));
    }
    return eu;
}

/// Argmax of expected total utility. Ties resolve toward the safe lottery,
/// then toward the lower index, so the result is deterministic.
inline int optimal_choice(const ChoiceSet& cs, const StochasticInfo& info,
                          const RegretPreference& pref, const UtilityFunction& u) {
    int best = cs.safe_index();
    double best_eu = expected_total_utility(cs, best, info, pref, u);
    for (int k = 0; k < cs.size(); ++k) {
        if (k == cs.safe_index()) continue;
        const double eu = expected_total_utility(cs, k, info, pref, u);
        if (eu > best_eu) {  // ascending scan keeps safe, then lowest index, on ties
            best = k;
            best_eu = eu;
        }
    }
    return best;
}

// --- Two-lottery closed forms -------------------------------------------
//
// The one-risky-lottery setting admits closed forms for the expected total
// utility of each option as a function of the probability q of learning
// the risky outcome when safe is chosen. These are the workhorse for the
// threshold machinery, the N-player game and the experiment harness.

struct TwoLotteryUtils {
    double u_low;
    double u_safe;
    double u_high;
};

inline double eu_safe_two_lottery(const TwoLotteryUtils& v, double p, double q,
                                  const RegretPreference& pref) {
    const double win_regret = pref.kappa1 * std::max(0.0, v.u_high - v.u_safe);
    const double win_rejoice = pref.kappa2 * std::max(0.0, v.u_safe - v.u_high);
    const double lose_rejoice = pref.kappa2 * std::max(0.0, v.u_safe - v.u_low);
    return p * (v.u_safe + q * (win_rejoice - win_regret)) +
           (1.0 - p) * (v.u_safe + q * lose_rejoice);
}

inline double eu_risky_two_lottery(const TwoLotteryUtils& v, double p,
                                   const RegretPreference& pref) {
    const double win_rejoice = pref.kappa2 * std::max(0.0, v.u_high - v.u_safe);
    const double win_regret = pref.kappa1 * std::max(0.0, v.u_safe - v.u_high);
    const double lose_regret = pref.kappa1 * std::max(0.0, v.u_safe - v.u_low);
    return p * (v.u_high + win_rejoice - win_regret) + (1.0 - p) * (v.u_low - lose_regret);
}

/// Minimal u(high) on the u(low)=0, u(safe)=1 scale at which the risky
/// lottery is weakly preferred, as a function of the learning probability:
///   (1/p) * (1 + k1*(1 - p(1-q))) / (1 + q*k1).
/// Equals 1/p at q=1 and (1/p)(1 + k1(1-p)) at q=0.
inline double risky_threshold(double p, double q, double kappa1) {
    if (!(p > 0.0 && p < 1.0)) throw InvalidArgument("p must lie in (0,1)");
    if (!(q >= 0.0 && q <= 1.0)) throw InvalidArgument("q must lie in [0,1]");
    if (kappa1 < 0) throw InvalidArgument("kappa1 must be >= 0");
    return (1.0 / p) * (1.0 + kappa1 * (1.0 - p * (1.0 - q))) / (1.0 + q * kappa1);
}

/// Smallest grid value x at which the risky lottery (low 0, high x, success
/// probability p) is weakly preferred to the safe amount under learning
/// probability q. nullopt means the agent never switches on this grid.
inline std::optional<Money> bdm_threshold(const RegretPreference& pref, const UtilityFunction& u,
                                          double p, Money safe_value, std::span<const Money> grid,
                                          double q) {
    if (grid.empty()) throw InvalidArgument("BDM grid is empty");
    if (!(p > 0.0 && p < 1.0)) throw InvalidArgument("p must lie in (0,1)");
    if (!(q >= 0.0 && q <= 1.0)) throw InvalidArgument("q must lie in [0,1]");
    const Money low = Money::from_cents(0);
    for (std::size_t i = 1; i < grid.size(); ++i) {
        if (!(grid[i - 1] < grid[i])) throw InvalidArgument("BDM grid must be ascending");
    }
    for (const Money x : grid) {
        const TwoLotteryUtils utils{u(low), u(safe_value), u(x)};
        const double eu_r = eu_risky_two_lottery(utils, p, pref);
        const double eu_s = eu_safe_two_lottery(utils, p, q, pref);
        if (eu_r >= eu_s) return x;
    }
    return std::nullopt;
}

// --- Ranking and information-monotonicity checks ------------------------

struct RankingReport {
    struct Pair {
        int first;
        int second;
        double choiceless_delta;
        double total_delta;
        bool agree;
    };
    std::vector<Pair> pairs;
    int violations = 0;
};

/// Under full observation, verifies that the ranking induced by expected
/// choiceless utility coincides with the ranking induced by expected total
/// utility on every lottery pair.
inline RankingReport check_ranking_equivalence(const ChoiceSet& cs, const UtilityFunction& u,
                                               double kappa1, double tolerance = 1e-9) {
    const ObservationMap full = ObservationMap::full(cs);
    const RegretPreference pref(kappa1);
    std::vector<double> eu_u(cs.size()), eu_t(cs.size());
    for (int k = 0; k < cs.size(); ++k) {
        eu_u[k] = expected_choiceless_utility(cs, k, u);
        eu_t[k] = expected_total_utility(cs, k, full, pref, u);
    }
    auto sign = [tolerance](double x) { return x > tolerance ? 1 : (x < -tolerance ? -1 : 0); };
    RankingReport report;
    for (int i = 0; i < cs.size(); ++i) {
        for (int j = i + 1; j < cs.size(); ++j) {
            RankingReport::Pair pr{i, j, eu_u[i] - eu_u[j], eu_t[i] - eu_t[j], true};
            pr.agree = sign(pr.choiceless_delta) == sign(pr.total_delta);
            if (!pr.agree) ++report.violations;
            report.pairs.push_back(pr);
        }
    }
    return report;
}

struct InfoMonotonicityReport {
    struct Entry {
        int lottery;
        double eu_more_informative;
        double eu_less_informative;
        double delta;  // more - less; should never exceed 0
    };
    std::vector<Entry> entries;
    int violations = 0;
    bool any_strict = false;
};

/// With env_a more informative than env_b, expected total utility of every
/// choice must be weakly lower under env_a, strictly for at least one
/// choice when kappa1 > 0.
inline InfoMonotonicityReport check_information_monotonicity(const InfoEnvironment& env_a,
                                                             const InfoEnvironment& env_b,
                                                             const RegretPreference& pref,
                                                             const UtilityFunction& u,
                                                             double tolerance = 1e-9) {
    if (compare_environments(env_a, env_b) != EnvOrder::MoreInformative) {
        throw NotComparable("first environment must be more informative than the second");
    }
    InfoMonotonicityReport report;
    for (int k = 0; k < env_a.size(); ++k) {
        InfoMonotonicityReport::Entry e{};
        e.lottery = k;
        e.eu_more_informative =
            expected_total_utility(env_a.choice_set(), k, env_a.observation(), pref, u);
        e.eu_less_informative =
            expected_total_utility(env_b.choice_set(), k, env_b.observation(), pref, u);
        e.delta = e.eu_more_informative - e.eu_less_informative;
        if (e.delta > tolerance) ++report.violations;
        if (e.delta < -tolerance) report.any_strict = true;
        report.entries.push_back(e);
    }
    return report;
}

}  // namespace regret
