// The N-player regret game. Every player picks the risky or the safe
// lottery of a common two-lottery environment on the u(low)=0, u(safe)=1
// utility scale; choosing safe exposes a player to regret with a
// probability that increases in the number of opponents choosing risky.
// Provides utilities, best responses, pure/mixed equilibrium enumeration,
// regime classification, welfare comparison and the heterogeneous and
// Bayesian extensions.
#pragma once

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdint>
#include <limits>
#include <numeric>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "regret/decide.hpp"
#include "regret/errors.hpp"
#include "regret/stats.hpp"

namespace regret {

/// Probability of learning the risky outcome as a function of the number
/// of opponents who chose it. Strictly increasing on {0,...,N-1} with
/// q(0)=0 and q(N-1)=1. The step family jumps to ~1 at m_star and carries
/// an epsilon ramp so it stays strictly increasing.
class QFunction {
public:
    enum class Kind { Linear, Power, Step };

    static QFunction linear(int n_players) { return QFunction(Kind::Linear, n_players, 0, 0, 0); }

    static QFunction power(int n_players, double exponent) {
        if (!(exponent > 0)) throw InvalidArgument("power q-function needs exponent > 0");
        return QFunction(Kind::Power, n_players, exponent, 0, 0);
    }

    static QFunction step(int n_players, int m_star, double epsilon = 1e-6) {
        if (m_star < 1 || m_star > n_players - 1) {
            throw InvalidArgument("step q-function needs m_star in {1,...,N-1}");
        }
        if (!(epsilon > 0) || epsilon * (n_players - 1) >= 0.5) {
            throw InvalidArgument("step q-function ramp epsilon out of range");
        }
        return QFunction(Kind::Step, n_players, 0, m_star, epsilon);
    }

    int n_players() const { return n_players_; }
    Kind kind() const { return kind_; }
    int m_star() const { return m_star_; }
    double exponent() const { return exponent_; }

    double operator()(int others_risky) const {
        if (others_risky < 0 || others_risky > n_players_ - 1) {
            throw IndexOutOfRange("q-function argument outside {0,...,N-1}");
        }
        const double k = static_cast<double>(others_risky);
        const double top = static_cast<double>(n_players_ - 1);
        switch (kind_) {
            case Kind::Linear:
                return k / top;
            case Kind::Power:
                return std::pow(k / top, exponent_);
            case Kind::Step:
                if (others_risky == n_players_ - 1) return 1.0;
                if (others_risky >= m_star_) return 1.0 - epsilon_ * (top - k);
                return epsilon_ * k;
        }
        return 0.0;
    }

private:
    QFunction(Kind kind, int n_players, double exponent, int m_star, double epsilon)
        : kind_(kind), n_players_(n_players), exponent_(exponent), m_star_(m_star),
          epsilon_(epsilon) {
        if (n_players < 2) throw InvalidArgument("q-function needs at least two players");
    }

    Kind kind_;
    int n_players_;
    double exponent_;
    int m_star_;
    double epsilon_;
};

struct RegretGame {
    int n_players;
    double p;                    // success probability of the risky lottery
    double u_high;               // u(high) on the u(low)=0, u(safe)=1 scale
    std::vector<double> kappas;  // per-player regret coefficient
    QFunction q;

    RegretGame(int n_players, double p, double u_high, std::vector<double> kappas, QFunction q)
        : n_players(n_players), p(p), u_high(u_high), kappas(std::move(kappas)), q(std::move(q)) {
        if (n_players < 2) throw InvalidArgument("regret game needs at least two players");
        if (!(p > 0.0 && p < 1.0)) throw InvalidArgument("regret game needs p in (0,1)");
        if (!(u_high > 1.0)) throw InvalidArgument("regret game needs u_high > 1");
        if (static_cast<int>(this->kappas.size()) != n_players) {
            throw InvalidArgument("regret game needs one kappa per player");
        }
        for (double k : this->kappas) {
            if (k < 0) throw InvalidArgument("kappa must be >= 0");
        }
        if (this->q.n_players() != n_players) {
            throw InvalidArgument("q-function built for a different player count");
        }
    }

    static RegretGame symmetric(int n_players, double p, double u_high, double kappa,
                                QFunction q) {
        return RegretGame(n_players, p, u_high, std::vector<double>(n_players, kappa),
                          std::move(q));
    }

    std::optional<double> common_kappa() const {
        for (double k : kappas) {
            if (k != kappas.front()) return std::nullopt;
        }
        return kappas.front();
    }
};

enum class Action : std::uint8_t { Safe = 0, Risky = 1 };

struct ActionProfile {
    std::vector<Action> actions;

    explicit ActionProfile(int n, Action fill = Action::Safe) : actions(n, fill) {}
    explicit ActionProfile(std::vector<Action> a) : actions(std::move(a)) {}

    static ActionProfile from_mask(int n, std::uint64_t mask) {
        ActionProfile p(n);
        for (int i = 0; i < n; ++i) {
            if ((mask >> i) & 1u) p.actions[i] = Action::Risky;
        }
        return p;
    }

    int size() const { return static_cast<int>(actions.size()); }

    int risky_count() const {
        return static_cast<int>(std::count(actions.begin(), actions.end(), Action::Risky));
    }

    bool all(Action a) const {
        return std::all_of(actions.begin(), actions.end(), [a](Action x) { return x == a; });
    }

    /// "SRRS"-style string, player order.
    std::string str() const {
        std::string s;
        s.reserve(actions.size());
        for (Action a : actions) s += (a == Action::Risky ? 'R' : 'S');
        return s;
    }

    friend auto operator<=>(const ActionProfile&, const ActionProfile&) = default;
};

/// Expected utility of the safe action for player i with `others_risky`
/// opponents choosing the risky lottery.
inline double utility_safe(const RegretGame& g, int i, int others_risky) {
    return 1.0 - g.p * g.q(others_risky) * g.kappas.at(i) * (g.u_high - 1.0);
}

/// Expected utility of the risky action (independent of the opponents).
inline double utility_risky(const RegretGame& g, int i) {
    return g.p * g.u_high - (1.0 - g.p) * g.kappas.at(i);
}

inline double expected_player_utility(const RegretGame& g, const ActionProfile& profile, int i) {
    if (i < 0 || i >= g.n_players || profile.size() != g.n_players) {
        throw IndexOutOfRange("player index or profile size mismatch");
    }
    const int others = profile.risky_count() - (profile.actions[i] == Action::Risky ? 1 : 0);
    return profile.actions[i] == Action::Risky ? utility_risky(g, i) : utility_safe(g, i, others);
}

/// Action maximizing player i's utility holding the others fixed;
/// indifference resolves to Risky (weak preference).
inline Action best_response(const RegretGame& g, const ActionProfile& profile, int i) {
    if (i < 0 || i >= g.n_players || profile.size() != g.n_players) {
        throw IndexOutOfRange("player index or profile size mismatch");
    }
    const int others = profile.risky_count() - (profile.actions[i] == Action::Risky ? 1 : 0);
    return utility_risky(g, i) >= utility_safe(g, i, others) ? Action::Risky : Action::Safe;
}

namespace detail {

/// No player can strictly improve by deviating.
inline bool is_pure_nash(const RegretGame& g, std::span<const double> u_risky_by_player,
                         std::uint64_t mask, int risky_count) {
    for (int i = 0; i < g.n_players; ++i) {
        const bool risky = (mask >> i) & 1u;
        const int others = risky_count - (risky ? 1 : 0);
        const double us = utility_safe(g, i, others);
        const double ur = u_risky_by_player[i];
        if (risky ? (us > ur) : (ur > us)) return false;
    }
    return true;
}

}  // namespace detail

inline constexpr int kBruteForceMaxPlayers = 20;
inline constexpr int kStructuralMaxPlayers = 100000;

/// Exact set of pure Nash equilibria, ascending in (risky mask) order so
/// all-Safe sorts first and all-Risky last. Brute force up to 20 players;
/// beyond that only cut profiles along the kappa order are candidates
/// (a safe player must be strictly more regret averse than any risky one),
/// so the structural path checks those.
inline std::vector<ActionProfile> enumerate_pure_nash(const RegretGame& g) {
    std::vector<double> ur(g.n_players);
    for (int i = 0; i < g.n_players; ++i) ur[i] = utility_risky(g, i);

    std::vector<ActionProfile> out;
    if (g.n_players <= kBruteForceMaxPlayers) {
        const std::uint64_t total = std::uint64_t{1} << g.n_players;
        for (std::uint64_t mask = 0; mask < total; ++mask) {
            const int rc = std::popcount(mask);
            if (detail::is_pure_nash(g, ur, mask, rc)) {
                out.push_back(ActionProfile::from_mask(g.n_players, mask));
            }
        }
        return out;
    }
    if (g.n_players > kStructuralMaxPlayers) {
        throw TooLarge("pure equilibrium enumeration supports at most " +
                       std::to_string(kStructuralMaxPlayers) + " players");
    }
    // Candidates: the k lowest-kappa players risky, for k = 0..N, constant
    // across equal-kappa blocks.
    std::vector<int> order(g.n_players);
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(),
                     [&](int a, int b) { return g.kappas[a] < g.kappas[b]; });
    std::vector<std::uint64_t> seen_masks;
    for (int cut = 0; cut <= g.n_players; ++cut) {
        if (cut > 0 && cut < g.n_players && g.kappas[order[cut - 1]] == g.kappas[order[cut]]) {
            continue;  // would split a tie block
        }
        ActionProfile profile(g.n_players, Action::Safe);
        for (int r = 0; r < cut; ++r) profile.actions[order[r]] = Action::Risky;
        bool nash = true;
        for (int i = 0; i < g.n_players && nash; ++i) {
            const bool risky = profile.actions[i] == Action::Risky;
            const double us = utility_safe(g, i, cut - (risky ? 1 : 0));
            nash = risky ? !(us > ur[i]) : !(ur[i] > us);
        }
        if (nash && std::find_if(out.begin(), out.end(), [&](const ActionProfile& q) {
                        return q.actions == profile.actions;
                    }) == out.end()) {
            out.push_back(std::move(profile));
        }
    }
    std::sort(out.begin(), out.end(), [](const ActionProfile& a, const ActionProfile& b) {
        for (int i = a.size() - 1; i >= 0; --i) {
            if (a.actions[i] != b.actions[i]) return a.actions[i] < b.actions[i];
        }
        return false;
    });
    return out;
}

enum class Regime { DominantSafe, DominantRisky, Coordination };

inline const char* to_string(Regime r) {
    switch (r) {
        case Regime::DominantSafe: return "DominantSafe";
        case Regime::DominantRisky: return "DominantRisky";
        case Regime::Coordination: return "Coordination";
    }
    return "?";
}

/// u_high below which safe is dominant.
inline double dominant_safe_threshold(double p) { return 1.0 / p; }

/// u_high above which risky is dominant; boundary values fall in the
/// coordination regime (closed interval).
inline double dominant_risky_threshold(double p, double kappa) {
    return (1.0 / p) * (1.0 + kappa * (1.0 - p));
}

inline Regime classify_regime(const RegretGame& g) {
    const auto kappa = g.common_kappa();
    if (!kappa) {
        throw HeterogeneousKappas("regime classification requires a common kappa");
    }
    if (g.u_high < dominant_safe_threshold(g.p)) return Regime::DominantSafe;
    if (g.u_high > dominant_risky_threshold(g.p, *kappa)) return Regime::DominantRisky;
    return Regime::Coordination;
}

/// Probability of risky play in the symmetric mixed equilibrium of the
/// two-player coordination game: the opponent mixing rate at which safe
/// and risky yield the same expected utility. Degenerate (0 or 1) at the
/// regime boundaries.
inline double mixed_symmetric_equilibrium(const RegretGame& g) {
    if (g.n_players != 2) throw InvalidArgument("mixed equilibrium implemented for N = 2");
    const auto kappa = g.common_kappa();
    if (!kappa) throw HeterogeneousKappas("mixed equilibrium requires a common kappa");
    if (classify_regime(g) != Regime::Coordination) {
        throw NoInteriorSolution("mixed equilibrium exists only in the coordination regime");
    }
    // 1 - sigma*p*kappa*(u_high-1) = p*u_high - (1-p)*kappa
    const double sigma =
        (1.0 - g.p * g.u_high + (1.0 - g.p) * *kappa) / (g.p * *kappa * (g.u_high - 1.0));
    const double clamped = std::clamp(sigma, 0.0, 1.0);
    const double residual =
        std::abs((1.0 - clamped * g.p * *kappa * (g.u_high - 1.0)) -
                 (g.p * g.u_high - (1.0 - g.p) * *kappa));
    if (residual > 1e-9) {
        throw NoInteriorSolution("mixed equilibrium indifference residual too large");
    }
    return clamped;
}

/// Learning probability at which safe and risky expected utilities are
/// equal for the common kappa; clamped to [0,1].
inline double critical_q(const RegretGame& g) {
    const auto kappa = g.common_kappa();
    if (!kappa) throw HeterogeneousKappas("critical q requires a common kappa");
    if (classify_regime(g) != Regime::Coordination) {
        throw NoInteriorSolution("critical q is defined in the coordination regime");
    }
    const double raw =
        (1.0 + (1.0 - g.p) * *kappa - g.p * g.u_high) / (g.p * *kappa * (g.u_high - 1.0));
    return std::clamp(raw, 0.0, 1.0);
}

enum class ParetoRank { AllSafeDominates, AllRiskyDominates, Equal };

inline const char* to_string(ParetoRank r) {
    switch (r) {
        case ParetoRank::AllSafeDominates: return "AllSafeDominates";
        case ParetoRank::AllRiskyDominates: return "AllRiskyDominates";
        case ParetoRank::Equal: return "Equal";
    }
    return "?";
}

/// Compares the common payoff at the two symmetric profiles: 1 at all-Safe
/// (full insurance) versus p*u_high - (1-p)*kappa at all-Risky.
inline ParetoRank pareto_compare(const RegretGame& g) {
    const auto kappa = g.common_kappa();
    if (!kappa) throw HeterogeneousKappas("welfare comparison requires a common kappa");
    const double all_risky = g.p * g.u_high - (1.0 - g.p) * *kappa;
    if (all_risky > 1.0) return ParetoRank::AllRiskyDominates;
    if (all_risky < 1.0) return ParetoRank::AllSafeDominates;
    return ParetoRank::Equal;
}

/// Regret coefficient below which risky is a dominant action.
inline double risky_dominance_bound(double p, double u_high) {
    return (p * u_high - 1.0) / (1.0 - p);
}

// --- Two-type heterogeneity ----------------------------------------------

struct HeterogeneousReport {
    int n_players = 0;
    int m_averse = 0;          // players with kappa > 0
    double kappa = 0;          // their common coefficient
    double q_at_neutrals = 0;  // q(N - m): exposure of a safe averse player
    double q_star = 0;
    bool split_profile_is_nash = false;  // averse safe, neutrals risky
    bool all_risky_is_nash = false;
    int minimal_m_for_split = -1;  // smallest m making the split profile Nash; -1 if none
};

/// Analysis of the two-type game: m regret-averse players (common kappa)
/// against N-m regret-neutral ones. The neutral players hold risky as a
/// dominant action, so the candidate equilibria are all-risky and the
/// split profile where only the averse group plays safe.
inline HeterogeneousReport heterogeneous_pure_nash(const RegretGame& g) {
    double kappa = 0;
    int m = 0;
    for (double k : g.kappas) {
        if (k == 0) continue;
        if (kappa != 0 && k != kappa) {
            throw InvalidArgument("two-type analysis needs kappas in {0, kappa}");
        }
        kappa = k;
        ++m;
    }
    if (m == 0) throw InvalidArgument("two-type analysis needs at least one regret-averse player");
    const RegretGame averse_game =
        RegretGame::symmetric(g.n_players, g.p, g.u_high, kappa, g.q);
    if (classify_regime(averse_game) != Regime::Coordination) {
        throw InvalidArgument("two-type analysis expects the averse type in the coordination regime");
    }

    HeterogeneousReport report;
    report.n_players = g.n_players;
    report.m_averse = m;
    report.kappa = kappa;
    report.q_star = critical_q(averse_game);
    report.q_at_neutrals = g.q(g.n_players - m);

    // Split profile: averse players safe and exposed to the N-m risky
    // neutrals; it is Nash exactly when that exposure stays at or below the
    // indifference level q*.
    ActionProfile split(g.n_players, Action::Safe);
    for (int i = 0; i < g.n_players; ++i) {
        if (g.kappas[i] == 0) split.actions[i] = Action::Risky;
    }
    const int split_risky = split.risky_count();
    bool split_nash = true;
    for (int i = 0; i < g.n_players && split_nash; ++i) {
        const bool risky = split.actions[i] == Action::Risky;
        const double us = utility_safe(g, i, split_risky - (risky ? 1 : 0));
        const double ur = utility_risky(g, i);
        split_nash = risky ? !(us > ur) : !(ur > us);
    }
    report.split_profile_is_nash = split_nash;

    bool risky_nash = true;
    for (int i = 0; i < g.n_players && risky_nash; ++i) {
        risky_nash = !(utility_safe(g, i, g.n_players - 1) > utility_risky(g, i));
    }
    report.all_risky_is_nash = risky_nash;

    // Smallest averse-group size whose exposure q(N - m) stays at or below
    // the indifference level; q(0) = 0 guarantees a hit at m = N.
    for (int mm = 1; mm <= g.n_players; ++mm) {
        if (g.q(g.n_players - mm) <= report.q_star) {
            report.minimal_m_for_split = mm;
            break;
        }
    }
    return report;
}

// --- Bayesian cutoff equilibria ------------------------------------------

struct CutoffEquilibrium {
    int risky_types = 0;      // support prefix playing risky
    double cutoff = 0;        // kappa-hat: risky iff kappa < cutoff
    double risky_prob = 0;    // induced probability an opponent plays risky
};

inline constexpr int kBayesMaxPlayers = 8;

/// Symmetric Bayesian equilibria in cutoff strategies (risky iff
/// kappa < kappa-hat) for a discrete kappa distribution. Each candidate
/// cutoff at a support boundary is verified by interim best-response
/// checks against the opponent-count distribution it induces; an empty
/// result means no cutoff equilibrium exists.
inline std::vector<CutoffEquilibrium> bayesian_cutoff_equilibria(
    const RegretGame& game_template, std::span<const double> support,
    std::span<const double> weights) {
    const int n = game_template.n_players;
    if (n > kBayesMaxPlayers) {
        throw TooLarge("Bayesian cutoff search supports at most " +
                       std::to_string(kBayesMaxPlayers) + " players");
    }
    if (support.empty() || support.size() != weights.size()) {
        throw InvalidArgument("kappa distribution needs matching support and weights");
    }
    double total = 0;
    for (std::size_t i = 0; i < support.size(); ++i) {
        if (i > 0 && !(support[i - 1] < support[i])) {
            throw InvalidArgument("kappa support must be strictly ascending");
        }
        if (support[i] < 0) throw InvalidArgument("kappa support must be >= 0");
        if (weights[i] <= 0) throw InvalidArgument("kappa weights must be positive");
        total += weights[i];
    }
    if (std::abs(total - 1.0) > 1e-12) throw InvalidArgument("kappa weights must sum to 1");

    const double p = game_template.p;
    const double u_high = game_template.u_high;
    const double dominance = risky_dominance_bound(p, u_high);

    // E[q(K)] with K ~ Binomial(N-1, r): distribution over how many of the
    // N-1 opponents play risky under the candidate.
    auto expected_q = [&](double r) {
        double acc = 0;
        for (int k = 0; k <= n - 1; ++k) {
            const double pk = std::exp(stats::log_choose(n - 1, k)) * std::pow(r, k) *
                              std::pow(1.0 - r, n - 1 - k);
            acc += pk * game_template.q(k);
        }
        return acc;
    };

    std::vector<CutoffEquilibrium> out;
    for (std::size_t cut = 0; cut <= support.size(); ++cut) {
        // types [0, cut) risky, the rest safe
        bool skip = false;
        for (std::size_t t = cut; t < support.size(); ++t) {
            if (support[t] < dominance) skip = true;  // dominant-risky type forced safe
        }
        if (skip) continue;
        double r = 0;
        for (std::size_t t = 0; t < cut; ++t) r += weights[t];
        const double q_bar = expected_q(r);
        bool verified = true;
        for (std::size_t t = 0; t < support.size() && verified; ++t) {
            const double kappa = support[t];
            const double ur = p * u_high - (1.0 - p) * kappa;
            const double us = 1.0 - p * q_bar * kappa * (u_high - 1.0);
            verified = (t < cut) ? (ur >= us) : (us >= ur);
        }
        if (verified) {
            CutoffEquilibrium eq;
            eq.risky_types = static_cast<int>(cut);
            eq.cutoff = cut < support.size() ? support[cut]
                                             : std::numeric_limits<double>::infinity();
            eq.risky_prob = r;
            out.push_back(eq);
        }
    }
    return out;
}

}  // namespace regret
