// Acceptance suite: one criterion per function, one PASS/FAIL line each.
// Exit status is the number of failed criteria.
#include <chrono>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "regret/cli.hpp"
#include "regret/decide.hpp"
#include "regret/dynamics.hpp"
#include "regret/env.hpp"
#include "regret/game.hpp"
#include "regret/xp.hpp"
#include "regret/xp_experiment2.hpp"
#include "regret/xp_summary.hpp"

using namespace regret;
namespace fs = std::filesystem;

namespace {

struct Outcome {
    bool ok = true;
    std::string detail;

    void check(bool condition, const std::string& what) {
        if (!condition && ok) {
            ok = false;
            detail = what;
        }
    }
};

Money eur(double v) { return Money::from_units(v); }

ChoiceSet random_choice_set(std::mt19937_64& gen, int n) {
    std::uniform_real_distribution<double> prob(0.1, 0.9);
    std::vector<Lottery> ls;
    for (int i = 0; i < n; ++i) {
        ls.push_back(Lottery::risky("r" + std::to_string(i),
                                    Money::from_cents(50 + 29 * i),
                                    Money::from_cents(700 + 113 * i), prob(gen)));
    }
    ls.push_back(Lottery::safe("s", eur(5)));
    return ChoiceSet(std::move(ls));
}

UtilityFunction random_utility(std::mt19937_64& gen) {
    std::uniform_real_distribution<double> unif(0, 1);
    switch (gen() % 3) {
        case 0:
            return UtilityFunction::linear(0.2 + 2 * unif(gen), -1 + 2 * unif(gen));
        case 1:
            return UtilityFunction::normalized2(Money::from_cents(0), eur(5));
        default: {
            // strictly increasing random knots spanning the payoff range
            std::vector<std::pair<Money, double>> knots;
            double y = -unif(gen);
            for (int x : {0, 3, 6, 9, 13}) {
                knots.emplace_back(eur(x), y);
                y += 0.1 + unif(gen);
            }
            return UtilityFunction::table(std::move(knots));
        }
    }
}

ObservationMap random_obs(std::mt19937_64& gen, const ChoiceSet& cs, double keep = 0.5) {
    std::bernoulli_distribution coin(keep);
    std::vector<std::uint32_t> masks(cs.size());
    for (int k = 0; k < cs.size(); ++k) {
        std::uint32_t m = (1u << k) | (1u << cs.safe_index());
        for (int j = 0; j < cs.size(); ++j) {
            if (coin(gen)) m |= 1u << j;
        }
        masks[k] = m;
    }
    return ObservationMap(cs, masks);
}

// --- criterion 1 -----------------------------------------------------------

Outcome criterion1() {
    Outcome out;
    std::mt19937_64 gen(202501);
    std::uniform_real_distribution<double> unif(0, 1);
    for (int rep = 0; rep < 1000 && out.ok; ++rep) {
        const auto cs = random_choice_set(gen, 1 + static_cast<int>(gen() % 3));
        const auto report = check_ranking_equivalence(cs, random_utility(gen), 5 * unif(gen));
        out.check(report.violations == 0,
                  "ranking violation in environment " + std::to_string(rep));
    }
    return out;
}

// --- criterion 2 -----------------------------------------------------------

Outcome criterion2() {
    Outcome out;
    std::mt19937_64 gen(202502);
    std::uniform_real_distribution<double> unif(0, 1);
    std::bernoulli_distribution add(0.5);
    int accepted = 0;
    int attempts = 0;
    while (accepted < 1000 && out.ok) {
        if (++attempts > 200000) {
            out.check(false, "could not generate enough comparable pairs");
            break;
        }
        const auto cs = random_choice_set(gen, 1 + static_cast<int>(gen() % 3));
        const auto narrow = random_obs(gen, cs);
        std::vector<std::uint32_t> wide_masks(cs.size());
        bool widened = false;
        const std::uint32_t all = (1u << cs.size()) - 1u;
        for (int k = 0; k < cs.size(); ++k) {
            std::uint32_t m = narrow.mask(k);
            for (int j = 0; j < cs.size(); ++j) {
                if (!((m >> j) & 1u) && add(gen)) {
                    m |= 1u << j;
                    widened = true;
                }
            }
            wide_masks[k] = m & all;
        }
        if (!widened) continue;
        const InfoEnvironment wide_env(cs, ObservationMap(cs, wide_masks));
        const InfoEnvironment narrow_env(cs, narrow);
        if (compare_environments(wide_env, narrow_env) != EnvOrder::MoreInformative) continue;
        ++accepted;
        const RegretPreference pref(0.1 + 5 * unif(gen));
        const auto report =
            check_information_monotonicity(wide_env, narrow_env, pref, random_utility(gen));
        out.check(report.violations == 0, "utility rose with information, pair " +
                                              std::to_string(accepted));
        out.check(report.any_strict, "no strict drop in pair " + std::to_string(accepted));
    }
    if (out.ok) out.detail = "pairs=" + std::to_string(accepted) +
                             " attempts=" + std::to_string(attempts);
    return out;
}

// --- criterion 3 -----------------------------------------------------------

Outcome criterion3() {
    Outcome out;
    std::mt19937_64 gen(202503);
    std::uniform_real_distribution<double> unif(0, 1);
    for (int rep = 0; rep < 1000 && out.ok; ++rep) {
        const double p = 0.05 + 0.9 * unif(gen);
        const double kappa = 5 * unif(gen);
        out.check(std::abs(risky_threshold(p, 1.0, kappa) - 1.0 / p) <= 1e-12,
                  "q=1 endpoint identity failed");
        out.check(std::abs(risky_threshold(p, 0.0, kappa) -
                           (1.0 / p) * (1.0 + kappa * (1.0 - p))) <= 1e-12,
                  "q=0 endpoint identity failed");
        if (kappa > 0) {
            double prev = risky_threshold(p, 0.0, kappa);
            for (int i = 1; i < 100; ++i) {
                const double cur = risky_threshold(p, i / 99.0, kappa);
                if (!(cur < prev)) {
                    out.check(false, "threshold not strictly decreasing in q");
                    break;
                }
                prev = cur;
            }
        }
        // bisection oracle on the expected-utility indifference
        const double q = unif(gen);
        const RegretPreference pref(kappa);
        auto gap = [&](double u_high) {
            const TwoLotteryUtils v{0.0, 1.0, u_high};
            return eu_risky_two_lottery(v, p, pref) - eu_safe_two_lottery(v, p, q, pref);
        };
        double lo = 1.0, hi = 2.0;
        while (gap(hi) < 0) hi *= 2;
        for (int it = 0; it < 200; ++it) {
            const double mid = 0.5 * (lo + hi);
            (gap(mid) < 0 ? lo : hi) = mid;
        }
        out.check(std::abs(risky_threshold(p, q, kappa) - 0.5 * (lo + hi)) <= 1e-9,
                  "bisection oracle disagrees with the closed form");
    }
    return out;
}

// --- criterion 4 -----------------------------------------------------------

Outcome criterion4() {
    Outcome out;
    std::mt19937_64 gen(202504);
    std::uniform_real_distribution<double> unif(0, 1);
    for (int rep = 0; rep < 500 && out.ok; ++rep) {
        const int n = 2 + static_cast<int>(gen() % 7);
        const double p = 0.1 + 0.8 * unif(gen);
        const double kappa = 0.05 + 5 * unif(gen);
        const double span = dominant_risky_threshold(p, kappa) * 1.4;
        const double u_high = 1.0 + 1e-9 + unif(gen) * span;
        QFunction q = QFunction::linear(n);
        if (gen() % 3 == 1) q = QFunction::power(n, 0.3 + 3 * unif(gen));
        if (gen() % 3 == 2 && n > 2) q = QFunction::step(n, 1 + static_cast<int>(gen() % (n - 1)));
        const auto game = RegretGame::symmetric(n, p, u_high, kappa, q);
        const auto eqs = enumerate_pure_nash(game);
        switch (classify_regime(game)) {
            case Regime::DominantSafe:
                out.check(eqs.size() == 1 && eqs[0].all(Action::Safe),
                          "dominant-safe game without unique all-safe equilibrium");
                break;
            case Regime::DominantRisky:
                out.check(eqs.size() == 1 && eqs[0].all(Action::Risky),
                          "dominant-risky game without unique all-risky equilibrium");
                break;
            case Regime::Coordination:
                out.check(eqs.size() == 2 && eqs[0].all(Action::Safe) &&
                              eqs[1].all(Action::Risky),
                          "coordination game without exactly the two symmetric equilibria");
                break;
        }
    }
    return out;
}

// --- criterion 5 -----------------------------------------------------------

Outcome criterion5() {
    Outcome out;
    const auto worked = RegretGame::symmetric(2, 0.5, 2.5, 1.0, QFunction::linear(2));
    out.check(std::abs(mixed_symmetric_equilibrium(worked) - 1.0 / 3.0) <= 1e-9,
              "worked case sigma != 1/3");
    std::mt19937_64 gen(202505);
    std::uniform_real_distribution<double> unif(0, 1);
    for (int rep = 0; rep < 200 && out.ok; ++rep) {
        const double p = 0.1 + 0.8 * unif(gen);
        const double kappa = 0.1 + 4 * unif(gen);
        const double lo = dominant_safe_threshold(p);
        const double hi = dominant_risky_threshold(p, kappa);
        const double u_high = lo + unif(gen) * (hi - lo);
        const auto g = RegretGame::symmetric(2, p, u_high, kappa, QFunction::linear(2));
        const double sigma = mixed_symmetric_equilibrium(g);
        const double residual = std::abs((1.0 - sigma * p * kappa * (u_high - 1.0)) -
                                         (p * u_high - (1.0 - p) * kappa));
        out.check(residual < 1e-9, "indifference residual too large");
    }
    return out;
}

// --- criterion 6 -----------------------------------------------------------

Outcome criterion6() {
    Outcome out;
    std::mt19937_64 gen(202506);
    std::uniform_real_distribution<double> unif(0, 1);
    for (int rep = 0; rep < 500 && out.ok; ++rep) {
        const double p = 0.1 + 0.8 * unif(gen);
        const double kappa = 0.1 + 4 * unif(gen);
        const double lo = dominant_safe_threshold(p);
        const double hi = dominant_risky_threshold(p, kappa);
        // strict interior
        const double u_high = lo + (0.001 + 0.998 * unif(gen)) * (hi - lo);
        const auto g = RegretGame::symmetric(4, p, u_high, kappa, QFunction::linear(4));
        out.check(classify_regime(g) == Regime::Coordination, "interior point left the regime");
        out.check(pareto_compare(g) == ParetoRank::AllSafeDominates,
                  "all-safe not Pareto dominant in the interior");
        // welfare switch point: bisect the all-risky payoff against 1
        double a = lo, b = hi + 10;
        for (int it = 0; it < 200; ++it) {
            const double mid = 0.5 * (a + b);
            (p * mid - (1 - p) * kappa < 1.0 ? a : b) = mid;
        }
        out.check(std::abs(0.5 * (a + b) - hi) <= 1e-9,
                  "welfare switch does not coincide with the dominant-risky threshold");
    }
    return out;
}

// --- criterion 7 -----------------------------------------------------------

Outcome criterion7() {
    Outcome out;
    std::mt19937_64 gen(202507);
    std::uniform_real_distribution<double> unif(0, 1);
    for (int rep = 0; rep < 200 && out.ok; ++rep) {
        const int n = 2 + static_cast<int>(gen() % 7);
        const double p = 0.1 + 0.8 * unif(gen);
        const double kappa = 0.1 + 4 * unif(gen);
        const double lo = dominant_safe_threshold(p);
        const double hi = dominant_risky_threshold(p, kappa);
        const double u_high = lo + unif(gen) * (hi - lo);
        const int m = 1 + static_cast<int>(gen() % n);
        std::vector<double> kappas(n, 0.0);
        for (int i = 0; i < m; ++i) kappas[i] = kappa;
        QFunction q = (gen() & 1) && n > 2 ? QFunction::power(n, 0.4 + 2.5 * unif(gen))
                                           : QFunction::linear(n);
        const RegretGame g(n, p, u_high, kappas, q);
        const auto report = heterogeneous_pure_nash(g);
        out.check(report.all_risky_is_nash, "all-risky is not an equilibrium");
        out.check(report.split_profile_is_nash == (report.q_at_neutrals <= report.q_star),
                  "split-profile status disagrees with the q(N-m) <= q* criterion");

        const auto eqs = enumerate_pure_nash(g);
        ActionProfile split(n, Action::Safe);
        for (int i = 0; i < n; ++i) {
            if (kappas[i] == 0) split.actions[i] = Action::Risky;
        }
        const bool in_brute = std::find(eqs.begin(), eqs.end(), split) != eqs.end();
        out.check(report.split_profile_is_nash == in_brute,
                  "split-profile status disagrees with brute force");

        int minimal = -1;
        for (int mm = 1; mm <= n; ++mm) {
            std::vector<double> ks(n, 0.0);
            for (int i = 0; i < mm; ++i) ks[i] = kappa;
            ActionProfile sp(n, Action::Safe);
            for (int i = mm; i < n; ++i) sp.actions[i] = Action::Risky;
            const auto mm_eqs = enumerate_pure_nash(RegretGame(n, p, u_high, ks, q));
            if (std::find(mm_eqs.begin(), mm_eqs.end(), sp) != mm_eqs.end()) {
                minimal = mm;
                break;
            }
        }
        out.check(report.minimal_m_for_split == minimal,
                  "minimal m disagrees with exhaustive search");
    }
    return out;
}

// --- criterion 8 -----------------------------------------------------------

Outcome criterion8() {
    Outcome out;
    std::mt19937_64 gen(202508);
    std::uniform_real_distribution<double> unif(0, 1);

    // (a) best-response absorption within 50 N revisions
    int absorbed = 0;
    const int runs = 1000;
    for (int r = 0; r < runs; ++r) {
        const int n = 2 + static_cast<int>(gen() % 7);
        const double p = 0.15 + 0.7 * unif(gen);
        const double kappa = 0.2 + 3 * unif(gen);
        const double lo = dominant_safe_threshold(p);
        const double hi = dominant_risky_threshold(p, kappa);
        const auto g = RegretGame::symmetric(n, p, lo + unif(gen) * (hi - lo), kappa,
                                             QFunction::linear(n));
        DynamicsConfig cfg;
        cfg.rule = BestResponseRule{0.1};
        cfg.steps = 50 * n;
        cfg.seed = 900000 + r;
        rng::Stream init(777, {static_cast<std::uint64_t>(r)});
        const auto traj = run_trajectory(g, random_profile(n, init), cfg, r);
        if (traj.absorbed_at.has_value()) ++absorbed;
    }
    out.check(absorbed >= 999, "absorption rate " + std::to_string(absorbed) + "/1000 < 99.9%");

    // (b) dominant-risky with sharp logit locks in all-risky
    {
        const auto g = RegretGame::symmetric(6, 0.5, 3.2, 1.0, QFunction::linear(6));
        DynamicsConfig cfg;
        cfg.rule = LogitRule{50.0};
        cfg.steps = 600;
        cfg.seed = 20250808;
        cfg.replications = 1000;
        const auto report = long_run_shares(g, cfg);
        out.check(report.all_risky.value >= 0.99,
                  "all-risky share " + io::fmt_double(report.all_risky.value) + " < 0.99");
    }

    // (c) the steep q specification tips selection toward all-risky
    {
        const int n = 6;
        const auto linear_game = RegretGame::symmetric(n, 0.5, 2.5, 1.0, QFunction::linear(n));
        const auto steep_game = RegretGame::symmetric(n, 0.5, 2.5, 1.0, QFunction::step(n, 1));
        DynamicsConfig cfg;
        cfg.rule = LogitRule{4.0};
        cfg.steps = 60 * n;
        cfg.seed = 20250809;
        cfg.replications = 1000;
        const auto lin = long_run_shares(linear_game, cfg);
        const auto steep = long_run_shares(steep_game, cfg);
        const auto k_steep = static_cast<std::int64_t>(std::llround(steep.all_risky.value * 1000));
        const auto k_lin = static_cast<std::int64_t>(std::llround(lin.all_risky.value * 1000));
        const double z = stats::two_proportion_z(k_steep, 1000, k_lin, 1000);
        out.check(steep.all_risky.value > lin.all_risky.value && z > 2.326,
                  "steep q share " + io::fmt_double(steep.all_risky.value) +
                      " not significantly above linear " + io::fmt_double(lin.all_risky.value));
        if (out.ok) {
            out.detail = "absorbed=" + std::to_string(absorbed) + "/1000, steep " +
                         io::fmt_double(steep.all_risky.value) + " vs linear " +
                         io::fmt_double(lin.all_risky.value) + " (z=" + io::fmt_double(z) + ")";
        }
    }
    return out;
}

// --- criterion 9 -----------------------------------------------------------

Outcome criterion9() {
    Outcome out;
    xp::SessionConfig base;
    base.grid = xp::SessionConfig::default_grid();
    base.seed = 20250810;

    // Partner-dependent thresholds stay bounded by the two
    // elicited ones for every agent and every belief, direction per type.
    {
        std::mt19937_64 gen(202509);
        std::uniform_real_distribution<double> unif(0, 1);
        for (int rep = 0; rep < 60 && out.ok; ++rep) {
            xp::SyntheticAgent agent;
            const int kind = rep % 3;
            if (kind == 0) agent.pref = RegretPreference(0.05 + 1.1 * unif(gen));
            if (kind == 1) agent.pref = RegretPreference(0.0, 0.05 + 1.1 * unif(gen));
            if (kind == 2) agent.pref = RegretPreference(0.0, 0.0);
            base.population = {agent, agent};
            rng::Stream stream(rep);
            const auto [x1, x2] = xp::elicit_thresholds(agent, base, stream);
            for (int bi = 0; bi <= 20; ++bi) {
                const Money x3 = xp::decision3_threshold(agent, bi / 20.0, base);
                if (kind == 0) out.check(x1 <= x3 && x3 <= x2, "averse bounds violated");
                if (kind == 1) out.check(x2 <= x3 && x3 <= x1, "rejoice bounds violated");
                if (kind == 2) out.check(x1 == x3 && x3 == x2, "neutral equality violated");
            }
        }
    }

    // Dominance decisions chosen in every D4/D5 round, beliefs aside.
    {
        std::vector<xp::SyntheticAgent> pop;
        for (int i = 0; i < 48; ++i) {
            xp::SyntheticAgent agent;
            agent.pref = RegretPreference(std::vector<double>{0.0, 0.3, 0.7, 1.0}[i % 4]);
            pop.push_back(agent);
        }
        base.population = pop;
        base.replications = 5;
        const auto result = xp::run_sessions(base);
        int d4_total = 0, d4_risky = 0, d5_total = 0, d5_risky = 0;
        for (const auto& r : result.rounds) {
            if (r.decision_id == 4) {
                ++d4_total;
                d4_risky += r.choice == Action::Risky;
            }
            if (r.decision_id == 5) {
                ++d5_total;
                d5_risky += r.choice == Action::Risky;
            }
        }
        out.check(d4_total > 0 && d4_risky == 0,
                  "lottery chosen in a dominant-safe decision (" + std::to_string(d4_risky) +
                      "/" + std::to_string(d4_total) + ")");
        out.check(d5_total > 0 && d5_risky == d5_total,
                  "sure amount chosen in a dominant-risky decision");
    }

    // The find-out game: averse agents mirror cooperative partners.
    {
        xp::Experiment2Config cfg2;
        cfg2.seed = 31337;
        std::vector<xp::SyntheticAgent> pop;
        for (int i = 0; i < 200; ++i) {
            xp::SyntheticAgent agent;
            agent.pref = RegretPreference(i % 4 == 0 ? 0.6 + 0.1 * (i % 3) : 0.0);
            pop.push_back(agent);
        }
        const auto records = xp::run_experiment2(pop, cfg2);
        int averse_not_believers = 0;
        for (const auto& r : records) {
            if (r.excluded) continue;
            if (r.type == xp::AgentType::RegretAverse && r.d4_belief_find_out < 0.5) {
                ++averse_not_believers;
                out.check(r.d4 == xp::FindOutChoice::NotFindOut,
                          "averse agent believing not-find-out chose find-out");
            }
            if (r.type != xp::AgentType::RegretAverse) {
                out.check(r.d4 == xp::FindOutChoice::FindOut,
                          "neutral agent declined the dominant find-out");
            }
        }
        out.check(averse_not_believers > 0, "no averse not-find-out believers generated");
    }

    // Full-size harness: 144 agents, 20 coordination rounds, 200
    // replications, summarized, inside the time budget (checked by the
    // criterion runner).
    {
        std::vector<xp::SyntheticAgent> pop;
        std::mt19937_64 gen(4242);
        std::uniform_real_distribution<double> unif(0, 1);
        for (int i = 0; i < 144; ++i) {
            xp::SyntheticAgent agent;
            const double draw = unif(gen);
            if (draw < 0.5) {
                agent.pref = RegretPreference(0.0);
            } else if (draw < 0.78) {
                agent.pref = RegretPreference(0.2 + unif(gen));
            } else {
                agent.pref = RegretPreference(0.0, 0.2 + unif(gen));
            }
            agent.noise = 0.05;
            pop.push_back(agent);
        }
        base.population = pop;
        base.rounds_d6 = 20;
        base.replications = 200;
        const auto result = xp::run_sessions(base);
        const auto summary = xp::summarize_session(result);
        out.check(result.rounds.size() == 200u * 72u * 22u * 2u,
                  "unexpected round count " + std::to_string(result.rounds.size()));
        double averse_share = 0;
        for (const auto& s : summary.type_shares) {
            if (s.group == "regret_averse") averse_share = s.share;
        }
        out.check(averse_share > 0.2, "population composition degenerated");
    }
    return out;
}

// --- criterion 10 ----------------------------------------------------------

Outcome criterion10() {
    Outcome out;
    const fs::path root = fs::temp_directory_path() / "regret_acceptance";
    fs::create_directories(root);

    auto write = [&](const std::string& name, const std::string& body) {
        const fs::path p = root / name;
        std::ofstream o(p, std::ios::trunc);
        o << body;
        return p;
    };
    auto slurp = [](const fs::path& p) {
        std::ifstream in(p, std::ios::binary);
        std::ostringstream ss;
        ss << in.rdbuf();
        return ss.str();
    };

    const auto game_cfg = write("game.json", R"({
      "game": {"n_players": 5, "p": 0.5, "u_high": 2.5, "kappa": 1.0,
               "q_function": {"kind": "linear"}}
    })");
    const auto dyn_cfg = write("dyn.json", R"({
      "seed": 77,
      "game": {"n_players": 6, "p": 0.5, "u_high": 2.5, "kappa": 1.0,
               "q_function": {"kind": "step", "m_star": 1}},
      "dynamics": {"rule": {"kind": "logit", "beta": 4.0}, "steps": 240,
                   "replications": 200}
    })");
    const auto xp_cfg = write("xp.json", R"({
      "seed": 12345,
      "experiment": {
        "which": "exp1",
        "population": {"size": 24, "kappa1_values": [0.0, 1.0],
                       "kappa1_weights": [0.5, 0.5], "noise": 0.1},
        "rounds_d6": 10, "replications": 3
      }
    })");

    const std::vector<std::tuple<std::string, std::string, fs::path, std::string>> cases{
        {"game", "classify", game_cfg, "csv"},
        {"game", "classify", game_cfg, "json"},
        {"dynamics", "shares", dyn_cfg, "csv"},
        {"xp", "run", xp_cfg, "csv"},
        {"xp", "run", xp_cfg, "json"},
    };
    int case_id = 0;
    for (const auto& [group, action, cfg, format] : cases) {
        const fs::path out_a = root / ("a" + std::to_string(case_id));
        const fs::path out_b = root / ("b" + std::to_string(case_id));
        ++case_id;
        for (const auto& dir : {out_a, out_b}) {
            std::error_code ec;
            fs::remove_all(dir, ec);
            cli::Invocation inv;
            inv.group = group;
            inv.action = action;
            inv.config_path = cfg.string();
            inv.out_dir = dir.string();
            inv.format = format;
            std::ostringstream so, se;
            out.check(cli::run(inv, so, se) == 0, group + " " + action + " failed: " + se.str());
        }
        if (!out.ok) break;
        std::size_t files = 0;
        for (const auto& entry : fs::directory_iterator(out_a)) {
            ++files;
            const fs::path other = out_b / entry.path().filename();
            out.check(fs::exists(other), "missing rerun artifact " + entry.path().filename().string());
            if (out.ok) {
                out.check(slurp(entry.path()) == slurp(other),
                          "rerun differs: " + entry.path().filename().string());
            }
        }
        out.check(files > 0, "command produced no artifacts");
    }
    return out;
}

}  // namespace

int main() {
    struct Criterion {
        int id;
        const char* label;
        double budget_seconds;
        Outcome (*fn)();
    };
    const std::vector<Criterion> criteria{
        {1, "full-information ranking equivalence on 1000 random environments", 10, criterion1},
        {2, "information monotonicity on 1000 comparable environment pairs", 10, criterion2},
        {3, "threshold endpoint identities, monotonicity and bisection agreement", 30, criterion3},
        {4, "regime classification matches brute-force equilibria on 500 games", 60, criterion4},
        {5, "mixed-equilibrium indifference residuals and the worked case", 30, criterion5},
        {6, "all-safe Pareto dominance and the welfare switch point", 30, criterion6},
        {7, "two-type equilibria, the exposure criterion and minimal group size", 60, criterion7},
        {8, "best-response absorption and logit selection shares", 120, criterion8},
        {9, "synthetic experiment predictions and full-size harness", 300, criterion9},
        {10, "byte-identical reruns for every command and format", 60, criterion10},
    };

    int failures = 0;
    for (const auto& c : criteria) {
        const auto start = std::chrono::steady_clock::now();
        const Outcome result = c.fn();
        const double secs =
            std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        const bool in_budget = secs < c.budget_seconds;
        const bool ok = result.ok && in_budget;
        std::printf("%s - criterion %d: %s (%.2fs)%s%s\n", ok ? "PASS" : "FAIL", c.id, c.label,
                    secs,
                    result.detail.empty() ? "" : (" [" + result.detail + "]").c_str(),
                    !in_budget ? " [over time budget]" : "");
        if (!ok) ++failures;
    }
    if (failures == 0) {
        std::printf("all %zu criteria passed\n", criteria.size());
    } else {
        std::printf("%d criteria FAILED\n", failures);
    }
    return failures;
}
