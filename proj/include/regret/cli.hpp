// Command dispatch: loads a JSON run configuration, executes one command,
// and writes its reports atomically under the output directory. Every
// artifact is a pure function of (config text, seed), so reruns are
// byte-identical.
#pragma once

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "regret/config.hpp"
#include "regret/report.hpp"
#include "regret/xp_summary.hpp"

namespace regret::cli {

namespace fs = std::filesystem;
using io::Csv;
using io::Json;

struct Invocation {
    std::string group;    // env | decide | game | dynamics | xp
    std::string action;   // inspect | eval | ...
    std::string config_path;
    std::optional<std::string> out_dir;    // overrides config
    std::optional<std::string> format;     // overrides config
    std::optional<std::uint64_t> seed;     // overrides config
};

namespace detail {

inline std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open config file: " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

inline std::string bits_string(std::uint32_t bits, int n) {
    std::string s;
    for (int i = 0; i < n; ++i) s += ((bits >> i) & 1u) ? '1' : '0';
    return s;
}

inline Json metadata(const io::RunConfig& cfg) {
    Json m;
    m["config_digest"] = io::digest(cfg.raw_text);
    m["version"] = std::string(io::kVersion);
    if (cfg.seed) {
        m["seed"] = *cfg.seed;
    } else {
        m["seed"] = nullptr;
    }
    return m;
}

inline void write_json(const fs::path& path, const Json& j) {
    io::write_text_atomic(path, j.dump(2) + "\n");
}

/// Collects per-command outputs and materializes them in one format.
class Reports {
public:
    Reports(const io::RunConfig& cfg, fs::path dir) : cfg_(cfg), dir_(std::move(dir)) {}

    void add(const std::string& name, const Csv& csv, const Json& rows) {
        names_.push_back(name);
        csvs_.push_back(csv.text());
        json_[name] = rows;
    }

    void flush() const {
        if (cfg_.format == "json") {
            Json out;
            out["metadata"] = metadata(cfg_);
            for (const auto& [k, v] : json_.items()) out[k] = v;
            write_json(dir_ / "results.json", out);
            return;
        }
        for (std::size_t i = 0; i < names_.size(); ++i) {
            io::write_text_atomic(dir_ / (names_[i] + ".csv"), csvs_[i]);
        }
    }

private:
    const io::RunConfig& cfg_;
    fs::path dir_;
    std::vector<std::string> names_;
    std::vector<std::string> csvs_;
    Json json_ = Json::object();
};

inline std::uint64_t require_seed(const io::RunConfig& cfg) {
    if (!cfg.seed) throw ConfigError("seed", "required for stochastic commands");
    return *cfg.seed;
}

// --- env ------------------------------------------------------------------

inline std::string cmd_env_inspect(const io::RunConfig& cfg, Reports& reports) {
    const auto env = io::parse_environment(io::section(cfg, "environment"), "environment");
    const auto space = build_state_space(env.choice_set);

    Csv states({"state", "bits", "prob"});
    Json jstates = Json::array();
    for (int s = 0; s < space.size(); ++s) {
        const std::string bits = bits_string(space.states[s].successes, space.risky_count);
        states.cell(s).cell(bits).cell(space.states[s].prob);
        jstates.push_back({{"state", s}, {"bits", bits}, {"prob", space.states[s].prob}});
    }
    reports.add("states", states, jstates);

    Csv parts({"choice", "block", "label", "states"});
    Json jparts = Json::array();
    for (int k = 0; k < env.choice_set.size(); ++k) {
        const Partition part = derive_partition(env.choice_set, env.observation, k);
        for (std::size_t b = 0; b < part.blocks.size(); ++b) {
            std::string members;
            for (std::uint32_t s : part.blocks[b].states) {
                if (!members.empty()) members += ';';
                members += std::to_string(s);
            }
            const std::string& choice_id = env.choice_set.lottery(k).id;
            const std::string& label_id = env.choice_set.lottery(part.blocks[b].label).id;
            parts.cell(choice_id).cell(static_cast<int>(b)).cell(label_id).cell(members);
            jparts.push_back({{"choice", choice_id},
                              {"block", b},
                              {"label", label_id},
                              {"states", members}});
        }
    }
    reports.add("partitions", parts, jparts);
    return "env inspect: n=" + std::to_string(env.choice_set.risky_count()) +
           " states=" + std::to_string(space.size());
}

// --- decide -----------------------------------------------------------------

inline std::string cmd_decide_eval(const io::RunConfig& cfg, Reports& reports) {
    const auto env = io::parse_environment(io::section(cfg, "environment"), "environment");
    const auto prefs = io::parse_preferences(io::section(cfg, "preferences"), "preferences");
    const auto info_cfg = io::parse_info(io::section(cfg, "info"), "info");

    if (info_cfg.q && env.choice_set.risky_count() != 1) {
        throw ConfigError("info.q",
                          "the scalar learning probability applies to environments with "
                          "exactly one risky lottery; give per-choice observation sets instead");
    }
    StochasticInfo info = info_cfg.q ? StochasticInfo::learn_prob(*info_cfg.q)
                                     : StochasticInfo::deterministic(env.observation);
    Csv table({"lottery", "eu_choiceless", "eu_total"});
    Json rows = Json::array();
    for (int k = 0; k < env.choice_set.size(); ++k) {
        const double eu_u = expected_choiceless_utility(env.choice_set, k, prefs.u);
        const double eu_t = expected_total_utility(env.choice_set, k, info, prefs.pref, prefs.u);
        const std::string& id = env.choice_set.lottery(k).id;
        table.cell(id).cell(eu_u).cell(eu_t);
        rows.push_back({{"lottery", id}, {"eu_choiceless", eu_u}, {"eu_total", eu_t}});
    }
    reports.add("utilities", table, rows);
    const int best = optimal_choice(env.choice_set, info, prefs.pref, prefs.u);
    Csv opt({"optimal"});
    opt.cell(env.choice_set.lottery(best).id);
    reports.add("optimal", opt, Json{{"optimal", env.choice_set.lottery(best).id}});
    return "decide eval: optimal=" + env.choice_set.lottery(best).id;
}

inline std::string cmd_decide_threshold(const io::RunConfig& cfg, Reports& reports) {
    const auto env = io::parse_environment(io::section(cfg, "environment"), "environment");
    const auto prefs = io::parse_preferences(io::section(cfg, "preferences"), "preferences");
    if (env.choice_set.risky_count() != 1) {
        throw ConfigError("environment.lotteries",
                          "threshold command needs exactly one risky lottery");
    }
    io::InfoConfig info;
    if (cfg.raw.contains("info")) info = io::parse_info(cfg.raw.at("info"), "info");
    std::vector<double> qs = info.q_sweep;
    if (qs.empty()) {
        for (int i = 0; i <= 10; ++i) qs.push_back(i / 10.0);
    }
    const Lottery* risky = nullptr;
    for (int k = 0; k < env.choice_set.size(); ++k) {
        if (env.choice_set.lottery(k).kind == LotteryKind::Risky) {
            risky = &env.choice_set.lottery(k);
        }
    }
    Csv table({"q", "threshold_utils", "threshold_money"});
    Json rows = Json::array();
    for (double q : qs) {
        const double t = risky_threshold(risky->p, q, prefs.pref.kappa1);
        std::string money_cell;
        Json jt = {{"q", q}, {"threshold_utils", t}};
        if (prefs.u.is_linear_form()) {
            const double u_low = prefs.u(risky->low);
            const double u_safe = prefs.u(env.choice_set.safe_value());
            const Money m = *prefs.u.invert(u_low + t * (u_safe - u_low));
            money_cell = m.str();
            jt["threshold_money"] = money_cell;
        }
        table.cell(q).cell(t).cell(money_cell);
        rows.push_back(jt);
    }
    reports.add("thresholds", table, rows);
    return "decide threshold: rows=" + std::to_string(qs.size());
}

inline std::string cmd_decide_bdm(const io::RunConfig& cfg, Reports& reports) {
    const auto prefs = io::parse_preferences(io::section(cfg, "preferences"), "preferences");
    xp::SessionConfig session;
    session.grid = xp::SessionConfig::default_grid();
    if (cfg.raw.contains("experiment")) {
        const auto xpc = io::parse_experiment_defaults(cfg.raw.at("experiment"), "experiment");
        session.grid = xpc.grid;
        session.safe_value = xpc.safe_value;
        session.p = xpc.p;
    }
    io::InfoConfig info;
    if (cfg.raw.contains("info")) info = io::parse_info(cfg.raw.at("info"), "info");
    std::vector<double> qs = info.q_sweep;
    if (qs.empty() && info.q) qs.push_back(*info.q);
    if (qs.empty()) qs = {1.0, 0.0};

    Csv table({"q", "threshold"});
    Json rows = Json::array();
    for (double q : qs) {
        const auto x = bdm_threshold(prefs.pref, prefs.u, session.p, session.safe_value,
                                     session.grid, q);
        table.cell(q).cell(x ? x->str() : "NO_SWITCH");
        rows.push_back({{"q", q}, {"threshold", x ? Json(x->str()) : Json(nullptr)}});
    }
    reports.add("bdm", table, rows);
    return "decide bdm: rows=" + std::to_string(qs.size());
}

// --- game -------------------------------------------------------------------

inline void emit_equilibria(const RegretGame& game, Reports& reports) {
    const auto eqs = enumerate_pure_nash(game);
    Csv table({"profile", "risky_count"});
    Json rows = Json::array();
    for (const auto& eq : eqs) {
        table.cell(eq.str()).cell(eq.risky_count());
        rows.push_back({{"profile", eq.str()}, {"risky_count", eq.risky_count()}});
    }
    reports.add("equilibria", table, rows);
}

inline std::string cmd_game_classify(const io::RunConfig& cfg, Reports& reports) {
    const auto gc = io::parse_game(io::section(cfg, "game"), "game");
    const Regime regime = classify_regime(gc.game);
    const double kappa = *gc.game.common_kappa();

    Csv table({"regime", "dominant_safe_below", "dominant_risky_above", "q_star", "mixed_sigma",
               "pareto"});
    Json row;
    row["regime"] = to_string(regime);
    row["dominant_safe_below"] = dominant_safe_threshold(gc.game.p);
    row["dominant_risky_above"] = dominant_risky_threshold(gc.game.p, kappa);
    table.cell(to_string(regime))
        .cell(dominant_safe_threshold(gc.game.p))
        .cell(dominant_risky_threshold(gc.game.p, kappa));
    if (regime == Regime::Coordination) {
        const double qs = critical_q(gc.game);
        table.cell(qs);
        row["q_star"] = qs;
        if (gc.game.n_players == 2) {
            const double sigma = mixed_symmetric_equilibrium(gc.game);
            table.cell(sigma);
            row["mixed_sigma"] = sigma;
        } else {
            table.cell(std::string());
            row["mixed_sigma"] = nullptr;
        }
    } else {
        table.cell(std::string()).cell(std::string());
        row["q_star"] = nullptr;
        row["mixed_sigma"] = nullptr;
    }
    table.cell(to_string(pareto_compare(gc.game)));
    row["pareto"] = to_string(pareto_compare(gc.game));
    reports.add("game_summary", table, row);
    emit_equilibria(gc.game, reports);
    return std::string("game classify: ") + to_string(regime);
}

inline std::string cmd_game_solve(const io::RunConfig& cfg, Reports& reports) {
    const auto gc = io::parse_game(io::section(cfg, "game"), "game");
    emit_equilibria(gc.game, reports);
    const auto count = enumerate_pure_nash(gc.game).size();
    return "game solve: equilibria=" + std::to_string(count);
}

inline std::string cmd_game_mixed(const io::RunConfig& cfg, Reports& reports) {
    const auto gc = io::parse_game(io::section(cfg, "game"), "game");
    const double sigma = mixed_symmetric_equilibrium(gc.game);
    const double kappa = *gc.game.common_kappa();
    const double residual = std::abs((1.0 - sigma * gc.game.p * kappa * (gc.game.u_high - 1.0)) -
                                     (gc.game.p * gc.game.u_high - (1.0 - gc.game.p) * kappa));
    Csv table({"sigma", "residual"});
    table.cell(sigma).cell(residual);
    reports.add("mixed", table, Json{{"sigma", sigma}, {"residual", residual}});
    return "game mixed: sigma=" + io::fmt_double(sigma);
}

inline std::string cmd_game_hetero(const io::RunConfig& cfg, Reports& reports) {
    const auto gc = io::parse_game(io::section(cfg, "game"), "game");
    const auto report = heterogeneous_pure_nash(gc.game);
    Csv table({"n_players", "m_averse", "kappa", "q_at_neutrals", "q_star",
               "split_profile_is_nash", "all_risky_is_nash", "minimal_m_for_split"});
    table.cell(report.n_players)
        .cell(report.m_averse)
        .cell(report.kappa)
        .cell(report.q_at_neutrals)
        .cell(report.q_star)
        .cell(report.split_profile_is_nash ? 1 : 0)
        .cell(report.all_risky_is_nash ? 1 : 0)
        .cell(report.minimal_m_for_split);
    Json row{{"n_players", report.n_players},
             {"m_averse", report.m_averse},
             {"kappa", report.kappa},
             {"q_at_neutrals", report.q_at_neutrals},
             {"q_star", report.q_star},
             {"split_profile_is_nash", report.split_profile_is_nash},
             {"all_risky_is_nash", report.all_risky_is_nash},
             {"minimal_m_for_split", report.minimal_m_for_split}};
    reports.add("hetero", table, row);
    return std::string("game hetero: split profile is ") +
           (report.split_profile_is_nash ? "an equilibrium" : "not an equilibrium");
}

inline std::string cmd_game_bayes(const io::RunConfig& cfg, Reports& reports) {
    const auto gc = io::parse_game(io::section(cfg, "game"), "game");
    if (gc.kappa_support.empty()) {
        throw ConfigError("game.kappa_support", "required for the Bayesian cutoff search");
    }
    const auto eqs = bayesian_cutoff_equilibria(gc.game, gc.kappa_support, gc.kappa_weights);
    Csv table({"risky_types", "cutoff", "risky_prob"});
    Json rows = Json::array();
    for (const auto& eq : eqs) {
        const bool all_in = eq.risky_types == static_cast<int>(gc.kappa_support.size());
        table.cell(eq.risky_types).cell(all_in ? "inf" : io::fmt_double(eq.cutoff))
            .cell(eq.risky_prob);
        rows.push_back({{"risky_types", eq.risky_types},
                        {"cutoff", all_in ? Json("inf") : Json(eq.cutoff)},
                        {"risky_prob", eq.risky_prob}});
    }
    reports.add("bayes_cutoffs", table, rows);
    return "game bayes: cutoff equilibria=" + std::to_string(eqs.size());
}

// --- dynamics ----------------------------------------------------------------

inline ActionProfile initial_profile(const io::DynamicsSection& dyn, const RegretGame& game,
                                     std::uint64_t seed) {
    if (dyn.initial_risky_count) {
        ActionProfile p(game.n_players, Action::Safe);
        for (int i = 0; i < *dyn.initial_risky_count; ++i) p.actions[i] = Action::Risky;
        return p;
    }
    rng::Stream init(seed, {0x74696E69ull, 0});
    return random_profile(game.n_players, init);
}

inline std::string cmd_dynamics_run(const io::RunConfig& cfg, Reports& reports) {
    const auto gc = io::parse_game(io::section(cfg, "game"), "game");
    auto dyn = io::parse_dynamics(io::section(cfg, "dynamics"), "dynamics",
                                  gc.game.n_players);
    dyn.config.seed = require_seed(cfg);
    const ActionProfile start = initial_profile(dyn, gc.game, dyn.config.seed);
    const Trajectory traj = run_trajectory(gc.game, start, dyn.config, 0);

    Csv table({"step", "risky_count"});
    Json rows = Json::array();
    for (std::size_t t = 0; t < traj.risky_counts.size(); ++t) {
        table.cell(static_cast<int>(t)).cell(traj.risky_counts[t]);
        rows.push_back({{"step", t}, {"risky_count", traj.risky_counts[t]}});
    }
    reports.add("trajectory", table, rows);

    Csv term({"terminal", "absorbed_at"});
    term.cell(traj.terminal.str())
        .cell(traj.absorbed_at ? std::to_string(*traj.absorbed_at) : std::string());
    Json jterm{{"terminal", traj.terminal.str()},
               {"absorbed_at", traj.absorbed_at ? Json(*traj.absorbed_at) : Json(nullptr)}};
    reports.add("terminal", term, jterm);
    return "dynamics run: terminal=" + traj.terminal.str() +
           (traj.absorbed_at ? " absorbed_at=" + std::to_string(*traj.absorbed_at) : "");
}

inline std::string cmd_dynamics_shares(const io::RunConfig& cfg, Reports& reports) {
    const auto gc = io::parse_game(io::section(cfg, "game"), "game");
    auto dyn = io::parse_dynamics(io::section(cfg, "dynamics"), "dynamics",
                                  gc.game.n_players);
    dyn.config.seed = require_seed(cfg);
    const SharesReport shares = long_run_shares(gc.game, dyn.config);
    Csv table({"outcome", "share", "std_error"});
    Json rows = Json::array();
    auto emit = [&](const char* name, const stats::Proportion& p) {
        table.cell(std::string(name)).cell(p.value).cell(p.std_error);
        rows.push_back({{"outcome", name}, {"share", p.value}, {"std_error", p.std_error}});
    };
    emit("all_safe", shares.all_safe);
    emit("all_risky", shares.all_risky);
    emit("other", shares.other);
    reports.add("shares", table, rows);
    return "dynamics shares: all_risky=" + io::fmt_double(shares.all_risky.value);
}

// --- xp ----------------------------------------------------------------------

inline const char* action_name(Action a) { return a == Action::Risky ? "risky" : "safe"; }

inline void emit_session_records(const xp::SessionResult& result, Reports& reports) {
    Csv thresholds({"session", "agent", "x1", "x2", "x3", "d3_belief", "d3_guess", "type"});
    Json jthresh = Json::array();
    for (const auto& t : result.thresholds) {
        thresholds.cell(t.session).cell(t.agent).cell(t.x1).cell(t.x2).cell(t.x3)
            .cell(t.d3_belief).cell(t.d3_guess).cell(std::string(to_string(t.type)));
        jthresh.push_back({{"session", t.session},
                           {"agent", t.agent},
                           {"x1", t.x1.str()},
                           {"x2", t.x2.str()},
                           {"x3", t.x3.str()},
                           {"d3_belief", t.d3_belief},
                           {"d3_guess", t.d3_guess.str()},
                           {"type", to_string(t.type)}});
    }
    reports.add("xp_thresholds", thresholds, jthresh);

    Csv rounds({"session", "group", "pair", "round", "decision_id", "agent_id", "type", "choice",
                "belief", "past_regret", "payoff"});
    Json jrounds = Json::array();
    for (const auto& r : result.rounds) {
        rounds.cell(r.session).cell(r.group).cell(r.pair).cell(r.round).cell(r.decision_id)
            .cell(r.agent).cell(std::string(to_string(r.type)))
            .cell(std::string(action_name(r.choice))).cell(r.belief)
            .cell(r.past_regret ? 1 : 0).cell(r.payoff);
        jrounds.push_back({{"session", r.session},
                           {"group", r.group},
                           {"pair", r.pair},
                           {"round", r.round},
                           {"decision_id", r.decision_id},
                           {"agent_id", r.agent},
                           {"type", to_string(r.type)},
                           {"choice", action_name(r.choice)},
                           {"belief", r.belief},
                           {"past_regret", r.past_regret},
                           {"payoff", r.payoff.str()}});
    }
    reports.add("xp_rounds", rounds, jrounds);
}

inline void emit_session_summary(const xp::SessionSummary& summary, Reports& reports) {
    Csv shares({"group", "count", "share"});
    Json jshares = Json::array();
    for (const auto& s : summary.type_shares) {
        shares.cell(s.group).cell(s.count).cell(s.share);
        jshares.push_back({{"group", s.group}, {"count", s.count}, {"share", s.share}});
    }
    reports.add("xp_type_shares", shares, jshares);

    Csv rates({"group", "d4_lottery_rate", "d4_se", "d5_lottery_rate", "d5_se"});
    Json jrates = Json::array();
    for (const auto& r : summary.choice_rates) {
        rates.cell(r.group).cell(r.d4.value).cell(r.d4.std_error).cell(r.d5.value)
            .cell(r.d5.std_error);
        jrates.push_back({{"group", r.group},
                          {"d4_lottery_rate", r.d4.value},
                          {"d4_se", r.d4.std_error},
                          {"d5_lottery_rate", r.d5.value},
                          {"d5_se", r.d5.std_error}});
    }
    reports.add("xp_choice_rates", rates, jrates);

    Csv thresh({"group", "n", "mean_x1", "sd_x1", "mean_x2", "sd_x2", "mean_x3", "sd_x3",
                "p_x1_vs_x3", "p_x2_vs_x3"});
    Json jthresh = Json::array();
    for (const auto& t : summary.thresholds) {
        thresh.cell(t.group).cell(t.n).cell(t.mean_x1).cell(t.sd_x1).cell(t.mean_x2)
            .cell(t.sd_x2).cell(t.mean_x3).cell(t.sd_x3).cell(t.p_x1_vs_x3).cell(t.p_x2_vs_x3);
        jthresh.push_back({{"group", t.group},
                           {"n", t.n},
                           {"mean_x1", t.mean_x1},
                           {"sd_x1", t.sd_x1},
                           {"mean_x2", t.mean_x2},
                           {"sd_x2", t.sd_x2},
                           {"mean_x3", t.mean_x3},
                           {"sd_x3", t.sd_x3},
                           {"p_x1_vs_x3", t.p_x1_vs_x3},
                           {"p_x2_vs_x3", t.p_x2_vs_x3}});
    }
    reports.add("xp_threshold_table", thresh, jthresh);

    Csv bc({"group", "rounds", "agreement", "risky_given_belief_risky",
            "risky_given_belief_safe", "comovement"});
    Json jbc = Json::array();
    for (const auto& b : summary.belief_choice) {
        bc.cell(b.group).cell(b.rounds).cell(b.agreement.value)
            .cell(b.risky_given_belief_risky.value).cell(b.risky_given_belief_safe.value)
            .cell(b.comovement);
        jbc.push_back({{"group", b.group},
                       {"rounds", b.rounds},
                       {"agreement", b.agreement.value},
                       {"risky_given_belief_risky", b.risky_given_belief_risky.value},
                       {"risky_given_belief_safe", b.risky_given_belief_safe.value},
                       {"comovement", b.comovement}});
    }
    reports.add("xp_belief_choice", bc, jbc);

    Csv corr({"group", "n", "threshold_belief_corr"});
    Json jcorr = Json::array();
    for (const auto& c : summary.threshold_belief_corr) {
        corr.cell(c.group).cell(c.n).cell(c.corr);
        jcorr.push_back({{"group", c.group}, {"n", c.n}, {"threshold_belief_corr", c.corr}});
    }
    reports.add("xp_correlations", corr, jcorr);
}

inline void emit_exp2(const std::vector<xp::Exp2Record>& records, Reports& reports) {
    Csv table({"session", "pair", "agent", "valuation", "d2_consistent", "excluded", "d3",
               "type", "d4", "d4_belief_find_out"});
    Json rows = Json::array();
    for (const auto& r : records) {
        table.cell(r.session).cell(r.pair).cell(r.agent).cell(r.valuation)
            .cell(r.d2_consistent ? 1 : 0).cell(r.excluded ? 1 : 0)
            .cell(std::string(to_string(r.d3))).cell(std::string(to_string(r.type)))
            .cell(std::string(to_string(r.d4))).cell(r.d4_belief_find_out);
        rows.push_back({{"session", r.session},
                        {"pair", r.pair},
                        {"agent", r.agent},
                        {"valuation", r.valuation.str()},
                        {"d2_consistent", r.d2_consistent},
                        {"excluded", r.excluded},
                        {"d3", to_string(r.d3)},
                        {"type", to_string(r.type)},
                        {"d4", to_string(r.d4)},
                        {"d4_belief_find_out", r.d4_belief_find_out}});
    }
    reports.add("exp2_records", table, rows);

    const auto summary = xp::summarize_experiment2(records);
    Csv shares({"group", "count", "share"});
    Json jshares = Json::array();
    for (const auto& s : summary.type_shares) {
        shares.cell(s.group).cell(s.count).cell(s.share);
        jshares.push_back({{"group", s.group}, {"count", s.count}, {"share", s.share}});
    }
    reports.add("exp2_type_shares", shares, jshares);

    Csv cont({"group", "find_believe_find", "find_believe_not", "not_believe_find",
              "not_believe_not"});
    Json jcont = Json::array();
    for (const auto& t : summary.tables) {
        cont.cell(t.group).cell(t.find_believe_find).cell(t.find_believe_not)
            .cell(t.not_believe_find).cell(t.not_believe_not);
        jcont.push_back({{"group", t.group},
                         {"find_believe_find", t.find_believe_find},
                         {"find_believe_not", t.find_believe_not},
                         {"not_believe_find", t.not_believe_find},
                         {"not_believe_not", t.not_believe_not}});
    }
    reports.add("exp2_contingency", cont, jcont);
}

inline std::string cmd_xp_run(const io::RunConfig& cfg, Reports& reports) {
    auto xpc = io::parse_experiment(io::section(cfg, "experiment"), "experiment");
    if (xpc.session.population.empty()) {
        throw ConfigError("experiment.population", "required to run sessions");
    }
    const std::uint64_t seed = require_seed(cfg);
    if (xpc.which == "exp2") {
        xpc.exp2.seed = seed;
        std::vector<xp::Exp2Record> records;
        for (int rep = 0; rep < xpc.session.replications; ++rep) {
            auto one = xp::run_experiment2(xpc.session.population, xpc.exp2, rep);
            for (auto& r : one) r.session = rep;
            records.insert(records.end(), one.begin(), one.end());
        }
        emit_exp2(records, reports);
        return "xp run: exp2 agents=" + std::to_string(records.size());
    }
    xpc.session.seed = seed;
    const auto result = xp::run_sessions(xpc.session);
    emit_session_records(result, reports);
    emit_session_summary(xp::summarize_session(result), reports);
    return "xp run: agents=" + std::to_string(result.thresholds.size()) +
           " rounds=" + std::to_string(result.rounds.size());
}

inline xp::AgentType type_from_string(const std::string& s) {
    if (s == "regret_averse") return xp::AgentType::RegretAverse;
    if (s == "rejoice_lover") return xp::AgentType::RejoiceLover;
    if (s == "regret_neutral") return xp::AgentType::RegretNeutral;
    throw IoError("unknown agent type in records: " + s);
}

inline std::string cmd_xp_summarize(const io::RunConfig& cfg, Reports& reports) {
    const auto xpc = io::parse_experiment(io::section(cfg, "experiment"), "experiment");
    if (!xpc.exp2_csv.empty()) {
        const auto rows = io::read_csv(xpc.exp2_csv);
        std::vector<xp::Exp2Record> records;
        for (std::size_t i = 1; i < rows.size(); ++i) {
            const auto& r = rows[i];
            if (r.size() < 10) throw IoError("malformed find-out records file");
            xp::Exp2Record rec;
            rec.session = std::stoi(r[0]);
            rec.pair = std::stoi(r[1]);
            rec.agent = std::stoi(r[2]);
            rec.valuation = Money::from_units(std::stod(r[3]));
            rec.d2_consistent = r[4] == "1";
            rec.excluded = r[5] == "1";
            rec.d3 = r[6] == "find_out" ? xp::FindOutChoice::FindOut
                                        : xp::FindOutChoice::NotFindOut;
            rec.type = type_from_string(r[7]);
            rec.d4 = r[8] == "find_out" ? xp::FindOutChoice::FindOut
                                        : xp::FindOutChoice::NotFindOut;
            rec.d4_belief_find_out = std::stod(r[9]);
            records.push_back(rec);
        }
        const auto summary = xp::summarize_experiment2(records);
        Csv shares({"group", "count", "share"});
        Json jshares = Json::array();
        for (const auto& s : summary.type_shares) {
            shares.cell(s.group).cell(s.count).cell(s.share);
            jshares.push_back({{"group", s.group}, {"count", s.count}, {"share", s.share}});
        }
        reports.add("exp2_type_shares", shares, jshares);
        Csv cont({"group", "find_believe_find", "find_believe_not", "not_believe_find",
                  "not_believe_not"});
        Json jcont = Json::array();
        for (const auto& t : summary.tables) {
            cont.cell(t.group).cell(t.find_believe_find).cell(t.find_believe_not)
                .cell(t.not_believe_find).cell(t.not_believe_not);
            jcont.push_back({{"group", t.group},
                             {"find_believe_find", t.find_believe_find},
                             {"find_believe_not", t.find_believe_not},
                             {"not_believe_find", t.not_believe_find},
                             {"not_believe_not", t.not_believe_not}});
        }
        reports.add("exp2_contingency", cont, jcont);
        return "xp summarize: exp2 agents=" + std::to_string(records.size());
    }
    if (xpc.rounds_csv.empty() || xpc.thresholds_csv.empty()) {
        throw ConfigError("experiment.records",
                          "summarize needs rounds and thresholds paths (or exp2)");
    }
    xp::SessionResult result;
    {
        const auto rows = io::read_csv(xpc.thresholds_csv);
        for (std::size_t i = 1; i < rows.size(); ++i) {
            const auto& r = rows[i];
            if (r.size() < 8) throw IoError("malformed thresholds records file");
            xp::ThresholdRecord t;
            t.session = std::stoi(r[0]);
            t.agent = std::stoi(r[1]);
            t.x1 = Money::from_units(std::stod(r[2]));
            t.x2 = Money::from_units(std::stod(r[3]));
            t.x3 = Money::from_units(std::stod(r[4]));
            t.d3_belief = std::stod(r[5]);
            t.d3_guess = Money::from_units(std::stod(r[6]));
            t.type = type_from_string(r[7]);
            result.thresholds.push_back(t);
        }
    }
    {
        const auto rows = io::read_csv(xpc.rounds_csv);
        for (std::size_t i = 1; i < rows.size(); ++i) {
            const auto& r = rows[i];
            if (r.size() < 11) throw IoError("malformed rounds records file");
            xp::RoundRecord rec;
            rec.session = std::stoi(r[0]);
            rec.group = std::stoi(r[1]);
            rec.pair = std::stoi(r[2]);
            rec.round = std::stoi(r[3]);
            rec.decision_id = std::stoi(r[4]);
            rec.agent = std::stoi(r[5]);
            rec.type = type_from_string(r[6]);
            rec.choice = r[7] == "risky" ? Action::Risky : Action::Safe;
            rec.belief = std::stod(r[8]);
            rec.past_regret = r[9] == "1";
            rec.payoff = Money::from_units(std::stod(r[10]));
            result.rounds.push_back(rec);
        }
    }
    emit_session_summary(xp::summarize_session(result), reports);
    return "xp summarize: agents=" + std::to_string(result.thresholds.size());
}

}  // namespace detail

/// Executes one command. Returns 0 on success, 2 on configuration or
/// validation problems, 3 on runtime failures. The one-line summary goes
/// to `out`, diagnostics to `err`.
inline int run(const Invocation& inv, std::ostream& out = std::cout,
               std::ostream& err = std::cerr) {
    try {
        io::RunConfig cfg = io::parse_run_config(detail::read_file(inv.config_path));
        if (inv.seed) cfg.seed = *inv.seed;
        if (inv.out_dir) cfg.out_dir = *inv.out_dir;
        if (inv.format) {
            if (*inv.format != "csv" && *inv.format != "json") {
                throw ConfigError("--format", "expected \"csv\" or \"json\"");
            }
            cfg.format = *inv.format;
        }
        detail::Reports reports(cfg, cfg.out_dir);

        const std::string command = inv.group + " " + inv.action;
        std::string summary;
        if (command == "env inspect") {
            summary = detail::cmd_env_inspect(cfg, reports);
        } else if (command == "decide eval") {
            summary = detail::cmd_decide_eval(cfg, reports);
        } else if (command == "decide threshold") {
            summary = detail::cmd_decide_threshold(cfg, reports);
        } else if (command == "decide bdm") {
            summary = detail::cmd_decide_bdm(cfg, reports);
        } else if (command == "game classify") {
            summary = detail::cmd_game_classify(cfg, reports);
        } else if (command == "game solve") {
            summary = detail::cmd_game_solve(cfg, reports);
        } else if (command == "game mixed") {
            summary = detail::cmd_game_mixed(cfg, reports);
        } else if (command == "game hetero") {
            summary = detail::cmd_game_hetero(cfg, reports);
        } else if (command == "game bayes") {
            summary = detail::cmd_game_bayes(cfg, reports);
        } else if (command == "dynamics run") {
            summary = detail::cmd_dynamics_run(cfg, reports);
        } else if (command == "dynamics shares") {
            summary = detail::cmd_dynamics_shares(cfg, reports);
        } else if (command == "xp run") {
            summary = detail::cmd_xp_run(cfg, reports);
        } else if (command == "xp summarize") {
            summary = detail::cmd_xp_summarize(cfg, reports);
        } else {
            throw ConfigError("<command>", "unknown command: " + command);
        }
        reports.flush();
        out << summary << " -> " << cfg.out_dir << "\n";
        return 0;
    } catch (const ConfigError& e) {
        err << "config error: " << e.what() << "\n";
        return 2;
    } catch (const IoError& e) {
        err << "io error: " << e.what() << "\n";
        return 3;
    } catch (const Error& e) {
        err << "error: " << e.what() << "\n";
        return 3;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return 3;
    }
}

}  // namespace regret::cli
