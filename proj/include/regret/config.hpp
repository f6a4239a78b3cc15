// Run configuration: a single JSON document validated field by field.
// Each section parses into the corresponding module's value types;
// validation failures throw ConfigError carrying the offending field path.
#pragma once

#include <json.hpp>

#include <cstdint>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "regret/decide.hpp"
#include "regret/dynamics.hpp"
#include "regret/env.hpp"
#include "regret/errors.hpp"
#include "regret/game.hpp"
#include "regret/report.hpp"
#include "regret/xp.hpp"
#include "regret/xp_experiment2.hpp"

namespace regret::io {

using Json = nlohmann::json;

namespace cfg_detail {

inline const Json& require(const Json& j, const std::string& key, const std::string& path) {
    if (!j.is_object() || !j.contains(key)) {
        throw ConfigError(path.empty() ? key : path + "." + key, "required field is missing");
    }
    return j.at(key);
}

inline std::string join(const std::string& path, const std::string& key) {
    return path.empty() ? key : path + "." + key;
}

inline double number(const Json& j, const std::string& path) {
    if (!j.is_number()) throw ConfigError(path, "expected a number");
    return j.get<double>();
}

inline double number_in(const Json& j, const std::string& path, double lo, double hi) {
    const double v = number(j, path);
    if (!(v >= lo && v <= hi)) {
        throw ConfigError(path, "must lie in [" + fmt_double(lo) + ", " + fmt_double(hi) + "]");
    }
    return v;
}

inline int integer(const Json& j, const std::string& path) {
    if (!j.is_number_integer()) throw ConfigError(path, "expected an integer");
    return j.get<int>();
}

inline std::string text(const Json& j, const std::string& path) {
    if (!j.is_string()) throw ConfigError(path, "expected a string");
    return j.get<std::string>();
}

inline Money money(const Json& j, const std::string& path) {
    try {
        return Money::from_units(number(j, path));
    } catch (const std::invalid_argument& e) {
        throw ConfigError(path, e.what());
    }
}

}  // namespace cfg_detail

// --- environment ----------------------------------------------------------

struct EnvironmentConfig {
    ChoiceSet choice_set;
    ObservationMap observation;
};

inline EnvironmentConfig parse_environment(const Json& j, const std::string& path) {
    using namespace cfg_detail;
    const Json& lots = require(j, "lotteries", path);
    if (!lots.is_array() || lots.empty()) {
        throw ConfigError(join(path, "lotteries"), "expected a nonempty array");
    }
    std::vector<Lottery> lotteries;
    for (std::size_t i = 0; i < lots.size(); ++i) {
        const std::string lp = join(path, "lotteries[" + std::to_string(i) + "]");
        const Json& l = lots[i];
        const std::string id = text(require(l, "id", lp), join(lp, "id"));
        const std::string kind = text(require(l, "kind", lp), join(lp, "kind"));
        try {
            if (kind == "risky") {
                lotteries.push_back(Lottery::risky(
                    id, money(require(l, "low", lp), join(lp, "low")),
                    money(require(l, "high", lp), join(lp, "high")),
                    number_in(require(l, "p", lp), join(lp, "p"), 0.0, 1.0)));
            } else if (kind == "safe") {
                lotteries.push_back(
                    Lottery::safe(id, money(require(l, "value", lp), join(lp, "value"))));
            } else {
                throw ConfigError(join(lp, "kind"), "expected \"risky\" or \"safe\"");
            }
        } catch (const InvalidArgument& e) {
            throw ConfigError(lp, e.what());
        }
    }
    std::optional<ChoiceSet> cs;
    try {
        cs.emplace(std::move(lotteries));
    } catch (const InvalidArgument& e) {
        throw ConfigError(join(path, "lotteries"), e.what());
    }

    if (!j.contains("observation")) {
        return {*cs, ObservationMap::full(*cs)};
    }
    const Json& obs = j.at("observation");
    const std::string op = join(path, "observation");
    if (!obs.is_object()) throw ConfigError(op, "expected an object mapping choice id to ids");
    std::vector<std::uint32_t> masks(cs->size());
    const std::uint32_t all = (1u << cs->size()) - 1u;
    for (int k = 0; k < cs->size(); ++k) masks[k] = all;
    for (const auto& [choice_id, seen] : obs.items()) {
        int k;
        try {
            k = cs->index_of(choice_id);
        } catch (const UnknownLottery& e) {
            throw ConfigError(op, e.what());
        }
        if (!seen.is_array()) throw ConfigError(join(op, choice_id), "expected an array of ids");
        std::uint32_t m = 0;
        for (const auto& idj : seen) {
            try {
                m |= 1u << cs->index_of(text(idj, join(op, choice_id)));
            } catch (const UnknownLottery& e) {
                throw ConfigError(join(op, choice_id), e.what());
            }
        }
        masks[k] = m;
    }
    try {
        return {*cs, ObservationMap(*cs, masks)};
    } catch (const InvalidArgument& e) {
        throw ConfigError(op, e.what());
    }
}

// --- preferences -----------------------------------------------------------

struct PreferencesConfig {
    RegretPreference pref;
    UtilityFunction u = UtilityFunction::linear();
};

inline UtilityFunction parse_utility(const Json& j, const std::string& path) {
    using namespace cfg_detail;
    const std::string form = text(require(j, "form", path), join(path, "form"));
    try {
        if (form == "linear") {
            const double scale =
                j.contains("scale") ? number(j.at("scale"), join(path, "scale")) : 1.0;
            const double shift =
                j.contains("shift") ? number(j.at("shift"), join(path, "shift")) : 0.0;
            return UtilityFunction::linear(scale, shift);
        }
        if (form == "normalized2") {
            const Money low = j.contains("low") ? money(j.at("low"), join(path, "low"))
                                                : Money::from_cents(0);
            const Money safe = j.contains("safe") ? money(j.at("safe"), join(path, "safe"))
                                                  : Money::from_cents(500);
            return UtilityFunction::normalized2(low, safe);
        }
        if (form == "table") {
            const Json& knots = require(j, "knots", path);
            if (!knots.is_array()) throw ConfigError(join(path, "knots"), "expected an array");
            std::vector<std::pair<Money, double>> kn;
            for (const auto& k : knots) {
                if (!k.is_array() || k.size() != 2) {
                    throw ConfigError(join(path, "knots"), "expected [money, utils] pairs");
                }
                kn.emplace_back(money(k[0], join(path, "knots")),
                                number(k[1], join(path, "knots")));
            }
            return UtilityFunction::table(std::move(kn));
        }
    } catch (const InvalidArgument& e) {
        throw ConfigError(path, e.what());
    }
    throw ConfigError(join(path, "form"), "expected \"linear\", \"normalized2\" or \"table\"");
}

inline PreferencesConfig parse_preferences(const Json& j, const std::string& path) {
    using namespace cfg_detail;
    PreferencesConfig out;
    const double k1 = j.contains("kappa1") ? number(j.at("kappa1"), join(path, "kappa1")) : 0.0;
    const double k2 = j.contains("kappa2") ? number(j.at("kappa2"), join(path, "kappa2")) : 0.0;
    try {
        out.pref = RegretPreference(k1, k2);
    } catch (const InvalidArgument& e) {
        throw ConfigError(path, e.what());
    }
    if (j.contains("utility")) {
        out.u = parse_utility(j.at("utility"), join(path, "utility"));
    }
    return out;
}

// --- info -------------------------------------------------------------------

struct InfoConfig {
    std::optional<double> q;
    std::vector<double> q_sweep;  // empty unless configured
};

inline InfoConfig parse_info(const Json& j, const std::string& path) {
    using namespace cfg_detail;
    InfoConfig out;
    if (j.contains("q")) {
        out.q = number_in(j.at("q"), join(path, "q"), 0.0, 1.0);
    }
    if (j.contains("q_sweep")) {
        const Json& sw = j.at("q_sweep");
        const std::string sp = join(path, "q_sweep");
        const double from = number_in(require(sw, "from", sp), join(sp, "from"), 0.0, 1.0);
        const double to = number_in(require(sw, "to", sp), join(sp, "to"), 0.0, 1.0);
        const double step = number(require(sw, "step", sp), join(sp, "step"));
        if (!(step > 0) || to < from) throw ConfigError(sp, "needs from <= to and step > 0");
        const int n_steps = static_cast<int>(std::floor((to - from) / step + 1e-9));
        for (int i = 0; i <= n_steps; ++i) {
            out.q_sweep.push_back(std::min(from + i * step, to));
        }
    }
    return out;
}

// --- game -------------------------------------------------------------------

struct GameConfig {
    RegretGame game;
    std::vector<double> kappa_support;  // bayes only
    std::vector<double> kappa_weights;
};

inline QFunction parse_q_function(const Json& j, const std::string& path, int n_players) {
    using namespace cfg_detail;
    const std::string kind = text(require(j, "kind", path), join(path, "kind"));
    if (kind == "linear") return QFunction::linear(n_players);
    if (kind == "power") {
        const double e = number(require(j, "exponent", path), join(path, "exponent"));
        if (!(e > 0)) {
            throw ConfigError(join(path, "exponent"),
                              "must be > 0 (otherwise q(0) = 0 is violated)");
        }
        return QFunction::power(n_players, e);
    }
    if (kind == "step") {
        const int m = integer(require(j, "m_star", path), join(path, "m_star"));
        if (m < 1 || m > n_players - 1) {
            throw ConfigError(join(path, "m_star"),
                              "must lie in {1,...,N-1} (otherwise q(0) = 0 or q(N-1) = 1 is "
                              "violated)");
        }
        const double eps = j.contains("epsilon")
                               ? number(j.at("epsilon"), join(path, "epsilon"))
                               : 1e-6;
        try {
            return QFunction::step(n_players, m, eps);
        } catch (const InvalidArgument& e) {
            throw ConfigError(path, e.what());
        }
    }
    throw ConfigError(join(path, "kind"), "expected \"linear\", \"power\" or \"step\"");
}

inline GameConfig parse_game(const Json& j, const std::string& path) {
    using namespace cfg_detail;
    const int n = integer(require(j, "n_players", path), join(path, "n_players"));
    if (n < 2) throw ConfigError(join(path, "n_players"), "needs at least two players");
    const double p = number_in(require(j, "p", path), join(path, "p"), 0.0, 1.0);
    const double u_high = number(require(j, "u_high", path), join(path, "u_high"));
    std::vector<double> kappas;
    if (j.contains("kappas")) {
        const Json& ks = j.at("kappas");
        if (!ks.is_array() || static_cast<int>(ks.size()) != n) {
            throw ConfigError(join(path, "kappas"), "expected one value per player");
        }
        for (const auto& k : ks) kappas.push_back(number(k, join(path, "kappas")));
    } else if (j.contains("kappa")) {
        kappas.assign(n, number(j.at("kappa"), join(path, "kappa")));
    } else if (j.contains("m") && j.contains("kappa_averse")) {
        const int m = integer(j.at("m"), join(path, "m"));
        if (m < 0 || m > n) throw ConfigError(join(path, "m"), "must lie in {0,...,N}");
        kappas.assign(n, 0.0);
        const double ka = number(j.at("kappa_averse"), join(path, "kappa_averse"));
        for (int i = 0; i < m; ++i) kappas[i] = ka;
    } else {
        throw ConfigError(path, "needs \"kappa\", \"kappas\", or \"m\" with \"kappa_averse\"");
    }
    QFunction q = j.contains("q_function")
                      ? parse_q_function(j.at("q_function"), join(path, "q_function"), n)
                      : QFunction::linear(n);
    std::optional<RegretGame> game;
    try {
        game.emplace(n, p, u_high, std::move(kappas), std::move(q));
    } catch (const InvalidArgument& e) {
        throw ConfigError(path, e.what());
    }
    GameConfig out{std::move(*game), {}, {}};
    if (j.contains("kappa_support") || j.contains("kappa_weights")) {
        const Json& sup = require(j, "kappa_support", path);
        const Json& wts = require(j, "kappa_weights", path);
        if (!sup.is_array() || !wts.is_array() || sup.size() != wts.size() || sup.empty()) {
            throw ConfigError(join(path, "kappa_support"),
                              "support and weights must be matching nonempty arrays");
        }
        for (const auto& v : sup) out.kappa_support.push_back(number(v, join(path, "kappa_support")));
        for (const auto& v : wts) out.kappa_weights.push_back(number(v, join(path, "kappa_weights")));
    }
    return out;
}

// --- dynamics ----------------------------------------------------------------

struct DynamicsSection {
    DynamicsConfig config;
    // initial profile: nullopt means random per replication
    std::optional<int> initial_risky_count;
};

inline DynamicsSection parse_dynamics(const Json& j, const std::string& path, int n_players) {
    using namespace cfg_detail;
    DynamicsSection out;
    const Json& rule = require(j, "rule", path);
    const std::string rp = join(path, "rule");
    const std::string kind = text(require(rule, "kind", rp), join(rp, "kind"));
    if (kind == "best_response") {
        const double inertia = rule.contains("inertia")
                                   ? number(rule.at("inertia"), join(rp, "inertia"))
                                   : 0.0;
        if (!(inertia >= 0.0 && inertia < 1.0)) {
            throw ConfigError(join(rp, "inertia"), "must lie in [0,1)");
        }
        out.config.rule = BestResponseRule{inertia};
    } else if (kind == "logit") {
        const double beta = number(require(rule, "beta", rp), join(rp, "beta"));
        if (beta < 0) throw ConfigError(join(rp, "beta"), "must be >= 0");
        out.config.rule = LogitRule{beta};
    } else {
        throw ConfigError(join(rp, "kind"), "expected \"best_response\" or \"logit\"");
    }
    out.config.steps = integer(require(j, "steps", path), join(path, "steps"));
    if (out.config.steps < 1) throw ConfigError(join(path, "steps"), "must be >= 1");
    if (j.contains("replications")) {
        out.config.replications = integer(j.at("replications"), join(path, "replications"));
        if (out.config.replications < 1) {
            throw ConfigError(join(path, "replications"), "must be >= 1");
        }
    }
    if (j.contains("initial")) {
        const Json& init = j.at("initial");
        const std::string ip = join(path, "initial");
        if (init.is_string()) {
            const std::string s = init.get<std::string>();
            if (s == "all_safe") {
                out.initial_risky_count = 0;
            } else if (s == "all_risky") {
                out.initial_risky_count = n_players;
            } else if (s != "random") {
                throw ConfigError(ip, "expected \"random\", \"all_safe\" or \"all_risky\"");
            }
        } else if (init.is_object() && init.contains("risky_count")) {
            const int rc = integer(init.at("risky_count"), join(ip, "risky_count"));
            if (rc < 0 || rc > n_players) throw ConfigError(join(ip, "risky_count"), "out of range");
            out.initial_risky_count = rc;
        } else {
            throw ConfigError(ip, "expected a keyword or {\"risky_count\": k}");
        }
    }
    return out;
}

// --- experiment ----------------------------------------------------------------

struct ExperimentSection {
    std::string which = "exp1";  // exp1 | exp2
    xp::SessionConfig session;
    xp::Experiment2Config exp2;
    // xp summarize inputs
    std::string rounds_csv;
    std::string thresholds_csv;
    std::string exp2_csv;
};

/// Grid and lottery parameters only; used by commands that need the
/// elicitation environment without a population.
struct ExperimentDefaults {
    std::vector<Money> grid = xp::SessionConfig::default_grid();
    Money safe_value = Money::from_cents(500);
    double p = 0.5;
};

inline ExperimentDefaults parse_experiment_defaults(const Json& j, const std::string& path) {
    using namespace cfg_detail;
    ExperimentDefaults out;
    if (j.contains("grid")) {
        const Json& g = j.at("grid");
        if (!g.is_array() || g.size() < 2) {
            throw ConfigError(join(path, "grid"), "expected an ascending money array");
        }
        out.grid.clear();
        for (const auto& v : g) out.grid.push_back(money(v, join(path, "grid")));
        for (std::size_t i = 1; i < out.grid.size(); ++i) {
            if (!(out.grid[i - 1] < out.grid[i])) {
                throw ConfigError(join(path, "grid"), "must be strictly ascending");
            }
        }
    }
    if (j.contains("safe_value")) {
        out.safe_value = money(j.at("safe_value"), join(path, "safe_value"));
    }
    if (j.contains("p")) out.p = number_in(j.at("p"), join(path, "p"), 0.0, 1.0);
    return out;
}

inline xp::BeliefRule parse_belief(const Json& j, const std::string& path) {
    using namespace cfg_detail;
    const std::string kind = text(require(j, "kind", path), join(path, "kind"));
    if (kind == "cournot") return xp::BeliefRule::cournot();
    if (kind == "fixed") {
        return xp::BeliefRule::fixed(
            number_in(require(j, "prob", path), join(path, "prob"), 0.0, 1.0));
    }
    throw ConfigError(join(path, "kind"), "expected \"cournot\" or \"fixed\"");
}

inline ExperimentSection parse_experiment(const Json& j, const std::string& path) {
    using namespace cfg_detail;
    ExperimentSection out;
    if (j.contains("which")) {
        out.which = text(j.at("which"), join(path, "which"));
        if (out.which != "exp1" && out.which != "exp2") {
            throw ConfigError(join(path, "which"), "expected \"exp1\" or \"exp2\"");
        }
    }
    out.session.grid = xp::SessionConfig::default_grid();
    if (j.contains("grid")) {
        const Json& g = j.at("grid");
        if (!g.is_array() || g.size() < 2) {
            throw ConfigError(join(path, "grid"), "expected an ascending money array");
        }
        out.session.grid.clear();
        for (const auto& v : g) out.session.grid.push_back(money(v, join(path, "grid")));
    }
    if (j.contains("safe_value")) {
        out.session.safe_value = money(j.at("safe_value"), join(path, "safe_value"));
    }
    if (j.contains("p")) out.session.p = number_in(j.at("p"), join(path, "p"), 0.0, 1.0);
    if (j.contains("rounds_d6")) {
        out.session.rounds_d6 = integer(j.at("rounds_d6"), join(path, "rounds_d6"));
    }
    if (j.contains("replications")) {
        out.session.replications = integer(j.at("replications"), join(path, "replications"));
    }

    if (j.contains("records")) {
        const Json& rec = j.at("records");
        const std::string rp = join(path, "records");
        if (rec.contains("rounds")) out.rounds_csv = text(rec.at("rounds"), join(rp, "rounds"));
        if (rec.contains("thresholds")) {
            out.thresholds_csv = text(rec.at("thresholds"), join(rp, "thresholds"));
        }
        if (rec.contains("exp2")) out.exp2_csv = text(rec.at("exp2"), join(rp, "exp2"));
        return out;  // summarize-only configuration
    }

    const Json& popj = require(j, "population", path);
    const std::string pp = join(path, "population");
    std::vector<xp::SyntheticAgent> population;
    if (popj.is_array()) {
        for (std::size_t i = 0; i < popj.size(); ++i) {
            const std::string ap = pp + "[" + std::to_string(i) + "]";
            const auto prefs = parse_preferences(popj[i], ap);
            xp::SyntheticAgent agent;
            agent.pref = prefs.pref;
            agent.u = prefs.u;
            if (popj[i].contains("belief")) {
                agent.belief = parse_belief(popj[i].at("belief"), join(ap, "belief"));
            }
            if (popj[i].contains("noise")) {
                agent.noise = number_in(popj[i].at("noise"), join(ap, "noise"), 0.0, 0.4999);
            }
            population.push_back(agent);
        }
    } else if (popj.is_object()) {
        const int size = integer(require(popj, "size", pp), join(pp, "size"));
        if (size < 2 || size % 2 != 0) {
            throw ConfigError(join(pp, "size"), "must be an even count of at least 2");
        }
        const Json& kv = require(popj, "kappa1_values", pp);
        const Json& kw = require(popj, "kappa1_weights", pp);
        if (!kv.is_array() || !kw.is_array() || kv.size() != kw.size() || kv.empty()) {
            throw ConfigError(join(pp, "kappa1_values"),
                              "values and weights must be matching nonempty arrays");
        }
        std::vector<double> values, weights;
        double total = 0;
        for (const auto& v : kv) values.push_back(number(v, join(pp, "kappa1_values")));
        for (const auto& w : kw) {
            weights.push_back(number(w, join(pp, "kappa1_weights")));
            total += weights.back();
        }
        if (std::abs(total - 1.0) > 1e-9) {
            throw ConfigError(join(pp, "kappa1_weights"), "must sum to 1");
        }
        const double kappa2 =
            popj.contains("kappa2") ? number(popj.at("kappa2"), join(pp, "kappa2")) : 0.0;
        const double noise =
            popj.contains("noise") ? number_in(popj.at("noise"), join(pp, "noise"), 0.0, 0.4999)
                                   : 0.0;
        xp::BeliefRule belief = xp::BeliefRule::cournot();
        if (popj.contains("belief")) belief = parse_belief(popj.at("belief"), join(pp, "belief"));
        UtilityFunction u = UtilityFunction::linear();
        if (popj.contains("utility")) u = parse_utility(popj.at("utility"), join(pp, "utility"));
        // deterministic composition: round the cumulative weights
        std::vector<int> counts(values.size(), 0);
        double cum = 0;
        int assigned = 0;
        for (std::size_t i = 0; i < values.size(); ++i) {
            cum += weights[i];
            const int upto = std::min(size, static_cast<int>(std::llround(cum * size)));
            counts[i] = upto - assigned;
            assigned = upto;
        }
        counts.back() += size - assigned;
        for (std::size_t i = 0; i < values.size(); ++i) {
            for (int c = 0; c < counts[i]; ++c) {
                xp::SyntheticAgent agent;
                try {
                    agent.pref = RegretPreference(values[i], kappa2);
                } catch (const InvalidArgument& e) {
                    throw ConfigError(join(pp, "kappa1_values"), e.what());
                }
                agent.u = u;
                agent.noise = noise;
                agent.belief = belief;
                population.push_back(agent);
            }
        }
    } else {
        throw ConfigError(pp, "expected an agent array or a composition object");
    }
    out.session.population = std::move(population);
    try {
        out.session.validate();
    } catch (const InvalidArgument& e) {
        throw ConfigError(path, e.what());
    }

    if (j.contains("exp2")) {
        const Json& e2 = j.at("exp2");
        const std::string ep = join(path, "exp2");
        if (e2.contains("high")) out.exp2.lottery_high = money(e2.at("high"), join(ep, "high"));
        if (e2.contains("low")) out.exp2.lottery_low = money(e2.at("low"), join(ep, "low"));
        if (e2.contains("p")) out.exp2.p = number_in(e2.at("p"), join(ep, "p"), 0.0, 1.0);
        if (e2.contains("markup")) out.exp2.markup = money(e2.at("markup"), join(ep, "markup"));
        if (e2.contains("bonus")) out.exp2.bonus = money(e2.at("bonus"), join(ep, "bonus"));
        if (e2.contains("grid_max")) {
            out.exp2.grid_max = money(e2.at("grid_max"), join(ep, "grid_max"));
        }
        try {
            out.exp2.validate();
        } catch (const InvalidArgument& e) {
            throw ConfigError(ep, e.what());
        }
    }
    return out;
}

// --- top level --------------------------------------------------------------

struct RunConfig {
    Json raw;
    std::string raw_text;
    std::optional<std::uint64_t> seed;
    std::string out_dir = "out";
    std::string format = "csv";  // csv | json
};

inline RunConfig parse_run_config(const std::string& text) {
    RunConfig out;
    out.raw_text = text;
    try {
        out.raw = Json::parse(text);
    } catch (const nlohmann::json::exception& e) {
        throw ConfigError("<document>", std::string("not valid JSON: ") + e.what());
    }
    if (!out.raw.is_object()) throw ConfigError("<document>", "expected a JSON object");
    if (out.raw.contains("seed")) {
        const Json& s = out.raw.at("seed");
        if (!s.is_number_integer() || s.get<std::int64_t>() < 0) {
            throw ConfigError("seed", "expected a non-negative integer");
        }
        out.seed = s.get<std::uint64_t>();
    }
    if (out.raw.contains("output")) {
        const Json& o = out.raw.at("output");
        if (o.contains("dir")) out.out_dir = cfg_detail::text(o.at("dir"), "output.dir");
        if (o.contains("format")) {
            out.format = cfg_detail::text(o.at("format"), "output.format");
            if (out.format != "csv" && out.format != "json") {
                throw ConfigError("output.format", "expected \"csv\" or \"json\"");
            }
        }
    }
    return out;
}

/// Returns the named top-level section or fails with its path.
inline const Json& section(const RunConfig& cfg, const std::string& name) {
    if (!cfg.raw.contains(name)) {
        throw ConfigError(name, "required section is missing for this command");
    }
    return cfg.raw.at(name);
}

}  // namespace regret::io
