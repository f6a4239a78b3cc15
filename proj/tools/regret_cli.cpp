// Command-line front end. Subcommands mirror the library modules; all
// parameters come from a JSON config, with --seed/--out/--format overrides.
#include <CLI11.hpp>

#include <map>
#include <string>
#include <vector>

#include "regret/cli.hpp"

int main(int argc, char** argv) {
    CLI::App app{"regret game toolkit: lottery environments, preference thresholds, the "
                 "N-player regret game, selection dynamics and synthetic experiments"};
    app.require_subcommand(1);

    std::string config_path;
    std::string out_dir;
    std::string format;
    std::string seed_str;

    const std::map<std::string, std::vector<std::string>> commands{
        {"env", {"inspect"}},
        {"decide", {"eval", "threshold", "bdm"}},
        {"game", {"classify", "solve", "mixed", "hetero", "bayes"}},
        {"dynamics", {"run", "shares"}},
        {"xp", {"run", "summarize"}},
    };

    std::string chosen_group, chosen_action;
    for (const auto& [group, actions] : commands) {
        auto* sub = app.add_subcommand(group);
        sub->require_subcommand(1);
        for (const auto& action : actions) {
            auto* leaf = sub->add_subcommand(action);
            leaf->add_option("--config", config_path, "JSON run configuration")
                ->required()
                ->check(CLI::ExistingFile);
            leaf->add_option("--out", out_dir, "output directory (overrides config)");
            leaf->add_option("--format", format, "csv or json (overrides config)");
            leaf->add_option("--seed", seed_str, "seed (overrides config)")
                ->check(CLI::Number);
            leaf->callback([&, group = group, action = action]() {
                chosen_group = group;
                chosen_action = action;
            });
        }
    }

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    regret::cli::Invocation inv;
    inv.group = chosen_group;
    inv.action = chosen_action;
    inv.config_path = config_path;
    if (!out_dir.empty()) inv.out_dir = out_dir;
    if (!format.empty()) inv.format = format;
    if (!seed_str.empty()) {
        try {
            std::size_t used = 0;
            inv.seed = std::stoull(seed_str, &used);
            if (used != seed_str.size()) throw std::invalid_argument(seed_str);
        } catch (const std::exception&) {
            std::cerr << "config error: --seed: expected a non-negative integer\n";
            return 2;
        }
    }
    return regret::cli::run(inv);
}
