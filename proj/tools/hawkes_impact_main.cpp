#include <exception>
#include <fstream>
#include <iostream>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "hawkes/errors.hpp"
#include "hawkes/experiments.hpp"

int main(int argc, char** argv) {
    CLI::App app{"Hawkes order-flow simulation and market-impact experiments"};
    app.require_subcommand(0, 0);

    std::string experiment;
    std::string config_path;
    std::string out_dir = "out";
    std::uint64_t seed = 0;
    bool seed_given = false;

    app.add_option("experiment", experiment,
                   "one of: simulate propagator impact longmem roundtrip exponents")
        ->required();
    app.add_option("--config", config_path, "JSON experiment config")->required();
    app.add_option("--seed", seed, "override the config seed")
        ->each([&](const std::string&) { seed_given = true; });
    app.add_option("--out", out_dir, "output directory (created if missing)");

    CLI11_PARSE(app, argc, argv);

    try {
        std::ifstream in(config_path);
        if (!in) {
            throw hawkes::config_error("cannot read config file " + config_path);
        }
        nlohmann::json config = nlohmann::json::parse(in);
        if (config.contains("experiment") &&
            config["experiment"].get<std::string>() != experiment) {
            throw hawkes::config_error("config is for experiment '" +
                                       config["experiment"].get<std::string>() +
                                       "', not '" + experiment + "'");
        }
        config["experiment"] = experiment;
        if (seed_given) {
            config["seed"] = seed;
        }
        const nlohmann::json summary = hawkes::run_experiment(config, out_dir);
        std::cout << "wrote " << out_dir << "/summary.json";
        if (summary.contains("all_checks_pass")) {
            std::cout << "  (checks "
                      << (summary["all_checks_pass"].get<bool>() ? "pass" : "FAIL")
                      << ")";
        }
        std::cout << "\n";
        return 0;
    } catch (const hawkes::numerical_error& e) {
        std::cerr << "numerical error: " << e.what() << "\n";
        return 3;
    } catch (const hawkes::config_error& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 2;
    } catch (const nlohmann::json::exception& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 2;
    } catch (const std::domain_error& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 3;
    }
}
