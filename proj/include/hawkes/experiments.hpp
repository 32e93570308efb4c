#pragma once

#include <filesystem>
#include <vector>

#include <json.hpp>

namespace hawkes {

// Experiment drivers behind the CLI.  Each consumes a JSON config, writes its
// data files (CSV with a JSON provenance header) into `out_dir`, and returns a
// summary holding the resolved parameters, fitted quantities, and the pass/fail
// state of every invariant it checks.  Bad or missing config fields raise
// config_error / nlohmann exceptions; runs that start but cannot meet their
// numerical contract raise numerical_error.
nlohmann::json run_simulate(const nlohmann::json& config,
                            const std::filesystem::path& out_dir);
nlohmann::json run_propagator(const nlohmann::json& config,
                              const std::filesystem::path& out_dir);
nlohmann::json run_impact(const nlohmann::json& config,
                          const std::filesystem::path& out_dir);
nlohmann::json run_longmem(const nlohmann::json& config,
                           const std::filesystem::path& out_dir);
nlohmann::json run_roundtrip(const nlohmann::json& config,
                             const std::filesystem::path& out_dir);
nlohmann::json run_exponents(const nlohmann::json& config,
                             const std::filesystem::path& out_dir);

// Dispatches on config["experiment"], creates out_dir, writes summary.json.
nlohmann::json run_experiment(const nlohmann::json& config,
                              const std::filesystem::path& out_dir);

// {"min": a, "max": b, "points": n, "log": bool} -> sample grid.
std::vector<double> parse_grid(const nlohmann::json& j);

}  // namespace hawkes
