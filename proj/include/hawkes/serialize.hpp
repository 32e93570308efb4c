#pragma once

#include <filesystem>
#include <span>
#include <string>
#include <vector>

#include <json.hpp>

#include "hawkes/impact.hpp"
#include "hawkes/longmemory.hpp"
#include "hawkes/price.hpp"
#include "hawkes/resolvent.hpp"
#include "hawkes/simulation.hpp"

namespace hawkes {

// All data files share one layout: a `# {json}` header line carrying the full
// provenance (config, seed, parameters), a column-name row, then the body.
// Doubles print with round-trip precision, so identical data means identical
// bytes.  Files are written to a temporary sibling and renamed into place.
std::string double_repr(double x);

void write_json_file(const std::filesystem::path& path, const nlohmann::json& j);

void write_series_csv(const std::filesystem::path& path, const nlohmann::json& header,
                      std::span<const std::string> names,
                      std::span<const std::vector<double>> columns);

void write_event_stream_csv(const std::filesystem::path& path, const EventStream& stream,
                            nlohmann::json header);

void write_price_path_csv(const std::filesystem::path& path, const PricePath& price,
                          nlohmann::json header);

void write_resolvent_csv(const std::filesystem::path& path, const ResolventGrid& psi);

void write_propagator_csv(const std::filesystem::path& path,
                          const PropagatorKernel& zeta);

void write_impact_curve_csv(const std::filesystem::path& path, const ImpactCurve& curve,
                            nlohmann::json header);

void write_covariance_curve_csv(const std::filesystem::path& path,
                                const CovarianceCurve& curve, nlohmann::json header);

}  // namespace hawkes
