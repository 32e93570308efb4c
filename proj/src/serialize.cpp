#include "hawkes/serialize.hpp"

#include <cstdio>
#include <fstream>
#include <stdexcept>

#include "hawkes/errors.hpp"

namespace hawkes {

namespace {

// Write the full contents, flush, then rename over the target so a crashed run
// never leaves a half-written file behind.
void commit_file(const std::filesystem::path& path, const std::string& contents) {
    const std::filesystem::path tmp = path.string() + ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) {
            throw config_error("cannot open output file " + tmp.string());
        }
        out << contents;
        if (!out) {
            throw config_error("failed writing " + tmp.string());
        }
    }
    std::filesystem::rename(tmp, path);
}

std::string header_line(const nlohmann::json& header) {
    return "# " + header.dump() + "\n";
}

}  // namespace

std::string double_repr(double x) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

void write_json_file(const std::filesystem::path& path, const nlohmann::json& j) {
    commit_file(path, j.dump(2) + "\n");
}

void write_series_csv(const std::filesystem::path& path, const nlohmann::json& header,
                      std::span<const std::string> names,
                      std::span<const std::vector<double>> columns) {
    if (names.size() != columns.size() || columns.empty()) {
        throw config_error("write_series_csv: column names and data must match");
    }
    const std::size_t rows = columns.front().size();
    for (const auto& col : columns) {
        if (col.size() != rows) {
            throw config_error("write_series_csv: ragged columns");
        }
    }
    std::string body = header_line(header);
    for (std::size_t c = 0; c < names.size(); ++c) {
        body += (c ? "," : "") + names[c];
    }
    body += '\n';
    for (std::size_t r = 0; r < rows; ++r) {
        for (std::size_t c = 0; c < columns.size(); ++c) {
            if (c) body += ',';
            body += double_repr(columns[c][r]);
        }
        body += '\n';
    }
    commit_file(path, body);
}

void write_event_stream_csv(const std::filesystem::path& path, const EventStream& stream,
                            nlohmann::json header) {
    header["horizon"] = stream.horizon;
    header["side"] = stream.side == Side::Buy ? "buy" : "sell";
    header["seed"] = stream.seed;
    header["events"] = stream.times.size();
    std::string body = header_line(header);
    body += "time,side,cluster_id,label\n";
    const char* side = stream.side == Side::Buy ? "buy" : "sell";
    for (std::size_t i = 0; i < stream.times.size(); ++i) {
        const long long cluster =
            i < stream.cluster_ids.size() ? stream.cluster_ids[i] : -1;
        const char* label = "anonymous";
        if (i < stream.labels.size() && stream.labels[i] == EventLabel::Metaorder) {
            label = "metaorder";
        }
        body += double_repr(stream.times[i]);
        body += ',';
        body += side;
        body += ',';
        body += std::to_string(cluster);
        body += ',';
        body += label;
        body += '\n';
    }
    commit_file(path, body);
}

void write_price_path_csv(const std::filesystem::path& path, const PricePath& price,
                          nlohmann::json header) {
    header["p0"] = price.p0;
    header["construction"] = price.construction;
    const std::vector<std::string> names = {"time", "price"};
    const std::vector<std::vector<double>> cols = {price.times, price.values};
    write_series_csv(path, header, names, cols);
}

void write_resolvent_csv(const std::filesystem::path& path, const ResolventGrid& psi) {
    nlohmann::json header;
    header["step"] = psi.step;
    header["horizon"] = psi.horizon;
    header["source"] = psi.source.to_json();
    header["mass_on_grid"] = psi.mass_on_grid();
    header["total_mass"] = psi.total_mass();
    header["horizon_warning"] = psi.horizon_warning;
    std::vector<double> times(psi.values.size());
    for (std::size_t i = 0; i < times.size(); ++i) {
        times[i] = static_cast<double>(i) * psi.step;
    }
    const std::vector<std::string> names = {"time", "psi"};
    const std::vector<std::vector<double>> cols = {times, psi.values};
    write_series_csv(path, header, names, cols);
}

void write_propagator_csv(const std::filesystem::path& path,
                          const PropagatorKernel& zeta) {
    nlohmann::json header;
    header["step"] = zeta.step;
    header["horizon"] = zeta.horizon;
    header["zeta0"] = zeta.zeta0;
    header["zeta_inf"] = zeta.zeta_inf;
    header["kappa"] = zeta.kappa;
    header["order_volume"] = zeta.order_volume;
    if (zeta.source) {
        header["source"] = zeta.source->to_json();
    }
    std::vector<double> times(zeta.values.size());
    for (std::size_t i = 0; i < times.size(); ++i) {
        times[i] = static_cast<double>(i) * zeta.step;
    }
    const std::vector<std::string> names = {"time", "zeta"};
    const std::vector<std::vector<double>> cols = {times, zeta.values};
    write_series_csv(path, header, names, cols);
}

void write_impact_curve_csv(const std::filesystem::path& path, const ImpactCurve& curve,
                            nlohmann::json header) {
    header["rate"] = curve.rate;
    header["duration"] = curve.duration;
    header["provenance"] = curve.provenance;
    if (curve.a_T > 0.0) {
        header["a_T"] = curve.a_T;
        header["tau_T"] = curve.tau_T;
        header["alpha"] = curve.alpha;
    }
    std::vector<std::string> names = {"time", "impact"};
    std::vector<std::vector<double>> cols = {curve.times, curve.values};
    if (!curve.se.empty()) {
        names.push_back("se");
        cols.push_back(curve.se);
    }
    write_series_csv(path, header, names, cols);
}

void write_covariance_curve_csv(const std::filesystem::path& path,
                                const CovarianceCurve& curve, nlohmann::json header) {
    header["h"] = curve.h;
    header["provenance"] = curve.provenance;
    std::vector<std::string> names = {"tau", "covariance"};
    std::vector<std::vector<double>> cols = {curve.tau, curve.values};
    if (!curve.se.empty()) {
        names.push_back("se");
        cols.push_back(curve.se);
    }
    write_series_csv(path, header, names, cols);
}

}  // namespace hawkes
