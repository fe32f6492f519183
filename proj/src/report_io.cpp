#include "spiraldim/report_io.hpp"

#include <nlohmann/json.hpp>

namespace spiraldim {

namespace {

using nlohmann::ordered_json;

ordered_json to_json(const CriterionReport& report) {
    ordered_json j;
    j["criterion"] = criterion_name(report.criterion);
    ordered_json hyps = ordered_json::array();
    for (const auto& h : report.hypotheses) {
        ordered_json w = ordered_json::object();
        for (const auto& [name, value] : h.witness) {
            w[name] = value;
        }
        hyps.push_back({{"name", h.name}, {"status", status_name(h.status)}, {"witness", w}});
    }
    j["hypotheses"] = hyps;
    if (const auto d = report.dimension()) {
        j["conclusion"] = *d;
    } else if (const auto r = report.rectifiability()) {
        j["conclusion"] = rectifiability_name(*r);
    } else {
        j["conclusion"] = nullptr;
    }
    return j;
}

} // namespace

std::string dimension_report_json(const DimensionReport& report, const std::string& curve_ref,
                                  std::optional<double> analysis_start_phi) {
    ordered_json j;
    j["dim_estimate"] = report.dim_estimate;
    j["raw_dimension"] = report.raw_dimension;
    j["stderr"] = report.std_error;
    j["fit_window"] = {{"eps_min", report.eps_min}, {"eps_max", report.eps_max}};
    j["n_points"] = report.n_points;
    j["r_squared"] = report.r_squared;
    j["method"] = method_name(report.method);
    j["model"] = model_name(report.model);
    j["log_linear_dim"] = report.log_linear_dimension;
    j["predicted"] = report.predicted ? ordered_json(*report.predicted) : ordered_json(nullptr);
    j["verdict"] = report.verdict ? ordered_json(verdict_name(*report.verdict)) : ordered_json(nullptr);
    if (!curve_ref.empty()) {
        j["curve_ref"] = curve_ref;
    }
    if (analysis_start_phi) {
        j["analysis_start_phi"] = *analysis_start_phi;
    }
    return j.dump(2) + "\n";
}

std::string criterion_report_json(const CriterionReport& report) { return to_json(report).dump(2) + "\n"; }

std::string criterion_reports_json(std::span<const CriterionReport> reports) {
    ordered_json arr = ordered_json::array();
    for (const auto& r : reports) {
        arr.push_back(to_json(r));
    }
    return arr.dump(2) + "\n";
}

std::string verification_json(std::span<const CriterionReport> reports,
                              const std::vector<std::pair<std::string, double>>& checks) {
    ordered_json j;
    j["reports"] = ordered_json::array();
    for (const auto& r : reports) {
        j["reports"].push_back(to_json(r));
    }
    ordered_json c = ordered_json::object();
    for (const auto& [name, value] : checks) {
        c[name] = value;
    }
    j["checks"] = c;
    return j.dump(2) + "\n";
}

} // namespace spiraldim
