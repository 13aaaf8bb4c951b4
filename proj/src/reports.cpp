// JSON and CSV forms of the harness reports.

#include <iomanip>
#include <sstream>

#include <json.hpp>

#include "nlmaxwell/limit_harness.hpp"

namespace nlmaxwell {

namespace {

using json = nlohmann::ordered_json;

json optional_number(const std::optional<double>& v) { return v ? json(*v) : json(nullptr); }

json series_json(const MmsSeries& s) {
    json rows = json::array();
    for (const MmsRow& r : s.rows)
        rows.push_back({{"h", r.h}, {"dt", r.dt}, {"steps", r.steps}, {"error", r.error},
                        {"order", optional_number(r.order)}});
    return {{"name", s.name}, {"rows", rows}, {"min_order", optional_number(s.min_order)}};
}

std::string opt_csv(const std::optional<double>& v) {
    if (!v) return "";
    std::ostringstream os;
    os << std::setprecision(17) << *v;
    return os.str();
}

}  // namespace

std::string sweep_report_json(const SweepReport& report, bool include_wall_time) {
    json rows = json::array();
    for (const SweepRow& r : report.rows) {
        json row = {{"epsilon", r.epsilon},
                    {"e_gap_l2_qt", r.e_gap},
                    {"h_gap_linf_l2", r.h_gap},
                    {"dissipation_gap", r.dissipation_gap},
                    {"dt", r.dt},
                    {"steps", r.steps}};
        if (include_wall_time) row["wall_time_s"] = r.wall_time;
        rows.push_back(row);
    }
    json j = {{"scenario", report.scenario},
              {"fingerprint", report.fingerprint},
              {"complete", report.complete},
              {"confirming", report.confirming},
              {"monotone", report.monotone},
              {"reduced", report.reduced},
              {"slope", optional_number(report.slope)},
              {"slope_defined", report.slope.has_value()},
              {"slope_residual", report.slope_residual},
              {"qs", {{"steps", report.qs_steps}, {"min_dt", report.qs_min_dt}}},
              {"rows", rows}};
    if (include_wall_time) j["qs"]["wall_time_s"] = report.qs_wall_time;
    j["failure"] = report.failure ? json{{"kind", report.failure->kind}, {"message", report.failure->message}}
                                  : json(nullptr);
    return j.dump(2) + "\n";
}

std::string sweep_report_csv(const SweepReport& report, bool include_wall_time) {
    std::ostringstream os;
    os << std::setprecision(17);
    os << "epsilon,e_gap,h_gap,dissipation_gap,dt,steps" << (include_wall_time ? ",wall_time_s" : "") << '\n';
    for (const SweepRow& r : report.rows) {
        os << r.epsilon << ',' << r.e_gap << ',' << r.h_gap << ',' << r.dissipation_gap << ',' << r.dt << ','
           << r.steps;
        if (include_wall_time) os << ',' << r.wall_time;
        os << '\n';
    }
    return os.str();
}

std::string mms_report_json(const MmsReport& report) {
    json deltas = json::array();
    for (const DeltaRow& d : report.delta_sensitivity)
        deltas.push_back({{"delta", d.delta}, {"h_difference", d.h_difference}, {"steps", d.steps}});
    json j = {{"full_spatial", series_json(report.full_spatial)},
              {"qs_temporal", series_json(report.qs_temporal)},
              {"delta_sensitivity", {{"reference_delta", report.delta_reference}, {"rows", deltas}}}};
    return j.dump(2) + "\n";
}

std::string mms_report_csv(const MmsReport& report) {
    std::ostringstream os;
    os << std::setprecision(17);
    os << "study,h,dt,steps,error,order\n";
    for (const MmsSeries* s : {&report.full_spatial, &report.qs_temporal})
        for (const MmsRow& r : s->rows)
            os << s->name << ',' << r.h << ',' << r.dt << ',' << r.steps << ',' << r.error << ',' << opt_csv(r.order)
               << '\n';
    return os.str();
}

}  // namespace nlmaxwell
