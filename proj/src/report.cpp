#include "etp/report.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include "json_detail.hpp"

namespace etp {

using nlohmann::json;

std::string format_metric(double v) {
    if (std::isnan(v)) return "";
    char buf[32];
    const auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
    (void)ec;
    return std::string(buf, ptr);
}

namespace {

json metric_to_json(const metrics::MetricReport& m) {
    json j;
    j["r2"] = m.r2;
    if (std::isnan(m.adj_r2))
        j["adj_r2"] = nullptr;
    else
        j["adj_r2"] = m.adj_r2;
    j["rmse"] = m.rmse;
    j["slope"] = m.slope;
    j["intercept"] = m.intercept;
    j["n_samples"] = m.n_samples;
    j["n_features"] = m.n_features;
    j["slope_violation"] = m.slope_violation;
    return j;
}

metrics::MetricReport metric_from_json(const json& j) {
    metrics::MetricReport m;
    m.r2 = j.at("r2").get<double>();
    m.adj_r2 = j.at("adj_r2").is_null() ? std::nan("") : j.at("adj_r2").get<double>();
    m.rmse = j.at("rmse").get<double>();
    m.slope = j.at("slope").get<double>();
    m.intercept = j.at("intercept").get<double>();
    m.n_samples = j.at("n_samples").get<std::size_t>();
    m.n_features = j.at("n_features").get<std::size_t>();
    m.slope_violation = j.at("slope_violation").get<bool>();
    return m;
}

void append_period_csv(std::ostream& out,
                       const std::optional<metrics::MetricReport>& m) {
    if (m) {
        out << ',' << format_metric(m->adj_r2) << ',' << format_metric(m->r2) << ','
            << format_metric(m->rmse) << ',' << format_metric(m->slope);
    } else {
        out << ",,,,";
    }
}

void emit_report_csv(const ExperimentReport& report, std::ostream& out,
                     bool include_times) {
    out << "site,model,feature_set"
        << ",adj_r2_night,r2_night,rmse_night,slope_night"
        << ",adj_r2_winter,r2_winter,rmse_winter,slope_winter"
        << ",adj_r2_flood,r2_flood,rmse_flood,slope_flood";
    if (include_times) out << ",time_total_s";
    out << '\n';
    for (const auto& cell : report.cells) {
        out << cell.site_id << ',' << cell.spec.name() << ',' << cell.feature_set;
        append_period_csv(out, cell.metrics.night);
        append_period_csv(out, cell.metrics.winter);
        append_period_csv(out, cell.metrics.flood);
        if (include_times) out << ',' << format_metric(cell.wall_time_seconds);
        out << '\n';
    }
}

}  // namespace

std::string report_to_json_text(const ExperimentReport& report, bool include_times) {
    json cells = json::array();
    for (const auto& cell : report.cells) {
        json c;
        c["site"] = cell.site_id;
        c["spec"] = detail::spec_to_json(cell.spec);
        c["feature_set"] = cell.feature_set;
        c["metrics"] = json::object();
        if (cell.metrics.night) c["metrics"]["night"] = metric_to_json(*cell.metrics.night);
        else c["metrics"]["night"] = nullptr;
        if (cell.metrics.winter)
            c["metrics"]["winter"] = metric_to_json(*cell.metrics.winter);
        else c["metrics"]["winter"] = nullptr;
        if (cell.metrics.flood) c["metrics"]["flood"] = metric_to_json(*cell.metrics.flood);
        else c["metrics"]["flood"] = nullptr;
        if (include_times) c["time_total_s"] = cell.wall_time_seconds;
        cells.push_back(std::move(c));
    }
    json discarded = json::array();
    for (const auto& [model, reason] : report.discarded)
        discarded.push_back({{"model", model}, {"reason", reason}});
    json j;
    j["cells"] = std::move(cells);
    j["discarded"] = std::move(discarded);
    return j.dump(2);
}

ExperimentReport report_from_json_text(const std::string& text) {
    const json j = json::parse(text);
    ExperimentReport report;
    for (const auto& c : j.at("cells")) {
        ExperimentCell cell;
        cell.site_id = c.at("site").get<std::string>();
        cell.spec = detail::spec_from_json(c.at("spec"));
        cell.feature_set = c.at("feature_set").get<std::string>();
        const auto& m = c.at("metrics");
        if (!m.at("night").is_null()) cell.metrics.night = metric_from_json(m.at("night"));
        if (!m.at("winter").is_null())
            cell.metrics.winter = metric_from_json(m.at("winter"));
        if (!m.at("flood").is_null()) cell.metrics.flood = metric_from_json(m.at("flood"));
        if (c.contains("time_total_s"))
            cell.wall_time_seconds = c.at("time_total_s").get<double>();
        report.cells.push_back(std::move(cell));
    }
    for (const auto& d : j.at("discarded"))
        report.discarded.emplace_back(d.at("model").get<std::string>(),
                                      d.at("reason").get<std::string>());
    return report;
}

namespace {

bool doubles_equal(double a, double b) {
    return (std::isnan(a) && std::isnan(b)) || a == b;
}

bool metric_equal(const std::optional<metrics::MetricReport>& a,
                  const std::optional<metrics::MetricReport>& b) {
    if (a.has_value() != b.has_value()) return false;
    if (!a) return true;
    return doubles_equal(a->r2, b->r2) && doubles_equal(a->adj_r2, b->adj_r2) &&
           doubles_equal(a->rmse, b->rmse) && doubles_equal(a->slope, b->slope) &&
           doubles_equal(a->intercept, b->intercept) &&
           a->n_samples == b->n_samples && a->n_features == b->n_features &&
           a->slope_violation == b->slope_violation;
}

}  // namespace

bool reports_equivalent(const ExperimentReport& a, const ExperimentReport& b) {
    if (a.cells.size() != b.cells.size() || a.discarded != b.discarded) return false;
    for (std::size_t i = 0; i < a.cells.size(); ++i) {
        const auto& ca = a.cells[i];
        const auto& cb = b.cells[i];
        if (ca.site_id != cb.site_id || ca.feature_set != cb.feature_set ||
            ca.spec.name() != cb.spec.name())
            return false;
        if (!metric_equal(ca.metrics.night, cb.metrics.night) ||
            !metric_equal(ca.metrics.winter, cb.metrics.winter) ||
            !metric_equal(ca.metrics.flood, cb.metrics.flood))
            return false;
    }
    return true;
}

void emit_report(const ExperimentReport& report, ReportFormat format, std::ostream& out,
                 bool include_times) {
    if (report.cells.empty() && report.discarded.empty())
        throw std::invalid_argument("emit_report: empty report");
    if (format == ReportFormat::csv)
        emit_report_csv(report, out, include_times);
    else
        out << report_to_json_text(report, include_times) << '\n';
}

void write_report(const ExperimentReport& report, ReportFormat format,
                  const std::string& path, bool include_times) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write report file '" + path + "'");
    emit_report(report, format, out, include_times);
}

std::string rfe_trace_to_json_text(const RfeTrace& trace) {
    json iterations = json::array();
    for (const auto& iter : trace.iterations) {
        json it;
        it["n_features"] = iter.feature_set.size();
        it["feature_set"] = iter.feature_set;
        if (iter.removed_feature)
            it["removed_feature"] = *iter.removed_feature;
        else
            it["removed_feature"] = nullptr;
        it["normalized_importance"] = iter.normalized_importance;
        json m = json::object();
        if (iter.cv_metrics.night) m["night"] = metric_to_json(*iter.cv_metrics.night);
        else m["night"] = nullptr;
        if (iter.cv_metrics.winter) m["winter"] = metric_to_json(*iter.cv_metrics.winter);
        else m["winter"] = nullptr;
        if (iter.cv_metrics.flood) m["flood"] = metric_to_json(*iter.cv_metrics.flood);
        else m["flood"] = nullptr;
        it["cv_metrics"] = std::move(m);
        iterations.push_back(std::move(it));
    }
    json j;
    j["site"] = trace.site_id;
    j["iterations"] = std::move(iterations);
    j["optimal_set"] = trace.optimal_set.features;
    return j.dump(2);
}

void write_partition_csv(std::span<const PartitionRecord> records,
                         const PeriodMasks& masks, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write partition file '" + path + "'");
    out << "timestamp,wq,e_predicted,t_derived,night,winter,flood,negative_t,"
           "imputed_target\n";
    for (std::size_t i = 0; i < records.size(); ++i) {
        const auto& r = records[i];
        out << format_iso8601(r.timestamp) << ','
            << (r.et_measured ? format_metric(*r.et_measured) : "") << ','
            << (r.e_predicted ? format_metric(*r.e_predicted) : "") << ','
            << (r.t_derived ? format_metric(*r.t_derived) : "") << ','
            << int(masks.night[i]) << ',' << int(masks.winter[i]) << ','
            << int(masks.flood[i]) << ',' << int(r.negative_t) << ','
            << int(r.imputed_target) << '\n';
    }
}

void write_plotdata_compare(const ExperimentReport& report, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write plot data file '" + path + "'");
    out << "site,series,x_adj_r2_winter,y_adj_r2_flood,size_adj_r2_night\n";
    for (const auto& cell : report.cells) {
        const auto& m = cell.metrics;
        out << cell.site_id << ',' << cell.spec.name() << '/' << cell.feature_set << ','
            << (m.winter ? format_metric(m.winter->adj_r2) : "") << ','
            << (m.flood ? format_metric(m.flood->adj_r2) : "") << ','
            << (m.night ? format_metric(m.night->adj_r2) : "") << '\n';
    }
}

void write_plotdata_rfe(const RfeTrace& trace, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write plot data file '" + path + "'");
    out << "site,series,n_features,adj_r2\n";
    for (const auto& iter : trace.iterations) {
        const auto emit = [&](const char* series,
                              const std::optional<metrics::MetricReport>& m) {
            if (!m) return;
            out << trace.site_id << ',' << series << ',' << iter.feature_set.size()
                << ',' << format_metric(m->adj_r2) << '\n';
        };
        emit("night", iter.cv_metrics.night);
        emit("winter", iter.cv_metrics.winter);
        emit("flood", iter.cv_metrics.flood);
    }
}

}  // namespace etp
