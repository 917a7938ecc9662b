#include "etp/config.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include "etp/rng.hpp"
#include "json_detail.hpp"

namespace etp {

using nlohmann::json;

SiteMeta SiteConfig::meta() const {
    SiteMeta m;
    m.site_id = id;
    m.latitude_deg = lat;
    m.longitude_deg = lon;
    m.utc_offset_hours = utc_offset;
    m.flood_start = flood_start;
    m.greenup_date = greenup_date;
    return m;
}

CsvSchemaConfig SiteConfig::csv_config() const {
    CsvSchemaConfig c;
    c.timestamp_column = timestamp_column;
    c.timestamp_format = timestamp_format;
    c.utc_offset_hours = csv_timestamps_utc ? 0.0 : utc_offset;
    return c;
}

void RunConfig::validate() const {
    if (sites.empty()) throw std::invalid_argument("config: at least one site required");
    for (const auto& s : sites) {
        if (s.id.empty()) throw std::invalid_argument("config: site with empty id");
        if (s.csv_path.empty())
            throw std::invalid_argument("config: site '" + s.id + "' has no csv_path");
        if (s.flood_start && s.greenup_date && !(*s.flood_start < *s.greenup_date))
            throw std::invalid_argument("config: site '" + s.id +
                                        "': greenup_date must be after flood_start");
    }
    if (cv.k < 2) throw std::invalid_argument("config: cv.k must be >= 2");
    if (!(cv.holdout_fraction > 0.0 && cv.holdout_fraction < 1.0))
        throw std::invalid_argument("config: cv.holdout_fraction must be in (0, 1)");
    if (!(rfe.tolerance > 0.0 && rfe.tolerance < 1.0))
        throw std::invalid_argument("config: rfe.tolerance must be in (0, 1)");
    if (rfe.spec.kind != ModelKind::tree && rfe.spec.kind != ModelKind::gbdt)
        throw std::invalid_argument("config: rfe.spec must be a tree-based model");
    if (!(screening.completeness_threshold > 0.0 &&
          screening.completeness_threshold <= 1.0))
        throw std::invalid_argument(
            "config: screening.completeness_threshold must be in (0, 1]");
    if (screening.top_n < screening.target_count)
        throw std::invalid_argument("config: screening.top_n must be >= target_count");
    if (f_e_features.empty())
        throw std::invalid_argument("config: f_e_features must be nonempty");
    for (auto spec : model_specs) spec.validate();
}

std::vector<ModelSpec> RunConfig::effective_model_specs() const {
    if (!model_specs.empty()) return model_specs;
    std::vector<ModelSpec> specs(5);
    specs[0].kind = ModelKind::linear;
    specs[1].kind = ModelKind::ridge;
    specs[2].kind = ModelKind::knn;
    specs[3].kind = ModelKind::tree;
    specs[4].kind = ModelKind::gbdt;
    return specs;
}

namespace {

std::optional<CivilDate> date_from_json(const json& j, const char* key) {
    if (!j.contains(key) || j.at(key).is_null()) return std::nullopt;
    const auto text = j.at(key).get<std::string>();
    const auto d = parse_date(text);
    if (!d) throw std::invalid_argument("config: bad date '" + text + "' for " + key);
    return d;
}

SiteConfig site_from_json(const json& j) {
    SiteConfig s;
    s.id = j.at("id").get<std::string>();
    s.csv_path = j.at("csv_path").get<std::string>();
    if (j.contains("lat") && !j.at("lat").is_null()) s.lat = j.at("lat").get<double>();
    if (j.contains("lon") && !j.at("lon").is_null()) s.lon = j.at("lon").get<double>();
    s.utc_offset = j.value("utc_offset", 0.0);
    s.flood_start = date_from_json(j, "flood_start");
    s.greenup_date = date_from_json(j, "greenup_date");
    if (j.contains("depth_groups")) {
        for (const auto& [name, members] : j.at("depth_groups").items())
            s.depth_groups[name] = members.get<std::vector<std::string>>();
    }
    s.timestamp_column = j.value("timestamp_column", std::string("timestamp"));
    s.csv_timestamps_utc = j.value("csv_timestamps_utc", false);
    const auto fmt = j.value("timestamp_format", std::string("iso8601"));
    if (fmt == "iso8601")
        s.timestamp_format = TimestampFormat::iso8601;
    else if (fmt == "epoch_seconds")
        s.timestamp_format = TimestampFormat::epoch_seconds;
    else
        throw std::invalid_argument("config: unknown timestamp_format '" + fmt + "'");
    return s;
}

json site_to_json(const SiteConfig& s) {
    json j;
    j["id"] = s.id;
    j["csv_path"] = s.csv_path;
    if (s.lat) j["lat"] = *s.lat;
    if (s.lon) j["lon"] = *s.lon;
    j["utc_offset"] = s.utc_offset;
    if (s.flood_start) j["flood_start"] = format_date(*s.flood_start);
    if (s.greenup_date) j["greenup_date"] = format_date(*s.greenup_date);
    if (!s.depth_groups.empty()) {
        json groups;
        for (const auto& [name, members] : s.depth_groups) groups[name] = members;
        j["depth_groups"] = groups;
    }
    j["timestamp_column"] = s.timestamp_column;
    j["csv_timestamps_utc"] = s.csv_timestamps_utc;
    j["timestamp_format"] =
        s.timestamp_format == TimestampFormat::iso8601 ? "iso8601" : "epoch_seconds";
    return j;
}

}  // namespace

RunConfig config_from_json_text(const std::string& text) {
    const json j = json::parse(text);
    RunConfig cfg;
    for (const auto& site : j.at("sites")) cfg.sites.push_back(site_from_json(site));
    if (j.contains("f_e_features"))
        cfg.f_e_features = j.at("f_e_features").get<std::vector<std::string>>();
    if (j.contains("models")) {
        cfg.model_specs.clear();
        for (const auto& spec : j.at("models"))
            cfg.model_specs.push_back(detail::spec_from_json(spec));
    }
    if (j.contains("exclude_features"))
        cfg.exclude_features = j.at("exclude_features").get<std::vector<std::string>>();
    if (j.contains("impute")) {
        const auto& imp = j.at("impute");
        cfg.impute_strategy =
            impute_strategy_from_name(imp.value("strategy", std::string("mean")));
        cfg.impute_target = imp.value("impute_target", false);
    }
    if (j.contains("cv")) {
        const auto& cv = j.at("cv");
        cfg.cv.k = cv.value("k", cfg.cv.k);
        cfg.cv.seed = cv.value("seed", cfg.cv.seed);
        cfg.cv.holdout_fraction = cv.value("holdout_fraction", cfg.cv.holdout_fraction);
    }
    if (j.contains("screening")) {
        const auto& sc = j.at("screening");
        cfg.screening.completeness_threshold =
            sc.value("completeness_threshold", cfg.screening.completeness_threshold);
        cfg.screening.top_n = sc.value("top_n", cfg.screening.top_n);
        cfg.screening.target_count =
            sc.value("target_count", cfg.screening.target_count);
    }
    if (j.contains("rfe")) {
        const auto& rfe = j.at("rfe");
        cfg.rfe.tolerance = rfe.value("tolerance", cfg.rfe.tolerance);
        if (rfe.contains("spec")) cfg.rfe.spec = detail::spec_from_json(rfe.at("spec"));
    }
    cfg.output_dir = j.value("output_dir", cfg.output_dir);
    cfg.validate();
    return cfg;
}

std::string config_to_json_text(const RunConfig& cfg) {
    json j;
    j["sites"] = json::array();
    for (const auto& s : cfg.sites) j["sites"].push_back(site_to_json(s));
    j["f_e_features"] = cfg.f_e_features;
    j["models"] = json::array();
    for (const auto& spec : cfg.effective_model_specs())
        j["models"].push_back(detail::spec_to_json(spec));
    j["exclude_features"] = cfg.exclude_features;
    j["impute"] = {
        {"strategy", cfg.impute_strategy == ImputeStrategy::mean ? "mean" : "linear"},
        {"impute_target", cfg.impute_target}};
    j["cv"] = {{"k", cfg.cv.k},
               {"seed", cfg.cv.seed},
               {"holdout_fraction", cfg.cv.holdout_fraction}};
    j["screening"] = {
        {"completeness_threshold", cfg.screening.completeness_threshold},
        {"top_n", cfg.screening.top_n},
        {"target_count", cfg.screening.target_count}};
    j["rfe"] = {{"tolerance", cfg.rfe.tolerance},
                {"spec", detail::spec_to_json(cfg.rfe.spec)}};
    j["output_dir"] = cfg.output_dir;
    return j.dump(2);
}

RunConfig load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::invalid_argument("cannot open config file '" + path + "'");
    std::ostringstream buf;
    buf << in.rdbuf();
    try {
        return config_from_json_text(buf.str());
    } catch (const json::exception& e) {
        throw std::invalid_argument("config '" + path + "': " + e.what());
    }
}

std::string config_hash(const RunConfig& cfg) {
    const std::uint64_t h = fnv1a64(config_to_json_text(cfg));
    char buf[32];
    std::snprintf(buf, sizeof buf, "fnv1a64:%016llx",
                  static_cast<unsigned long long>(h));
    return buf;
}

}  // namespace etp
