#include "etp/models.hpp"

#include <cmath>
#include <stdexcept>

#include <json.hpp>

#include "json_detail.hpp"
#include "models_detail.hpp"

namespace etp {

using nlohmann::json;

std::string_view model_kind_name(ModelKind k) {
    switch (k) {
        case ModelKind::linear: return "linear";
        case ModelKind::ridge: return "ridge";
        case ModelKind::knn: return "knn";
        case ModelKind::tree: return "tree";
        case ModelKind::gbdt: return "gbdt";
    }
    return "unknown";
}

ModelKind model_kind_from_name(std::string_view name) {
    if (name == "linear") return ModelKind::linear;
    if (name == "ridge") return ModelKind::ridge;
    if (name == "knn") return ModelKind::knn;
    if (name == "tree") return ModelKind::tree;
    if (name == "gbdt") return ModelKind::gbdt;
    throw std::invalid_argument("unknown model kind '" + std::string(name) + "'");
}

void ModelSpec::validate() const {
    if (ridge.lambda < 0.0) throw std::invalid_argument("ridge lambda must be >= 0");
    if (knn.k < 1) throw std::invalid_argument("knn k must be >= 1");
    if (tree.max_depth < 0) throw std::invalid_argument("tree max_depth must be >= 0");
    if (tree.min_samples_leaf < 1)
        throw std::invalid_argument("tree min_samples_leaf must be >= 1");
    if (gbdt.n_trees < 0) throw std::invalid_argument("gbdt n_trees must be >= 0");
    if (gbdt.learning_rate < 0.0)
        throw std::invalid_argument("gbdt learning_rate must be >= 0");
    if (gbdt.max_depth < 1) throw std::invalid_argument("gbdt max_depth must be >= 1");
    if (gbdt.min_samples_leaf < 1)
        throw std::invalid_argument("gbdt min_samples_leaf must be >= 1");
    if (gbdt.histogram_bins < 2 || gbdt.histogram_bins > 65535)
        throw std::invalid_argument("gbdt histogram_bins must be in [2, 65535]");
}

double TreeData::predict_row(std::span<const double> row) const {
    std::int32_t node = 0;
    while (!nodes[static_cast<std::size_t>(node)].is_leaf()) {
        const TreeNode& nd = nodes[static_cast<std::size_t>(node)];
        const double x = row[static_cast<std::size_t>(nd.feature)];
        // NaN descends left, matching the binning convention.
        node = (x <= nd.threshold || std::isnan(x)) ? nd.left : nd.right;
    }
    return nodes[static_cast<std::size_t>(node)].value;
}

TrainedModel::TrainedModel(ModelSpec spec, std::vector<std::string> feature_names,
                           Params params, std::map<std::string, double> gains,
                           std::vector<std::string> warnings)
    : spec_(std::move(spec)),
      feature_names_(std::move(feature_names)),
      params_(std::move(params)),
      gains_(std::move(gains)),
      warnings_(std::move(warnings)) {}

bool TrainedModel::is_tree_based() const {
    return spec_.kind == ModelKind::tree || spec_.kind == ModelKind::gbdt;
}

namespace {

double predict_linear(const LinearData& d, std::span<const double> row) {
    double v = d.intercept;
    for (std::size_t j = 0; j < d.coeffs.size(); ++j) v += d.coeffs[j] * row[j];
    return v;
}

double predict_gbdt(const GbdtData& d, std::span<const double> row) {
    double v = d.base;
    for (const auto& tree : d.trees) v += d.learning_rate * tree.predict_row(row);
    return v;
}

}  // namespace

double TrainedModel::predict_row(std::span<const double> row) const {
    if (row.size() != feature_names_.size())
        throw std::invalid_argument("prediction row has " + std::to_string(row.size()) +
                                    " values, model expects " +
                                    std::to_string(feature_names_.size()));
    return std::visit(
        [&](const auto& d) -> double {
            using T = std::decay_t<decltype(d)>;
            if constexpr (std::is_same_v<T, LinearData>) return predict_linear(d, row);
            if constexpr (std::is_same_v<T, KnnData>) return detail::predict_knn(d, row);
            if constexpr (std::is_same_v<T, TreeData>) return d.predict_row(row);
            if constexpr (std::is_same_v<T, GbdtData>) return predict_gbdt(d, row);
        },
        params_);
}

std::vector<double> TrainedModel::predict(const linalg::Matrix& x) const {
    std::vector<double> out(x.rows());
    std::vector<double> row(x.cols());
    for (std::size_t r = 0; r < x.rows(); ++r) {
        x.copy_row(r, row);
        out[r] = predict_row(row);
    }
    return out;
}

std::map<std::string, double> TrainedModel::gain_importance(bool normalize) const {
    if (!is_tree_based())
        throw std::invalid_argument("gain importance is defined for tree models only, "
                                    "model kind is " +
                                    spec_.name());
    if (!normalize) return gains_;
    double total = 0.0;
    for (const auto& [_, g] : gains_) total += g;
    std::map<std::string, double> out;
    for (const auto& [f, g] : gains_) out[f] = total > 0.0 ? g / total : 0.0;
    return out;
}

const std::vector<double>& TrainedModel::training_rmse_per_iter() const {
    static const std::vector<double> kEmpty;
    if (const auto* d = std::get_if<GbdtData>(&params_)) return d->train_rmse;
    return kEmpty;
}

TrainedModel fit_model(const ModelSpec& spec, const linalg::Matrix& x,
                       std::span<const double> y,
                       const std::vector<std::string>& feature_names) {
    spec.validate();
    switch (spec.kind) {
        case ModelKind::linear: return fit_linear(x, y, feature_names);
        case ModelKind::ridge: return fit_ridge(x, y, feature_names, spec.ridge);
        case ModelKind::knn: return fit_knn(x, y, feature_names, spec.knn);
        case ModelKind::tree: return fit_tree(x, y, feature_names, spec.tree);
        case ModelKind::gbdt: return fit_gbdt(x, y, feature_names, spec.gbdt);
    }
    throw std::logic_error("unreachable model kind");
}

linalg::Matrix design_matrix(const FluxDataset& ds,
                             const std::vector<std::string>& features,
                             std::span<const std::uint32_t> rows) {
    linalg::Matrix x(rows.size(), features.size());
    for (std::size_t j = 0; j < features.size(); ++j) {
        if (!ds.has_feature(features[j]))
            throw std::invalid_argument("feature '" + features[j] +
                                        "' is absent from the schema of site '" +
                                        ds.site_id() + "'");
        const auto& col = ds.column(features[j]);
        auto out = x.col(j);
        for (std::size_t i = 0; i < rows.size(); ++i) {
            const std::size_t r = rows[i];
            if (!col.is_present(r))
                throw std::invalid_argument("feature '" + features[j] +
                                            "' has a missing value at record " +
                                            std::to_string(r) + "; impute first");
            out[i] = col.value_unchecked(r);
        }
    }
    return x;
}

std::vector<double> gather_target(const FluxDataset& ds,
                                  std::span<const std::uint32_t> rows) {
    const auto& col = ds.column(kTargetFeature);
    std::vector<double> y(rows.size());
    for (std::size_t i = 0; i < rows.size(); ++i) {
        const std::size_t r = rows[i];
        if (!col.is_present(r))
            throw std::invalid_argument("target wq missing at record " +
                                        std::to_string(r));
        y[i] = col.value_unchecked(r);
    }
    return y;
}

// --- serialization ----------------------------------------------------------

namespace detail {

nlohmann::json spec_to_json(const ModelSpec& s) {
    using nlohmann::json;
    json j;
    j["kind"] = std::string(model_kind_name(s.kind));
    switch (s.kind) {
        case ModelKind::ridge:
            j["lambda"] = s.ridge.lambda;
            j["standardize"] = s.ridge.standardize;
            break;
        case ModelKind::knn:
            j["k"] = s.knn.k;
            break;
        case ModelKind::tree:
            j["max_depth"] = s.tree.max_depth;
            j["min_samples_leaf"] = s.tree.min_samples_leaf;
            break;
        case ModelKind::gbdt:
            j["n_trees"] = s.gbdt.n_trees;
            j["learning_rate"] = s.gbdt.learning_rate;
            j["max_depth"] = s.gbdt.max_depth;
            j["min_samples_leaf"] = s.gbdt.min_samples_leaf;
            j["histogram_bins"] = s.gbdt.histogram_bins;
            break;
        case ModelKind::linear:
            break;
    }
    return j;
}

ModelSpec spec_from_json(const nlohmann::json& j) {
    ModelSpec s;
    s.kind = model_kind_from_name(j.at("kind").get<std::string>());
    switch (s.kind) {
        case ModelKind::ridge:
            s.ridge.lambda = j.value("lambda", s.ridge.lambda);
            s.ridge.standardize = j.value("standardize", s.ridge.standardize);
            break;
        case ModelKind::knn:
            s.knn.k = j.value("k", s.knn.k);
            break;
        case ModelKind::tree:
            s.tree.max_depth = j.value("max_depth", s.tree.max_depth);
            s.tree.min_samples_leaf =
                j.value("min_samples_leaf", s.tree.min_samples_leaf);
            break;
        case ModelKind::gbdt:
            s.gbdt.n_trees = j.value("n_trees", s.gbdt.n_trees);
            s.gbdt.learning_rate = j.value("learning_rate", s.gbdt.learning_rate);
            s.gbdt.max_depth = j.value("max_depth", s.gbdt.max_depth);
            s.gbdt.min_samples_leaf =
                j.value("min_samples_leaf", s.gbdt.min_samples_leaf);
            s.gbdt.histogram_bins = j.value("histogram_bins", s.gbdt.histogram_bins);
            break;
        case ModelKind::linear:
            break;
    }
    s.validate();
    return s;
}

}  // namespace detail

namespace {

json tree_to_json(const TreeData& t) {
    json nodes = json::array();
    for (const auto& n : t.nodes) {
        nodes.push_back({{"f", n.feature},
                         {"t", n.threshold},
                         {"v", n.value},
                         {"l", n.left},
                         {"r", n.right}});
    }
    return nodes;
}

TreeData tree_from_json(const json& j) {
    TreeData t;
    for (const auto& n : j) {
        TreeNode node;
        node.feature = n.at("f").get<std::int32_t>();
        node.threshold = n.at("t").get<double>();
        node.value = n.at("v").get<double>();
        node.left = n.at("l").get<std::int32_t>();
        node.right = n.at("r").get<std::int32_t>();
        t.nodes.push_back(node);
    }
    return t;
}

}  // namespace

std::string serialize_model(const TrainedModel& model) {
    json j;
    j["spec"] = detail::spec_to_json(model.spec());
    j["features"] = model.feature_names();
    j["warnings"] = model.fit_warnings();
    if (model.is_tree_based()) j["gains"] = model.gain_by_feature();

    const auto& params = model.params();
    if (const auto* d = std::get_if<LinearData>(&params)) {
        j["params"] = {{"intercept", d->intercept}, {"coeffs", d->coeffs}};
    } else if (const auto* d = std::get_if<KnnData>(&params)) {
        j["params"] = {{"k", d->k},         {"n", d->n},
                       {"q", d->q},         {"train_std", d->train_std},
                       {"train_y", d->train_y}, {"mean", d->mean},
                       {"inv_scale", d->inv_scale}};
    } else if (const auto* d = std::get_if<TreeData>(&params)) {
        j["params"] = {{"nodes", tree_to_json(*d)}};
    } else if (const auto* d = std::get_if<GbdtData>(&params)) {
        json trees = json::array();
        for (const auto& t : d->trees) trees.push_back(tree_to_json(t));
        j["params"] = {{"base", d->base},
                       {"learning_rate", d->learning_rate},
                       {"trees", trees},
                       {"train_rmse", d->train_rmse}};
    }
    return j.dump(2);
}

TrainedModel deserialize_model(const std::string& text) {
    const json j = json::parse(text);
    const ModelSpec spec = detail::spec_from_json(j.at("spec"));
    auto features = j.at("features").get<std::vector<std::string>>();
    auto warnings = j.value("warnings", std::vector<std::string>{});
    std::map<std::string, double> gains;
    if (j.contains("gains")) gains = j.at("gains").get<std::map<std::string, double>>();

    const json& p = j.at("params");
    TrainedModel::Params params;
    switch (spec.kind) {
        case ModelKind::linear:
        case ModelKind::ridge: {
            LinearData d;
            d.intercept = p.at("intercept").get<double>();
            d.coeffs = p.at("coeffs").get<std::vector<double>>();
            params = std::move(d);
            break;
        }
        case ModelKind::knn: {
            KnnData d;
            d.k = p.at("k").get<int>();
            d.n = p.at("n").get<std::size_t>();
            d.q = p.at("q").get<std::size_t>();
            d.train_std = p.at("train_std").get<std::vector<double>>();
            d.train_y = p.at("train_y").get<std::vector<double>>();
            d.mean = p.at("mean").get<std::vector<double>>();
            d.inv_scale = p.at("inv_scale").get<std::vector<double>>();
            params = std::move(d);
            break;
        }
        case ModelKind::tree: {
            params = tree_from_json(p.at("nodes"));
            break;
        }
        case ModelKind::gbdt: {
            GbdtData d;
            d.base = p.at("base").get<double>();
            d.learning_rate = p.at("learning_rate").get<double>();
            for (const auto& t : p.at("trees")) d.trees.push_back(tree_from_json(t));
            d.train_rmse = p.at("train_rmse").get<std::vector<double>>();
            params = std::move(d);
            break;
        }
    }
    return TrainedModel(spec, std::move(features), std::move(params), std::move(gains),
                        std::move(warnings));
}

}  // namespace etp
