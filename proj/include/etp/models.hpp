#pragma once

// From-scratch regression engine: OLS linear, ridge, exact KNN, CART
// regression trees and histogram-binned gradient-boosted trees, all with
// deterministic fits. Tree-based models account per-feature gain (total SSE
// reduction over all splits) for importance ranking.

#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "etp/dataset.hpp"
#include "etp/linalg.hpp"

namespace etp {

enum class ModelKind { linear, ridge, knn, tree, gbdt };

std::string_view model_kind_name(ModelKind k);
ModelKind model_kind_from_name(std::string_view name);

struct RidgeParams {
    double lambda = 1.0;
    bool standardize = true;
};

struct KnnParams {
    int k = 5;
};

struct TreeParams {
    int max_depth = 0;  // 0 = unlimited
    int min_samples_leaf = 1;
};

struct GbdtParams {
    int n_trees = 100;
    double learning_rate = 0.1;
    int max_depth = 6;
    int min_samples_leaf = 20;
    int histogram_bins = 255;
};

struct ModelSpec {
    ModelKind kind = ModelKind::gbdt;
    RidgeParams ridge;
    KnnParams knn;
    TreeParams tree;
    GbdtParams gbdt;

    std::string name() const { return std::string(model_kind_name(kind)); }
    void validate() const;
};

// --- fitted-parameter representations -------------------------------------

struct LinearData {
    double intercept = 0.0;
    std::vector<double> coeffs;
};

struct KnnData {
    int k = 0;
    std::size_t n = 0;
    std::size_t q = 0;
    std::vector<double> train_std;  // row-major standardized training matrix
    std::vector<double> train_y;
    std::vector<double> mean;
    std::vector<double> inv_scale;  // 0 for zero-variance features
};

struct TreeNode {
    std::int32_t feature = -1;  // -1 marks a leaf
    double threshold = 0.0;     // go left when x <= threshold
    double value = 0.0;         // leaf prediction
    std::int32_t left = -1;
    std::int32_t right = -1;
    bool is_leaf() const { return feature < 0; }
};

struct TreeData {
    std::vector<TreeNode> nodes;  // nodes[0] is the root
    double predict_row(std::span<const double> row) const;
};

struct GbdtData {
    double base = 0.0;
    double learning_rate = 0.0;
    std::vector<TreeData> trees;
    std::vector<double> train_rmse;  // per boosting iteration
};

class TrainedModel {
public:
    using Params = std::variant<LinearData, KnnData, TreeData, GbdtData>;

    TrainedModel(ModelSpec spec, std::vector<std::string> feature_names, Params params,
                 std::map<std::string, double> gains, std::vector<std::string> warnings);

    const ModelSpec& spec() const { return spec_; }
    const std::vector<std::string>& feature_names() const { return feature_names_; }
    const std::vector<std::string>& fit_warnings() const { return warnings_; }

    double predict_row(std::span<const double> row) const;
    std::vector<double> predict(const linalg::Matrix& x) const;

    bool is_tree_based() const;
    const std::map<std::string, double>& gain_by_feature() const { return gains_; }

    /// Raw accumulated gains, or gains normalized to sum to 1 (all zeros when
    /// the model never split). Throws for non-tree models.
    std::map<std::string, double> gain_importance(bool normalize) const;

    /// Per-iteration training RMSE (gbdt only; empty otherwise).
    const std::vector<double>& training_rmse_per_iter() const;

    const Params& params() const { return params_; }

private:
    ModelSpec spec_;
    std::vector<std::string> feature_names_;
    Params params_;
    std::map<std::string, double> gains_;
    std::vector<std::string> warnings_;
};

// --- training entry points -------------------------------------------------

TrainedModel fit_linear(const linalg::Matrix& x, std::span<const double> y,
                        const std::vector<std::string>& feature_names);
TrainedModel fit_ridge(const linalg::Matrix& x, std::span<const double> y,
                       const std::vector<std::string>& feature_names,
                       const RidgeParams& params);
TrainedModel fit_knn(const linalg::Matrix& x, std::span<const double> y,
                     const std::vector<std::string>& feature_names,
                     const KnnParams& params);
TrainedModel fit_tree(const linalg::Matrix& x, std::span<const double> y,
                      const std::vector<std::string>& feature_names,
                      const TreeParams& params);
TrainedModel fit_gbdt(const linalg::Matrix& x, std::span<const double> y,
                      const std::vector<std::string>& feature_names,
                      const GbdtParams& params);

/// Dispatches on spec.kind.
TrainedModel fit_model(const ModelSpec& spec, const linalg::Matrix& x,
                       std::span<const double> y,
                       const std::vector<std::string>& feature_names);

// --- dataset bridging -------------------------------------------------------

/// Gathers the named features at the given rows into a column-major design
/// matrix. Throws naming the feature on an unknown name or a missing value.
linalg::Matrix design_matrix(const FluxDataset& ds,
                             const std::vector<std::string>& features,
                             std::span<const std::uint32_t> rows);

/// Gathers the target (wq) at the given rows; throws on missing values.
std::vector<double> gather_target(const FluxDataset& ds,
                                  std::span<const std::uint32_t> rows);

// --- serialization ----------------------------------------------------------

/// Self-describing JSON text: spec, feature names, parameters and gains.
std::string serialize_model(const TrainedModel& model);
TrainedModel deserialize_model(const std::string& text);

}  // namespace etp
