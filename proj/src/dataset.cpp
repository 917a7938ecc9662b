#include "etp/dataset.hpp"

#include <algorithm>
#include <stdexcept>

namespace etp {

std::size_t FeatureColumn::present_count() const {
    std::size_t n = 0;
    for (const auto p : present_) n += p;
    return n;
}

bool FeatureColumn::fully_present() const {
    return std::all_of(present_.begin(), present_.end(),
                       [](std::uint8_t p) { return p != 0; });
}

FluxDataset::FluxDataset(SiteMeta meta, std::vector<TimePoint> timestamps,
                         std::vector<std::string> schema)
    : meta_(std::move(meta)),
      timestamps_(std::move(timestamps)),
      schema_(std::move(schema)) {
    for (std::size_t i = 1; i < timestamps_.size(); ++i) {
        if (timestamps_[i] <= timestamps_[i - 1])
            throw std::invalid_argument(
                "timestamps must be strictly increasing; violation at " +
                format_iso8601(timestamps_[i]));
    }
    if (std::find(schema_.begin(), schema_.end(), kTargetFeature) == schema_.end())
        throw std::invalid_argument("dataset schema must contain the target feature '" +
                                    std::string(kTargetFeature) + "'");
    columns_.assign(schema_.size(), FeatureColumn(timestamps_.size()));
    rebuild_index();
    if (index_.size() != schema_.size())
        throw std::invalid_argument("dataset schema contains duplicate feature names");
}

void FluxDataset::rebuild_index() {
    index_.clear();
    for (std::size_t i = 0; i < schema_.size(); ++i) index_.emplace(schema_[i], i);
}

bool FluxDataset::has_feature(std::string_view name) const {
    return index_.find(name) != index_.end();
}

std::size_t FluxDataset::feature_index(std::string_view name) const {
    const auto it = index_.find(name);
    if (it == index_.end())
        throw std::invalid_argument("unknown feature '" + std::string(name) + "'");
    return it->second;
}

const FeatureColumn& FluxDataset::column(std::string_view name) const {
    return columns_[feature_index(name)];
}

FeatureColumn& FluxDataset::column(std::string_view name) {
    return columns_[feature_index(name)];
}

void FluxDataset::add_column(std::string name, FeatureColumn col,
                             std::optional<std::size_t> position) {
    if (col.size() != n_records())
        throw std::invalid_argument("column '" + name + "' has length " +
                                    std::to_string(col.size()) + ", dataset has " +
                                    std::to_string(n_records()) + " records");
    if (has_feature(name))
        throw std::invalid_argument("feature '" + name + "' already in schema");
    const std::size_t pos = position.value_or(schema_.size());
    schema_.insert(schema_.begin() + static_cast<std::ptrdiff_t>(pos), std::move(name));
    columns_.insert(columns_.begin() + static_cast<std::ptrdiff_t>(pos), std::move(col));
    rebuild_index();
}

void FluxDataset::remove_column(std::string_view name) {
    if (name == kTargetFeature)
        throw std::invalid_argument("the target feature cannot be removed");
    const std::size_t idx = feature_index(name);
    schema_.erase(schema_.begin() + static_cast<std::ptrdiff_t>(idx));
    columns_.erase(columns_.begin() + static_cast<std::ptrdiff_t>(idx));
    rebuild_index();
}

bool FluxDataset::operator==(const FluxDataset& other) const {
    if (timestamps_ != other.timestamps_ || schema_ != other.schema_) return false;
    for (std::size_t c = 0; c < columns_.size(); ++c) {
        const auto& a = columns_[c];
        const auto& b = other.columns_[c];
        for (std::size_t i = 0; i < n_records(); ++i) {
            if (a.is_present(i) != b.is_present(i)) return false;
            if (a.is_present(i) && a.value_unchecked(i) != b.value_unchecked(i))
                return false;
        }
    }
    return true;
}

void FeatureSet::validate() const {
    if (features.empty())
        throw std::invalid_argument("feature set '" + name + "' is empty");
    std::vector<std::string> sorted = features;
    std::sort(sorted.begin(), sorted.end());
    if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end())
        throw std::invalid_argument("feature set '" + name + "' contains duplicates");
    if (contains(kTargetFeature))
        throw std::invalid_argument("feature set '" + name +
                                    "' must not contain the target feature");
}

bool FeatureSet::contains(std::string_view f) const {
    return std::find(features.begin(), features.end(), f) != features.end();
}

}  // namespace etp
