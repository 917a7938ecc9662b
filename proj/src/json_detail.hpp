#pragma once

// Shared JSON conversions used by configuration, reporting and model
// serialization.

#include <json.hpp>

#include "etp/models.hpp"

namespace etp::detail {

nlohmann::json spec_to_json(const ModelSpec& s);
ModelSpec spec_from_json(const nlohmann::json& j);

}  // namespace etp::detail
