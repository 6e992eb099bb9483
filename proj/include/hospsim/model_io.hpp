#pragma once

#include "hospsim/surrogates.hpp"

#include <nlohmann/json_fwd.hpp>

namespace hospsim {

/// Versioned structured-text model artifacts. Loading refits nothing; stored
/// hyperparameters are reused and factorizations are rebuilt exactly.
nlohmann::json design_to_json(const Design& design);
Design design_from_json(const nlohmann::json& j);

nlohmann::json kriging_to_json(const KrigingModel& model);
KrigingModel kriging_from_json(const nlohmann::json& j);

nlohmann::json linear_to_json(const LinearModel& model);
LinearModel linear_from_json(const nlohmann::json& j);

nlohmann::json forest_to_json(const ForestModel& model);
ForestModel forest_from_json(const nlohmann::json& j);

} // namespace hospsim
