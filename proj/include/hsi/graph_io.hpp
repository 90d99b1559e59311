#pragma once

#include "hsi/causal.hpp"

#include <nlohmann/json_fwd.hpp>

#include <string>

namespace hsi {

/// JSON form: variables plus edges with (source, lag, target, statistic,
/// p_value), variables referenced by name.
nlohmann::json graph_to_json(const CausalGraph& graph);
CausalGraph graph_from_json(const nlohmann::json& j);

/// DOT rendering: edge labels carry the lag and statistic, line widths scale
/// with |statistic|, node borders with the self-lag strength.
std::string graph_to_dot(const CausalGraph& graph);

}  // namespace hsi
