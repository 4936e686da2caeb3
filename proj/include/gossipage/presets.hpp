#pragma once

#include <optional>
#include <string_view>
#include <vector>

#include "gossipage/model.hpp"

namespace gossipage::presets {

// Named rate bundles for the shipped experiment recipes (fig4a..fig4d, fig5,
// table2-no-gossip, table2-gossip, table3).
std::optional<model::RateParams> find(std::string_view name);
const std::vector<std::string_view>& names();

}  // namespace gossipage::presets
