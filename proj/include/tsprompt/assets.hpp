#pragma once

#include <optional>
#include <string_view>
#include <vector>

// Text assets compiled in from the data/ directory at build time.
namespace tsprompt::assets {

/// Lookup by path relative to data/, e.g. "oneshot/cot.txt".
std::optional<std::string_view> find(std::string_view name);

std::vector<std::string_view> names();

} // namespace tsprompt::assets
