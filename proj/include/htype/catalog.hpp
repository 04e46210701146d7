#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "htype/hstructure.hpp"

namespace htype {

/// heisenberg3, htype4x3, contact12, degenerate-corank1.
std::vector<std::string> catalog_names();

GroupSpec catalog_spec(std::string_view name);

/// Normal-form structure for a catalog entry, named after it.
StructureConstants catalog_group(std::string_view name);

}  // namespace htype
