#include "htype/catalog.hpp"

#include "htype/errors.hpp"

namespace htype {

std::vector<std::string> catalog_names() { return {"heisenberg3", "htype4x3", "contact12", "degenerate-corank1"}; }

GroupSpec catalog_spec(std::string_view name) {
  if (name == "heisenberg3") return GroupSpec::make(2, 1, {{1.0, 1}}, 0);
  if (name == "htype4x3") return GroupSpec::make(4, 3, {{1.0, 2}}, 0);
  if (name == "contact12") return GroupSpec::make(4, 1, {{1.0, 1}, {2.0, 1}}, 0);
  if (name == "degenerate-corank1") return GroupSpec::make(4, 1, {{1.0, 1}}, 2);
  throw Error(ErrorCode::InvalidArgument, "unknown catalog group '" + std::string(name) + "'");
}

StructureConstants catalog_group(std::string_view name) {
  StructureConstants sc = build_structure(catalog_spec(name));
  sc.name = std::string(name);
  return sc;
}

}  // namespace htype
