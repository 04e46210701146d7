#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "htype/hstructure.hpp"

namespace htype {

struct ExplicitStructure {
  Eigen::VectorXd s_diagonal;
  std::vector<Eigen::MatrixXd> L;
};

/// Group description read from a JSON config file. Exactly one of the two
/// forms is present.
///
///   spectral: {"rank", "corank", "spectrum": [{"alpha", "pair_multiplicity"}], "kernel_dim"}
///   explicit: {"S_diagonal": [k reals], "L_matrices": [p row-major k x k arrays]}
///
/// Optional keys: "seed" (unsigned integer), "tolerance" (real, default 1e-12).
/// An L matrix may be given either flat (k² numbers) or as k rows.
struct GroupConfig {
  std::optional<GroupSpec> spectral;
  std::optional<ExplicitStructure> explicit_form;
  std::uint64_t seed = kDefaultSeed;
  double tolerance = 1e-12;
};

/// Throws Error(InvalidArgument) on malformed text, Error(InvalidSpec) on a
/// structurally bad spectral description.
GroupConfig parse_config(const std::string& text);
GroupConfig load_config(const std::filesystem::path& path);

/// Builds the structure constants. Spectral configs go through
/// existence_check, explicit ones through validate_structure.
StructureConstants realize(const GroupConfig& config, const std::string& name);

}  // namespace htype
