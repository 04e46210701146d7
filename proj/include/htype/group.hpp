#pragma once

#include <Eigen/Dense>

#include "htype/hstructure.hpp"

namespace htype {

/// Point of G in exponential coordinates (x, z) ∈ R^k × R^p.
struct GroupPoint {
  Eigen::VectorXd x;
  Eigen::VectorXd z;

  static GroupPoint identity(const StructureConstants& sc);
  bool is_identity() const { return x.isZero(0.0) && z.isZero(0.0); }
  Eigen::VectorXd stacked() const;
};

void check_dimensions(const StructureConstants& sc, const GroupPoint& p);

/// Step-2 Baker-Campbell-Hausdorff product:
/// (x, z)·(x', z') = (x + x', z + z' + ½ Σ_ij L^a_ij x_i x'_j e_a).
GroupPoint multiply(const StructureConstants& sc, const GroupPoint& left, const GroupPoint& right);

GroupPoint inverse(const GroupPoint& p);

/// δ_ε(x, z) = (εx, ε²z).
GroupPoint dilate(double eps, const GroupPoint& p);

/// Columns are X_1(p), ..., X_k(p) as coordinate vectors in R^n, with
/// X_i = ∂_{x_i} - ½ Σ_a Σ_j L^a_ij x_j ∂_{z_a}.
Eigen::MatrixXd frame_fields(const StructureConstants& sc, const GroupPoint& p);

/// Differential of left translation by `by`, an n x n matrix independent of
/// the base point because the group law is affine in the right factor.
Eigen::MatrixXd left_translation_differential(const StructureConstants& sc, const GroupPoint& by);

}  // namespace htype
