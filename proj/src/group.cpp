#include "htype/group.hpp"

#include "htype/errors.hpp"

namespace htype {

GroupPoint GroupPoint::identity(const StructureConstants& sc) {
  return {Eigen::VectorXd::Zero(sc.rank()), Eigen::VectorXd::Zero(sc.corank())};
}

Eigen::VectorXd GroupPoint::stacked() const {
  Eigen::VectorXd out(x.size() + z.size());
  out << x, z;
  return out;
}

void check_dimensions(const StructureConstants& sc, const GroupPoint& p) {
  if (p.x.size() != sc.rank() || p.z.size() != sc.corank())
    throw Error(ErrorCode::DimensionMismatch, "group point does not match (rank, corank)");
}

GroupPoint multiply(const StructureConstants& sc, const GroupPoint& left, const GroupPoint& right) {
  check_dimensions(sc, left);
  check_dimensions(sc, right);
  GroupPoint out{left.x + right.x, left.z + right.z};
  for (int a = 0; a < sc.corank(); ++a) out.z(a) += 0.5 * left.x.dot(sc.L[a] * right.x);
  return out;
}

GroupPoint inverse(const GroupPoint& p) { return {-p.x, -p.z}; }

GroupPoint dilate(double eps, const GroupPoint& p) {
  if (!(eps > 0.0)) throw Error(ErrorCode::InvalidArgument, "dilation factor must be > 0");
  return {eps * p.x, (eps * eps) * p.z};
}

Eigen::MatrixXd frame_fields(const StructureConstants& sc, const GroupPoint& p) {
  check_dimensions(sc, p);
  const int k = sc.rank();
  Eigen::MatrixXd out = Eigen::MatrixXd::Zero(sc.dimension(), k);
  out.topRows(k).setIdentity();
  for (int a = 0; a < sc.corank(); ++a) {
    const Eigen::VectorXd lx = sc.L[a] * p.x;
    out.row(k + a) = -0.5 * lx.transpose();
  }
  return out;
}

Eigen::MatrixXd left_translation_differential(const StructureConstants& sc, const GroupPoint& by) {
  check_dimensions(sc, by);
  const int k = sc.rank();
  Eigen::MatrixXd d = Eigen::MatrixXd::Identity(sc.dimension(), sc.dimension());
  // ∂/∂x'_j of ½ x0ᵀ L^a x' is ½ (L^aᵀ x0)_j.
  for (int a = 0; a < sc.corank(); ++a)
    d.block(k + a, 0, 1, k) = 0.5 * (sc.L[a].transpose() * by.x).transpose();
  return d;
}

}  // namespace htype
