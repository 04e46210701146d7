#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include <Eigen/Dense>

#include "htype/group.hpp"
#include "htype/hstructure.hpp"
#include "htype/rng.hpp"

namespace htype {

/// Initial covector λ = (u, v) at the identity.
struct Covector {
  Eigen::VectorXd u;
  Eigen::VectorXd v;

  Covector scaled(double t) const { return {t * u, t * v}; }
  Eigen::VectorXd stacked() const;
  static Covector from_stacked(const StructureConstants& sc, const Eigen::VectorXd& lambda);
};

void check_dimensions(const StructureConstants& sc, const Covector& lambda);

/// Decomposition of u along ker S and the eigenspaces of S. Only norms are
/// kept: every quantity of the synthesis depends on u through these alone.
struct SpectralSplit {
  std::vector<double> theta;      // α_j |v|
  double u0_norm2 = 0.0;          // |u_0|², component in ker S
  std::vector<double> ui_norm2;   // |u_j|² per eigenspace
};

SpectralSplit spectral_split(const StructureConstants& sc, const Covector& lambda);

/// Even/odd decomposition of an analytic function of L_v:
/// fn(L_v) = E(θ) + L_v O(θ) on each eigenspace, θ = α_j |v|.
struct AnalyticPair {
  enum class Name { F, G, ExpNeg, FInverse };
  Name name;
  double (*even_part)(double theta);
  double (*odd_part)(double theta);

  static AnalyticPair f();          // (1 - e^{-z}) / z
  static AnalyticPair g();          // 1 - sinh(z) / z
  static AnalyticPair exp_neg();    // e^{-z}
  static AnalyticPair f_inverse();  // z / (1 - e^{-z}), valid for θ < 2π
};

Eigen::VectorXd apply_analytic(const StructureConstants& sc, const Eigen::VectorXd& v,
                               const AnalyticPair& fn, const Eigen::VectorXd& w);

/// Normal geodesic endpoint: x = f(L_v) u, z = (g(L_v)u·u / 2|v|) v/|v|.
GroupPoint exp_map(const StructureConstants& sc, const Covector& lambda);

/// γ_λ(t) = exp(tλ) for each t in `ts` (sorted, inside [0, 1]).
std::vector<GroupPoint> geodesic_sample(const StructureConstants& sc, const Covector& lambda,
                                        std::span<const double> ts);

/// H(λ) = |u|²/2.
double hamiltonian(const Covector& lambda);

/// Jacobian determinant of exp at λ. Defined on |v| < 2π/α_d, zero iff Su = 0.
double jacobian(const StructureConstants& sc, const Covector& lambda);

/// 2π/(α_d|v|) when v ≠ 0 and Su ≠ 0, +inf otherwise.
double cut_time(const StructureConstants& sc, const Covector& lambda);

/// |v| < 2π/α_d and Su ≠ 0, both tested exactly.
bool in_injectivity_domain(const StructureConstants& sc, const Covector& lambda);

/// Su = 0: the geodesic t ↦ (tu, 0) is abnormal (and normal for every v).
bool is_abnormal(const StructureConstants& sc, const Covector& lambda);

/// Inverse of exp on exp(D). Throws CutLocusTarget when the target is not
/// reached from the injectivity domain, IdentityTarget for the identity.
Covector log_map(const StructureConstants& sc, const GroupPoint& target);

struct DistanceResult {
  double value = 0.0;
  bool approximate = false;  // true when the target is in the cut locus
};

DistanceResult distance(const StructureConstants& sc, const GroupPoint& p, const GroupPoint& q);

struct DistanceBound {
  double value = 0.0;
  Covector covector;
  double residual = 0.0;
  int accepted_starts = 0;
};

/// Upper bound on d(e, target) for cut-locus targets, from covectors on the
/// boundary sphere |v| = 2π/α_d.
DistanceBound distance_bound(const StructureConstants& sc, const GroupPoint& target,
                             std::uint64_t seed = kDefaultSeed);

/// Φ^{x0}(y, t) = τ_{x0} exp(t log(τ_{x0}^{-1} y)).
GroupPoint homothety(const StructureConstants& sc, const GroupPoint& x0, const GroupPoint& y, double t);

/// Metric-product splitting G = R^{dim ker S} × Ĝ.
struct IdealFactor {
  StructureConstants reduced;
  std::vector<int> kernel_indices;
  std::vector<int> complement_indices;
};

IdealFactor ideal_factor(const StructureConstants& sc);

}  // namespace htype
