#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "htype/rng.hpp"

namespace htype {

/// One non-zero eigenvalue of S together with the number of 2-planes it spans.
struct SpectrumEntry {
  double alpha = 0.0;
  int pair_multiplicity = 0;
};

/// Spectral description of a generalized H-type group.
///
/// S has a kernel of dimension `kernel_dim` and, for each entry of `spectrum`,
/// an eigenspace of dimension 2 * pair_multiplicity. Alphas are strictly
/// increasing; use make() to merge repeated values from user input.
struct GroupSpec {
  int rank = 0;
  int corank = 0;
  std::vector<SpectrumEntry> spectrum;
  int kernel_dim = 0;

  /// Validating constructor. Adjacent equal alphas are merged, decreasing
  /// alphas and inconsistent dimensions throw Error(InvalidSpec).
  static GroupSpec make(int rank, int corank, std::vector<SpectrumEntry> spectrum, int kernel_dim);

  int dimension() const { return rank + corank; }
  int pair_count() const;
  double top_alpha() const { return spectrum.back().alpha; }
};

/// Restriction of S to one eigenspace: the coordinate indices it occupies.
/// For structures in normal form the indices are contiguous.
struct Eigenspace {
  double alpha = 0.0;
  std::vector<int> indices;
};

/// Concrete structure matrices: diagonal S and the skew family L^1..L^p.
struct StructureConstants {
  std::string name;  // catalog name or config path, for reports
  Eigen::MatrixXd S;
  std::vector<Eigen::MatrixXd> L;
  GroupSpec spec;
  std::vector<int> kernel_indices;
  std::vector<Eigenspace> blocks;  // ordered by increasing alpha

  int rank() const { return spec.rank; }
  int corank() const { return spec.corank; }
  int dimension() const { return spec.dimension(); }
  double top_alpha() const { return spec.top_alpha(); }
};

/// ρ(N) = 8a + 2^b for N = 2^{4a+b}·odd, 0 <= b <= 3.
int hurwitz_radon(int n);

struct ExistenceResult {
  bool realizable = false;
  std::string diagnostic;
};

/// Realizability of a spectral description: every eigenspace of dimension
/// k_j must carry p anticommuting complex structures, i.e. p <= ρ(k_j) - 1.
ExistenceResult existence_check(const GroupSpec& spec);

/// `count` pairwise anticommuting, orthogonal, skew-symmetric n x n matrices
/// with entries in {-1, 0, 1}. Throws SpecNotRealizable if count >= ρ(n).
std::vector<Eigen::MatrixXd> anticommuting_family(int n, int count);

/// Normal-form structure for a realizable spec: S = diag(0, α_1 I, ..., α_d I)
/// and L^a acting as α_j times a Radon-Hurwitz family on each eigenspace.
StructureConstants build_structure(const GroupSpec& spec);

struct ValidationCheck {
  std::string name;
  bool passed = false;
  double residual = 0.0;
  std::string detail;
};

struct ValidationReport {
  std::vector<ValidationCheck> checks;

  bool passed() const;
  const ValidationCheck* find(const std::string& name) const;
};

/// Checks a user-supplied (S, L) pair: S symmetric non-negative non-zero,
/// each L skew, the anticommutation relation on the standard basis plus 64
/// seeded random unit pairs, and linear independence of the family.
ValidationReport validate_structure(const Eigen::MatrixXd& S, const std::vector<Eigen::MatrixXd>& L,
                                    double tol, std::uint64_t seed = kDefaultSeed);

/// Wraps an explicit diagonal S and family L into StructureConstants, deriving
/// the spectral data from S. Throws Error(SpecNotRealizable) with the failing
/// checks if validation does not pass at `tol`.
StructureConstants structure_from_explicit(const Eigen::VectorXd& s_diagonal,
                                           const std::vector<Eigen::MatrixXd>& L, double tol,
                                           std::uint64_t seed = kDefaultSeed);

/// L_v = Σ v_a L^a.
Eigen::MatrixXd l_of_v(const StructureConstants& sc, const Eigen::VectorXd& v);

/// Largest |L_v L_w + L_w L_v + 2 (v·w) S²| entry.
double anticommutation_residual(const Eigen::MatrixXd& S, const std::vector<Eigen::MatrixXd>& L,
                                const Eigen::VectorXd& v, const Eigen::VectorXd& w);

}  // namespace htype
