#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "htype/geodesics.hpp"
#include "htype/hstructure.hpp"
#include "htype/rng.hpp"

namespace htype {

/// k + 3p: the exponent of the measure contraction under geodesic homotheties.
int geodesic_dimension(const GroupSpec& spec);

/// k + 2p.
int hausdorff_dimension(const GroupSpec& spec);

/// t [s_K(t d/√(N-1)) / s_K(d/√(N-1))]^{N-1} for K <= 0, with 0/0 = 1.
/// Positive K throws UnsupportedPositiveK.
double distortion_coefficient(double K, double N, double t, double dist);

/// sin x - x cos x
double lemma_g(double x);
/// x - sin x
double lemma_f(double x);

struct InequalityReport {
  bool passed = true;
  double min_slack = 0.0;   // min over the grid of h(tx) - t^N h(x)
  double worst_t = 0.0;
  double worst_x = 0.0;
  std::size_t violations = 0;
  std::size_t evaluated = 0;
};

inline constexpr double kScalarSlackTolerance = 1e-14;

/// g(tx) >= t^N g(x) on t_grid × x_grid, x in (0, π).
InequalityReport check_g_inequality(std::span<const double> t_grid, std::span<const double> x_grid, double N);
/// f(tx) >= t^N f(x) on t_grid × x_grid, x in (0, 2π).
InequalityReport check_f_inequality(std::span<const double> t_grid, std::span<const double> x_grid, double N);

/// Axis-aligned box A in stacked (u, v) coordinates.
struct CovectorBox {
  Eigen::VectorXd lower;
  Eigen::VectorXd upper;

  Eigen::VectorXd center() const { return 0.5 * (lower + upper); }
};

/// Throws BoxOutsideDomain unless the closed box lies in the injectivity domain.
void validate_box(const StructureConstants& sc, const CovectorBox& box);

/// u in [0.5, 1.5]^k, v in [0.5, 1.5]^p, the v-range shrunk if needed so the
/// farthest corner stays below 0.8 · 2π/α_d.
CovectorBox default_box(const StructureConstants& sc);

struct JacobianContractionReport {
  bool passed = true;
  double min_margin = 0.0;  // min of J(tλ) / (t^{2p} J(λ)) - 1
  std::size_t samples = 0;
};

JacobianContractionReport check_jacobian_contraction(const StructureConstants& sc, int samples,
                                                     std::span<const double> t_grid,
                                                     std::uint64_t seed = kDefaultSeed);

struct QuadratureOptions {
  int points_per_dim = 8;
  int workers = 1;  // <= 0 means the OpenMP default
};

/// ∫_A J(λ), ∫_A J(t λ) and optionally ∫_A D(K, N, t, |u|) J(λ) over a box.
struct ContractionIntegrals {
  double base = 0.0;
  std::vector<double> scaled;
  std::vector<double> weighted;
};

struct DistortionModel {
  double K = 0.0;
  double N = 0.0;
};

/// Tensor Gauss-Legendre kernel, parallel over v-nodes. Reductions are
/// pairwise with a fixed tree, so results do not depend on `workers`.
ContractionIntegrals integrate_contraction(const StructureConstants& sc, const CovectorBox& box,
                                           std::span<const double> ts, const QuadratureOptions& options,
                                           const DistortionModel* model = nullptr);

/// Serial node-by-node evaluation through jacobian() and
/// distortion_coefficient(); kept as the reference for the parallel kernel.
ContractionIntegrals integrate_contraction_reference(const StructureConstants& sc, const CovectorBox& box,
                                                     std::span<const double> ts, int points_per_dim,
                                                     const DistortionModel* model = nullptr);

/// μ(Ω_t)/μ(Ω) = t^n ∫_A J(tλ) / ∫_A J(λ) for Ω = exp(A).
double contraction_ratio(const StructureConstants& sc, const CovectorBox& box, double t,
                         const QuadratureOptions& options = {});

struct ContractionReport {
  std::string group_id;
  double K = 0.0;
  double N_claimed = 0.0;
  std::vector<double> t_grid;
  std::vector<double> ratios;
  std::vector<double> bounds;
  std::vector<double> margins;  // ratio / bound - 1
  std::vector<bool> verdicts;

  bool passed() const;
};

inline constexpr double kContractionTolerance = 1e-9;

/// Left side of the MCP inequality from contraction_ratio, right side from
/// the distortion coefficient integrated against J over the box.
ContractionReport mcp_report(const StructureConstants& sc, double K, double N, const CovectorBox& box,
                             std::span<const double> t_grid, const QuadratureOptions& options = {});

/// Small box around (e_i, δ e_1) with e_i the first non-kernel direction;
/// `shrink` halves δ and the half-widths that many times.
CovectorBox sharpness_box(const StructureConstants& sc, int shrink = 0);

struct SharpnessWitness {
  CovectorBox box;
  double epsilon = 0.0;
  double N = 0.0;
  int shrink_steps = 0;
  std::vector<double> t_grid;
  std::vector<double> ratios;
  std::vector<double> bounds;   // t^{N - ε}
  std::vector<double> margins;  // 1 - ratio / bound, positive when strict
};

/// Finds a box on which μ(Ω_t)/μ(Ω) < t^{N-ε} on a 32-point grid in (0, 1).
SharpnessWitness sharpness_witness(const StructureConstants& sc, double epsilon,
                                   const QuadratureOptions& options = {});

std::vector<double> default_t_grid();

}  // namespace htype
