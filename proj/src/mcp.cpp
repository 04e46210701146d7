#include "htype/mcp.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "htype/errors.hpp"
#include "htype/quadrature.hpp"
#include "htype/scalar_functions.hpp"

namespace htype {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;
constexpr double kMaxQuadratureNodes = 1e9;

double ipow(double base, int exp) {
  double result = 1.0;
  while (exp > 0) {
    if (exp & 1) result *= base;
    base *= base;
    exp >>= 1;
  }
  return result;
}

void check_t_grid(std::span<const double> ts) {
  for (double t : ts)
    if (!(t > 0.0 && t <= 1.0)) throw Error(ErrorCode::InvalidArgument, "t values must lie in (0, 1]");
}

InequalityReport check_scaling_inequality(double (*h)(double), double x_max, std::span<const double> t_grid,
                                          std::span<const double> x_grid, double N) {
  if (!(N > 0.0)) throw Error(ErrorCode::InvalidArgument, "exponent N must be positive");
  InequalityReport report;
  report.min_slack = std::numeric_limits<double>::infinity();
  for (double x : x_grid) {
    if (!(x > 0.0 && x < x_max)) throw Error(ErrorCode::InvalidArgument, "x grid outside the open interval");
    const double hx = h(x);
    for (double t : t_grid) {
      if (!(t >= 0.0 && t <= 1.0)) throw Error(ErrorCode::InvalidArgument, "t grid outside [0, 1]");
      const double slack = h(t * x) - std::pow(t, N) * hx;
      ++report.evaluated;
      if (slack < report.min_slack) {
        report.min_slack = slack;
        report.worst_t = t;
        report.worst_x = x;
      }
      if (slack < -kScalarSlackTolerance) ++report.violations;
    }
  }
  report.passed = report.violations == 0;
  return report;
}

// Per-block factors of J at a given |v|: J = (Σ N_j a_j)^{p-1} (Σ N_j b_j),
// with N_j = |u_j|².
struct JacobianCoefficients {
  std::vector<double> a;
  std::vector<double> b;
};

void jacobian_coefficients(const StructureConstants& sc, double vnorm, JacobianCoefficients& out) {
  const std::size_t nb = sc.blocks.size();
  out.a.resize(nb);
  out.b.resize(nb);
  std::vector<double> hs(nb);
  for (std::size_t j = 0; j < nb; ++j) {
    const double alpha = sc.blocks[j].alpha;
    const double theta = alpha * vnorm;
    hs[j] = scalar::half_sinc(theta);
    out.a[j] = alpha * alpha * scalar::vertical_profile(theta) / 12.0;
    out.b[j] = alpha * alpha * scalar::half_angle_profile(theta) / 12.0;
  }
  for (std::size_t j = 0; j < nb; ++j) {
    double prod = ipow(hs[j], static_cast<int>(sc.blocks[j].indices.size()) - 1);
    for (std::size_t i = 0; i < nb; ++i)
      if (i != j) prod *= ipow(hs[i], static_cast<int>(sc.blocks[i].indices.size()));
    out.b[j] *= prod;
  }
}

// Tensor grid over a subset of box coordinates; index i maps to digits in
// base q with the first coordinate varying slowest.
struct TensorGrid {
  std::size_t size = 1;
  std::vector<double> weights;
  std::vector<Eigen::VectorXd> points;
};

TensorGrid tensor_grid(const GaussLegendreRule& rule, const Eigen::VectorXd& lower, const Eigen::VectorXd& upper) {
  const auto dim = lower.size();
  const std::size_t q = rule.nodes.size();
  TensorGrid grid;
  for (Eigen::Index c = 0; c < dim; ++c) grid.size *= q;
  grid.weights.resize(grid.size);
  grid.points.resize(grid.size);
  for (std::size_t idx = 0; idx < grid.size; ++idx) {
    Eigen::VectorXd pt(dim);
    double w = 1.0;
    std::size_t rem = idx;
    for (Eigen::Index c = dim - 1; c >= 0; --c) {
      const std::size_t digit = rem % q;
      rem /= q;
      const double mid = 0.5 * (lower(c) + upper(c));
      const double half = 0.5 * (upper(c) - lower(c));
      pt(c) = mid + half * rule.nodes[digit];
      w *= half * rule.weights[digit];
    }
    grid.points[idx] = std::move(pt);
    grid.weights[idx] = w;
  }
  return grid;
}

}  // namespace

int geodesic_dimension(const GroupSpec& spec) { return spec.rank + 3 * spec.corank; }

int hausdorff_dimension(const GroupSpec& spec) { return spec.rank + 2 * spec.corank; }

double distortion_coefficient(double K, double N, double t, double dist) {
  if (K > 0.0) {
    throw Error(ErrorCode::UnsupportedPositiveK,
                "MCP(K, N) with K > 0 forces bounded spaces; Carnot groups are unbounded");
  }
  if (!(N > 1.0)) throw Error(ErrorCode::InvalidArgument, "N must be > 1");
  if (!(t >= 0.0 && t <= 1.0)) throw Error(ErrorCode::InvalidArgument, "t must lie in [0, 1]");
  if (!(dist >= 0.0)) throw Error(ErrorCode::InvalidArgument, "distance must be >= 0");

  if (dist == 0.0) return t;  // 0/0 = 1
  if (K == 0.0) return std::pow(t, N);

  const double a = std::sqrt(-K) * dist / std::sqrt(N - 1.0);
  double ratio;
  if (a < 20.0) {
    ratio = std::sinh(t * a) / std::sinh(a);
  } else {
    ratio = std::exp((t - 1.0) * a) * (-std::expm1(-2.0 * t * a)) / (-std::expm1(-2.0 * a));
  }
  return t * std::pow(ratio, N - 1.0);
}

double lemma_g(double x) { return std::sin(x) - x * std::cos(x); }

double lemma_f(double x) { return x - std::sin(x); }

InequalityReport check_g_inequality(std::span<const double> t_grid, std::span<const double> x_grid, double N) {
  return check_scaling_inequality(&lemma_g, std::numbers::pi, t_grid, x_grid, N);
}

InequalityReport check_f_inequality(std::span<const double> t_grid, std::span<const double> x_grid, double N) {
  return check_scaling_inequality(&lemma_f, kTwoPi, t_grid, x_grid, N);
}

void validate_box(const StructureConstants& sc, const CovectorBox& box) {
  const int k = sc.rank();
  const int n = sc.dimension();
  if (box.lower.size() != n || box.upper.size() != n)
    throw Error(ErrorCode::DimensionMismatch, "box corners must have n = k + p entries");
  for (int i = 0; i < n; ++i) {
    if (!(box.lower(i) < box.upper(i)))
      throw Error(ErrorCode::BoxOutsideDomain, "box lower corner must be below the upper corner");
  }

  Eigen::VectorXd far(sc.corank());
  for (int a = 0; a < sc.corank(); ++a)
    far(a) = std::max(std::abs(box.lower(k + a)), std::abs(box.upper(k + a)));
  if (!(far.norm() < kTwoPi / sc.top_alpha())) {
    std::ostringstream os;
    os << "max |v| over the box is " << far.norm() << ", not below 2π/α_d = " << kTwoPi / sc.top_alpha();
    throw Error(ErrorCode::BoxOutsideDomain, os.str());
  }

  // Su ≠ 0 on the whole box iff some non-kernel coordinate range excludes 0.
  bool separated = false;
  for (const auto& b : sc.blocks)
    for (int i : b.indices)
      if (box.lower(i) > 0.0 || box.upper(i) < 0.0) separated = true;
  if (!separated) throw Error(ErrorCode::BoxOutsideDomain, "box contains covectors with Su = 0");
}

CovectorBox default_box(const StructureConstants& sc) {
  const int k = sc.rank();
  const int p = sc.corank();
  const double limit = 0.8 * kTwoPi / sc.top_alpha();
  const double scale = std::min(1.0, limit / (1.5 * std::sqrt(static_cast<double>(p))));
  CovectorBox box{Eigen::VectorXd::Constant(k + p, 0.5), Eigen::VectorXd::Constant(k + p, 1.5)};
  box.lower.tail(p) *= scale;
  box.upper.tail(p) *= scale;
  return box;
}

JacobianContractionReport check_jacobian_contraction(const StructureConstants& sc, int samples,
                                                     std::span<const double> t_grid, std::uint64_t seed) {
  if (samples < 1) throw Error(ErrorCode::InvalidArgument, "samples must be >= 1");
  check_t_grid(t_grid);
  const CovectorBox box = default_box(sc);
  CounterRng rng(seed, 3);
  JacobianContractionReport report;
  report.min_margin = std::numeric_limits<double>::infinity();
  const int twice_p = 2 * sc.corank();
  for (int s = 0; s < samples; ++s) {
    Eigen::VectorXd lam(sc.dimension());
    for (int i = 0; i < sc.dimension(); ++i) lam(i) = rng.uniform(box.lower(i), box.upper(i));
    const Covector lambda = Covector::from_stacked(sc, lam);
    const double j1 = jacobian(sc, lambda);
    for (double t : t_grid) {
      const double jt = jacobian(sc, lambda.scaled(t));
      const double lower = ipow(t, twice_p) * j1;
      if (jt < lower * (1.0 - 1e-12)) report.passed = false;
      report.min_margin = std::min(report.min_margin, jt / lower - 1.0);
    }
    ++report.samples;
  }
  return report;
}

ContractionIntegrals integrate_contraction(const StructureConstants& sc, const CovectorBox& box,
                                           std::span<const double> ts, const QuadratureOptions& options,
                                           const DistortionModel* model) {
  validate_box(sc, box);
  check_t_grid(ts);
  const int q = options.points_per_dim;
  if (q < 1) throw Error(ErrorCode::InvalidArgument, "points_per_dim must be >= 1");
  const int k = sc.rank();
  const int p = sc.corank();
  if (std::pow(static_cast<double>(q), sc.dimension()) > kMaxQuadratureNodes)
    throw Error(ErrorCode::InvalidArgument, "tensor grid too large for this dimension");

  const auto rule = gauss_legendre(q);
  const TensorGrid ugrid = tensor_grid(rule, box.lower.head(k), box.upper.head(k));
  const TensorGrid vgrid = tensor_grid(rule, box.lower.tail(p), box.upper.tail(p));
  const std::size_t nu = ugrid.size;
  const std::size_t nv = vgrid.size;
  const std::size_t nb = sc.blocks.size();
  const std::size_t nt = ts.size();
  const bool weighted = model != nullptr;

  std::vector<double> unorms(nu * nb);
  for (std::size_t iu = 0; iu < nu; ++iu) {
    const auto& u = ugrid.points[iu];
    for (std::size_t j = 0; j < nb; ++j) {
      double s = 0.0;
      for (int i : sc.blocks[j].indices) s += u(i) * u(i);
      unorms[iu * nb + j] = s;
    }
  }
  std::vector<double> distortion;
  if (weighted) {
    distortion.resize(nu * nt);
    for (std::size_t iu = 0; iu < nu; ++iu) {
      const double d = ugrid.points[iu].norm();
      for (std::size_t it = 0; it < nt; ++it)
        distortion[iu * nt + it] = distortion_coefficient(model->K, model->N, ts[it], d);
    }
  }

  // Row layout of the per-v-node sums: base, scaled[nt], weighted[nt].
  const std::size_t rows = 1 + nt + (weighted ? nt : 0);
  std::vector<double> chunk(rows * nv);
  std::vector<double> t_factor(nt);
  for (std::size_t it = 0; it < nt; ++it) t_factor[it] = ipow(ts[it], 2 * p);

  const long long nv_signed = static_cast<long long>(nv);
#ifdef _OPENMP
  const int workers = options.workers > 0 ? options.workers : omp_get_max_threads();
#pragma omp parallel num_threads(workers)
#endif
  {
    std::vector<double> buf(rows * nu);
    JacobianCoefficients c1;
    std::vector<JacobianCoefficients> ct(nt);
#ifdef _OPENMP
#pragma omp for schedule(static)
#endif
    for (long long iv = 0; iv < nv_signed; ++iv) {
      const auto ivu = static_cast<std::size_t>(iv);
      const double vnorm = vgrid.points[ivu].norm();
      const double wv = vgrid.weights[ivu];
      jacobian_coefficients(sc, vnorm, c1);
      for (std::size_t it = 0; it < nt; ++it) jacobian_coefficients(sc, ts[it] * vnorm, ct[it]);

      for (std::size_t iu = 0; iu < nu; ++iu) {
        const double* norms = &unorms[iu * nb];
        const double w = ugrid.weights[iu] * wv;
        double za = 0.0;
        double zb = 0.0;
        for (std::size_t j = 0; j < nb; ++j) {
          za += norms[j] * c1.a[j];
          zb += norms[j] * c1.b[j];
        }
        const double base = w * ipow(za, p - 1) * zb;
        buf[iu] = base;
        for (std::size_t it = 0; it < nt; ++it) {
          double sa = 0.0;
          double sb = 0.0;
          for (std::size_t j = 0; j < nb; ++j) {
            sa += norms[j] * ct[it].a[j];
            sb += norms[j] * ct[it].b[j];
          }
          buf[(1 + it) * nu + iu] = w * t_factor[it] * ipow(sa, p - 1) * sb;
          if (weighted) buf[(1 + nt + it) * nu + iu] = distortion[iu * nt + it] * base;
        }
      }
      for (std::size_t r = 0; r < rows; ++r)
        chunk[r * nv + ivu] = pairwise_sum(std::span<const double>(buf).subspan(r * nu, nu));
    }
  }

  ContractionIntegrals out;
  auto row_sum = [&](std::size_t r) { return pairwise_sum(std::span<const double>(chunk).subspan(r * nv, nv)); };
  out.base = row_sum(0);
  for (std::size_t it = 0; it < nt; ++it) out.scaled.push_back(row_sum(1 + it));
  if (weighted)
    for (std::size_t it = 0; it < nt; ++it) out.weighted.push_back(row_sum(1 + nt + it));
  return out;
}

ContractionIntegrals integrate_contraction_reference(const StructureConstants& sc, const CovectorBox& box,
                                                     std::span<const double> ts, int points_per_dim,
                                                     const DistortionModel* model) {
  validate_box(sc, box);
  check_t_grid(ts);
  const auto rule = gauss_legendre(points_per_dim);
  const TensorGrid grid = tensor_grid(rule, box.lower, box.upper);
  const std::size_t nt = ts.size();

  // Neumaier-compensated accumulation, independent of the kernel's pairwise tree.
  struct Accumulator {
    double sum = 0.0;
    double comp = 0.0;
    void add(double x) {
      const double t = sum + x;
      comp += std::abs(sum) >= std::abs(x) ? (sum - t) + x : (x - t) + sum;
      sum = t;
    }
    double value() const { return sum + comp; }
  };
  Accumulator base;
  std::vector<Accumulator> scaled(nt), weighted(nt);

  for (std::size_t i = 0; i < grid.size; ++i) {
    const Covector lambda = Covector::from_stacked(sc, grid.points[i]);
    const double w = grid.weights[i];
    const double j1 = jacobian(sc, lambda);
    base.add(w * j1);
    for (std::size_t it = 0; it < nt; ++it) {
      scaled[it].add(w * jacobian(sc, lambda.scaled(ts[it])));
      if (model) weighted[it].add(w * j1 * distortion_coefficient(model->K, model->N, ts[it], lambda.u.norm()));
    }
  }
  ContractionIntegrals out;
  out.base = base.value();
  for (std::size_t it = 0; it < nt; ++it) {
    out.scaled.push_back(scaled[it].value());
    if (model) out.weighted.push_back(weighted[it].value());
  }
  return out;
}

double contraction_ratio(const StructureConstants& sc, const CovectorBox& box, double t,
                         const QuadratureOptions& options) {
  if (options.points_per_dim < 4) throw Error(ErrorCode::InvalidArgument, "contraction_ratio needs >= 4 points per dimension");
  if (!(t > 0.0 && t <= 1.0)) throw Error(ErrorCode::InvalidArgument, "t must lie in (0, 1]");
  validate_box(sc, box);
  if (t == 1.0) return 1.0;
  const double ts[] = {t};
  const auto integrals = integrate_contraction(sc, box, ts, options);
  return ipow(t, sc.dimension()) * integrals.scaled[0] / integrals.base;
}

bool ContractionReport::passed() const {
  return std::all_of(verdicts.begin(), verdicts.end(), [](bool v) { return v; });
}

ContractionReport mcp_report(const StructureConstants& sc, double K, double N, const CovectorBox& box,
                             std::span<const double> t_grid, const QuadratureOptions& options) {
  if (K > 0.0) {
    throw Error(ErrorCode::UnsupportedPositiveK,
                "MCP(K, N) with K > 0 forces bounded spaces; Carnot groups are unbounded");
  }
  if (!(N > 1.0)) throw Error(ErrorCode::InvalidArgument, "N must be > 1");
  if (options.points_per_dim < 4) throw Error(ErrorCode::InvalidArgument, "quadrature needs >= 4 points per dimension");
  check_t_grid(t_grid);

  const DistortionModel model{K, N};
  const auto integrals = integrate_contraction(sc, box, t_grid, options, K < 0.0 ? &model : nullptr);

  ContractionReport report;
  report.group_id = sc.name;
  report.K = K;
  report.N_claimed = N;
  report.t_grid.assign(t_grid.begin(), t_grid.end());
  for (std::size_t i = 0; i < t_grid.size(); ++i) {
    const double t = t_grid[i];
    const double ratio = t == 1.0 ? 1.0 : ipow(t, sc.dimension()) * integrals.scaled[i] / integrals.base;
    const double bound = K < 0.0 ? (t == 1.0 ? 1.0 : integrals.weighted[i] / integrals.base) : std::pow(t, N);
    report.ratios.push_back(ratio);
    report.bounds.push_back(bound);
    report.margins.push_back(ratio / bound - 1.0);
    report.verdicts.push_back(ratio >= bound * (1.0 - kContractionTolerance));
  }
  return report;
}

CovectorBox sharpness_box(const StructureConstants& sc, int shrink) {
  const int k = sc.rank();
  const int n = sc.dimension();
  int first = k;
  for (const auto& b : sc.blocks)
    for (int i : b.indices) first = std::min(first, i);

  const double factor = std::ldexp(1.0, -shrink);
  const double delta = 1e-3 * kTwoPi / sc.top_alpha() * factor;
  const double half = 1e-3 * factor;
  Eigen::VectorXd center = Eigen::VectorXd::Zero(n);
  center(first) = 1.0;
  center(k) = delta;
  return {center.array() - half, center.array() + half};
}

SharpnessWitness sharpness_witness(const StructureConstants& sc, double epsilon, const QuadratureOptions& options) {
  if (!(epsilon > 0.0 && epsilon <= 1.0)) throw Error(ErrorCode::InvalidArgument, "epsilon must lie in (0, 1]");

  SharpnessWitness w;
  w.epsilon = epsilon;
  w.N = geodesic_dimension(sc.spec);
  for (int i = 1; i <= 32; ++i) w.t_grid.push_back(i / 33.0);

  constexpr int kMaxShrink = 10;
  for (int shrink = 0; shrink <= kMaxShrink; ++shrink) {
    const CovectorBox box = sharpness_box(sc, shrink);
    const auto integrals = integrate_contraction(sc, box, w.t_grid, options);
    w.box = box;
    w.shrink_steps = shrink;
    w.ratios.clear();
    w.bounds.clear();
    w.margins.clear();
    bool strict = true;
    for (std::size_t i = 0; i < w.t_grid.size(); ++i) {
      const double t = w.t_grid[i];
      const double ratio = ipow(t, sc.dimension()) * integrals.scaled[i] / integrals.base;
      const double bound = std::pow(t, w.N - epsilon);
      w.ratios.push_back(ratio);
      w.bounds.push_back(bound);
      w.margins.push_back(1.0 - ratio / bound);
      if (!(ratio < bound)) strict = false;
    }
    if (strict) return w;
  }
  throw Error(ErrorCode::WitnessNotFound, "no witness box after 10 shrink steps");
}

std::vector<double> default_t_grid() {
  std::vector<double> out;
  for (int i = 1; i <= 9; ++i) out.push_back(i / 10.0);
  return out;
}

}  // namespace htype
