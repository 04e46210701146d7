#include "htype/geodesics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>

#include "htype/errors.hpp"
#include "htype/scalar_functions.hpp"

namespace htype {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

double ipow(double base, int exp) {
  double result = 1.0;
  while (exp > 0) {
    if (exp & 1) result *= base;
    base *= base;
    exp >>= 1;
  }
  return result;
}

struct BlockNorms {
  double kernel = 0.0;
  std::vector<double> blocks;
};

BlockNorms block_norms(const StructureConstants& sc, const Eigen::VectorXd& w) {
  BlockNorms out;
  for (int i : sc.kernel_indices) out.kernel += w(i) * w(i);
  out.blocks.reserve(sc.blocks.size());
  for (const auto& b : sc.blocks) {
    double s = 0.0;
    for (int i : b.indices) s += w(i) * w(i);
    out.blocks.push_back(s);
  }
  return out;
}

double injectivity_radius(const StructureConstants& sc) { return kTwoPi / sc.top_alpha(); }

// |z| as a function of r = |v| for the covector u(r) = f(r L_v̂)^{-1} x, where
// x has block norms `x_norms`; |u_j(r)|² = |x_j|² / half_sinc(α_j r)².
double vertical_norm_for_target(const StructureConstants& sc, const std::vector<double>& x_norms, double r) {
  double total = 0.0;
  for (std::size_t j = 0; j < sc.blocks.size(); ++j) {
    const double alpha = sc.blocks[j].alpha;
    const double theta = alpha * r;
    const double hs = scalar::half_sinc(theta);
    total += x_norms[j] * alpha * alpha * scalar::vertical_profile(theta) / (12.0 * hs * hs);
  }
  return r * total;
}

double relative_residual(const GroupPoint& a, const GroupPoint& b) {
  const double scale = std::max(1.0, b.stacked().norm());
  return (a.stacked() - b.stacked()).norm() / scale;
}

}  // namespace

Eigen::VectorXd Covector::stacked() const {
  Eigen::VectorXd out(u.size() + v.size());
  out << u, v;
  return out;
}

Covector Covector::from_stacked(const StructureConstants& sc, const Eigen::VectorXd& lambda) {
  if (lambda.size() != sc.dimension())
    throw Error(ErrorCode::DimensionMismatch, "stacked covector must have n entries");
  return {lambda.head(sc.rank()), lambda.tail(sc.corank())};
}

void check_dimensions(const StructureConstants& sc, const Covector& lambda) {
  if (lambda.u.size() != sc.rank() || lambda.v.size() != sc.corank())
    throw Error(ErrorCode::DimensionMismatch, "covector does not match (rank, corank)");
}

SpectralSplit spectral_split(const StructureConstants& sc, const Covector& lambda) {
  check_dimensions(sc, lambda);
  const double vnorm = lambda.v.norm();
  auto norms = block_norms(sc, lambda.u);
  SpectralSplit split;
  split.u0_norm2 = norms.kernel;
  split.ui_norm2 = std::move(norms.blocks);
  for (const auto& b : sc.blocks) split.theta.push_back(b.alpha * vnorm);
  return split;
}

AnalyticPair AnalyticPair::f() { return {Name::F, &scalar::sinc, &scalar::cosm1_over_sq}; }

AnalyticPair AnalyticPair::g() {
  return {Name::G, &scalar::one_minus_sinc, [](double) { return 0.0; }};
}

AnalyticPair AnalyticPair::exp_neg() {
  return {Name::ExpNeg, [](double t) { return std::cos(t); }, [](double t) { return -scalar::sinc(t); }};
}

AnalyticPair AnalyticPair::f_inverse() {
  // 1/(a + bL) = (a - bL)/(a² + b²θ²) and a² + b²θ² = half_sinc(θ)².
  return {Name::FInverse,
          [](double t) {
            const double hs = scalar::half_sinc(t);
            return scalar::sinc(t) / (hs * hs);
          },
          [](double t) {
            const double hs = scalar::half_sinc(t);
            return -scalar::cosm1_over_sq(t) / (hs * hs);
          }};
}

Eigen::VectorXd apply_analytic(const StructureConstants& sc, const Eigen::VectorXd& v,
                               const AnalyticPair& fn, const Eigen::VectorXd& w) {
  if (v.size() != sc.corank() || w.size() != sc.rank())
    throw Error(ErrorCode::DimensionMismatch, "apply_analytic: dimension mismatch");
  const double vnorm = v.norm();
  Eigen::VectorXd even(sc.rank());
  Eigen::VectorXd odd(sc.rank());
  const double e0 = fn.even_part(0.0);
  const double o0 = fn.odd_part(0.0);
  for (int i : sc.kernel_indices) {
    even(i) = e0 * w(i);
    odd(i) = o0 * w(i);
  }
  for (const auto& b : sc.blocks) {
    const double theta = b.alpha * vnorm;
    const double e = fn.even_part(theta);
    const double o = fn.odd_part(theta);
    for (int i : b.indices) {
      even(i) = e * w(i);
      odd(i) = o * w(i);
    }
  }
  Eigen::VectorXd out = even;
  for (int a = 0; a < sc.corank(); ++a)
    if (v(a) != 0.0) out.noalias() += v(a) * (sc.L[a] * odd);
  return out;
}

GroupPoint exp_map(const StructureConstants& sc, const Covector& lambda) {
  check_dimensions(sc, lambda);
  const double vnorm = lambda.v.norm();
  GroupPoint out;
  out.x = apply_analytic(sc, lambda.v, AnalyticPair::f(), lambda.u);
  // z = |z| v/|v| with |z| = |v| Σ_j |u_j|² α_j² ζ(θ_j)/12, so z is this scalar times v.
  const auto norms = block_norms(sc, lambda.u);
  double coeff = 0.0;
  for (std::size_t j = 0; j < sc.blocks.size(); ++j) {
    const double alpha = sc.blocks[j].alpha;
    coeff += norms.blocks[j] * alpha * alpha * scalar::vertical_profile(alpha * vnorm);
  }
  out.z = (coeff / 12.0) * lambda.v;
  return out;
}

std::vector<GroupPoint> geodesic_sample(const StructureConstants& sc, const Covector& lambda,
                                        std::span<const double> ts) {
  check_dimensions(sc, lambda);
  if (!std::is_sorted(ts.begin(), ts.end()))
    throw Error(ErrorCode::InvalidArgument, "sample times must be sorted");
  std::vector<GroupPoint> out;
  out.reserve(ts.size());
  for (double t : ts) {
    if (!(t >= 0.0 && t <= 1.0)) throw Error(ErrorCode::InvalidArgument, "sample times must lie in [0, 1]");
    out.push_back(exp_map(sc, lambda.scaled(t)));
  }
  return out;
}

double hamiltonian(const Covector& lambda) { return 0.5 * lambda.u.squaredNorm(); }

double jacobian(const StructureConstants& sc, const Covector& lambda) {
  check_dimensions(sc, lambda);
  const double vnorm = lambda.v.norm();
  if (!(vnorm < injectivity_radius(sc))) {
    std::ostringstream os;
    os << "|v| = " << vnorm << " is not below 2π/α_d = " << injectivity_radius(sc);
    throw Error(ErrorCode::OutOfDomain, os.str());
  }
  const auto norms = block_norms(sc, lambda.u);
  const std::size_t nb = sc.blocks.size();

  double vertical = 0.0;
  std::vector<double> hs(nb);
  for (std::size_t j = 0; j < nb; ++j) {
    const double alpha = sc.blocks[j].alpha;
    const double theta = alpha * vnorm;
    vertical += norms.blocks[j] * alpha * alpha * scalar::vertical_profile(theta) / 12.0;
    hs[j] = scalar::half_sinc(theta);
  }

  double radial = 0.0;
  for (std::size_t j = 0; j < nb; ++j) {
    if (norms.blocks[j] == 0.0) continue;
    const double alpha = sc.blocks[j].alpha;
    const int mj = static_cast<int>(sc.blocks[j].indices.size() / 2);
    double term = norms.blocks[j] * alpha * alpha * scalar::half_angle_profile(alpha * vnorm) / 12.0;
    term *= ipow(hs[j], 2 * mj - 1);
    for (std::size_t i = 0; i < nb; ++i) {
      if (i == j) continue;
      term *= ipow(hs[i], static_cast<int>(sc.blocks[i].indices.size()));
    }
    radial += term;
  }
  return ipow(vertical, sc.corank() - 1) * radial;
}

double cut_time(const StructureConstants& sc, const Covector& lambda) {
  check_dimensions(sc, lambda);
  const double vnorm = lambda.v.norm();
  if (vnorm == 0.0 && lambda.u.norm() == 0.0) throw Error(ErrorCode::ZeroCovector, "cut_time of λ = 0");
  if (vnorm == 0.0 || (sc.S * lambda.u).norm() == 0.0) return std::numeric_limits<double>::infinity();
  return kTwoPi / (sc.top_alpha() * vnorm);
}

bool in_injectivity_domain(const StructureConstants& sc, const Covector& lambda) {
  check_dimensions(sc, lambda);
  return lambda.v.norm() < injectivity_radius(sc) && (sc.S * lambda.u).norm() > 0.0;
}

bool is_abnormal(const StructureConstants& sc, const Covector& lambda) {
  check_dimensions(sc, lambda);
  if (lambda.u.norm() == 0.0 && lambda.v.norm() == 0.0)
    throw Error(ErrorCode::ZeroCovector, "is_abnormal of λ = 0");
  return (sc.S * lambda.u).norm() == 0.0;
}

Covector log_map(const StructureConstants& sc, const GroupPoint& target) {
  check_dimensions(sc, target);
  if (target.is_identity()) throw Error(ErrorCode::IdentityTarget, "log of the identity");

  const double znorm = target.z.norm();
  if (znorm == 0.0) return {target.x, Eigen::VectorXd::Zero(sc.corank())};

  const Eigen::VectorXd vhat = target.z / znorm;
  const auto x_norms = block_norms(sc, target.x).blocks;
  const double radius = injectivity_radius(sc);
  const double rmax = radius * (1.0 - 1e-12);
  auto residual = [&](double r) { return vertical_norm_for_target(sc, x_norms, r) - znorm; };

  constexpr int kScan = 64;
  double lo = 0.0;
  double hi = 0.0;
  int brackets = 0;
  double prev_r = 0.0;
  double prev = -znorm;
  for (int i = 1; i <= kScan; ++i) {
    const double r = rmax * static_cast<double>(i) / kScan;
    const double cur = residual(r);
    if ((prev < 0.0 && cur >= 0.0) || (prev > 0.0 && cur <= 0.0)) {
      if (brackets == 0) {
        lo = prev_r;
        hi = r;
      }
      ++brackets;
    }
    prev_r = r;
    prev = cur;
  }
  if (brackets == 0) {
    std::ostringstream os;
    os << "no covector with |v| < 2π/α_d reaches the target (|z| = " << znorm
       << " exceeds the boundary value " << residual(rmax) + znorm << ")";
    throw Error(ErrorCode::CutLocusTarget, os.str());
  }
  if (brackets > 1) {
    std::ostringstream os;
    os << "log_map found " << brackets << " brackets for |z| = " << znorm
       << "; exp is injective on D, so this indicates a defect in the vertical profile";
    throw Error(ErrorCode::NumericalFailure, os.str());
  }

  double f_lo = residual(lo);
  while (hi - lo > 1e-6 * radius) {
    const double mid = 0.5 * (lo + hi);
    const double f_mid = residual(mid);
    if ((f_mid < 0.0) == (f_lo < 0.0)) {
      lo = mid;
      f_lo = f_mid;
    } else {
      hi = mid;
    }
  }

  const double h = 1e-7 * radius;
  double r = 0.5 * (lo + hi);
  for (int iter = 0; iter < 100; ++iter) {
    const double fr = residual(r);
    if (std::abs(fr) <= 1e-12 * znorm) break;
    if ((fr < 0.0) == (f_lo < 0.0)) {
      lo = r;
      f_lo = fr;
    } else {
      hi = r;
    }
    const double slope = (residual(r + h) - residual(r - h)) / (2.0 * h);
    double next = r - fr / slope;
    if (!(next > lo && next < hi) || !std::isfinite(next)) next = 0.5 * (lo + hi);
    if (next == r) break;
    r = next;
  }

  const Eigen::VectorXd v = r * vhat;
  Covector lambda{apply_analytic(sc, v, AnalyticPair::f_inverse(), target.x), v};
  const double res = relative_residual(exp_map(sc, lambda), target);
  if (res > 1e-10) {
    std::ostringstream os;
    os << "log_map residual " << res << " above 1e-10";
    throw Error(ErrorCode::NumericalFailure, os.str());
  }
  return lambda;
}

DistanceResult distance(const StructureConstants& sc, const GroupPoint& p, const GroupPoint& q) {
  const GroupPoint rel = multiply(sc, inverse(p), q);
  if (rel.is_identity()) return {0.0, false};
  try {
    return {log_map(sc, rel).u.norm(), false};
  } catch (const Error& e) {
    if (e.code() != ErrorCode::CutLocusTarget) throw;
  }
  return {distance_bound(sc, rel).value, true};
}

DistanceBound distance_bound(const StructureConstants& sc, const GroupPoint& target, std::uint64_t seed) {
  check_dimensions(sc, target);
  if (target.is_identity()) throw Error(ErrorCode::IdentityTarget, "distance_bound of the identity");
  const double znorm = target.z.norm();
  if (znorm == 0.0)
    throw Error(ErrorCode::InvalidArgument, "target (x, 0) is reached by a straight line, not a cut point");
  try {
    (void)log_map(sc, target);
    throw Error(ErrorCode::InvalidArgument, "target is in exp(D), not in the cut locus");
  } catch (const Error& e) {
    if (e.code() != ErrorCode::CutLocusTarget) throw;
  }

  // On |v| = R the endpoint constraint pins v = R ẑ (z is parallel to v), the
  // kernel and lower eigenspace components of u (f(L_v) is invertible there)
  // and the norm of the top-eigenspace component (through |z|). The only free
  // parameter is the direction of that component, sampled from seeded starts.
  const double radius = injectivity_radius(sc);
  const Eigen::VectorXd v = radius * target.z / znorm;
  Eigen::VectorXd base = Eigen::VectorXd::Zero(sc.rank());
  for (int i : sc.kernel_indices) base(i) = target.x(i);

  const auto& top = sc.blocks.back();
  const auto x_norms = block_norms(sc, target.x).blocks;
  double lower_vertical = 0.0;
  for (std::size_t j = 0; j + 1 < sc.blocks.size(); ++j) {
    const auto& b = sc.blocks[j];
    const double theta = b.alpha * radius;
    const double hs = scalar::half_sinc(theta);
    const double e = scalar::sinc(theta) / (hs * hs);
    const double o = -scalar::cosm1_over_sq(theta) / (hs * hs);
    Eigen::VectorXd xj = Eigen::VectorXd::Zero(sc.rank());
    for (int i : b.indices) xj(i) = target.x(i);
    Eigen::VectorXd uj = e * xj;
    for (int a = 0; a < sc.corank(); ++a) uj += v(a) * o * (sc.L[a] * xj);
    base += uj;
    lower_vertical += x_norms[j] * b.alpha * b.alpha * scalar::vertical_profile(theta) / (12.0 * hs * hs);
  }
  lower_vertical *= radius;

  // Top block at θ = 2π contributes |u_d|² α_d / (4π) to |z|.
  const double top_norm2 = (znorm - lower_vertical) * 4.0 * std::numbers::pi / top.alpha;
  if (!(top_norm2 >= 0.0)) {
    throw Error(ErrorCode::NoCandidateFound, "boundary sphere covectors cannot reach |z|");
  }

  CounterRng rng(seed, 7);
  constexpr int kStarts = 32;
  DistanceBound best;
  best.value = std::numeric_limits<double>::infinity();
  for (int s = 0; s < kStarts; ++s) {
    const Eigen::VectorXd dir = rng.unit_vector(static_cast<Eigen::Index>(top.indices.size()));
    Eigen::VectorXd u = base;
    for (std::size_t i = 0; i < top.indices.size(); ++i)
      u(top.indices[i]) = std::sqrt(top_norm2) * dir(static_cast<Eigen::Index>(i));
    const Covector lambda{u, v};
    const double res = relative_residual(exp_map(sc, lambda), target);
    if (res > 1e-8) continue;
    ++best.accepted_starts;
    const double value = u.norm();
    if (value < best.value) {
      best.value = value;
      best.covector = lambda;
      best.residual = res;
    }
  }
  if (best.accepted_starts == 0) {
    throw Error(ErrorCode::NoCandidateFound,
                "no boundary covector reproduces the target to 1e-8 (top-eigenspace x component is non-zero?)");
  }
  return best;
}

GroupPoint homothety(const StructureConstants& sc, const GroupPoint& x0, const GroupPoint& y, double t) {
  if (!(t >= 0.0 && t <= 1.0)) throw Error(ErrorCode::InvalidArgument, "homothety ratio must lie in [0, 1]");
  const GroupPoint rel = multiply(sc, inverse(x0), y);
  if (rel.is_identity()) return x0;
  const Covector lambda = log_map(sc, rel);
  return multiply(sc, x0, exp_map(sc, lambda.scaled(t)));
}

IdealFactor ideal_factor(const StructureConstants& sc) {
  IdealFactor out;
  out.kernel_indices = sc.kernel_indices;
  std::vector<int> position(static_cast<std::size_t>(sc.rank()), -1);
  for (const auto& b : sc.blocks)
    for (int i : b.indices) out.complement_indices.push_back(i);
  std::sort(out.complement_indices.begin(), out.complement_indices.end());
  for (std::size_t i = 0; i < out.complement_indices.size(); ++i)
    position[static_cast<std::size_t>(out.complement_indices[i])] = static_cast<int>(i);

  const auto m = static_cast<Eigen::Index>(out.complement_indices.size());
  auto restrict = [&](const Eigen::MatrixXd& a) {
    Eigen::MatrixXd r(m, m);
    for (Eigen::Index i = 0; i < m; ++i)
      for (Eigen::Index j = 0; j < m; ++j) r(i, j) = a(out.complement_indices[i], out.complement_indices[j]);
    return r;
  };

  auto& red = out.reduced;
  red.S = restrict(sc.S);
  for (const auto& l : sc.L) red.L.push_back(restrict(l));
  for (const auto& b : sc.blocks) {
    Eigenspace rb{b.alpha, {}};
    for (int i : b.indices) rb.indices.push_back(position[static_cast<std::size_t>(i)]);
    red.blocks.push_back(std::move(rb));
  }
  red.spec = GroupSpec::make(static_cast<int>(m), sc.corank(), sc.spec.spectrum, 0);
  return out;
}

}  // namespace htype
