#include "htype/hstructure.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "htype/errors.hpp"

namespace htype {

namespace {

using Eigen::MatrixXd;

MatrixXd kron(const MatrixXd& a, const MatrixXd& b) {
  MatrixXd out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i)
    for (Eigen::Index j = 0; j < a.cols(); ++j)
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
  return out;
}

// 2x2 real Pauli-type matrices. P, Q, J pairwise anticommute; P² = Q² = 1, J² = -1.
MatrixXd pauli_p() { return (MatrixXd(2, 2) << 1, 0, 0, -1).finished(); }
MatrixXd pauli_q() { return (MatrixXd(2, 2) << 0, 1, 1, 0).finished(); }
MatrixXd pauli_j() { return (MatrixXd(2, 2) << 0, 1, -1, 0).finished(); }

// Left and right multiplication by i, j, k on H = span(1, i, j, k).
std::vector<MatrixXd> quaternion_left() {
  MatrixXd li(4, 4), lj(4, 4), lk(4, 4);
  li << 0, -1, 0, 0,
        1, 0, 0, 0,
        0, 0, 0, -1,
        0, 0, 1, 0;
  lj << 0, 0, -1, 0,
        0, 0, 0, 1,
        1, 0, 0, 0,
        0, -1, 0, 0;
  lk << 0, 0, 0, -1,
        0, 0, -1, 0,
        0, 1, 0, 0,
        1, 0, 0, 0;
  return {li, lj, lk};
}

std::vector<MatrixXd> quaternion_right() {
  MatrixXd ri(4, 4), rj(4, 4), rk(4, 4);
  ri << 0, -1, 0, 0,
        1, 0, 0, 0,
        0, 0, 0, 1,
        0, 0, -1, 0;
  rj << 0, 0, -1, 0,
        0, 0, 0, -1,
        1, 0, 0, 0,
        0, 1, 0, 0;
  rk << 0, 0, 0, -1,
        0, 0, 1, 0,
        0, -1, 0, 0,
        1, 0, 0, 0;
  return {ri, rj, rk};
}

// ρ(2^e) - 1 complex structures on R^{2^e}.
std::vector<MatrixXd> power_of_two_family(int e) {
  switch (e) {
    case 0:
      return {};
    case 1:
      return {pauli_j()};
    case 2:
      return quaternion_left();
    case 3: {
      std::vector<MatrixXd> out;
      for (const auto& l : quaternion_left()) out.push_back(kron(l, pauli_p()));
      for (const auto& r : quaternion_right()) out.push_back(kron(r, pauli_q()));
      out.push_back(kron(MatrixXd::Identity(4, 4), pauli_j()));
      return out;
    }
    default: {
      // Period-8 step: R^{16 M} = R^16 ⊗ R^M. B_i are 8 complex structures on
      // R^16, C a symmetric involution anticommuting with all of them.
      const auto octo = power_of_two_family(3);
      std::vector<MatrixXd> b;
      for (const auto& a : octo) b.push_back(kron(a, pauli_p()));
      b.push_back(kron(MatrixXd::Identity(8, 8), pauli_j()));
      const MatrixXd c = kron(MatrixXd::Identity(8, 8), pauli_q());

      const auto inner = power_of_two_family(e - 4);
      const Eigen::Index m = Eigen::Index{1} << (e - 4);
      std::vector<MatrixXd> out;
      for (const auto& bi : b) out.push_back(kron(bi, MatrixXd::Identity(m, m)));
      for (const auto& a : inner) out.push_back(kron(c, a));
      return out;
    }
  }
}

std::string describe_block(const SpectrumEntry& e) {
  std::ostringstream os;
  os << "alpha=" << e.alpha << " (eigenspace dim " << 2 * e.pair_multiplicity << ")";
  return os.str();
}

}  // namespace

GroupSpec GroupSpec::make(int rank, int corank, std::vector<SpectrumEntry> spectrum, int kernel_dim) {
  if (corank < 1) throw Error(ErrorCode::InvalidSpec, "corank must be >= 1");
  if (kernel_dim < 0) throw Error(ErrorCode::InvalidSpec, "kernel_dim must be >= 0");
  if (spectrum.empty()) throw Error(ErrorCode::InvalidSpec, "S must have a non-zero eigenvalue");

  std::vector<SpectrumEntry> merged;
  for (const auto& e : spectrum) {
    if (!std::isfinite(e.alpha) || e.alpha <= 0.0)
      throw Error(ErrorCode::InvalidSpec, "alpha values must be finite and > 0");
    if (e.pair_multiplicity < 1)
      throw Error(ErrorCode::InvalidSpec, "pair_multiplicity must be >= 1");
    if (!merged.empty() && e.alpha == merged.back().alpha) {
      merged.back().pair_multiplicity += e.pair_multiplicity;
      continue;
    }
    if (!merged.empty() && e.alpha < merged.back().alpha)
      throw Error(ErrorCode::InvalidSpec, "alpha values must be non-decreasing");
    merged.push_back(e);
  }

  GroupSpec spec{rank, corank, std::move(merged), kernel_dim};
  if (rank != kernel_dim + 2 * spec.pair_count()) {
    std::ostringstream os;
    os << "rank " << rank << " != kernel_dim + 2*sum(pair_multiplicity) = "
       << kernel_dim + 2 * spec.pair_count();
    throw Error(ErrorCode::InvalidSpec, os.str());
  }
  return spec;
}

int GroupSpec::pair_count() const {
  int d = 0;
  for (const auto& e : spectrum) d += e.pair_multiplicity;
  return d;
}

int hurwitz_radon(int n) {
  if (n < 1) throw Error(ErrorCode::InvalidArgument, "hurwitz_radon requires N >= 1");
  int e = 0;
  while (n % 2 == 0) {
    n /= 2;
    ++e;
  }
  const int a = e / 4;
  const int b = e % 4;
  return 8 * a + (1 << b);
}

ExistenceResult existence_check(const GroupSpec& spec) {
  ExistenceResult result{true, {}};
  std::ostringstream os;
  for (const auto& e : spec.spectrum) {
    const int dim = 2 * e.pair_multiplicity;
    const int rho = hurwitz_radon(dim);
    if (spec.corank > rho - 1) {
      result.realizable = false;
      os << "Hurwitz–Radon bound violated on block " << describe_block(e) << ": corank "
         << spec.corank << " > rho(" << dim << ") - 1 = " << rho - 1
         << " (strict reading n-k < rho(k_j); the non-strict reading n-k <= rho(k_j) "
         << (spec.corank <= rho ? "would accept it" : "also rejects it") << ")\n";
    }
  }
  if (result.realizable) {
    os << "realizable: corank " << spec.corank << " <= rho(k_j) - 1 on every eigenspace";
  }
  result.diagnostic = os.str();
  return result;
}

std::vector<Eigen::MatrixXd> anticommuting_family(int n, int count) {
  if (n < 1 || count < 0) throw Error(ErrorCode::InvalidArgument, "anticommuting_family: bad size");
  if (count > hurwitz_radon(n) - 1) {
    std::ostringstream os;
    os << "R^" << n << " carries only " << hurwitz_radon(n) - 1
       << " anticommuting complex structures, " << count << " requested";
    throw Error(ErrorCode::SpecNotRealizable, os.str());
  }
  int e = 0;
  int odd = n;
  while (odd % 2 == 0) {
    odd /= 2;
    ++e;
  }
  auto family = power_of_two_family(e);
  family.resize(static_cast<std::size_t>(count));
  if (odd > 1) {
    for (auto& m : family) m = kron(m, MatrixXd::Identity(odd, odd));
  }
  return family;
}

StructureConstants build_structure(const GroupSpec& spec) {
  const auto existence = existence_check(spec);
  if (!existence.realizable) throw Error(ErrorCode::SpecNotRealizable, existence.diagnostic);

  const int k = spec.rank;
  const int p = spec.corank;
  StructureConstants sc;
  sc.spec = spec;
  sc.S = MatrixXd::Zero(k, k);
  sc.L.assign(static_cast<std::size_t>(p), MatrixXd::Zero(k, k));

  for (int i = 0; i < spec.kernel_dim; ++i) sc.kernel_indices.push_back(i);

  int offset = spec.kernel_dim;
  for (const auto& e : spec.spectrum) {
    const int dim = 2 * e.pair_multiplicity;
    const auto family = anticommuting_family(dim, p);
    Eigenspace block{e.alpha, {}};
    for (int i = 0; i < dim; ++i) {
      sc.S(offset + i, offset + i) = e.alpha;
      block.indices.push_back(offset + i);
    }
    for (int a = 0; a < p; ++a) sc.L[a].block(offset, offset, dim, dim) = e.alpha * family[a];
    sc.blocks.push_back(std::move(block));
    offset += dim;
  }
  return sc;
}

bool ValidationReport::passed() const {
  return std::all_of(checks.begin(), checks.end(), [](const auto& c) { return c.passed; });
}

const ValidationCheck* ValidationReport::find(const std::string& name) const {
  for (const auto& c : checks)
    if (c.name == name) return &c;
  return nullptr;
}

double anticommutation_residual(const MatrixXd& S, const std::vector<MatrixXd>& L,
                                const Eigen::VectorXd& v, const Eigen::VectorXd& w) {
  MatrixXd lv = MatrixXd::Zero(S.rows(), S.cols());
  MatrixXd lw = MatrixXd::Zero(S.rows(), S.cols());
  for (std::size_t a = 0; a < L.size(); ++a) {
    lv += v(static_cast<Eigen::Index>(a)) * L[a];
    lw += w(static_cast<Eigen::Index>(a)) * L[a];
  }
  const MatrixXd r = lv * lw + lw * lv + 2.0 * v.dot(w) * S * S;
  return r.cwiseAbs().maxCoeff();
}

ValidationReport validate_structure(const MatrixXd& S, const std::vector<MatrixXd>& L, double tol,
                                    std::uint64_t seed) {
  if (!(tol > 0.0)) throw Error(ErrorCode::InvalidArgument, "tolerance must be > 0");
  if (S.rows() != S.cols() || S.rows() == 0)
    throw Error(ErrorCode::DimensionMismatch, "S must be a non-empty square matrix");
  if (L.empty()) throw Error(ErrorCode::DimensionMismatch, "at least one L matrix is required");
  const Eigen::Index k = S.rows();
  for (const auto& m : L) {
    if (m.rows() != k || m.cols() != k)
      throw Error(ErrorCode::DimensionMismatch, "every L matrix must be k x k with k = dim S");
  }
  const auto p = static_cast<Eigen::Index>(L.size());

  ValidationReport report;

  {
    const double asym = (S - S.transpose()).cwiseAbs().maxCoeff();
    const Eigen::SelfAdjointEigenSolver<MatrixXd> eig(0.5 * (S + S.transpose()));
    const double min_eig = eig.eigenvalues().minCoeff();
    const double max_abs = S.cwiseAbs().maxCoeff();
    ValidationCheck c{"S_symmetric_nonnegative_nonzero", true, std::max(asym, std::max(0.0, -min_eig)),
                      {}};
    if (asym > tol) {
      c.passed = false;
      c.detail += "S not symmetric; ";
    }
    if (min_eig < -tol) {
      c.passed = false;
      c.detail += "S not non-negative (min eigenvalue " + std::to_string(min_eig) + "); ";
    }
    if (max_abs <= tol) {
      c.passed = false;
      c.detail += "S is zero; ";
    }
    report.checks.push_back(std::move(c));
  }

  {
    double worst = 0.0;
    for (const auto& m : L) worst = std::max(worst, (m + m.transpose()).cwiseAbs().maxCoeff());
    report.checks.push_back({"L_skew_symmetric", worst <= tol, worst, {}});
  }

  {
    double worst = 0.0;
    for (Eigen::Index a = 0; a < p; ++a)
      for (Eigen::Index b = 0; b < p; ++b)
        worst = std::max(worst, anticommutation_residual(S, L, Eigen::VectorXd::Unit(p, a),
                                                         Eigen::VectorXd::Unit(p, b)));
    CounterRng rng(seed, 1);
    for (int i = 0; i < 64; ++i) {
      const Eigen::VectorXd v = rng.unit_vector(p);
      const Eigen::VectorXd w = rng.unit_vector(p);
      worst = std::max(worst, anticommutation_residual(S, L, v, w));
    }
    report.checks.push_back({"anticommutation", worst <= tol, worst, {}});
  }

  {
    MatrixXd flat(k * k, p);
    for (Eigen::Index a = 0; a < p; ++a)
      flat.col(a) = Eigen::Map<const Eigen::VectorXd>(L[a].data(), k * k);
    const Eigen::JacobiSVD<MatrixXd> svd(flat);
    const auto& sv = svd.singularValues();
    const double smin = sv(sv.size() - 1);
    const double smax = sv(0);
    const bool independent = smax > 0.0 && smin > tol * std::max(1.0, smax);
    report.checks.push_back({"linear_independence", independent, smin, {}});
  }

  return report;
}

StructureConstants structure_from_explicit(const Eigen::VectorXd& s_diagonal,
                                           const std::vector<MatrixXd>& L, double tol,
                                           std::uint64_t seed) {
  const MatrixXd S = s_diagonal.asDiagonal();
  const auto report = validate_structure(S, L, tol, seed);
  if (!report.passed()) {
    std::ostringstream os;
    os << "explicit structure failed validation:";
    for (const auto& c : report.checks)
      if (!c.passed) os << ' ' << c.name << " (residual " << c.residual << ")";
    throw Error(ErrorCode::SpecNotRealizable, os.str());
  }

  const int k = static_cast<int>(s_diagonal.size());
  const double scale = s_diagonal.cwiseAbs().maxCoeff();

  StructureConstants sc;
  sc.S = S;
  sc.L = L;
  std::vector<int> nonzero;
  for (int i = 0; i < k; ++i) {
    if (std::abs(s_diagonal(i)) <= tol)
      sc.kernel_indices.push_back(i);
    else
      nonzero.push_back(i);
  }
  std::stable_sort(nonzero.begin(), nonzero.end(),
                   [&](int a, int b) { return s_diagonal(a) < s_diagonal(b); });
  for (int i : nonzero) {
    if (!sc.blocks.empty() && std::abs(s_diagonal(i) - sc.blocks.back().alpha) <= 1e-12 * scale) {
      sc.blocks.back().indices.push_back(i);
    } else {
      sc.blocks.push_back({s_diagonal(i), {i}});
    }
  }

  std::vector<SpectrumEntry> spectrum;
  for (auto& b : sc.blocks) {
    if (b.indices.size() % 2 != 0)
      throw Error(ErrorCode::SpecNotRealizable, "non-zero eigenvalues of S must come in pairs");
    std::sort(b.indices.begin(), b.indices.end());
    spectrum.push_back({b.alpha, static_cast<int>(b.indices.size() / 2)});
  }
  sc.spec = GroupSpec::make(k, static_cast<int>(L.size()), std::move(spectrum),
                            static_cast<int>(sc.kernel_indices.size()));
  return sc;
}

MatrixXd l_of_v(const StructureConstants& sc, const Eigen::VectorXd& v) {
  if (v.size() != sc.corank())
    throw Error(ErrorCode::DimensionMismatch, "v must have corank entries");
  MatrixXd out = MatrixXd::Zero(sc.rank(), sc.rank());
  for (int a = 0; a < sc.corank(); ++a) out += v(a) * sc.L[a];
  return out;
}

}  // namespace htype
