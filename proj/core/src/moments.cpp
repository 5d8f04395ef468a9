#include "qsens/moments.hpp"

#include <cmath>
#include <sstream>

namespace qsens {

OperatorFamily::OperatorFamily(std::vector<HermitianOperator> members) : members_(std::move(members)) {
  if (members_.empty()) throw std::invalid_argument("OperatorFamily: empty family");
  for (const auto& m : members_) {
    if (m.dim() != members_.front().dim()) throw std::invalid_argument("OperatorFamily: member dimensions differ");
  }
}

OperatorFamily OperatorFamily::generator_and_projectors(const HermitianOperator& h, const ProjectiveBasis& basis,
                                                        std::span<const std::size_t> outcomes) {
  std::vector<HermitianOperator> members{h};
  members.reserve(outcomes.size() + 1);
  for (const auto x : outcomes) {
    if (x >= basis.size()) throw std::out_of_range("OperatorFamily: outcome index out of range");
    members.push_back(basis[x]);
  }
  return OperatorFamily(std::move(members));
}

MomentData moment_data(const QuantumState& state, const OperatorFamily& family, RankPolicy policy) {
  if (state.dim() != family.dim()) throw std::invalid_argument("moment_data: dimension mismatch");
  const CMatrix& w = state.factor();
  const auto length = static_cast<Eigen::Index>(family.size());
  const Eigen::Index block = w.size();

  // Column k holds vec((H_k − ⟨H_k⟩) W); Γ and C then follow from a single
  // Gram matrix without the ⟨H_k H_l⟩ − ⟨H_k⟩⟨H_l⟩ cancellation.
  CMatrix centered(block, length);
  RVector means(length);
  for (Eigen::Index k = 0; k < length; ++k) {
    CMatrix hw = family[static_cast<std::size_t>(k)].apply(w);
    const Complex mean = (w.conjugate().cwiseProduct(hw)).sum();
    if (std::abs(mean.imag()) > 1e-10 * std::max(1.0, std::abs(mean.real()))) {
      throw NumericalConsistencyError("moment_data: expectation value has an imaginary residue");
    }
    means(k) = mean.real();
    hw -= mean.real() * w;
    centered.col(k) = Eigen::Map<const CVector>(hw.data(), block);
  }
  const CMatrix gram = centered.adjoint() * centered;

  MomentData md;
  md.means = std::move(means);
  md.gamma = gram.real();
  md.gamma = 0.5 * (md.gamma + md.gamma.transpose()).eval();
  md.commutator = 2.0 * gram.imag();
  md.commutator = 0.5 * (md.commutator - md.commutator.transpose()).eval();
  md.moment = moment_matrix(md.gamma, md.commutator, policy);
  return md;
}

MomentMatrix moment_matrix(const RMatrix& gamma, const RMatrix& commutator, RankPolicy policy) {
  if (gamma.rows() != gamma.cols() || commutator.rows() != gamma.rows() || commutator.cols() != gamma.cols()) {
    throw std::invalid_argument("moment_matrix: shape mismatch");
  }
  const Eigen::Index n = gamma.rows();
  RVector scale(n);
  for (Eigen::Index k = 0; k < n; ++k) scale(k) = gamma(k, k) > 0.0 ? 1.0 / std::sqrt(gamma(k, k)) : 1.0;

  const RMatrix equilibrated = scale.asDiagonal() * gamma * scale.asDiagonal();
  Eigen::SelfAdjointEigenSolver<RMatrix> es(0.5 * (equilibrated + equilibrated.transpose()));
  if (es.info() != Eigen::Success) throw NumericalConsistencyError("moment_matrix: eigen-decomposition failed");

  MomentMatrix out;
  out.m = RMatrix::Zero(n, n);
  const double lambda_max = n > 0 ? es.eigenvalues()(n - 1) : 0.0;
  if (!(lambda_max > 0.0)) {
    out.rank_deficient = n > 0;
    return out;
  }
  const double cutoff = policy.relative_cutoff * lambda_max;
  std::vector<Eigen::Index> kept;
  for (Eigen::Index k = 0; k < n; ++k) {
    if (es.eigenvalues()(k) > cutoff) kept.push_back(k);
  }
  out.rank = static_cast<Eigen::Index>(kept.size());
  out.rank_deficient = out.rank < n;

  // M = (B C)ᵀ (B C) with B = Λ^{-1/2} Vᵀ D restricted to the kept spectrum.
  RMatrix b(out.rank, n);
  for (Eigen::Index r = 0; r < out.rank; ++r) {
    const auto k = kept[static_cast<std::size_t>(r)];
    b.row(r) = (es.eigenvectors().col(k).cwiseProduct(scale)).transpose() / std::sqrt(es.eigenvalues()(k));
  }
  const RMatrix bc = b * commutator;
  out.m = bc.transpose() * bc;
  return out;
}

double max_moment_sensitivity(const MomentData& md, const RVector& n) {
  if (n.size() != md.moment.m.rows()) throw std::invalid_argument("max_moment_sensitivity: length mismatch");
  return n.dot(md.moment.m * n);
}

// ---------------------------------------------------------------------------

double ReducedStats::fisher() const {
  double f = 0.0;
  for (std::size_t x = 0; x < outcomes(); ++x) {
    const auto i = static_cast<Eigen::Index>(x);
    if (kept[x]) f += d(i) * d(i) / p(i);
  }
  return f;
}

double ReducedStats::enhancement() const {
  const double e = a * b * b;
  if (e < -1e-9) throw NumericalConsistencyError("enhancement: negative beyond tolerance");
  return e < 0.0 ? 0.0 : e;
}

ReducedStats reduced_projector_stats(const QuantumState& state_theta, const HermitianOperator& h,
                                     const ProjectiveBasis& basis) {
  if (state_theta.dim() != h.dim() || basis.dim() != h.dim()) {
    throw std::invalid_argument("reduced_projector_stats: dimension mismatch");
  }
  const CMatrix& w = state_theta.factor();
  CMatrix hw = h.apply(w);
  const double mean_h = (w.conjugate().cwiseProduct(hw)).sum().real();
  hw -= mean_h * w;

  const auto r = basis.size();
  ReducedStats s;
  s.p.resize(static_cast<Eigen::Index>(r));
  s.d.resize(static_cast<Eigen::Index>(r));
  s.gamma.resize(static_cast<Eigen::Index>(r));
  s.mean_h = mean_h;
  s.var_h = hw.squaredNorm();

  for (std::size_t x = 0; x < r; ++x) {
    const auto& proj = basis[x];
    double p = 0.0;
    Complex z;  // ⟨Π_x (H − ⟨H⟩)⟩
    if (proj.is_projector()) {
      const CMatrix a = proj.isometry().adjoint() * w;
      const CMatrix b = proj.isometry().adjoint() * hw;
      p = a.squaredNorm();
      z = (a.conjugate().cwiseProduct(b)).sum();
    } else {
      const CMatrix pw = proj.apply(w);
      p = (w.conjugate().cwiseProduct(pw)).sum().real();
      z = (pw.conjugate().cwiseProduct(hw)).sum();
    }
    const auto i = static_cast<Eigen::Index>(x);
    s.p(i) = p;
    s.gamma(i) = z.real();
    s.d(i) = 2.0 * z.imag();
  }

  if (std::abs(s.p.sum() - 1.0) > 1e-10) {
    throw NumericalConsistencyError("reduced_projector_stats: probabilities do not sum to one");
  }
  if (std::abs(s.d.sum()) > 1e-9 * std::max(1.0, s.d.cwiseAbs().sum()) ||
      std::abs(s.gamma.sum()) > 1e-9 * std::max(1.0, s.gamma.cwiseAbs().sum())) {
    throw NumericalConsistencyError("reduced_projector_stats: basis completeness violated by d or gamma");
  }

  s.kept.assign(r, false);
  bool any = false;
  for (std::size_t x = 0; x < r; ++x) {
    const auto i = static_cast<Eigen::Index>(x);
    s.kept[x] = s.p(i) >= ReducedStats::kProbabilityFloor;
    any = any || s.kept[x];
    if (!s.kept[x] && std::abs(s.d(i)) > ReducedStats::kDivergenceThreshold) s.diverging.push_back(x);
  }
  if (!any) throw NumericalConsistencyError("reduced_projector_stats: every outcome below the probability floor");
  Eigen::Index best = 0;
  s.p.maxCoeff(&best);
  s.removed_index = static_cast<std::size_t>(best);

  double schur = s.var_h;
  double b = 0.0;
  for (std::size_t x = 0; x < r; ++x) {
    if (!s.kept[x]) continue;
    const auto i = static_cast<Eigen::Index>(x);
    schur -= s.gamma(i) * s.gamma(i) / s.p(i);
    b += s.gamma(i) * s.d(i) / s.p(i);
    if (x != s.removed_index) s.active.push_back(x);
  }
  s.a_inverse = schur;
  s.b = b;

  const double tol = ReducedStats::kDegenerateRelative * s.var_h;
  if (schur < -tol) {
    std::ostringstream os;
    os << "reduced_projector_stats: negative Schur complement " << schur << " (var H = " << s.var_h << ")";
    throw NumericalConsistencyError(os.str());
  }
  if (schur <= tol || !(s.var_h > 0.0)) {
    s.generator_in_basis_span = true;
    s.a = 0.0;
  } else {
    s.a = 1.0 / schur;
  }

  const auto rem = static_cast<Eigen::Index>(s.removed_index);
  const double g_removed = s.gamma(rem) / s.p(rem);
  s.w.resize(static_cast<Eigen::Index>(s.active.size()));
  for (std::size_t k = 0; k < s.active.size(); ++k) {
    const auto i = static_cast<Eigen::Index>(s.active[k]);
    s.w(static_cast<Eigen::Index>(k)) = s.gamma(i) / s.p(i) - g_removed;
  }
  return s;
}

RMatrix structured_inverse(std::span<const double> p, std::size_t removed) {
  const std::size_t r = p.size();
  if (r < 2 || removed >= r) throw std::invalid_argument("structured_inverse: need r >= 2 and a valid removed index");
  for (const double v : p) {
    if (!(v > 0.0)) throw std::invalid_argument("structured_inverse: probabilities must be positive");
  }
  const auto n = static_cast<Eigen::Index>(r - 1);
  const double tail = 1.0 / p[removed];
  RMatrix inv = RMatrix::Constant(n, n, tail);
  Eigen::Index row = 0;
  for (std::size_t x = 0; x < r; ++x) {
    if (x == removed) continue;
    inv(row, row) += 1.0 / p[x];
    ++row;
  }
  return inv;
}

RMatrix block_inverse(const ReducedStats& stats) {
  std::vector<double> kept_p;
  std::size_t removed_pos = 0;
  for (std::size_t x = 0; x < stats.outcomes(); ++x) {
    if (!stats.kept[x]) continue;
    if (x == stats.removed_index) removed_pos = kept_p.size();
    kept_p.push_back(stats.p(static_cast<Eigen::Index>(x)));
  }
  const RMatrix projector_block = structured_inverse(kept_p, removed_pos);
  const Eigen::Index n = projector_block.rows();
  RMatrix out(n + 1, n + 1);
  out(0, 0) = stats.a;
  out.block(0, 1, 1, n) = -stats.a * stats.w.transpose();
  out.block(1, 0, n, 1) = -stats.a * stats.w;
  out.block(1, 1, n, n) = projector_block + stats.a * stats.w * stats.w.transpose();
  return out;
}

}  // namespace qsens
