#include "qsens/types.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace qsens {

double max_abs(const CMatrix& a) { return a.size() == 0 ? 0.0 : a.cwiseAbs().maxCoeff(); }
double max_abs(const RMatrix& a) { return a.size() == 0 ? 0.0 : a.cwiseAbs().maxCoeff(); }

namespace {

// Frobenius inner product tr(A† B).
Complex frobenius(const CMatrix& a, const CMatrix& b) { return (a.conjugate().cwiseProduct(b)).sum(); }

}  // namespace

// ---------------------------------------------------------------------------
// HermitianOperator

HermitianOperator::HermitianOperator(CMatrix matrix) : repr_(std::move(matrix)) {
  const auto& m = std::get<CMatrix>(repr_);
  if (m.rows() != m.cols() || m.rows() == 0) {
    throw std::invalid_argument("HermitianOperator: matrix must be square and nonempty");
  }
  const double residue = max_abs(CMatrix(m - m.adjoint()));
  if (!(residue <= kHermiticityTolerance)) {
    std::ostringstream os;
    os << "HermitianOperator: matrix is not Hermitian (max residue " << residue << ")";
    throw std::invalid_argument(os.str());
  }
}

HermitianOperator HermitianOperator::projector(CMatrix isometry) {
  if (isometry.rows() == 0 || isometry.cols() == 0 || isometry.cols() > isometry.rows()) {
    throw std::invalid_argument("HermitianOperator::projector: isometry must be d x k with 0 < k <= d");
  }
  const CMatrix gram = isometry.adjoint() * isometry;
  const double residue = max_abs(CMatrix(gram - CMatrix::Identity(gram.rows(), gram.cols())));
  if (!(residue <= 1e-10)) {
    throw std::invalid_argument("HermitianOperator::projector: columns are not orthonormal");
  }
  return HermitianOperator(Factored{std::move(isometry)});
}

HermitianOperator HermitianOperator::identity(Eigen::Index dim) {
  return HermitianOperator(CMatrix(CMatrix::Identity(dim, dim)));
}

Eigen::Index HermitianOperator::dim() const {
  return std::visit(
      [](const auto& r) -> Eigen::Index {
        if constexpr (std::is_same_v<std::decay_t<decltype(r)>, CMatrix>) {
          return r.rows();
        } else {
          return r.isometry.rows();
        }
      },
      repr_);
}

Eigen::Index HermitianOperator::rank() const {
  if (const auto* f = std::get_if<Factored>(&repr_)) return f->isometry.cols();
  return dim();
}

CMatrix HermitianOperator::matrix() const {
  if (const auto* f = std::get_if<Factored>(&repr_)) return f->isometry * f->isometry.adjoint();
  return std::get<CMatrix>(repr_);
}

const CMatrix& HermitianOperator::isometry() const {
  if (const auto* f = std::get_if<Factored>(&repr_)) return f->isometry;
  throw std::logic_error("HermitianOperator::isometry: operator is not a factored projector");
}

CMatrix HermitianOperator::apply(const CMatrix& w) const {
  if (w.rows() != dim()) throw std::invalid_argument("HermitianOperator::apply: dimension mismatch");
  if (const auto* f = std::get_if<Factored>(&repr_)) {
    return f->isometry * (f->isometry.adjoint() * w);
  }
  return std::get<CMatrix>(repr_) * w;
}

HermitianOperator operator+(const HermitianOperator& a, const HermitianOperator& b) {
  if (a.dim() != b.dim()) throw std::invalid_argument("HermitianOperator: dimension mismatch in sum");
  CMatrix sum = a.matrix() + b.matrix();
  return HermitianOperator(CMatrix(0.5 * (sum + sum.adjoint())));
}

HermitianOperator operator*(double s, const HermitianOperator& a) { return HermitianOperator(CMatrix(s * a.matrix())); }

CMatrix unitary_exp(const HermitianOperator& generator, double t) {
  Eigen::SelfAdjointEigenSolver<CMatrix> es(generator.matrix());
  if (es.info() != Eigen::Success) throw NumericalConsistencyError("unitary_exp: eigen-decomposition failed");
  const CVector phases = (es.eigenvalues().cast<Complex>() * Complex(0.0, -t)).array().exp().matrix();
  return es.eigenvectors() * phases.asDiagonal() * es.eigenvectors().adjoint();
}

// ---------------------------------------------------------------------------
// QuantumState

QuantumState QuantumState::pure(CVector psi) {
  if (psi.size() == 0) throw std::invalid_argument("QuantumState::pure: empty vector");
  const double norm = psi.norm();
  if (!(std::abs(norm - 1.0) <= kNormTolerance)) {
    std::ostringstream os;
    os << "QuantumState::pure: vector norm " << norm << " differs from 1";
    throw std::invalid_argument(os.str());
  }
  CMatrix factor = psi;
  return QuantumState(Kind::pure, std::move(factor));
}

QuantumState QuantumState::mixed(const CMatrix& rho) {
  if (rho.rows() != rho.cols() || rho.rows() == 0) {
    throw std::invalid_argument("QuantumState::mixed: density matrix must be square and nonempty");
  }
  if (!(max_abs(CMatrix(rho - rho.adjoint())) <= kNormTolerance)) {
    throw std::invalid_argument("QuantumState::mixed: density matrix is not Hermitian");
  }
  if (!(std::abs(rho.trace() - Complex(1.0)) <= kNormTolerance)) {
    throw std::invalid_argument("QuantumState::mixed: density matrix does not have unit trace");
  }
  Eigen::SelfAdjointEigenSolver<CMatrix> es(CMatrix(0.5 * (rho + rho.adjoint())));
  if (es.info() != Eigen::Success) throw NumericalConsistencyError("QuantumState::mixed: eigen-decomposition failed");
  const RVector& lambda = es.eigenvalues();
  if (lambda.minCoeff() < kEigenvalueFloor) {
    throw std::invalid_argument("QuantumState::mixed: density matrix has a negative eigenvalue");
  }
  std::vector<Eigen::Index> support;
  for (Eigen::Index k = 0; k < lambda.size(); ++k) {
    if (lambda(k) > 0.0) support.push_back(k);
  }
  CMatrix factor(rho.rows(), static_cast<Eigen::Index>(support.size()));
  for (std::size_t c = 0; c < support.size(); ++c) {
    const auto k = support[c];
    factor.col(static_cast<Eigen::Index>(c)) = es.eigenvectors().col(k) * std::sqrt(lambda(k));
  }
  return QuantumState(Kind::mixed, std::move(factor));
}

QuantumState QuantumState::maximally_mixed(Eigen::Index dim) {
  return mixed(CMatrix(CMatrix::Identity(dim, dim) / static_cast<double>(dim)));
}

CVector QuantumState::vector() const {
  if (!is_pure()) throw std::logic_error("QuantumState::vector: state is mixed");
  return factor_.col(0);
}

CMatrix QuantumState::density() const { return factor_ * factor_.adjoint(); }

RVector QuantumState::spectrum() const {
  // Nonzero eigenvalues of W W† equal those of W† W.
  Eigen::SelfAdjointEigenSolver<CMatrix> es(CMatrix(factor_.adjoint() * factor_), Eigen::EigenvaluesOnly);
  RVector out = RVector::Zero(dim());
  const auto k = es.eigenvalues().size();
  out.tail(k) = es.eigenvalues();
  std::sort(out.data(), out.data() + out.size());
  return out;
}

double QuantumState::purity() const {
  const CMatrix g = factor_.adjoint() * factor_;
  return g.cwiseAbs2().sum();
}

Complex QuantumState::expectation(const HermitianOperator& a) const {
  if (a.dim() != dim()) throw std::invalid_argument("QuantumState::expectation: dimension mismatch");
  return frobenius(factor_, a.apply(factor_));
}

double QuantumState::mean(const HermitianOperator& a) const { return expectation(a).real(); }

double QuantumState::variance(const HermitianOperator& a) const {
  if (a.dim() != dim()) throw std::invalid_argument("QuantumState::variance: dimension mismatch");
  CMatrix aw = a.apply(factor_);
  const double m = frobenius(factor_, aw).real();
  aw -= m * factor_;
  return aw.squaredNorm();
}

Complex QuantumState::correlation(const HermitianOperator& a, const HermitianOperator& b) const {
  if (a.dim() != dim() || b.dim() != dim()) {
    throw std::invalid_argument("QuantumState::correlation: dimension mismatch");
  }
  return frobenius(a.apply(factor_), b.apply(factor_));
}

QuantumState QuantumState::transformed(const CMatrix& unitary) const {
  if (unitary.rows() != dim() || unitary.cols() != dim()) {
    throw std::invalid_argument("QuantumState::transformed: dimension mismatch");
  }
  return QuantumState(kind_, unitary * factor_);
}

// ---------------------------------------------------------------------------
// ProjectiveBasis

ProjectiveBasis::ProjectiveBasis(std::vector<HermitianOperator> projectors, std::vector<double> labels)
    : dim_(projectors.empty() ? 0 : projectors.front().dim()),
      projectors_(std::move(projectors)),
      labels_(std::move(labels)) {
  if (projectors_.empty()) throw std::invalid_argument("ProjectiveBasis: no projectors");
  if (labels_.empty()) {
    for (std::size_t x = 0; x < projectors_.size(); ++x) labels_.push_back(static_cast<double>(x));
  }
  if (labels_.size() != projectors_.size()) throw std::invalid_argument("ProjectiveBasis: label count mismatch");

  std::vector<CMatrix> dense;
  dense.reserve(projectors_.size());
  CMatrix total = CMatrix::Zero(dim_, dim_);
  for (const auto& p : projectors_) {
    if (p.dim() != dim_) throw std::invalid_argument("ProjectiveBasis: projector dimensions differ");
    dense.push_back(p.matrix());
    total += dense.back();
  }
  if (max_abs(CMatrix(total - CMatrix::Identity(dim_, dim_))) > kTolerance) {
    throw std::invalid_argument("ProjectiveBasis: projectors are not complete");
  }
  // Factored projectors are idempotent by construction; with completeness,
  // orthogonality reduces to Σ rank = d.
  bool all_factored = true;
  Eigen::Index total_rank = 0;
  for (const auto& p : projectors_) {
    all_factored = all_factored && p.is_projector();
    total_rank += p.rank();
  }
  if (all_factored && total_rank == dim_) return;
  for (std::size_t x = 0; x < dense.size(); ++x) {
    if (max_abs(CMatrix(dense[x] * dense[x] - dense[x])) > kTolerance) {
      throw std::invalid_argument("ProjectiveBasis: operator is not idempotent");
    }
    for (std::size_t y = x + 1; y < dense.size(); ++y) {
      if (max_abs(CMatrix(dense[x] * dense[y])) > kTolerance) {
        throw std::invalid_argument("ProjectiveBasis: projectors are not mutually orthogonal");
      }
    }
  }
}

ProjectiveBasis ProjectiveBasis::from_unitary(const CMatrix& unitary, std::vector<double> labels) {
  std::vector<HermitianOperator> projectors;
  projectors.reserve(static_cast<std::size_t>(unitary.cols()));
  for (Eigen::Index k = 0; k < unitary.cols(); ++k) {
    projectors.push_back(HermitianOperator::projector(unitary.col(k)));
  }
  return ProjectiveBasis(std::move(projectors), std::move(labels));
}

ProjectiveBasis ProjectiveBasis::computational(Eigen::Index dim) {
  return from_unitary(CMatrix::Identity(dim, dim));
}

CMatrix ProjectiveBasis::combine(const RVector& coefficients) const {
  if (static_cast<std::size_t>(coefficients.size()) != size()) {
    throw std::invalid_argument("ProjectiveBasis::combine: coefficient count mismatch");
  }
  CMatrix out = CMatrix::Zero(dim_, dim_);
  for (std::size_t x = 0; x < size(); ++x) {
    const double c = coefficients(static_cast<Eigen::Index>(x));
    if (c == 0.0) continue;
    const auto& p = projectors_[x];
    if (p.is_projector()) {
      out.noalias() += c * p.isometry() * p.isometry().adjoint();
    } else {
      out += c * p.matrix();
    }
  }
  return out;
}

RVector ProjectiveBasis::probabilities(const QuantumState& state) const {
  if (state.dim() != dim_) throw std::invalid_argument("ProjectiveBasis::probabilities: dimension mismatch");
  RVector p(static_cast<Eigen::Index>(size()));
  for (std::size_t x = 0; x < size(); ++x) p(static_cast<Eigen::Index>(x)) = state.mean(projectors_[x]);
  return p;
}

}  // namespace qsens
