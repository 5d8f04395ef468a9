#include "qsens/random.hpp"

#include <algorithm>
#include <cmath>

namespace qsens {

double InstanceSampler::uniform(double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(engine_); }

int InstanceSampler::uniform_int(int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(engine_); }

double InstanceSampler::normal() { return std::normal_distribution<double>(0.0, 1.0)(engine_); }

Complex InstanceSampler::complex_normal() {
  const double re = normal();
  const double im = normal();
  return {re * M_SQRT1_2, im * M_SQRT1_2};
}

CVector InstanceSampler::haar_vector(Eigen::Index dim) {
  CVector v(dim);
  for (Eigen::Index k = 0; k < dim; ++k) v(k) = complex_normal();
  return v / v.norm();
}

CMatrix InstanceSampler::haar_unitary(Eigen::Index dim) {
  CMatrix g(dim, dim);
  for (Eigen::Index c = 0; c < dim; ++c) {
    for (Eigen::Index r = 0; r < dim; ++r) g(r, c) = complex_normal();
  }
  Eigen::HouseholderQR<CMatrix> qr(g);
  CMatrix q = qr.householderQ() * CMatrix::Identity(dim, dim);
  const CMatrix r = qr.matrixQR().triangularView<Eigen::Upper>();
  for (Eigen::Index k = 0; k < dim; ++k) {
    const Complex diag = r(k, k);
    if (std::abs(diag) > 0.0) q.col(k) *= diag / std::abs(diag);
  }
  return q;
}

CMatrix InstanceSampler::gue(Eigen::Index dim) {
  CMatrix g(dim, dim);
  for (Eigen::Index c = 0; c < dim; ++c) {
    for (Eigen::Index r = 0; r < dim; ++r) g(r, c) = complex_normal();
  }
  return 0.5 * (g + g.adjoint());
}

CMatrix InstanceSampler::random_density(Eigen::Index dim, Eigen::Index rank) {
  CMatrix g(dim, rank);
  for (Eigen::Index c = 0; c < rank; ++c) {
    for (Eigen::Index r = 0; r < dim; ++r) g(r, c) = complex_normal();
  }
  CMatrix rho = g * g.adjoint();
  rho /= rho.trace().real();
  return 0.5 * (rho + rho.adjoint());
}

RVector InstanceSampler::probability_vector(Eigen::Index r) {
  // Dirichlet(1, …, 1) via normalised exponentials, floored away from zero.
  RVector p(r);
  for (Eigen::Index k = 0; k < r; ++k) p(k) = -std::log(std::max(uniform(0.0, 1.0), 1e-6));
  return p / p.sum();
}

ProjectiveBasis random_basis(InstanceSampler& rng, Eigen::Index dim) {
  return ProjectiveBasis::from_unitary(rng.haar_unitary(dim));
}

ProjectiveBasis random_coarse_basis(InstanceSampler& rng, Eigen::Index dim, Eigen::Index blocks) {
  if (blocks < 1 || blocks > dim) throw std::invalid_argument("random_coarse_basis: need 1 <= blocks <= dim");
  const CMatrix u = rng.haar_unitary(dim);
  // Random composition of dim into `blocks` positive parts.
  std::vector<Eigen::Index> cuts;
  for (Eigen::Index k = 1; k < dim; ++k) cuts.push_back(k);
  std::shuffle(cuts.begin(), cuts.end(), rng.engine());
  cuts.resize(static_cast<std::size_t>(blocks - 1));
  std::sort(cuts.begin(), cuts.end());
  cuts.push_back(dim);
  std::vector<HermitianOperator> projectors;
  Eigen::Index start = 0;
  for (const auto end : cuts) {
    projectors.push_back(HermitianOperator::projector(u.middleCols(start, end - start)));
    start = end;
  }
  return ProjectiveBasis(std::move(projectors), {});
}

}  // namespace qsens
