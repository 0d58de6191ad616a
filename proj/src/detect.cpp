#include "gramint/detect.hpp"

#include <cmath>

namespace gramint {

namespace {

Eigen::LLT<CMatrix> factor(const CMatrix& a) {
  Eigen::LLT<CMatrix> llt(a);
  if (llt.info() != Eigen::Success)
    throw SingularSystemError("regularized Gram matrix is not positive definite");
  const auto d = llt.matrixLLT().diagonal().real();
  const double max_pivot = d.maxCoeff();
  if (!(d.minCoeff() > 1e-7 * max_pivot))
    throw SingularSystemError("Gram matrix is numerically rank deficient");
  return llt;
}

}  // namespace

CVector mmse_solve(const CMatrix& gram, const CVector& matched, double regularization) {
  CMatrix a = gram;
  a.diagonal().array() += regularization;
  return factor(a).solve(matched);
}

CVector mmse_equalize(const CMatrix& gram, const CMatrix& h, const CVector& y,
                      double noise_variance, double symbol_energy) {
  if (noise_variance < 0.0) throw std::invalid_argument("noise variance must be non-negative");
  return mmse_solve(gram, h.adjoint() * y, noise_variance / symbol_energy);
}

CVector zf_precode(const CMatrix& gram, const CMatrix& h, const CVector& s, bool normalize) {
  // H^* (G^*)^{-1} s = conj(H G^{-1} conj(s))
  const CVector t = factor(gram).solve(s.conjugate());
  CVector x = (h * t).conjugate();
  if (normalize) {
    const double n = x.norm();
    if (n > 0.0) x /= n;
  }
  return x;
}

double zf_interference_power(const FdChannel& fd, const GramSet& grams,
                             std::span<const CVector> symbols) {
  if (grams.size() != fd.size() || symbols.size() != fd.size())
    throw std::invalid_argument("channel, grams and symbols must be aligned");
  double total = 0.0;
  for (std::size_t i = 0; i < fd.size(); ++i) {
    const CVector x = zf_precode(grams.grams[i], fd.h[i], symbols[i]);
    total += (fd.h[i].transpose() * x - symbols[i]).squaredNorm();
  }
  return total / static_cast<double>(fd.size());
}

CMatrix pilot_matrix(int num_users, double symbol_energy) {
  if (num_users < 1) throw std::invalid_argument("pilot block needs at least one user");
  const double amp = std::sqrt(symbol_energy);
  CMatrix p(num_users, num_users);
  for (int k = 0; k < num_users; ++k)
    for (int t = 0; t < num_users; ++t)
      p(k, t) = amp * std::polar(1.0, -2.0 * kPi * ((k * t) % num_users) / num_users);
  return p;
}

FdChannel ml_channel_estimate(std::span<const CMatrix> observations,
                              std::vector<int> subcarriers, const CMatrix& pilots,
                              double noise_variance) {
  if (pilots.rows() != pilots.cols()) throw std::invalid_argument("pilot matrix must be square");
  if (observations.size() != subcarriers.size())
    throw std::invalid_argument("one observation block per subcarrier required");
  const CMatrix ppH = pilots * pilots.adjoint();
  const double c = ppH(0, 0).real();
  if (!(c > 0.0) ||
      (ppH - c * CMatrix::Identity(pilots.rows(), pilots.rows())).cwiseAbs().maxCoeff() > 1e-9 * c)
    throw std::invalid_argument("pilot rows must be orthogonal with equal energy");

  const CMatrix back = pilots.adjoint() / c;
  FdChannel fd;
  fd.subcarriers = std::move(subcarriers);
  fd.h.reserve(observations.size());
  for (const auto& y : observations) {
    if (y.cols() != pilots.rows()) throw std::invalid_argument("observation width must equal pilot length");
    fd.h.push_back(y * back);
  }
  fd.csi_sigma = std::sqrt(noise_variance / c);
  return fd;
}

}  // namespace gramint
