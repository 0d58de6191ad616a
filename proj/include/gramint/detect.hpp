#pragma once

#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "gramint/channel.hpp"
#include "gramint/grammat.hpp"
#include "gramint/types.hpp"

namespace gramint {

class SingularSystemError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// (G + regularization I)^{-1} matched, given the matched-filter output H^H y.
CVector mmse_solve(const CMatrix& gram, const CVector& matched, double regularization);

/// s_hat = (G + (N0/Es) I)^{-1} H^H y, solved with a Cholesky factorization.
/// Throws SingularSystemError when the regularized Gram matrix is not
/// positive definite (e.g. N0 = 0 with a rank-deficient G).
CVector mmse_equalize(const CMatrix& gram, const CMatrix& h, const CVector& y,
                      double noise_variance, double symbol_energy);

/// Zero-forcing precoder reusing the uplink Gram matrix:
/// x = H^* (G^*)^{-1} s, so the downlink channel H^T delivers H^T x = s.
/// With `normalize` the output is scaled to unit norm.
CVector zf_precode(const CMatrix& gram, const CMatrix& h, const CVector& s,
                   bool normalize = false);

/// Mean over subcarriers of ||H_w^T x_w - s_w||^2 when x_w is precoded with
/// grams.grams[w] for the true channel `fd`. `symbols` holds one U-vector per
/// subcarrier.
double zf_interference_power(const FdChannel& fd, const GramSet& grams,
                             std::span<const CVector> symbols);

/// U x U pilot block sqrt(Es) * [exp(-j 2 pi k t / U)]_{k,t}: every entry has
/// the data-symbol energy Es and P P^H = U Es I.
CMatrix pilot_matrix(int num_users, double symbol_energy);

/// ML estimate from Y_w = H_w P + N_w over U pilot slots: H_hat = Y P^H (P P^H)^{-1}.
/// The pilot block must be square with P P^H = c I (c > 0); the per-entry
/// error variance is N0 / c, recorded as csi_sigma = sqrt(N0 / c).
FdChannel ml_channel_estimate(std::span<const CMatrix> observations,
                              std::vector<int> subcarriers, const CMatrix& pilots,
                              double noise_variance);

}  // namespace gramint
