#include "gramint/channel.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

#include <unsupported/Eigen/FFT>

namespace gramint {

namespace {

void require(bool ok, const std::string& what) {
  if (!ok) throw std::invalid_argument(what);
}

}  // namespace

void SystemConfig::validate() const {
  require(num_bs_antennas >= 1, "num_bs_antennas must be positive");
  require(num_users >= 1, "num_users must be positive");
  require(num_users <= num_bs_antennas, "num_users must not exceed num_bs_antennas");
  require(fft_size >= 1, "fft_size must be positive");
  require(!active_set.empty(), "active_set must not be empty");
  for (std::size_t i = 0; i < active_set.size(); ++i) {
    require(active_set[i] >= 0 && active_set[i] < fft_size,
            "active_set index " + std::to_string(active_set[i]) + " outside [0, fft_size)");
    require(i == 0 || active_set[i] > active_set[i - 1],
            "active_set must be strictly increasing");
  }
  require(delay_spread >= 1, "delay_spread must be positive");
  require(delay_spread <= fft_size, "delay_spread must not exceed fft_size");
  require(correlation * correlation <= 1.0, "correlation must satisfy delta^2 <= 1");
  require(csi_error_std >= 0.0, "csi_error_std must be non-negative");
  require(symbol_energy > 0.0, "symbol_energy must be positive");
  require(noise_variance >= 0.0, "noise_variance must be non-negative");
}

std::vector<int> centered_active_set(int fft_size, int count) {
  require(count >= 1 && count <= fft_size, "active count must lie in [1, fft_size]");
  const int first = (fft_size - count) / 2;
  std::vector<int> out(static_cast<std::size_t>(count));
  for (int i = 0; i < count; ++i) out[static_cast<std::size_t>(i)] = first + i;
  return out;
}

TdChannel gen_td_channel(const SystemConfig& cfg, Rng& rng) {
  const int b = cfg.num_bs_antennas;
  const int u = cfg.num_users;
  const int taps = cfg.delay_spread;
  const double variance = 1.0 / (static_cast<double>(b) * taps);
  TdChannel td;
  td.taps.reserve(static_cast<std::size_t>(taps));
  for (int l = 0; l < taps; ++l) {
    CMatrix h(b, u);
    for (int col = 0; col < u; ++col)
      for (int row = 0; row < b; ++row) h(row, col) = rng.complex_normal(variance);
    td.taps.push_back(std::move(h));
  }
  return td;
}

std::vector<double> exp_pdp_tap_variances(int num_taps, int num_bs_antennas,
                                          double decay_rate) {
  require(decay_rate > 0.0, "decay_rate must be positive");
  std::vector<double> v(static_cast<std::size_t>(num_taps));
  double total = 0.0;
  for (int l = 0; l < num_taps; ++l) {
    v[static_cast<std::size_t>(l)] = std::exp(-l * decay_rate);
    total += v[static_cast<std::size_t>(l)];
  }
  for (auto& x : v) x /= total * num_bs_antennas;
  return v;
}

TdChannel gen_exp_pdp_channel(const SystemConfig& cfg, double decay_rate,
                              Rng& rng) {
  const auto variances =
      exp_pdp_tap_variances(cfg.delay_spread, cfg.num_bs_antennas, decay_rate);
  TdChannel td;
  td.taps.reserve(variances.size());
  for (const double var : variances) {
    CMatrix h(cfg.num_bs_antennas, cfg.num_users);
    for (int col = 0; col < cfg.num_users; ++col)
      for (int row = 0; row < cfg.num_bs_antennas; ++row)
        h(row, col) = rng.complex_normal(var);
    td.taps.push_back(std::move(h));
  }
  return td;
}

CorrSqrtCoeffs corr_sqrt_coeffs(double delta, int num_bs_antennas) {
  require(num_bs_antennas >= 1, "num_bs_antennas must be positive");
  require(delta * delta <= 1.0, "correlation must satisfy delta^2 <= 1");
  const double b = num_bs_antennas;
  const double diag_sum = 1.0 + (b - 1.0) * delta;
  if (diag_sum < 0.0) {
    throw std::invalid_argument(
        "correlation " + std::to_string(delta) + " below -1/(B-1) = " +
        std::to_string(-1.0 / (b - 1.0)) +
        " makes the correlation matrix indefinite");
  }
  CorrSqrtCoeffs c;
  c.alpha = std::sqrt(1.0 - delta);
  c.beta = (std::sqrt(diag_sum) - c.alpha) / b;
  return c;
}

TdChannel apply_bs_correlation(const TdChannel& td, double delta) {
  if (td.correlated) throw std::logic_error("BS correlation already applied");
  TdChannel out;
  out.correlated = true;
  if (td.taps.empty()) return out;
  const auto c = corr_sqrt_coeffs(delta, static_cast<int>(td.taps.front().rows()));
  out.taps.reserve(td.taps.size());
  for (const auto& h : td.taps) {
    // [H]_{m,n} = alpha [H_unc]_{m,n} + beta sum_b [H_unc]_{b,n}
    const Eigen::RowVectorXcd col_sum = h.colwise().sum();
    CMatrix r = c.alpha * h;
    r.rowwise() += c.beta * col_sum;
    out.taps.push_back(std::move(r));
  }
  return out;
}

namespace {

bool prefer_fft(std::size_t num_subcarriers, int taps, int fft_size) {
  const double direct = static_cast<double>(num_subcarriers) * taps;
  const double fft = 2.0 * fft_size * std::log2(std::max(2, fft_size));
  return direct > fft;
}

FdChannel td_to_fd_direct(const TdChannel& td, std::span<const int> subcarriers,
                          int fft_size) {
  FdChannel fd;
  fd.subcarriers.assign(subcarriers.begin(), subcarriers.end());
  fd.h.reserve(subcarriers.size());
  const auto rows = td.taps.front().rows();
  const auto cols = td.taps.front().cols();
  for (const int w : subcarriers) {
    CMatrix h = CMatrix::Zero(rows, cols);
    for (int l = 0; l < td.num_taps(); ++l) {
      const auto k = (static_cast<long long>(w) * l) % fft_size;
      const cdouble twiddle = std::polar(1.0, -2.0 * kPi * static_cast<double>(k) / fft_size);
      h.noalias() += twiddle * td.taps[static_cast<std::size_t>(l)];
    }
    fd.h.push_back(std::move(h));
  }
  return fd;
}

FdChannel td_to_fd_fft(const TdChannel& td, std::span<const int> subcarriers,
                       int fft_size) {
  const auto rows = td.taps.front().rows();
  const auto cols = td.taps.front().cols();
  FdChannel fd;
  fd.subcarriers.assign(subcarriers.begin(), subcarriers.end());
  fd.h.assign(subcarriers.size(), CMatrix(rows, cols));

  Eigen::FFT<double> fft;
  std::vector<cdouble> in(static_cast<std::size_t>(fft_size));
  std::vector<cdouble> out;
  for (Eigen::Index c = 0; c < cols; ++c) {
    for (Eigen::Index r = 0; r < rows; ++r) {
      std::fill(in.begin(), in.end(), cdouble{});
      for (int l = 0; l < td.num_taps(); ++l)
        in[static_cast<std::size_t>(l)] = td.taps[static_cast<std::size_t>(l)](r, c);
      fft.fwd(out, in);
      for (std::size_t i = 0; i < subcarriers.size(); ++i)
        fd.h[i](r, c) = out[static_cast<std::size_t>(subcarriers[i])];
    }
  }
  return fd;
}

}  // namespace

FdChannel td_to_fd(const TdChannel& td, std::span<const int> subcarriers,
                   int fft_size, DftPath path) {
  require(!td.taps.empty(), "time-domain channel has no taps");
  require(td.num_taps() <= fft_size, "more taps than DFT points");
  for (const int w : subcarriers)
    require(w >= 0 && w < fft_size, "subcarrier index outside [0, fft_size)");
  if (path == DftPath::kAuto)
    path = prefer_fft(subcarriers.size(), td.num_taps(), fft_size) ? DftPath::kFft
                                                                   : DftPath::kDirect;
  return path == DftPath::kFft ? td_to_fd_fft(td, subcarriers, fft_size)
                               : td_to_fd_direct(td, subcarriers, fft_size);
}

FdChannel td_to_fd(const TdChannel& td, const SystemConfig& cfg) {
  return td_to_fd(td, cfg.active_set, cfg.fft_size);
}

FdChannel perturb_csi(const FdChannel& fd, double sigma, Rng& rng) {
  require(sigma >= 0.0, "csi error std must be non-negative");
  if (fd.csi_sigma != 0.0) throw std::logic_error("channel already carries a CSI error");
  FdChannel out = fd;
  out.csi_sigma = sigma;
  if (sigma == 0.0) return out;
  for (auto& h : out.h)
    for (Eigen::Index c = 0; c < h.cols(); ++c)
      for (Eigen::Index r = 0; r < h.rows(); ++r) h(r, c) += sigma * rng.complex_normal(1.0);
  return out;
}

double sigma_from_snr(double snr_linear, int num_bs_antennas, int num_users) {
  require(snr_linear > 0.0, "snr must be positive");
  return std::sqrt(static_cast<double>(num_users) /
                   (static_cast<double>(num_bs_antennas) * snr_linear));
}

}  // namespace gramint
