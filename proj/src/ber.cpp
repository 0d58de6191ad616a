#include "gramint/ber.hpp"

#include <bit>
#include <cmath>
#include <memory>
#include <stdexcept>

#include "gramint/detect.hpp"
#include "gramint/parallel.hpp"
#include "gramint/qam.hpp"

namespace gramint {

std::string GramVariant::label() const {
  std::string s(to_string(method));
  if (method != GramMethod::kBruteForce) s += "/P=" + std::to_string(base_points);
  return s;
}

std::uint64_t BerResult::bit_errors() const {
  std::uint64_t n = 0;
  for (const auto& c : curves)
    for (const auto& p : c.points) n += p.bit_errors;
  return n;
}

std::uint64_t BerResult::total_bits() const {
  std::uint64_t n = 0;
  for (const auto& c : curves)
    for (const auto& p : c.points) n += p.total_bits;
  return n;
}

double BerResult::ber() const {
  const auto bits = total_bits();
  return bits ? static_cast<double>(bit_errors()) / static_cast<double>(bits) : 0.0;
}

const BerCurve& BerResult::curve(const GramVariant& variant) const {
  for (const auto& c : curves)
    if (c.variant == variant) return c;
  throw std::out_of_range("no BER curve for " + variant.label());
}

namespace {

struct PreparedVariant {
  GramVariant variant;
  std::unique_ptr<BasePointPlan> plan;
  std::unique_ptr<ExactInterpolator> exact;
};

}  // namespace

BerResult simulate_uplink_ber(const BerRequest& request) {
  const SystemConfig& cfg = request.cfg;
  cfg.validate();
  if (request.trials < 1) throw std::invalid_argument("BER simulation needs at least one trial");
  if (request.variants.empty()) throw std::invalid_argument("no Gram variants requested");

  const std::size_t nsc = cfg.active_set.size();
  const int b = cfg.num_bs_antennas;
  const int u = cfg.num_users;
  const double es = cfg.symbol_energy;

  std::vector<PreparedVariant> prepared;
  for (const auto& v : request.variants) {
    PreparedVariant p;
    p.variant = v;
    if (v.method != GramMethod::kBruteForce) {
      p.plan = std::make_unique<BasePointPlan>(BasePointPlan::uniform(cfg.active_set, v.base_points));
      if (v.method == GramMethod::kExact)
        p.exact = std::make_unique<ExactInterpolator>(*p.plan, cfg.delay_spread, cfg.fft_size);
    }
    prepared.push_back(std::move(p));
  }

  const QamConstellation qam(es);
  const CMatrix pilots = pilot_matrix(u, es);
  const std::size_t nvar = prepared.size();
  const std::size_t nsnr = request.snr_db.size();
  const std::uint64_t bits_per_trial = static_cast<std::uint64_t>(nsc) * u * QamConstellation::kBitsPerSymbol;

  // errors[trial][variant * nsnr + snr]
  std::vector<std::vector<std::uint64_t>> errors(request.trials);

  parallel_for(request.trials, request.threads, [&](std::size_t trial) {
    Rng rng(request.seed, StreamId::kBer, trial);
    TdChannel td = request.channel == ChannelModel::kIid
                       ? gen_td_channel(cfg, rng)
                       : gen_exp_pdp_channel(cfg, request.pdp_decay, rng);
    if (cfg.correlation != 0.0) td = apply_bs_correlation(td, cfg.correlation);
    const FdChannel truth = td_to_fd(td, cfg);

    // Labels, data noise and CSI noise, drawn once and scaled per SNR point.
    std::vector<unsigned> labels(nsc * static_cast<std::size_t>(u));
    for (std::size_t i = 0; i < labels.size(); i += 16) {
      std::uint64_t word = rng.bits64();
      for (std::size_t k = i; k < std::min(labels.size(), i + 16); ++k, word >>= 4)
        labels[k] = static_cast<unsigned>(word & 0xF);
    }
    std::vector<CVector> noise(nsc, CVector(b));
    for (auto& n : noise)
      for (int r = 0; r < b; ++r) n(r) = rng.complex_normal(1.0);
    std::vector<CMatrix> csi_noise;
    if (request.csi != CsiMode::kPerfect) {
      csi_noise.assign(nsc, CMatrix(b, u));
      for (auto& e : csi_noise)
        for (int c = 0; c < u; ++c)
          for (int r = 0; r < b; ++r) e(r, c) = rng.complex_normal(1.0);
    }

    std::vector<CVector> tx(nsc, CVector(u));
    for (std::size_t i = 0; i < nsc; ++i)
      for (int k = 0; k < u; ++k) tx[i](k) = qam.point(labels[i * static_cast<std::size_t>(u) + static_cast<std::size_t>(k)]);

    auto& counts = errors[trial];
    counts.assign(nvar * nsnr, 0);
    for (std::size_t si = 0; si < nsnr; ++si) {
      const double n0 = es / db_to_linear(request.snr_db[si]);
      const double noise_amp = std::sqrt(n0);

      FdChannel est;
      switch (request.csi) {
        case CsiMode::kPerfect: est = truth; break;
        case CsiMode::kEstimated: {
          std::vector<CMatrix> obs(nsc);
          for (std::size_t i = 0; i < nsc; ++i) obs[i] = truth.h[i] * pilots + noise_amp * csi_noise[i];
          est = ml_channel_estimate(obs, truth.subcarriers, pilots, n0);
          break;
        }
        case CsiMode::kPerturbed:
          est = truth;
          for (std::size_t i = 0; i < nsc; ++i) est.h[i] += cfg.csi_error_std * csi_noise[i];
          est.csi_sigma = cfg.csi_error_std;
          break;
      }

      std::vector<CVector> matched(nsc);
      for (std::size_t i = 0; i < nsc; ++i)
        matched[i] = est.h[i].adjoint() * (truth.h[i] * tx[i] + noise_amp * noise[i]);

      const GramSet bf = gram_brute_force(est);
      for (std::size_t vi = 0; vi < nvar; ++vi) {
        const auto& pv = prepared[vi];
        const GramSet grams = pv.plan ? derive_grams(pv.variant.method, bf, *pv.plan, pv.exact.get()) : bf;
        std::uint64_t errs = 0;
        for (std::size_t i = 0; i < nsc; ++i) {
          CVector s_hat;
          try {
            s_hat = mmse_solve(grams.grams[i], matched[i], n0 / es);
          } catch (const SingularSystemError&) {
            // An interpolated Gram can lose definiteness; count every bit as wrong.
            errs += static_cast<std::uint64_t>(u) * QamConstellation::kBitsPerSymbol;
            continue;
          }
          for (int k = 0; k < u; ++k) {
            const unsigned sent = labels[i * static_cast<std::size_t>(u) + static_cast<std::size_t>(k)];
            errs += static_cast<std::uint64_t>(std::popcount(qam.decide(s_hat(k)) ^ sent));
          }
        }
        counts[vi * nsnr + si] = errs;
      }
    }
  });

  BerResult result;
  for (std::size_t vi = 0; vi < nvar; ++vi) {
    BerCurve curve;
    curve.variant = prepared[vi].variant;
    if (prepared[vi].exact) curve.diagnostic = prepared[vi].exact->diagnostic();
    for (std::size_t si = 0; si < nsnr; ++si) {
      BerPoint p;
      p.snr_db = request.snr_db[si];
      for (const auto& c : errors) p.bit_errors += c[vi * nsnr + si];
      p.total_bits = bits_per_trial * request.trials;
      curve.points.push_back(p);
    }
    result.curves.push_back(std::move(curve));
  }
  return result;
}

std::optional<double> required_snr_db(const BerCurve& curve, double target_ber) {
  const auto& pts = curve.points;
  if (pts.empty()) return std::nullopt;
  if (pts.front().ber() <= target_ber) return pts.front().snr_db;
  auto log_ber = [](const BerPoint& p) {
    const double floor = 0.5 / static_cast<double>(std::max<std::uint64_t>(p.total_bits, 1));
    return std::log10(std::max(p.ber(), floor));
  };
  const double target = std::log10(target_ber);
  for (std::size_t i = 1; i < pts.size(); ++i) {
    if (pts[i].ber() <= target_ber) {
      const double y0 = log_ber(pts[i - 1]);
      const double y1 = log_ber(pts[i]);
      const double t = (y0 == y1) ? 1.0 : (y0 - target) / (y0 - y1);
      return pts[i - 1].snr_db + t * (pts[i].snr_db - pts[i - 1].snr_db);
    }
  }
  return std::nullopt;
}

}  // namespace gramint
