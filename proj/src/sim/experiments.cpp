#include "gramint/sim/experiments.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <set>

#include "gramint/ber.hpp"
#include "gramint/opcount.hpp"
#include "gramint/rng.hpp"
#include "gramint/theory.hpp"

namespace gramint::sim {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

std::int64_t i64(std::uint64_t v) { return static_cast<std::int64_t>(v); }

std::string describe_active_set(const SystemConfig& sys) {
  return std::to_string(sys.active_set.size()) + " contiguous subcarriers " +
         std::to_string(sys.active_set.front()) + ".." + std::to_string(sys.active_set.back()) +
         " of W=" + std::to_string(sys.fft_size);
}

std::string seeding_note() {
  return "trial t of stream s uses mt19937_64 seeded with "
         "stream_seed(root,s,t)=mix(mix(root^mix(s))^mix(t+0x9e3779b97f4a7c15)), mix=splitmix64; "
         "streams: mse_oracle=1 ber=2 validate=3";
}

}  // namespace

void stamp_metadata(ResultTable& table, const ExperimentConfig& config, const RunOptions& options) {
  table.set_meta("experiment", std::string(to_string(config.kind)));
  table.set_meta("artifact_version", kArtifactVersion);
  table.set_meta("config_hash", config_hash(config));
  table.set_meta("seed", std::to_string(config.seed));
  table.set_meta("scale", std::string(to_string(config.scale)));
  table.set_meta("seeding", seeding_note());
  if (options.timestamp) table.set_meta("generated", *options.timestamp);
  table.set_meta("config", serialize(config));
}

std::size_t reference_base_points(double fraction, std::size_t num_active, std::size_t num_bs,
                                  std::size_t num_users) {
  const double bf = static_cast<double>(cost_bf(num_active, num_bs, num_users));
  std::size_t best = 1;
  double best_gap = std::numeric_limits<double>::infinity();
  for (std::size_t p = 1; p <= num_active; ++p) {
    const double gap = std::abs(static_cast<double>(cost_1st(num_active, p, num_bs, num_users)) / bf - fraction);
    if (gap < best_gap) {
      best_gap = gap;
      best = p;
    }
  }
  return best;
}

// ---------------------------------------------------------------------------

ResultTable run_mse_experiment(const ExperimentConfig& config, const RunOptions& options) {
  validate_config(config);
  const auto& m = config.mse;
  ResultTable t;
  t.name = "mse";
  t.columns = {"scenario", "bs_antennas", "delay_spread", "correlation", "csi_error_std",
               "theory_mse0", "theory_mse1", "empirical_mse0", "stderr_mse0",
               "empirical_mse1", "stderr_mse1", "rel_gap0", "rel_gap1", "trials"};

  std::vector<int> bases = m.base_points;
  std::sort(bases.begin(), bases.end());
  int nearest = bases.front();
  for (const int p : bases)
    if (std::abs(p - m.target) < std::abs(nearest - m.target)) nearest = p;
  const bool bracketed = bases.size() == 2 && bases[0] < m.target && m.target < bases[1];

  std::uint64_t row = 0;
  for (const bool ideal : {true, false}) {
    for (const int l : m.delay_spreads) {
      for (const int b : m.bs_sweep) {
        MseParams p;
        p.num_bs_antennas = b;
        p.delay_spread = l;
        p.fft_size = m.fft_size;
        p.correlation = ideal ? 0.0 : m.nonideal_correlation;
        p.csi_error_std = ideal ? 0.0 : sigma_from_snr(db_to_linear(m.csi_snr_db), b, config.scenario.users);

        const double th0 = mse_0th(p, nearest, m.target);
        const double th1 = bracketed ? mse_1st(p, bases[0], bases[1], m.target) : kNaN;

        OracleOptions o;
        o.trials = m.trials;
        o.seed = stream_seed(config.seed, static_cast<std::uint64_t>(StreamId::kMseOracle), row++);
        o.entry_row = m.entry_row;
        o.entry_col = m.entry_col;
        o.threads = options.threads;
        const auto emp = mse_oracle(p, MseGeometry{bases, m.target}, o);
        const double e1 = bracketed ? emp.order1.mean : kNaN;
        const double s1 = bracketed ? emp.order1.std_error : kNaN;

        t.add_row({std::string(ideal ? "ideal" : "nonideal"), std::int64_t{b}, std::int64_t{l},
                   p.correlation, p.csi_error_std, th0, th1, emp.order0.mean, emp.order0.std_error,
                   e1, s1, std::abs(emp.order0.mean - th0) / th0,
                   bracketed ? std::abs(e1 - th1) / th1 : kNaN, static_cast<std::int64_t>(m.trials)});
      }
    }
  }
  stamp_metadata(t, config, options);
  t.set_meta("geometry", "base points " + std::to_string(bases.front()) +
                             (bases.size() == 2 ? "," + std::to_string(bases[1]) : std::string()) +
                             ", target " + std::to_string(m.target) + ", entry (" +
                             std::to_string(m.entry_row) + "," + std::to_string(m.entry_col) + ")");
  t.set_meta("nonideal_sigma", "sigma=sqrt(U/(B*snr)) with U=" + std::to_string(config.scenario.users) +
                                   ", snr_db=" + format_cell(m.csi_snr_db));
  return t;
}

// ---------------------------------------------------------------------------

ResultTable run_ber_experiment(const ExperimentConfig& config, const RunOptions& options) {
  validate_config(config);
  const auto& s = config.ber;
  const SystemConfig sys = config.scenario.system();
  ResultTable t;
  t.name = "ber";
  t.columns = {"csi", "method", "base_points", "snr_db", "bit_errors", "total_bits", "ber"};

  std::vector<GramVariant> variants{{GramMethod::kBruteForce, 0}};
  for (const auto method : s.methods) {
    if (method == GramMethod::kBruteForce) continue;
    for (const auto n : s.base_point_counts) variants.push_back({method, n});
  }

  std::vector<std::string> diagnostics;
  for (const auto csi : s.csi_modes) {
    BerRequest req;
    req.cfg = sys;
    req.channel = config.scenario.channel;
    req.pdp_decay = config.scenario.pdp_decay;
    req.csi = csi;
    req.variants = variants;
    req.snr_db = s.snr_db;
    req.trials = s.trials;
    req.seed = config.seed;
    req.threads = options.threads;
    const BerResult res = simulate_uplink_ber(req);
    for (const auto& curve : res.curves) {
      for (const auto& p : curve.points)
        t.add_row({std::string(to_string(csi)), std::string(to_string(curve.variant.method)),
                   static_cast<std::int64_t>(curve.variant.base_points), p.snr_db, i64(p.bit_errors),
                   i64(p.total_bits), p.ber()});
      if (!curve.diagnostic.empty() && csi == s.csi_modes.front())
        diagnostics.push_back(curve.variant.label() + " " + curve.diagnostic);
    }
  }
  stamp_metadata(t, config, options);
  t.set_meta("snr_convention", kSnrConvention);
  t.set_meta("active_set", describe_active_set(sys));
  t.set_meta("modulation", "16-QAM Gray, MMSE detection, uncoded");
  t.set_meta("csi_estimated", "ML from one U-slot orthogonal pilot block per subcarrier, pilot entry energy Es");
  t.set_meta("singular_gram", "an interpolated Gram that is not positive definite after regularization counts all its bits as errors");
  std::string diag;
  for (const auto& d : diagnostics) diag += (diag.empty() ? "" : "; ") + d;
  if (!diag.empty()) t.set_meta("exact_operator", diag);
  return t;
}

// ---------------------------------------------------------------------------

ResultTable run_complexity_report(const ExperimentConfig& config, const RunOptions& options) {
  validate_config(config);
  const SystemConfig sys = config.scenario.system();
  const std::size_t active = sys.active_set.size();
  const auto b = static_cast<std::uint64_t>(sys.num_bs_antennas);
  const auto u = static_cast<std::uint64_t>(sys.num_users);
  ResultTable t;
  t.name = "complexity";
  t.columns = {"base_fraction", "base_points", "method", "analytical", "measured", "ratio_vs_bf",
               "gram_share", "detection_total"};

  std::optional<FdChannel> fd;
  if (config.complexity.measure) {
    Rng rng(config.seed, StreamId::kValidate, 0);
    fd = td_to_fd(gen_td_channel(sys, rng), sys);
  }
  for (const double f : config.complexity.base_point_fractions) {
    const auto count = std::clamp<std::size_t>(
        static_cast<std::size_t>(std::llround(f * static_cast<double>(active))), 1, active);
    const auto plan = BasePointPlan::uniform(sys.active_set, count);
    for (const auto method : {GramMethod::kBruteForce, GramMethod::kExact, GramMethod::kOrder0,
                              GramMethod::kOrder1}) {
      const auto r = complexity_report(method, plan, b, u);
      std::int64_t measured = -1;
      if (fd) measured = i64(instrumented_count(method, *fd, plan, sys.delay_spread, sys.fft_size));
      t.add_row({f, static_cast<std::int64_t>(count), std::string(to_string(method)), i64(r.analytical),
                 measured, r.ratio_vs_bf, r.gram_share, i64(r.detection_total)});
    }
  }
  stamp_metadata(t, config, options);
  t.set_meta("cost_unit", "real multiplications; complex product = 4, squared magnitude = 2");
  t.set_meta("detection_model", "total = gram + matched filter 4*|Omega|*B*U + inversion 4*|Omega|*U^3");
  t.set_meta("exact_precompute", "interpolation operator construction excluded");
  t.set_meta("order1_edges", "targets outside the outer base points are copied; analytical order1 subtracts 2*edges*U*(U+1)");
  t.set_meta("measured", config.complexity.measure ? "instrumented kernel counters" : "-1 (not measured)");
  return t;
}

// ---------------------------------------------------------------------------

ResultTable run_tradeoff_experiment(const ExperimentConfig& config, const RunOptions& options) {
  validate_config(config);
  const auto& s = config.tradeoff;
  const SystemConfig sys = config.scenario.system();
  const std::size_t active = sys.active_set.size();
  const auto b = static_cast<std::size_t>(sys.num_bs_antennas);
  const auto u = static_cast<std::size_t>(sys.num_users);

  const std::size_t reference = reference_base_points(s.reference_fraction, active, b, u);
  std::set<std::size_t> counts(s.base_point_counts.begin(), s.base_point_counts.end());
  counts.insert(reference);

  BerRequest req;
  req.cfg = sys;
  req.channel = config.scenario.channel;
  req.pdp_decay = config.scenario.pdp_decay;
  req.csi = s.csi;
  req.variants.push_back({GramMethod::kBruteForce, 0});
  for (const auto method : {GramMethod::kOrder0, GramMethod::kOrder1})
    for (const auto n : counts) req.variants.push_back({method, n});
  req.snr_db = s.snr_db;
  req.trials = s.trials;
  req.seed = config.seed;
  req.threads = options.threads;
  const BerResult res = simulate_uplink_ber(req);

  ResultTable t;
  t.name = "tradeoff";
  t.columns = {"method", "base_points", "complexity", "complexity_fraction", "required_snr_db",
               "reachable", "snr_gap_vs_bf_db", "reference"};
  const double bf_cost = static_cast<double>(cost_bf(active, b, u));
  const auto bf_snr = required_snr_db(res.curves.front(), s.target_ber);
  for (const auto& curve : res.curves) {
    const auto& v = curve.variant;
    std::uint64_t cost = 0;
    if (v.method == GramMethod::kBruteForce) {
      cost = cost_bf(active, b, u);
    } else {
      cost = analytical_cost(v.method, BasePointPlan::uniform(sys.active_set, v.base_points), b, u);
    }
    const auto snr = required_snr_db(curve, s.target_ber);
    const double gap = (snr && bf_snr) ? *snr - *bf_snr : kNaN;
    t.add_row({std::string(to_string(v.method)), static_cast<std::int64_t>(v.base_points), i64(cost),
               static_cast<double>(cost) / bf_cost, snr ? *snr : kNaN, std::int64_t{snr ? 1 : 0}, gap,
               std::int64_t{v.method == GramMethod::kOrder1 && v.base_points == reference ? 1 : 0}});
  }
  stamp_metadata(t, config, options);
  t.set_meta("snr_convention", kSnrConvention);
  t.set_meta("active_set", describe_active_set(sys));
  t.set_meta("target_ber", format_cell(s.target_ber));
  t.set_meta("required_snr", "linear interpolation of log10(BER) between bracketing grid points; "
                             "reachable=0 and required_snr_db=nan when the target is not met on the grid");
  t.set_meta("sweep_assumption", "base points swept from L up to |Omega|");
  t.set_meta("reference_base_points", std::to_string(reference) + " (order1 cost closest to " +
                                          format_cell(s.reference_fraction) + " of C_BF)");
  return t;
}

// ---------------------------------------------------------------------------

ResultTable run_experiment(const ExperimentConfig& config, const RunOptions& options) {
  switch (config.kind) {
    case ExperimentKind::kMse: return run_mse_experiment(config, options);
    case ExperimentKind::kBer: return run_ber_experiment(config, options);
    case ExperimentKind::kComplexity: return run_complexity_report(config, options);
    case ExperimentKind::kTradeoff: return run_tradeoff_experiment(config, options);
    case ExperimentKind::kValidate: return run_validate(config, options);
  }
  throw std::logic_error("unhandled experiment kind");
}

PlotSpec plot_spec(const ExperimentConfig& config, const ResultTable& table) {
  PlotSpec p;
  switch (config.kind) {
    case ExperimentKind::kMse:
      p.title = "Gram entry MSE vs. BS antennas";
      p.x_label = "BS antennas B";
      p.y_label = "MSE";
      p.x_scale = "log2";
      p.y_scale = "log10";
      for (const char* scen : {"ideal", "nonideal"})
        for (const int l : config.mse.delay_spreads) {
          const std::string tag = std::string(scen) + " L=" + std::to_string(l);
          const std::vector<std::pair<std::string, std::string>> where{
              {"scenario", scen}, {"delay_spread", std::to_string(l)}};
          p.series.push_back({"order0 theory " + tag, "bs_antennas", "theory_mse0", where});
          p.series.push_back({"order1 theory " + tag, "bs_antennas", "theory_mse1", where});
          p.series.push_back({"order0 sim " + tag, "bs_antennas", "empirical_mse0", where});
          p.series.push_back({"order1 sim " + tag, "bs_antennas", "empirical_mse1", where});
        }
      break;
    case ExperimentKind::kBer: {
      p.title = "Uncoded BER, MMSE detection";
      p.x_label = "SNR [dB]";
      p.y_label = "BER";
      p.y_scale = "log10";
      std::set<std::tuple<std::string, std::string, std::string>> seen;
      for (std::size_t r = 0; r < table.rows.size(); ++r) {
        const auto key = std::make_tuple(table.text(r, "csi"), table.text(r, "method"),
                                         format_cell(table.rows[r][table.column("base_points")]));
        if (!seen.insert(key).second) continue;
        const auto& [csi, method, base] = key;
        std::string label = csi + " " + method + (method == "bf" ? "" : " |P|=" + base);
        p.series.push_back({label, "snr_db", "ber", {{"csi", csi}, {"method", method}, {"base_points", base}}});
      }
      break;
    }
    case ExperimentKind::kComplexity:
      p.title = "Gram cost vs. base points";
      p.x_label = "base point fraction";
      p.y_label = "real multiplications";
      for (const char* m : {"bf", "exact", "order0", "order1"}) {
        p.series.push_back({std::string(m) + " gram", "base_fraction", "analytical", {{"method", m}}});
        p.series.push_back({std::string(m) + " detection total", "base_fraction", "detection_total", {{"method", m}}});
      }
      break;
    case ExperimentKind::kTradeoff:
      p.title = "Required SNR vs. complexity";
      p.x_label = "complexity / C_BF";
      p.y_label = "required SNR [dB]";
      for (const char* m : {"bf", "order0", "order1"})
        p.series.push_back({m, "complexity_fraction", "required_snr_db", {{"method", m}}});
      break;
    case ExperimentKind::kValidate:
      p.title = "Property suite";
      p.x_label = "property";
      p.y_label = "passed";
      p.series.push_back({"passed", "property", "passed", {}});
      break;
  }
  return p;
}

}  // namespace gramint::sim
