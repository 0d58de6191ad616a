#include "gramint/grammat.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace gramint {

std::string_view to_string(GramMethod method) {
  switch (method) {
    case GramMethod::kBruteForce: return "bf";
    case GramMethod::kExact: return "exact";
    case GramMethod::kOrder0: return "order0";
    case GramMethod::kOrder1: return "order1";
  }
  return "unknown";
}

GramMethod parse_gram_method(std::string_view name) {
  if (name == "bf") return GramMethod::kBruteForce;
  if (name == "exact") return GramMethod::kExact;
  if (name == "order0") return GramMethod::kOrder0;
  if (name == "order1") return GramMethod::kOrder1;
  throw std::invalid_argument("unknown gram method '" + std::string(name) + "'");
}

// ---------------------------------------------------------------------------
// Base-point planning

BasePointPlan::BasePointPlan(std::vector<int> active_set,
                             std::vector<std::size_t> positions)
    : active_(std::move(active_set)), base_positions_(std::move(positions)) {
  if (active_.empty()) throw std::invalid_argument("active set is empty");
  if (base_positions_.empty()) throw std::invalid_argument("plan needs at least one base point");
  for (std::size_t k = 0; k < base_positions_.size(); ++k) {
    if (base_positions_[k] >= active_.size())
      throw std::invalid_argument("base point position outside active set");
    if (k > 0 && base_positions_[k] <= base_positions_[k - 1])
      throw std::invalid_argument("base points must be strictly increasing");
  }
  for (const auto pos : base_positions_) base_points_.push_back(active_[pos]);

  std::size_t k = 0;  // first base position >= i
  for (std::size_t i = 0; i < active_.size(); ++i) {
    while (k < base_positions_.size() && base_positions_[k] < i) ++k;
    if (k < base_positions_.size() && base_positions_[k] == i) continue;

    Target t{};
    t.position = i;
    if (k == 0 || k == base_positions_.size()) {
      const std::size_t edge = (k == 0) ? base_positions_.front() : base_positions_.back();
      t.nearest = t.lower = t.upper = edge;
      t.lambda = 1.0;
      t.bracketed = false;
    } else {
      t.lower = base_positions_[k - 1];
      t.upper = base_positions_[k];
      const int w = active_[i];
      const int lo = active_[t.lower];
      const int hi = active_[t.upper];
      t.nearest = (w - lo <= hi - w) ? t.lower : t.upper;
      t.lambda = static_cast<double>(hi - w) / static_cast<double>(hi - lo);
      t.bracketed = true;
    }
    targets_.push_back(t);
  }
}

BasePointPlan BasePointPlan::uniform(std::vector<int> active_set, std::size_t count) {
  const std::size_t n = active_set.size();
  if (count < 1 || count > n)
    throw std::invalid_argument("base point count must lie in [1, |active set|]");
  std::vector<std::size_t> positions;
  positions.reserve(count);
  if (count == 1) {
    positions.push_back((n - 1) / 2);
  } else {
    for (std::size_t k = 0; k < count; ++k) {
      // round(k (n-1) / (count-1)) in integer arithmetic
      const std::size_t num = 2 * k * (n - 1) + (count - 1);
      positions.push_back(num / (2 * (count - 1)));
    }
  }
  return BasePointPlan(std::move(active_set), std::move(positions));
}

BasePointPlan BasePointPlan::from_base_points(std::vector<int> active_set,
                                              std::vector<int> base_points) {
  std::vector<std::size_t> positions;
  positions.reserve(base_points.size());
  for (const int p : base_points) {
    const auto it = std::lower_bound(active_set.begin(), active_set.end(), p);
    if (it == active_set.end() || *it != p)
      throw std::invalid_argument("base point " + std::to_string(p) + " is not an active subcarrier");
    positions.push_back(static_cast<std::size_t>(it - active_set.begin()));
  }
  return BasePointPlan(std::move(active_set), std::move(positions));
}

std::vector<int> BasePointPlan::target_subcarriers() const {
  std::vector<int> out;
  out.reserve(targets_.size());
  for (const auto& t : targets_) out.push_back(active_[t.position]);
  return out;
}

std::vector<int> BasePointPlan::spacings() const {
  std::vector<int> d;
  for (std::size_t k = 1; k < base_points_.size(); ++k)
    d.push_back(base_points_[k] - base_points_[k - 1]);
  return d;
}

int BasePointPlan::max_distance() const {
  int d_max = 0;
  for (const int d : spacings()) d_max = std::max(d_max, d / 2);
  return d_max;
}

std::size_t BasePointPlan::edge_target_count() const {
  return static_cast<std::size_t>(std::count_if(
      targets_.begin(), targets_.end(), [](const Target& t) { return !t.bracketed; }));
}

// ---------------------------------------------------------------------------
// Kernels

namespace {

void check_alignment(const FdChannel& fd, const BasePointPlan& plan) {
  if (fd.subcarriers != plan.active_set())
    throw std::invalid_argument("channel subcarriers do not match the plan's active set");
}

CMatrix gram_of(const CMatrix& h, OpCounter* counter) {
  const auto b = static_cast<std::uint64_t>(h.rows());
  const Eigen::Index u = h.cols();
  CMatrix g(u, u);
  for (Eigen::Index n = 0; n < u; ++n) {
    g(n, n) = h.col(n).squaredNorm();
    if (counter) counter->add(2 * b);
    for (Eigen::Index m = 0; m < n; ++m) {
      const cdouble v = h.col(m).dot(h.col(n));  // conj(h_m)^T h_n
      if (counter) counter->add(4 * b);
      g(m, n) = v;
      g(n, m) = std::conj(v);
    }
  }
  return g;
}

GramSet base_only(const FdChannel& fd, const BasePointPlan& plan, GramMethod method,
                  OpCounter* counter) {
  check_alignment(fd, plan);
  GramSet out;
  out.subcarriers = fd.subcarriers;
  out.method = method;
  out.grams.resize(fd.size());
  for (const auto pos : plan.base_positions()) out.grams[pos] = gram_of(fd.h[pos], counter);
  return out;
}

}  // namespace

GramSet gram_brute_force(const FdChannel& fd, OpCounter* counter) {
  GramSet out;
  out.subcarriers = fd.subcarriers;
  out.method = GramMethod::kBruteForce;
  out.grams.reserve(fd.size());
  for (const auto& h : fd.h) out.grams.push_back(gram_of(h, counter));
  return out;
}

CMatrix build_dft_submatrix(std::span<const int> rows, int delay_spread, int fft_size) {
  if (delay_spread < 1) throw std::invalid_argument("delay spread must be positive");
  const int cols = 2 * delay_spread - 1;
  if (cols > fft_size) throw std::invalid_argument("2L-1 exceeds the DFT size");
  const double scale = 1.0 / std::sqrt(static_cast<double>(fft_size));
  CMatrix f(static_cast<Eigen::Index>(rows.size()), cols);
  for (std::size_t r = 0; r < rows.size(); ++r) {
    if (rows[r] < 0 || rows[r] >= fft_size)
      throw std::invalid_argument("row index outside [0, fft_size)");
    for (int c = 0; c < cols; ++c) {
      const long long col = c < delay_spread ? c : fft_size - delay_spread + 1 + (c - delay_spread);
      const long long k = (static_cast<long long>(rows[r]) * col) % fft_size;
      f(static_cast<Eigen::Index>(r), c) = scale * std::polar(1.0, -2.0 * kPi * k / fft_size);
    }
  }
  return f;
}

ExactInterpolator::ExactInterpolator(const BasePointPlan& plan, int delay_spread,
                                     int fft_size, ExactInterpOptions options)
    : plan_(plan) {
  const int cols = 2 * delay_spread - 1;
  underdetermined_ = plan.base_points().size() < static_cast<std::size_t>(cols);

  const CMatrix f_base = build_dft_submatrix(plan.base_points(), delay_spread, fft_size);
  const auto targets = plan.target_subcarriers();
  const CMatrix f_target = build_dft_submatrix(targets, delay_spread, fft_size);

  Eigen::BDCSVD<CMatrix> svd(f_base, Eigen::ComputeThinU | Eigen::ComputeThinV);
  const Eigen::VectorXd& s = svd.singularValues();
  const double s_max = s.size() > 0 ? s(0) : 0.0;
  const double s_min = s.size() > 0 ? s(s.size() - 1) : 0.0;
  condition_number_ = s_min > 0.0 ? s_max / s_min : std::numeric_limits<double>::infinity();

  const double cutoff = options.rcond * s_max;
  rank_ = 0;
  for (Eigen::Index i = 0; i < s.size(); ++i)
    if (s(i) > cutoff) ++rank_;
  truncated_ = rank_ < s.size();
  if (truncated_ && options.reject_rank_deficient) {
    std::ostringstream msg;
    msg << "base-point DFT matrix is numerically rank deficient: condition number "
        << condition_number_ << ", rank " << rank_ << " of " << s.size();
    throw RankDeficiencyError(msg.str(), condition_number_);
  }

  Eigen::VectorXd inv_s = Eigen::VectorXd::Zero(s.size());
  for (Eigen::Index i = 0; i < rank_; ++i) inv_s(i) = 1.0 / s(i);
  const CMatrix pinv = svd.matrixV() * inv_s.asDiagonal() * svd.matrixU().adjoint();
  op_ = f_target * pinv;
}

std::string ExactInterpolator::diagnostic() const {
  std::ostringstream out;
  out << "cond=" << condition_number_ << " rank=" << rank_
      << (truncated_ ? " truncated" : "") << (underdetermined_ ? " underdetermined" : "");
  return out.str();
}

GramSet ExactInterpolator::apply(const FdChannel& fd, OpCounter* counter) const {
  GramSet out = base_only(fd, plan_, GramMethod::kExact, counter);
  interpolate(out, counter);
  return out;
}

void ExactInterpolator::interpolate(GramSet& out, OpCounter* counter) const {
  const auto& base = plan_.base_positions();
  const auto& targets = plan_.targets();
  if (targets.empty()) return;

  const Eigen::Index u = out.grams[base.front()].rows();
  const Eigen::Index entries = u * (u + 1) / 2;
  CMatrix g_base(static_cast<Eigen::Index>(base.size()), entries);
  for (std::size_t k = 0; k < base.size(); ++k) {
    Eigen::Index e = 0;
    for (Eigen::Index n = 0; n < u; ++n)
      for (Eigen::Index m = 0; m <= n; ++m) g_base(static_cast<Eigen::Index>(k), e++) = out.grams[base[k]](m, n);
  }
  const CMatrix g_target = op_ * g_base;
  if (counter)
    counter->add(4ULL * static_cast<std::uint64_t>(op_.rows()) *
                 static_cast<std::uint64_t>(op_.cols()) * static_cast<std::uint64_t>(entries));

  for (std::size_t t = 0; t < targets.size(); ++t) {
    CMatrix g(u, u);
    Eigen::Index e = 0;
    for (Eigen::Index n = 0; n < u; ++n) {
      for (Eigen::Index m = 0; m <= n; ++m) {
        const cdouble v = g_target(static_cast<Eigen::Index>(t), e++);
        if (m == n) {
          g(n, n) = v.real();
        } else {
          g(m, n) = v;
          g(n, m) = std::conj(v);
        }
      }
    }
    out.grams[targets[t].position] = std::move(g);
  }
}

GramSet gram_exact_interp(const FdChannel& fd, const BasePointPlan& plan, int delay_spread,
                          int fft_size, ExactInterpOptions options, OpCounter* counter) {
  return ExactInterpolator(plan, delay_spread, fft_size, options).apply(fd, counter);
}

namespace {

void fill_0th(GramSet& out, const BasePointPlan& plan) {
  for (const auto& t : plan.targets()) out.grams[t.position] = out.grams[t.nearest];
}

void fill_1st(GramSet& out, const BasePointPlan& plan, OpCounter* counter) {
  for (const auto& t : plan.targets()) {
    if (!t.bracketed) {
      out.grams[t.position] = out.grams[t.nearest];
      continue;
    }
    const CMatrix& lo = out.grams[t.lower];
    const CMatrix& hi = out.grams[t.upper];
    const Eigen::Index u = lo.rows();
    const double a = t.lambda;
    const double b = 1.0 - t.lambda;
    CMatrix g(u, u);
    for (Eigen::Index n = 0; n < u; ++n) {
      for (Eigen::Index m = 0; m <= n; ++m) {
        const cdouble v = a * lo(m, n) + b * hi(m, n);
        g(m, n) = v;
        g(n, m) = std::conj(v);
      }
    }
    if (counter) counter->add(4ULL * static_cast<std::uint64_t>(u * (u + 1) / 2));
    out.grams[t.position] = std::move(g);
  }
}

}  // namespace

GramSet gram_interp_0th(const FdChannel& fd, const BasePointPlan& plan, OpCounter* counter) {
  GramSet out = base_only(fd, plan, GramMethod::kOrder0, counter);
  fill_0th(out, plan);
  return out;
}

GramSet gram_interp_1st(const FdChannel& fd, const BasePointPlan& plan, OpCounter* counter) {
  GramSet out = base_only(fd, plan, GramMethod::kOrder1, counter);
  fill_1st(out, plan, counter);
  return out;
}

GramSet derive_grams(GramMethod method, const GramSet& brute_force, const BasePointPlan& plan,
                     const ExactInterpolator* exact) {
  if (brute_force.subcarriers != plan.active_set())
    throw std::invalid_argument("gram set subcarriers do not match the plan's active set");
  if (method == GramMethod::kBruteForce) return brute_force;
  GramSet out;
  out.subcarriers = brute_force.subcarriers;
  out.method = method;
  out.grams.resize(brute_force.size());
  for (const auto pos : plan.base_positions()) out.grams[pos] = brute_force.grams[pos];
  switch (method) {
    case GramMethod::kOrder0: fill_0th(out, plan); break;
    case GramMethod::kOrder1: fill_1st(out, plan, nullptr); break;
    case GramMethod::kExact:
      if (!exact) throw std::invalid_argument("exact interpolation needs a precomputed operator");
      exact->interpolate(out);
      break;
    case GramMethod::kBruteForce: break;
  }
  return out;
}

GramSet compute_grams(GramMethod method, const FdChannel& fd, const BasePointPlan& plan,
                      const ExactInterpolator* exact, OpCounter* counter) {
  switch (method) {
    case GramMethod::kBruteForce: return gram_brute_force(fd, counter);
    case GramMethod::kOrder0: return gram_interp_0th(fd, plan, counter);
    case GramMethod::kOrder1: return gram_interp_1st(fd, plan, counter);
    case GramMethod::kExact:
      if (!exact) throw std::invalid_argument("exact interpolation needs a precomputed operator");
      return exact->apply(fd, counter);
  }
  throw std::invalid_argument("unknown gram method");
}

}  // namespace gramint
