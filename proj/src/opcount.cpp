#include "gramint/opcount.hpp"

#include <stdexcept>

namespace gramint {

std::uint64_t cost_bf(std::uint64_t num_active, std::uint64_t num_bs, std::uint64_t num_users) {
  return 2 * num_active * num_bs * num_users * num_users;
}

std::uint64_t cost_exact(std::uint64_t num_active, std::uint64_t num_base,
                         std::uint64_t num_bs, std::uint64_t num_users) {
  if (num_base > num_active) throw std::invalid_argument("|P| exceeds |Omega|");
  const std::uint64_t rest = num_active - num_base;
  return 2 * num_base * (rest + num_bs) * num_users * num_users +
         2 * num_base * rest * num_users;
}

std::uint64_t cost_0th(std::uint64_t num_base, std::uint64_t num_bs, std::uint64_t num_users) {
  return 2 * num_base * num_bs * num_users * num_users;
}

std::uint64_t cost_1st(std::uint64_t num_active, std::uint64_t num_base,
                       std::uint64_t num_bs, std::uint64_t num_users) {
  if (num_base > num_active) throw std::invalid_argument("|P| exceeds |Omega|");
  return cost_0th(num_base, num_bs, num_users) +
         2 * (num_active - num_base) * num_users * (num_users + 1);
}

std::uint64_t cost_1st_with_edges(std::uint64_t num_active, std::uint64_t num_base,
                                  std::uint64_t num_edge_targets, std::uint64_t num_bs,
                                  std::uint64_t num_users) {
  return cost_1st(num_active, num_base, num_bs, num_users) -
         2 * num_edge_targets * num_users * (num_users + 1);
}

std::uint64_t analytical_cost(GramMethod method, const BasePointPlan& plan,
                              std::uint64_t num_bs, std::uint64_t num_users) {
  const std::uint64_t active = plan.active_set().size();
  const std::uint64_t base = plan.base_points().size();
  switch (method) {
    case GramMethod::kBruteForce: return cost_bf(active, num_bs, num_users);
    case GramMethod::kExact: return cost_exact(active, base, num_bs, num_users);
    case GramMethod::kOrder0: return cost_0th(base, num_bs, num_users);
    case GramMethod::kOrder1:
      return cost_1st_with_edges(active, base, plan.edge_target_count(), num_bs, num_users);
  }
  throw std::invalid_argument("unknown gram method");
}

std::uint64_t instrumented_count(GramMethod method, const FdChannel& fd,
                                 const BasePointPlan& plan, int delay_spread, int fft_size) {
  OpCounter counter;
  if (method == GramMethod::kExact) {
    const ExactInterpolator exact(plan, delay_spread, fft_size);
    exact.apply(fd, &counter);
  } else {
    compute_grams(method, fd, plan, nullptr, &counter);
  }
  return counter.real_mults;
}

std::uint64_t cost_matched_filter(std::uint64_t num_active, std::uint64_t num_bs,
                                  std::uint64_t num_users) {
  return 4 * num_active * num_bs * num_users;
}

std::uint64_t cost_inversion(std::uint64_t num_active, std::uint64_t num_users) {
  return 4 * num_active * num_users * num_users * num_users;
}

ComplexityReport complexity_report(GramMethod method, const BasePointPlan& plan,
                                   std::uint64_t num_bs, std::uint64_t num_users) {
  ComplexityReport r;
  r.method = method;
  r.analytical = analytical_cost(method, plan, num_bs, num_users);
  const std::uint64_t active = plan.active_set().size();
  const auto bf = cost_bf(active, num_bs, num_users);
  r.ratio_vs_bf = static_cast<double>(r.analytical) / static_cast<double>(bf);
  r.detection_total = r.analytical + cost_matched_filter(active, num_bs, num_users) +
                      cost_inversion(active, num_users);
  r.gram_share = static_cast<double>(r.analytical) / static_cast<double>(r.detection_total);
  return r;
}

}  // namespace gramint
