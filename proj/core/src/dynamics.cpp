#include "madd/dynamics.hpp"

#include <algorithm>
#include <cmath>

namespace madd {
namespace {

double weighted_sum(std::span<const Contribution> xs) noexcept {
  double s = 0.0;
  for (const auto& c : xs) s += c.influence * c.persuasiveness;
  return s;
}

}  // namespace

// -expm1(-x) keeps precision when the exposure sum is tiny.
double enhancement(double gamma, double beta, double corr_sum) noexcept {
  return gamma * -std::expm1(-beta * corr_sum);
}

double decay(double gamma, double delta, double dis_sum) noexcept {
  return (1.0 - gamma) * -std::expm1(-delta * dis_sum);
}

double update_trust(double current_tt, double corr_sum, double dis_sum, double gamma,
                    double beta, double delta) noexcept {
  const double tt = current_tt + enhancement(gamma, beta, corr_sum) - decay(gamma, delta, dis_sum);
  return std::clamp(tt, 0.0, 1.0);
}

double update_trust(const TrustUpdateInputs& in) noexcept {
  return update_trust(in.current_tt, weighted_sum(in.corrections), weighted_sum(in.disinformation),
                      in.gamma, in.beta, in.delta);
}

double discernment(double updated_tt, double plausibility) noexcept {
  return 1.0 - (1.0 - updated_tt) * plausibility;
}

bool believe_disinformation(double da, Substream& rng) noexcept {
  return rng.uniform() < 1.0 - da;
}

}  // namespace madd
