#pragma once

#include <span>

#include "madd/rng.hpp"

namespace madd {

/// One neighbour's contribution: its influence and the message's persuasiveness.
struct Contribution {
  double influence = 0.0;       // SI_k
  double persuasiveness = 0.0;  // F or F'
};

struct TrustUpdateInputs {
  double current_tt = 0.5;
  std::span<const Contribution> corrections;      // N_corr with F'
  std::span<const Contribution> disinformation;   // N_dis with F
  double gamma = 0.5;
  double beta = 0.5;
  double delta = 0.5;
};

/// gamma * (1 - e^{-beta * s}).
double enhancement(double gamma, double beta, double corr_sum) noexcept;
/// (1 - gamma) * (1 - e^{-delta * s}).
double decay(double gamma, double delta, double dis_sum) noexcept;

/// clip(TT + En - De, 0, 1) from precomputed sums of SI * F' and SI * F.
double update_trust(double current_tt, double corr_sum, double dis_sum, double gamma,
                    double beta, double delta) noexcept;
double update_trust(const TrustUpdateInputs& inputs) noexcept;

/// DA = 1 - (1 - TT̂) * DP.
double discernment(double updated_tt, double plausibility) noexcept;

/// True ("believes") with probability 1 - da.
bool believe_disinformation(double da, Substream& rng) noexcept;

}  // namespace madd
