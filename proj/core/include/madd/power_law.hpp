#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>

namespace madd {

/// Parameters of a discrete truncated power law
///   P(x) ∝ x^{-alpha} e^{-lambda x},  x = x_min, x_min + 1, ...
/// `c` is the continuous-form normalization (alpha - 1) / x_min^{1 - alpha},
/// kept for reporting; probabilities are always computed from the exact
/// discrete partition function.
struct PowerLawFit {
  double alpha = 2.0;
  double lambda = 0.0;
  double c = 1.0;
  double x_min = 1.0;
  std::size_t tail_count = 0;    // samples >= x_min used by the fit
  double ks_distance = 0.0;      // sup |F_emp - F_fit| on the tail
  double log_likelihood = 0.0;   // of the tail samples

  bool operator==(const PowerLawFit&) const = default;
};

/// (alpha - 1) / x_min^{1 - alpha}.
double normalization_constant(double alpha, double x_min);

class FitError : public std::runtime_error {
 public:
  enum class Kind { insufficient_data, degenerate_samples };
  FitError(Kind kind, const std::string& what)
      : std::runtime_error(what), kind_(kind) {}
  Kind kind() const noexcept { return kind_; }

 private:
  Kind kind_;
};

struct FitOptions {
  std::size_t min_samples = 50;
  std::size_t min_distinct = 10;
  /// Smallest tail a candidate x_min may leave; the effective floor is
  /// max(min_tail, tail_fraction * n).
  std::size_t min_tail = 50;
  double tail_fraction = 0.10;
  double lambda_max = 1.0;
  double alpha_max = 8.0;
  /// Coefficient of the KS acceptance bound ks_acceptance / sqrt(n_tail);
  /// 1.358 is the asymptotic 95% critical value.
  double ks_acceptance = 1.358;
};

/// Maximum-likelihood fit of a discrete truncated power law.
///
/// Candidate x_min values are the distinct sample values that leave at least
/// max(min_tail, tail_fraction * n) samples at or above them. For each
/// candidate, (alpha, lambda) maximize the tail likelihood: lambda by a
/// golden-section search on [0, lambda_max] over the profile likelihood,
/// alpha by safeguarded Newton given lambda. Candidates are scanned upward and
/// the first whose Kolmogorov-Smirnov distance to the empirical tail is within
/// the 95% acceptance bound is reported; if none is, the candidate with the
/// smallest distance is. Non-positive samples are rejected as insufficient
/// data.
PowerLawFit fit_truncated_power_law(std::span<const std::int64_t> samples,
                                    const FitOptions& options = {});

/// Discrete truncated power law with exact (numerically summed) normalization.
class TruncatedPowerLaw {
 public:
  TruncatedPowerLaw(double alpha, double lambda, double x_min);
  explicit TruncatedPowerLaw(const PowerLawFit& fit)
      : TruncatedPowerLaw(fit.alpha, fit.lambda, fit.x_min) {}

  double alpha() const noexcept { return alpha_; }
  double lambda() const noexcept { return lambda_; }
  std::int64_t x_min() const noexcept { return x_min_; }

  /// Natural log of sum_{x >= x_min} x^{-alpha} e^{-lambda x}.
  double log_partition() const noexcept { return log_z_; }

  double pmf(std::int64_t x) const;
  /// P(X <= x); zero below x_min.
  double cdf(double x) const;

 private:
  double alpha_;
  double lambda_;
  std::int64_t x_min_;
  double log_z_;
};

namespace detail {

/// Sums of w(x) * {1, ln x, ln^2 x} over x >= start with
/// w(x) = x^{-alpha} e^{-lambda x}, reported relative to exp(log_scale).
struct TailSums {
  double log_scale = 0.0;
  double z = 0.0;
  double s1 = 0.0;
  double s2 = 0.0;
  double log_z() const;
};

TailSums tail_sums(double alpha, double lambda, std::int64_t start);

}  // namespace detail
}  // namespace madd
