#include "madd/power_law.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <vector>

namespace madd {
namespace detail {

namespace {

constexpr int kExplicitTerms = 512;
constexpr int kSimpsonIntervals = 1024;

struct Moments {
  double m0 = 0.0;
  double m1 = 0.0;
  double m2 = 0.0;
};

// Integral over u = ln x of exp(log_w(u) + u) * {1, u, u^2} on [u0, u1],
// where log_w is the log weight relative to the scale.
template <class LogWeight>
Moments simpson(LogWeight log_w, double u0, double u1) {
  Moments acc;
  const double h = (u1 - u0) / kSimpsonIntervals;
  for (int i = 0; i <= kSimpsonIntervals; ++i) {
    const double u = u0 + h * i;
    const double coef = (i == 0 || i == kSimpsonIntervals) ? 1.0 : (i % 2 ? 4.0 : 2.0);
    const double f = std::exp(log_w(u) + u) * coef;
    acc.m0 += f;
    acc.m1 += f * u;
    acc.m2 += f * u * u;
  }
  acc.m0 *= h / 3.0;
  acc.m1 *= h / 3.0;
  acc.m2 *= h / 3.0;
  return acc;
}

}  // namespace

double TailSums::log_z() const { return log_scale + std::log(z); }

TailSums tail_sums(double alpha, double lambda, std::int64_t start) {
  TailSums out;
  const double s = static_cast<double>(start);
  const double ls = std::log(s);
  out.log_scale = -alpha * ls - lambda * s;

  if (lambda <= 0.0 && alpha <= 1.0) {
    out.z = out.s1 = out.s2 = std::numeric_limits<double>::infinity();
    return out;
  }

  for (int k = 0; k < kExplicitTerms; ++k) {
    const double x = s + k;
    const double lx = std::log(x);
    const double w = std::exp(-alpha * (lx - ls) - lambda * k);
    out.z += w;
    out.s1 += w * lx;
    out.s2 += w * lx * lx;
    if (lambda > 0.0 && w < 1e-18 * out.z) return out;
  }

  // Euler-Maclaurin remainder for x >= X:
  //   sum h(x) = integral_X^inf h + h(X)/2 - h'(X)/12 + O(h''')
  const double X = s + kExplicitTerms;
  const double lX = std::log(X);
  const double wX = std::exp(-alpha * (lX - ls) - lambda * (X - s));
  const double dlog = -alpha / X - lambda;

  Moments integral;
  if (lambda <= 0.0) {
    const double a = alpha - 1.0;
    const double e = std::exp(alpha * ls - a * lX);
    integral.m0 = e / a;
    integral.m1 = e * (lX / a + 1.0 / (a * a));
    integral.m2 = e * (lX * lX / a + 2.0 * lX / (a * a) + 2.0 / (a * a * a));
  } else {
    const double upper = std::log(X + 100.0 / lambda);
    const double offset = lambda * (X - s);
    auto log_w = [&](double u) {
      return -alpha * (u - ls) - lambda * (std::exp(u) - X) - offset;
    };
    integral = simpson(log_w, lX, upper);
  }

  out.z += integral.m0 + wX / 2.0 - wX * dlog / 12.0;
  out.s1 += integral.m1 + wX * lX / 2.0 - wX * (dlog * lX + 1.0 / X) / 12.0;
  out.s2 += integral.m2 + wX * lX * lX / 2.0 -
            wX * (dlog * lX * lX + 2.0 * lX / X) / 12.0;
  return out;
}

}  // namespace detail

double normalization_constant(double alpha, double x_min) {
  return (alpha - 1.0) / std::pow(x_min, 1.0 - alpha);
}

TruncatedPowerLaw::TruncatedPowerLaw(double alpha, double lambda, double x_min)
    : alpha_(alpha),
      lambda_(lambda),
      x_min_(std::max<std::int64_t>(1, static_cast<std::int64_t>(std::llround(x_min)))),
      log_z_(detail::tail_sums(alpha, lambda, x_min_).log_z()) {
  if (!(lambda >= 0.0) || (lambda == 0.0 && !(alpha > 1.0))) {
    throw std::invalid_argument("truncated power law is not normalizable");
  }
}

double TruncatedPowerLaw::pmf(std::int64_t x) const {
  if (x < x_min_) return 0.0;
  const double xd = static_cast<double>(x);
  return std::exp(-alpha_ * std::log(xd) - lambda_ * xd - log_z_);
}

double TruncatedPowerLaw::cdf(double x) const {
  if (!(x >= static_cast<double>(x_min_))) return 0.0;
  const auto k = static_cast<std::int64_t>(std::floor(x));
  const double log_tail = detail::tail_sums(alpha_, lambda_, k + 1).log_z();
  return std::clamp(1.0 - std::exp(log_tail - log_z_), 0.0, 1.0);
}

namespace {

struct TailData {
  std::int64_t x_min = 1;
  std::span<const std::int64_t> values;  // sorted ascending, all >= x_min
  double sum_log = 0.0;
  double sum_x = 0.0;
};

struct AlphaSolution {
  double alpha = 0.0;
  double log_likelihood = -std::numeric_limits<double>::infinity();
};

double log_likelihood(const TailData& d, double alpha, double lambda,
                      const detail::TailSums& sums) {
  const auto n = static_cast<double>(d.values.size());
  return -alpha * d.sum_log - lambda * d.sum_x - n * sums.log_z();
}

// Newton on dLL/dalpha = -sum ln x + n E[ln x], safeguarded by bisection.
// The likelihood is concave in alpha, so the derivative is decreasing.
AlphaSolution solve_alpha(const TailData& d, double lambda, double start,
                          const FitOptions& opt) {
  const auto n = static_cast<double>(d.values.size());
  double lo = 1.0 + 1e-9;
  double hi = opt.alpha_max;
  double a = std::clamp(start, lo, hi);
  for (int it = 0; it < 100; ++it) {
    const auto sums = detail::tail_sums(a, lambda, d.x_min);
    const double mean_log = sums.s1 / sums.z;
    const double var_log = std::max(sums.s2 / sums.z - mean_log * mean_log, 1e-300);
    const double grad = -d.sum_log + n * mean_log;
    const double hess = -n * var_log;
    if (grad > 0.0) lo = a; else hi = a;
    double next = a - grad / hess;
    if (!(next > lo && next < hi)) next = 0.5 * (lo + hi);
    if (std::abs(next - a) < 1e-10 || hi - lo < 1e-10) {
      a = next;
      break;
    }
    a = next;
  }
  const auto sums = detail::tail_sums(a, lambda, d.x_min);
  return {a, log_likelihood(d, a, lambda, sums)};
}

// Kolmogorov-Smirnov distance between the empirical tail and the fit,
// taken over every integer in [x_min, max sample].
double ks_distance(const TailData& d, double alpha, double lambda) {
  const TruncatedPowerLaw law(alpha, lambda, static_cast<double>(d.x_min));
  const auto n = static_cast<double>(d.values.size());
  const std::int64_t top = d.values.back();
  double worst = 0.0;
  std::size_t i = 0;
  double model = 0.0;
  const bool dense = top - d.x_min <= 2'000'000;
  for (std::int64_t x = d.x_min; x <= top;) {
    const std::size_t before = i;
    while (i < d.values.size() && d.values[i] <= x) ++i;
    const double emp = static_cast<double>(i) / n;
    const double emp_prev = static_cast<double>(before) / n;
    const double model_prev = model;
    if (dense) {
      model += law.pmf(x);
    } else {
      model = law.cdf(static_cast<double>(x));
    }
    worst = std::max({worst, std::abs(emp - model), std::abs(emp_prev - model_prev)});
    if (dense) {
      ++x;
    } else {
      x = i < d.values.size() ? d.values[i] : top + 1;
    }
  }
  return worst;
}

}  // namespace

PowerLawFit fit_truncated_power_law(std::span<const std::int64_t> samples,
                                    const FitOptions& options) {
  if (!samples.empty() &&
      std::all_of(samples.begin(), samples.end(),
                  [&](std::int64_t v) { return v == samples.front(); })) {
    throw FitError(FitError::Kind::degenerate_samples,
                   "all samples equal " + std::to_string(samples.front()));
  }
  if (samples.size() < options.min_samples) {
    throw FitError(FitError::Kind::insufficient_data,
                   "need at least " + std::to_string(options.min_samples) +
                       " samples, got " + std::to_string(samples.size()));
  }
  if (std::any_of(samples.begin(), samples.end(), [](std::int64_t v) { return v < 1; })) {
    throw FitError(FitError::Kind::insufficient_data, "samples must be positive integers");
  }

  std::vector<std::int64_t> sorted(samples.begin(), samples.end());
  std::sort(sorted.begin(), sorted.end());
  std::vector<std::int64_t> distinct = sorted;
  distinct.erase(std::unique(distinct.begin(), distinct.end()), distinct.end());
  if (distinct.size() < options.min_distinct) {
    throw FitError(FitError::Kind::insufficient_data,
                   "need at least " + std::to_string(options.min_distinct) +
                       " distinct values, got " + std::to_string(distinct.size()));
  }

  const std::size_t n = sorted.size();
  const std::size_t tail_floor = std::max<std::size_t>(
      std::max<std::size_t>(options.min_tail, 1),
      static_cast<std::size_t>(std::ceil(options.tail_fraction * static_cast<double>(n))));

  // Suffix sums let each candidate tail be summarized in O(1).
  std::vector<double> suffix_log(n + 1, 0.0);
  std::vector<double> suffix_x(n + 1, 0.0);
  for (std::size_t i = n; i-- > 0;) {
    suffix_log[i] = suffix_log[i + 1] + std::log(static_cast<double>(sorted[i]));
    suffix_x[i] = suffix_x[i + 1] + static_cast<double>(sorted[i]);
  }

  PowerLawFit best;
  bool have_best = false;
  PowerLawFit first_accepted;
  bool have_accepted = false;
  double warm_alpha = 2.0;

  for (std::int64_t candidate : distinct) {
    const auto first = static_cast<std::size_t>(
        std::lower_bound(sorted.begin(), sorted.end(), candidate) - sorted.begin());
    if (n - first < tail_floor) break;

    TailData d;
    d.x_min = candidate;
    d.values = std::span<const std::int64_t>(sorted).subspan(first);
    d.sum_log = suffix_log[first];
    d.sum_x = suffix_x[first];

    // Golden-section search of the profile likelihood in lambda.
    const double ratio = 0.5 * (std::sqrt(5.0) - 1.0);
    double a = 0.0;
    double b = options.lambda_max;
    double c = b - ratio * (b - a);
    double e = a + ratio * (b - a);
    AlphaSolution fc = solve_alpha(d, c, warm_alpha, options);
    AlphaSolution fe = solve_alpha(d, e, fc.alpha, options);
    while (b - a > 1e-7) {
      if (fc.log_likelihood >= fe.log_likelihood) {
        b = e;
        e = c;
        fe = fc;
        c = b - ratio * (b - a);
        fc = solve_alpha(d, c, fe.alpha, options);
      } else {
        a = c;
        c = e;
        fc = fe;
        e = a + ratio * (b - a);
        fe = solve_alpha(d, e, fc.alpha, options);
      }
    }
    double lambda = fc.log_likelihood >= fe.log_likelihood ? c : e;
    AlphaSolution sol = fc.log_likelihood >= fe.log_likelihood ? fc : fe;
    const AlphaSolution at_zero = solve_alpha(d, 0.0, sol.alpha, options);
    if (at_zero.log_likelihood >= sol.log_likelihood) {
      lambda = 0.0;
      sol = at_zero;
    }
    warm_alpha = sol.alpha;

    PowerLawFit fit;
    fit.alpha = sol.alpha;
    fit.lambda = lambda;
    fit.x_min = static_cast<double>(candidate);
    fit.c = normalization_constant(sol.alpha, fit.x_min);
    fit.tail_count = d.values.size();
    fit.ks_distance = ks_distance(d, sol.alpha, lambda);
    fit.log_likelihood = sol.log_likelihood;

    if (!have_best || fit.ks_distance < best.ks_distance) {
      best = fit;
      have_best = true;
    }
    // 95% Kolmogorov-Smirnov acceptance bound for the candidate's tail.
    const double bound = options.ks_acceptance / std::sqrt(static_cast<double>(fit.tail_count));
    if (fit.ks_distance <= bound) {
      first_accepted = fit;
      have_accepted = true;
      break;
    }
  }

  if (!have_best) {
    throw FitError(FitError::Kind::insufficient_data, "no x_min candidate leaves enough tail samples");
  }
  return have_accepted ? first_accepted : best;
}

}  // namespace madd
