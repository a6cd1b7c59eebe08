#pragma once

// Two-component mixture case study. Data come from a mixture of two
// log-normals; the working model is a two-component normal mixture fitted by
// EM. On top of the fit sit the plug-in and imputation tail-mass estimators,
// responsibility-weighted kernel density estimates of the component
// densities, and model-based clustering with classification error.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <stdexcept>
#include <string>
#include <vector>

#include "impest/errors.hpp"
#include "impest/estimators.hpp"
#include "impest/stats.hpp"

namespace impest::mixture {

inline double normal_cdf(double z) { return 0.5 * std::erfc(-z / std::sqrt(2.0)); }

inline double normal_pdf(double y, double mean, double sd) {
  const double z = (y - mean) / sd;
  return std::exp(-0.5 * z * z) / (sd * std::sqrt(2.0 * M_PI));
}

inline double lognormal_pdf(double y, double log_mean, double log_sd) {
  if (!(y > 0.0)) return 0.0;
  const double z = (std::log(y) - log_mean) / log_sd;
  return std::exp(-0.5 * z * z) / (y * log_sd * std::sqrt(2.0 * M_PI));
}

// Fitted working model: component labels are fixed by mean1 < mean2.
struct NormalMixtureParams {
  double mean1 = 0.0;
  double mean2 = 0.0;
  double sd1 = 1.0;
  double sd2 = 1.0;
  double weight1 = 0.5;

  void validate() const {
    if (!(mean1 < mean2)) {
      throw std::invalid_argument("NormalMixtureParams: mean1 < mean2 required");
    }
    if (!(sd1 > 0.0) || !(sd2 > 0.0)) {
      throw std::invalid_argument("NormalMixtureParams: scales must be positive");
    }
    if (!(weight1 > 0.0 && weight1 < 1.0)) {
      throw std::invalid_argument("NormalMixtureParams: weight1 outside (0,1)");
    }
  }
};

// True sampling model of the case study.
struct LogNormalMixtureParams {
  double log_mean1 = 0.0;
  double log_mean2 = 0.0;
  double log_sd1 = 1.0;
  double log_sd2 = 1.0;
  double weight1 = 0.5;

  void validate() const {
    if (!(log_mean1 < log_mean2)) {
      throw std::invalid_argument("LogNormalMixtureParams: log_mean1 < log_mean2 required");
    }
    if (!(log_sd1 > 0.0) || !(log_sd2 > 0.0)) {
      throw std::invalid_argument("LogNormalMixtureParams: scales must be positive");
    }
    if (!(weight1 > 0.0 && weight1 < 1.0)) {
      throw std::invalid_argument("LogNormalMixtureParams: weight1 outside (0,1)");
    }
  }
};

// Posterior component-membership probabilities; rows sum to one by
// construction (component 2 takes the complement).
struct Responsibilities {
  std::vector<double> comp1;
  double comp2(std::size_t i) const { return 1.0 - comp1[i]; }
  std::size_t size() const { return comp1.size(); }
};

struct MixtureSample {
  std::vector<double> data;
  std::vector<int> labels;  // true component of each draw, 1 or 2
};

inline MixtureSample simulate_lognormal_mixture(const LogNormalMixtureParams& params,
                                                std::size_t n,
                                                stats::SeededStream& rng) {
  params.validate();
  if (n == 0) throw std::invalid_argument("simulate_lognormal_mixture: n must be positive");
  MixtureSample sample;
  sample.data.reserve(n);
  sample.labels.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    const bool first = rng.uniform() < params.weight1;
    sample.labels.push_back(first ? 1 : 2);
    sample.data.push_back(first
                              ? stats::sample_lognormal(rng, params.log_mean1, params.log_sd1)
                              : stats::sample_lognormal(rng, params.log_mean2, params.log_sd2));
  }
  return sample;
}

// P(h = 1 | y) for one point, computed in log space.
inline double posterior_comp1(const NormalMixtureParams& p, double y) {
  const double z1 = (y - p.mean1) / p.sd1;
  const double z2 = (y - p.mean2) / p.sd2;
  const double a1 = std::log(p.weight1) - std::log(p.sd1) - 0.5 * z1 * z1;
  const double a2 = std::log(1.0 - p.weight1) - std::log(p.sd2) - 0.5 * z2 * z2;
  const double m = std::max(a1, a2);
  const double e1 = std::exp(a1 - m);
  const double e2 = std::exp(a2 - m);
  return e1 / (e1 + e2);
}

inline Responsibilities responsibilities(const NormalMixtureParams& params,
                                         const std::vector<double>& data) {
  params.validate();
  Responsibilities z;
  z.comp1.reserve(data.size());
  for (double y : data) z.comp1.push_back(posterior_comp1(params, y));
  return z;
}

inline double mixture_log_likelihood(const NormalMixtureParams& p,
                                     const std::vector<double>& data) {
  double ll = 0.0;
  const double half_log_two_pi = 0.5 * std::log(2.0 * M_PI);
  for (double y : data) {
    const double z1 = (y - p.mean1) / p.sd1;
    const double z2 = (y - p.mean2) / p.sd2;
    const double a1 = std::log(p.weight1) - std::log(p.sd1) - 0.5 * z1 * z1;
    const double a2 = std::log(1.0 - p.weight1) - std::log(p.sd2) - 0.5 * z2 * z2;
    const double m = std::max(a1, a2);
    ll += m + std::log(std::exp(a1 - m) + std::exp(a2 - m)) - half_log_two_pi;
  }
  return ll;
}

struct EmFit {
  NormalMixtureParams params;
  double log_likelihood = -std::numeric_limits<double>::infinity();
  int iterations = 0;
  bool converged = false;
  std::vector<double> log_likelihood_path;
};

namespace detail {

// Convergence is declared on the log-likelihood gain together with a
// parameter-change criterion: the mixing-proportion identity and the
// sufficient-statistic coincidence checks compare the returned weight with
// the next EM iterate, so the iterates themselves must agree below the 1e-8
// reporting tolerance.
inline constexpr double k_em_param_tol = 1e-11;

inline NormalMixtureParams median_split_init(const std::vector<double>& data,
                                             double sd_floor) {
  std::vector<double> sorted(data);
  std::sort(sorted.begin(), sorted.end());
  const std::size_t half = sorted.size() / 2;
  auto moments = [&](std::size_t lo, std::size_t hi) {
    double m = 0.0;
    for (std::size_t i = lo; i < hi; ++i) m += sorted[i];
    m /= static_cast<double>(hi - lo);
    double v = 0.0;
    for (std::size_t i = lo; i < hi; ++i) v += (sorted[i] - m) * (sorted[i] - m);
    v /= static_cast<double>(hi - lo);
    return std::pair<double, double>(m, std::sqrt(v));
  };
  const auto [m1, s1] = moments(0, half);
  const auto [m2, s2] = moments(half, sorted.size());
  NormalMixtureParams init;
  init.mean1 = m1;
  init.mean2 = m2;
  init.sd1 = std::max(s1, sd_floor);
  init.sd2 = std::max(s2, sd_floor);
  init.weight1 = 0.5;
  if (!(init.mean1 < init.mean2)) init.mean2 = init.mean1 + sd_floor;
  return init;
}

}  // namespace detail

inline EmFit em_normal_mixture(const std::vector<double>& data,
                               const NormalMixtureParams& init, double tol,
                               int max_iter) {
  {
    std::vector<double> distinct(data);
    std::sort(distinct.begin(), distinct.end());
    distinct.erase(std::unique(distinct.begin(), distinct.end()), distinct.end());
    if (distinct.size() < 4) {
      throw std::invalid_argument("em_normal_mixture: need at least 4 distinct points");
    }
  }
  const double n = static_cast<double>(data.size());
  double overall_mean = 0.0;
  for (double y : data) overall_mean += y;
  overall_mean /= n;
  double overall_var = 0.0;
  for (double y : data) overall_var += (y - overall_mean) * (y - overall_mean);
  overall_var /= n;
  const double sd_floor = 1e-6 * std::sqrt(overall_var);

  EmFit fit;
  NormalMixtureParams p = init;
  double prev_ll = -std::numeric_limits<double>::infinity();
  const double half_log_two_pi = 0.5 * std::log(2.0 * M_PI);

  for (int iter = 0; iter < max_iter; ++iter) {
    // E-step and observed-data log-likelihood in one pass.
    double ll = 0.0;
    double s1 = 0.0, sy1 = 0.0, sy2 = 0.0, syy1 = 0.0, syy2 = 0.0;
    for (double y : data) {
      const double d1 = (y - p.mean1) / p.sd1;
      const double d2 = (y - p.mean2) / p.sd2;
      const double a1 = std::log(p.weight1) - std::log(p.sd1) - 0.5 * d1 * d1;
      const double a2 = std::log(1.0 - p.weight1) - std::log(p.sd2) - 0.5 * d2 * d2;
      const double m = std::max(a1, a2);
      const double e1 = std::exp(a1 - m);
      const double e2 = std::exp(a2 - m);
      ll += m + std::log(e1 + e2) - half_log_two_pi;
      const double z1 = e1 / (e1 + e2);
      s1 += z1;
      sy1 += z1 * y;
      sy2 += (1.0 - z1) * y;
      syy1 += z1 * y * y;
      syy2 += (1.0 - z1) * y * y;
    }
    fit.log_likelihood_path.push_back(ll);
    const double s2 = n - s1;
    if (s1 < 1e-10) throw collapse_error(1, "em_normal_mixture: component 1 lost all weight");
    if (s2 < 1e-10) throw collapse_error(2, "em_normal_mixture: component 2 lost all weight");

    // M-step.
    NormalMixtureParams next = p;
    next.mean1 = sy1 / s1;
    next.mean2 = sy2 / s2;
    const double var1 = syy1 / s1 - next.mean1 * next.mean1;
    const double var2 = syy2 / s2 - next.mean2 * next.mean2;
    next.sd1 = std::sqrt(std::max(var1, 0.0));
    next.sd2 = std::sqrt(std::max(var2, 0.0));
    next.weight1 = s1 / n;
    if (next.sd1 < sd_floor) {
      throw collapse_error(1, "em_normal_mixture: component 1 scale collapsed");
    }
    if (next.sd2 < sd_floor) {
      throw collapse_error(2, "em_normal_mixture: component 2 scale collapsed");
    }

    const double param_delta =
        std::max({std::abs(next.mean1 - p.mean1), std::abs(next.mean2 - p.mean2),
                  std::abs(next.sd1 - p.sd1), std::abs(next.sd2 - p.sd2),
                  std::abs(next.weight1 - p.weight1)});
    const double gain = ll - prev_ll;
    p = next;
    prev_ll = ll;
    fit.iterations = iter + 1;
    if (iter > 0 && gain < tol && param_delta < detail::k_em_param_tol) {
      fit.converged = true;
      break;
    }
  }

  if (p.mean1 > p.mean2) {
    std::swap(p.mean1, p.mean2);
    std::swap(p.sd1, p.sd2);
    p.weight1 = 1.0 - p.weight1;
  }
  fit.params = p;
  fit.log_likelihood = mixture_log_likelihood(p, data);
  fit.log_likelihood_path.push_back(fit.log_likelihood);
  return fit;
}

inline EmFit em_normal_mixture(const std::vector<double>& data, double tol = 1e-8,
                               int max_iter = 1000) {
  {
    std::vector<double> distinct(data);
    std::sort(distinct.begin(), distinct.end());
    distinct.erase(std::unique(distinct.begin(), distinct.end()), distinct.end());
    if (distinct.size() < 4) {
      throw std::invalid_argument("em_normal_mixture: need at least 4 distinct points");
    }
  }
  double m = 0.0;
  for (double y : data) m += y;
  m /= static_cast<double>(data.size());
  double v = 0.0;
  for (double y : data) v += (y - m) * (y - m);
  v /= static_cast<double>(data.size());
  const auto init = detail::median_split_init(data, 1e-6 * std::sqrt(v));
  return em_normal_mixture(data, init, tol, max_iter);
}

struct LogNormalEmFit {
  LogNormalMixtureParams params;
  EmFit log_scale_fit;  // the normal-mixture EM run on log-transformed data
};

// The correct-model fit: a log-normal mixture is exactly a normal mixture in
// log space.
inline LogNormalEmFit fit_lognormal_mixture(const std::vector<double>& data,
                                            double tol = 1e-8, int max_iter = 1000) {
  std::vector<double> logs;
  logs.reserve(data.size());
  for (double y : data) {
    if (!(y > 0.0)) {
      throw std::invalid_argument("fit_lognormal_mixture: data must be positive");
    }
    logs.push_back(std::log(y));
  }
  LogNormalEmFit fit;
  fit.log_scale_fit = em_normal_mixture(logs, tol, max_iter);
  const auto& p = fit.log_scale_fit.params;
  fit.params.log_mean1 = p.mean1;
  fit.params.log_mean2 = p.mean2;
  fit.params.log_sd1 = p.sd1;
  fit.params.log_sd2 = p.sd2;
  fit.params.weight1 = p.weight1;
  return fit;
}

// Plug-in estimate of E[1{h=1} 1{y>c}] under the fitted normal mixture.
inline double plugin_tail(const NormalMixtureParams& params, double c) {
  params.validate();
  return (1.0 - normal_cdf((c - params.mean1) / params.sd1)) * params.weight1;
}

// The same tail mass under a log-normal mixture; doubles as the true value
// when evaluated at the data-generating parameters.
inline double lognormal_tail_mass(const LogNormalMixtureParams& params, double c) {
  params.validate();
  if (!(c > 0.0)) return params.weight1;
  return (1.0 - normal_cdf((std::log(c) - params.log_mean1) / params.log_sd1)) *
         params.weight1;
}

// Imputation estimate (1/n) sum z_i1 1{y_i > c}.
inline double imputation_tail(const NormalMixtureParams& params,
                              const std::vector<double>& data, double c) {
  params.validate();
  if (data.empty()) throw std::invalid_argument("imputation_tail: empty data");
  double acc = 0.0;
  for (double y : data) {
    if (y > c) acc += posterior_comp1(params, y);
  }
  return acc / static_cast<double>(data.size());
}

// Gaussian-kernel density estimate with per-point weights.
class WeightedKde {
 public:
  WeightedKde(std::vector<double> points, std::vector<double> weights,
              double bandwidth)
      : points_(std::move(points)), weights_(std::move(weights)), bandwidth_(bandwidth) {
    if (points_.size() != weights_.size()) {
      throw std::invalid_argument("WeightedKde: size mismatch");
    }
    if (points_.empty()) throw std::invalid_argument("WeightedKde: no points");
    if (!(bandwidth_ > 0.0)) {
      throw std::invalid_argument("WeightedKde: bandwidth must be positive");
    }
    weight_total_ = 0.0;
    for (double w : weights_) {
      if (!(w >= 0.0)) throw std::invalid_argument("WeightedKde: negative weight");
      weight_total_ += w;
    }
    if (!(weight_total_ > 0.0)) {
      throw std::invalid_argument("WeightedKde: weights sum to zero");
    }
  }

  double operator()(double x) const {
    double acc = 0.0;
    for (std::size_t i = 0; i < points_.size(); ++i) {
      const double z = (x - points_[i]) / bandwidth_;
      acc += weights_[i] * std::exp(-0.5 * z * z);
    }
    return acc / (weight_total_ * bandwidth_ * std::sqrt(2.0 * M_PI));
  }

  double bandwidth() const { return bandwidth_; }
  double weight_total() const { return weight_total_; }

 private:
  std::vector<double> points_;
  std::vector<double> weights_;
  double bandwidth_;
  double weight_total_;
};

// Silverman-style automatic bandwidth: 0.9 * weighted sd * ess^(-1/5) with
// effective sample size sum(w).
inline double silverman_bandwidth(const std::vector<double>& data,
                                  const std::vector<double>& weights) {
  if (data.size() != weights.size() || data.empty()) {
    throw std::invalid_argument("silverman_bandwidth: bad inputs");
  }
  double wsum = 0.0, wy = 0.0;
  for (std::size_t i = 0; i < data.size(); ++i) {
    if (!(weights[i] >= 0.0)) {
      throw std::invalid_argument("silverman_bandwidth: negative weight");
    }
    wsum += weights[i];
    wy += weights[i] * data[i];
  }
  if (!(wsum > 0.0)) throw std::invalid_argument("silverman_bandwidth: weights sum to zero");
  const double wmean = wy / wsum;
  double wvar = 0.0;
  for (std::size_t i = 0; i < data.size(); ++i) {
    wvar += weights[i] * (data[i] - wmean) * (data[i] - wmean);
  }
  wvar /= wsum;
  if (!(wvar > 0.0)) {
    throw std::invalid_argument("silverman_bandwidth: zero weighted variance");
  }
  return 0.9 * std::sqrt(wvar) * std::pow(wsum, -0.2);
}

inline WeightedKde weighted_kde(const std::vector<double>& data,
                                const std::vector<double>& weights, double bandwidth) {
  return WeightedKde(data, weights, bandwidth);
}

inline WeightedKde weighted_kde(const std::vector<double>& data,
                                const std::vector<double>& weights) {
  return WeightedKde(data, weights, silverman_bandwidth(data, weights));
}

// Hard classification by argmax of weight_j * density_j; the reported error
// is the misclassification fraction minimized over the two label pairings.
template <typename Density1, typename Density2>
double classify_and_error(const Density1& density1, const Density2& density2,
                          double weight1, double weight2,
                          const std::vector<double>& data,
                          const std::vector<int>& truth) {
  if (std::abs(weight1 + weight2 - 1.0) > 1e-9) {
    throw std::invalid_argument("classify_and_error: weights must sum to 1");
  }
  if (data.size() != truth.size() || data.empty()) {
    throw std::invalid_argument("classify_and_error: size mismatch");
  }
  std::size_t mismatches = 0;
  for (std::size_t i = 0; i < data.size(); ++i) {
    if (truth[i] != 1 && truth[i] != 2) {
      throw std::invalid_argument("classify_and_error: labels must be 1 or 2");
    }
    const int predicted = weight1 * density1(data[i]) >= weight2 * density2(data[i]) ? 1 : 2;
    if (predicted != truth[i]) ++mismatches;
  }
  const double err = static_cast<double>(mismatches) / static_cast<double>(data.size());
  return std::min(err, 1.0 - err);
}

// Expectation-operator view of the fitted normal mixture for the generic
// estimators. Registered summaries are the complete-data sufficient
// statistics: per-component indicators and indicator-weighted first and
// second moments.
inline estimators::FittedModel<double> make_fitted_model(const NormalMixtureParams& params) {
  params.validate();
  estimators::FittedModel<double> model;
  model.unconditional_mean = [params](const std::string& summary) -> estimators::Vector {
    const double w1 = params.weight1;
    const double w2 = 1.0 - params.weight1;
    if (summary == "component_indicator") return {w1, w2};
    if (summary == "component_first_moment") {
      return {w1 * params.mean1, w2 * params.mean2};
    }
    if (summary == "component_second_moment") {
      return {w1 * (params.mean1 * params.mean1 + params.sd1 * params.sd1),
              w2 * (params.mean2 * params.mean2 + params.sd2 * params.sd2)};
    }
    throw config_error("mixture model: unknown summary '" + summary + "'");
  };
  model.conditional_mean = [params](const std::string& summary,
                                    const double& y) -> estimators::Vector {
    const double z1 = posterior_comp1(params, y);
    if (summary == "component_indicator") return {z1, 1.0 - z1};
    if (summary == "component_first_moment") return {z1 * y, (1.0 - z1) * y};
    if (summary == "component_second_moment") return {z1 * y * y, (1.0 - z1) * y * y};
    throw config_error("mixture model: unknown summary '" + summary + "'");
  };
  return model;
}

}  // namespace impest::mixture
