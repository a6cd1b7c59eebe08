#pragma once

// Generalized plug-in and imputation estimators of complete-data summaries.
//
// A fitted (and possibly misspecified) model enters estimation through just
// two expectation operators: the unconditional mean of a summary function and
// its mean conditional on one observation. The plug-in estimate is the
// unconditional mean under the fit; the imputation estimate averages the
// conditional means over the observed sample. Summary functions are looked
// up by identifier so each model can supply its analytic conditional
// expectations.

#include <functional>
#include <stdexcept>
#include <string>
#include <vector>

#include "impest/errors.hpp"

namespace impest::estimators {

using Vector = std::vector<double>;

template <typename Observation>
struct FittedModel {
  // summary-id -> E[s(X)] under the fitted parameters.
  std::function<Vector(const std::string&)> unconditional_mean;
  // (summary-id, observation) -> E[s(X) | Y = y] under the fitted parameters.
  std::function<Vector(const std::string&, const Observation&)> conditional_mean;
};

struct EstimatePair {
  Vector plug_in;
  Vector imputation;
  std::size_t target_dim = 0;
};

template <typename Observation>
Vector plug_in_estimate(const FittedModel<Observation>& model,
                        const std::string& summary) {
  return model.unconditional_mean(summary);
}

template <typename Observation>
Vector imputation_estimate(const FittedModel<Observation>& model,
                           const std::string& summary,
                           const std::vector<Observation>& observations) {
  if (observations.empty()) {
    throw std::invalid_argument("imputation_estimate: no observations");
  }
  Vector acc = model.conditional_mean(summary, observations.front());
  for (std::size_t i = 1; i < observations.size(); ++i) {
    const Vector term = model.conditional_mean(summary, observations[i]);
    if (term.size() != acc.size()) {
      throw numerical_error("imputation_estimate: conditional mean dimension changed");
    }
    for (std::size_t d = 0; d < acc.size(); ++d) acc[d] += term[d];
  }
  const auto n = static_cast<double>(observations.size());
  for (double& v : acc) v /= n;
  return acc;
}

template <typename Observation>
EstimatePair estimate_pair(const FittedModel<Observation>& model,
                           const std::string& summary,
                           const std::vector<Observation>& observations) {
  EstimatePair pair;
  pair.plug_in = plug_in_estimate(model, summary);
  pair.imputation = imputation_estimate(model, summary, observations);
  pair.target_dim = pair.plug_in.size();
  if (pair.imputation.size() != pair.target_dim) {
    throw numerical_error("estimate_pair: estimator dimensions disagree");
  }
  return pair;
}

inline double relative_error(double estimate, double truth) {
  if (truth == 0.0) {
    throw std::invalid_argument("relative_error: truth must be nonzero");
  }
  return (estimate - truth) / truth;
}

}  // namespace impest::estimators
