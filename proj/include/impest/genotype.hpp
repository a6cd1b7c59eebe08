#pragma once

// Genotype-frequency case study. Phenotypes are deterministic functions of
// unordered allele pairs; the true genotype distribution carries an
// inbreeding coefficient while the working model assumes Hardy-Weinberg
// proportions. Provides the allele-frequency EM, plug-in and imputation
// genotype-frequency estimators, and the Gibbs sampler with its three
// predictive distributions.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <map>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "impest/errors.hpp"
#include "impest/estimators.hpp"
#include "impest/stats.hpp"

namespace impest::genotype {

// True genotype distribution: homozygote (k,k) has probability
// p_k^2 (1-f) + f p_k, heterozygote (k,l) has 2 p_k p_l (1-f).
struct InbreedingModel {
  std::vector<double> allele_freqs;
  double inbreeding = 0.0;

  void validate() const {
    if (allele_freqs.empty()) {
      throw std::invalid_argument("InbreedingModel: no alleles");
    }
    double total = 0.0;
    for (double p : allele_freqs) {
      if (!(p >= 0.0)) throw std::invalid_argument("InbreedingModel: negative frequency");
      total += p;
    }
    if (std::abs(total - 1.0) > 1e-12) {
      throw std::invalid_argument("InbreedingModel: frequencies must sum to 1");
    }
    if (!(inbreeding >= 0.0 && inbreeding <= 1.0)) {
      throw std::invalid_argument("InbreedingModel: inbreeding outside [0,1]");
    }
  }
};

// Index of the unordered pair (k,l), k <= l, in the row-major upper triangle.
inline std::size_t pair_index(std::size_t allele_count, std::size_t k, std::size_t l) {
  if (k > l) std::swap(k, l);
  if (l >= allele_count) throw std::invalid_argument("pair_index: allele out of range");
  return k * allele_count - k * (k - 1) / 2 + (l - k);
}

inline std::size_t pair_count(std::size_t allele_count) {
  return allele_count * (allele_count + 1) / 2;
}

// Deterministic, symmetric, total mapping from unordered allele pairs to
// phenotype labels.
class PhenotypeMap {
 public:
  PhenotypeMap(std::size_t allele_count, std::vector<std::string> labels_by_pair)
      : allele_count_(allele_count), labels_(std::move(labels_by_pair)) {
    if (allele_count_ == 0) throw std::invalid_argument("PhenotypeMap: no alleles");
    if (labels_.size() != pair_count(allele_count_)) {
      throw std::invalid_argument("PhenotypeMap: mapping must cover every unordered pair");
    }
    for (std::size_t k = 0; k < allele_count_; ++k) {
      for (std::size_t l = k; l < allele_count_; ++l) {
        const std::string& label = labels_[pair_index(allele_count_, k, l)];
        auto found = index_.find(label);
        std::size_t j;
        if (found == index_.end()) {
          j = alphabet_.size();
          index_.emplace(label, j);
          alphabet_.push_back(label);
          compatible_.emplace_back();
        } else {
          j = found->second;
        }
        compatible_[j].emplace_back(k, l);
      }
    }
  }

  std::size_t allele_count() const { return allele_count_; }
  std::size_t phenotype_count() const { return alphabet_.size(); }
  const std::vector<std::string>& phenotypes() const { return alphabet_; }

  const std::string& phenotype(std::size_t k, std::size_t l) const {
    return labels_[pair_index(allele_count_, k, l)];
  }

  std::size_t phenotype_index(const std::string& label) const {
    auto found = index_.find(label);
    if (found == index_.end()) {
      throw std::invalid_argument("PhenotypeMap: unknown phenotype '" + label + "'");
    }
    return found->second;
  }

  std::size_t phenotype_index_of_pair(std::size_t k, std::size_t l) const {
    return phenotype_index(phenotype(k, l));
  }

  // Genotypes (k,l), k <= l, mapping to phenotype j.
  const std::vector<std::pair<std::size_t, std::size_t>>& compatible(std::size_t j) const {
    return compatible_.at(j);
  }

  // Mapping h1: nine phenotypes, only bdc ambiguous.
  static PhenotypeMap table_h1() {
    return PhenotypeMap(4, {"aa", "ab", "ac", "ad", "bb", "bdc", "bdc", "cc", "cd", "dd"});
  }

  // Mapping h2: eight phenotypes; bd additionally pools (B,B) with (D,D).
  static PhenotypeMap table_h2() {
    return PhenotypeMap(4, {"aa", "ab", "ac", "ad", "bd", "bdc", "bdc", "cc", "cd", "bd"});
  }

  // Every genotype observed directly; no missing information.
  static PhenotypeMap unambiguous(std::size_t allele_count) {
    std::vector<std::string> labels(pair_count(allele_count));
    for (std::size_t k = 0; k < allele_count; ++k) {
      for (std::size_t l = k; l < allele_count; ++l) {
        labels[pair_index(allele_count, k, l)] =
            "g" + std::to_string(k) + "g" + std::to_string(l);
      }
    }
    return PhenotypeMap(allele_count, std::move(labels));
  }

 private:
  std::size_t allele_count_;
  std::vector<std::string> labels_;
  std::vector<std::string> alphabet_;
  std::map<std::string, std::size_t> index_;
  std::vector<std::vector<std::pair<std::size_t, std::size_t>>> compatible_;
};

struct PhenotypeCounts {
  std::vector<std::uint64_t> counts;  // aligned with PhenotypeMap::phenotypes()

  std::uint64_t total() const {
    std::uint64_t n = 0;
    for (auto c : counts) n += c;
    return n;
  }
};

inline double genotype_prob(const InbreedingModel& model, std::size_t k, std::size_t l) {
  model.validate();
  if (k >= model.allele_freqs.size() || l >= model.allele_freqs.size()) {
    throw std::invalid_argument("genotype_prob: allele out of range");
  }
  const double pk = model.allele_freqs[k];
  const double pl = model.allele_freqs[l];
  const double f = model.inbreeding;
  if (k == l) return pk * pk * (1.0 - f) + f * pk;
  return 2.0 * pk * pl * (1.0 - f);
}

// Working-model (Hardy-Weinberg) genotype probability.
inline double hw_genotype_prob(const std::vector<double>& p, std::size_t k, std::size_t l) {
  if (k >= p.size() || l >= p.size()) {
    throw std::invalid_argument("hw_genotype_prob: allele out of range");
  }
  return k == l ? p[k] * p[k] : 2.0 * p[k] * p[l];
}

// p_F(c_j ; p): phenotype probability under Hardy-Weinberg.
inline double phenotype_prob_hw(const std::vector<double>& p, const PhenotypeMap& map,
                                std::size_t j) {
  double total = 0.0;
  for (const auto& [k, l] : map.compatible(j)) total += hw_genotype_prob(p, k, l);
  return total;
}

// Phenotype probability under the true inbreeding model.
inline double phenotype_prob_true(const InbreedingModel& model, const PhenotypeMap& map,
                                  std::size_t j) {
  double total = 0.0;
  for (const auto& [k, l] : map.compatible(j)) total += genotype_prob(model, k, l);
  return total;
}

inline PhenotypeCounts simulate_phenotypes(const InbreedingModel& model,
                                           const PhenotypeMap& map, std::uint64_t n,
                                           stats::SeededStream& rng) {
  model.validate();
  if (model.allele_freqs.size() != map.allele_count()) {
    throw std::invalid_argument("simulate_phenotypes: allele count mismatch");
  }
  if (n == 0) throw std::invalid_argument("simulate_phenotypes: n must be positive");
  std::vector<double> probs(map.phenotype_count());
  for (std::size_t j = 0; j < probs.size(); ++j) {
    probs[j] = phenotype_prob_true(model, map, j);
  }
  return PhenotypeCounts{stats::sample_multinomial(rng, n, probs)};
}

// Phenotype-index sequence matching the counts, in phenotype order.
inline std::vector<std::size_t> expand_observations(const PhenotypeCounts& counts) {
  std::vector<std::size_t> obs;
  obs.reserve(counts.total());
  for (std::size_t j = 0; j < counts.counts.size(); ++j) {
    obs.insert(obs.end(), counts.counts[j], j);
  }
  return obs;
}

struct AlleleEmFit {
  std::vector<double> freqs;
  double log_likelihood = 0.0;
  int iterations = 0;
  bool converged = false;
  std::vector<double> log_likelihood_path;
};

namespace detail {
// See the mixture EM note: the plug-in/imputation coincidence for
// allele-count summaries compares the returned frequencies with the next
// EM iterate, so iterates must agree well below the 1e-8 check.
inline constexpr double k_allele_param_tol = 1e-13;
}  // namespace detail

// Gene-counting EM for allele frequencies under the (misspecified) f = 0
// model.
inline AlleleEmFit em_allele_freqs(const PhenotypeCounts& counts, const PhenotypeMap& map,
                                   double tol = 1e-10, int max_iter = 5000) {
  if (counts.counts.size() != map.phenotype_count()) {
    throw std::invalid_argument("em_allele_freqs: counts misaligned with map");
  }
  const std::uint64_t n = counts.total();
  if (n == 0) throw std::invalid_argument("em_allele_freqs: empty counts");
  const std::size_t R = map.allele_count();

  AlleleEmFit fit;
  std::vector<double> p(R, 1.0 / static_cast<double>(R));
  double prev_ll = -std::numeric_limits<double>::infinity();

  auto log_likelihood = [&](const std::vector<double>& freqs) {
    double ll = 0.0;
    for (std::size_t j = 0; j < counts.counts.size(); ++j) {
      if (counts.counts[j] == 0) continue;
      const double q = phenotype_prob_hw(freqs, map, j);
      if (!(q > 0.0)) {
        throw numerical_error("em_allele_freqs: observed phenotype has zero fitted probability");
      }
      ll += static_cast<double>(counts.counts[j]) * std::log(q);
    }
    return ll;
  };

  for (int iter = 0; iter < max_iter; ++iter) {
    double ll = 0.0;
    std::vector<double> t(R, 0.0);  // expected allele counts
    for (std::size_t j = 0; j < counts.counts.size(); ++j) {
      const auto nj = static_cast<double>(counts.counts[j]);
      if (nj == 0.0) continue;
      const double q = phenotype_prob_hw(p, map, j);
      if (!(q > 0.0)) {
        throw numerical_error("em_allele_freqs: observed phenotype has zero fitted probability");
      }
      ll += nj * std::log(q);
      for (const auto& [k, l] : map.compatible(j)) {
        const double w = hw_genotype_prob(p, k, l) / q;
        t[k] += nj * w;
        t[l] += nj * w;
      }
    }
    fit.log_likelihood_path.push_back(ll);

    std::vector<double> next(R);
    double delta = 0.0;
    for (std::size_t k = 0; k < R; ++k) {
      next[k] = t[k] / (2.0 * static_cast<double>(n));
      delta = std::max(delta, std::abs(next[k] - p[k]));
    }
    const double gain = ll - prev_ll;
    p = std::move(next);
    prev_ll = ll;
    fit.iterations = iter + 1;
    if (iter > 0 && gain < tol && delta < detail::k_allele_param_tol) {
      fit.converged = true;
      break;
    }
  }

  fit.freqs = p;
  fit.log_likelihood = log_likelihood(p);
  fit.log_likelihood_path.push_back(fit.log_likelihood);
  return fit;
}

inline double plugin_genotype_freq(const std::vector<double>& p_hat, std::size_t k,
                                   std::size_t l) {
  return hw_genotype_prob(p_hat, k, l);
}

inline double imputation_genotype_freq(const std::vector<double>& p_hat,
                                       const PhenotypeCounts& counts,
                                       const PhenotypeMap& map, std::size_t k,
                                       std::size_t l) {
  if (counts.counts.size() != map.phenotype_count()) {
    throw std::invalid_argument("imputation_genotype_freq: counts misaligned with map");
  }
  const std::size_t j = map.phenotype_index_of_pair(k, l);
  const auto nj = static_cast<double>(counts.counts[j]);
  const auto n = static_cast<double>(counts.total());
  const double q = phenotype_prob_hw(p_hat, map, j);
  if (!(q > 0.0)) {
    if (nj > 0.0) {
      throw numerical_error(
          "imputation_genotype_freq: observed phenotype has zero fitted probability");
    }
    return 0.0;
  }
  return (nj / n) * hw_genotype_prob(p_hat, k, l) / q;
}

// One retained state of the data-augmentation chain.
struct GibbsState {
  std::vector<double> allele_freqs;
  std::vector<std::uint64_t> genotype_counts;  // m_kl over unordered-pair indices
};

inline std::vector<GibbsState> gibbs_sampler(const PhenotypeCounts& counts,
                                             const PhenotypeMap& map,
                                             const std::vector<double>& prior,
                                             int iterations, int burn_in,
                                             stats::SeededStream& rng) {
  if (counts.counts.size() != map.phenotype_count()) {
    throw std::invalid_argument("gibbs_sampler: counts misaligned with map");
  }
  const std::size_t R = map.allele_count();
  if (prior.size() != R) {
    throw std::invalid_argument("gibbs_sampler: prior size must match allele count");
  }
  for (double a : prior) {
    if (!(a > 0.0)) throw std::invalid_argument("gibbs_sampler: prior must be positive");
  }
  if (!(iterations > burn_in && burn_in >= 0)) {
    throw std::invalid_argument("gibbs_sampler: need iterations > burn_in >= 0");
  }

  std::vector<GibbsState> states;
  states.reserve(static_cast<std::size_t>(iterations - burn_in));
  std::vector<double> p = stats::sample_dirichlet(rng, prior);

  for (int it = 0; it < iterations; ++it) {
    // (i) attribute each phenotype class to genotypes given p.
    std::vector<std::uint64_t> m(pair_count(R), 0);
    for (std::size_t j = 0; j < counts.counts.size(); ++j) {
      const std::uint64_t nj = counts.counts[j];
      if (nj == 0) continue;
      const auto& genotypes = map.compatible(j);
      if (genotypes.size() == 1) {
        m[pair_index(R, genotypes[0].first, genotypes[0].second)] += nj;
        continue;
      }
      std::vector<double> weights(genotypes.size());
      for (std::size_t g = 0; g < genotypes.size(); ++g) {
        weights[g] = hw_genotype_prob(p, genotypes[g].first, genotypes[g].second);
      }
      const auto draws = stats::sample_multinomial(rng, nj, weights);
      for (std::size_t g = 0; g < genotypes.size(); ++g) {
        m[pair_index(R, genotypes[g].first, genotypes[g].second)] += draws[g];
      }
    }

    // (ii) refresh p from the conjugate Dirichlet given the imputed counts.
    std::vector<double> concentration(prior);
    for (std::size_t k = 0; k < R; ++k) {
      for (std::size_t l = k; l < R; ++l) {
        const auto c = static_cast<double>(m[pair_index(R, k, l)]);
        concentration[k] += c;
        concentration[l] += c;
      }
    }
    p = stats::sample_dirichlet(rng, concentration);

    if (it >= burn_in) states.push_back(GibbsState{p, std::move(m)});
  }
  return states;
}

struct PredictiveSamples {
  std::vector<double> plug_in;           // 2 p_k p_l (p_k^2 when k = l) per state
  std::vector<double> raw_imputation;    // m_kl / n per state
  std::vector<double> rao_blackwellized; // n_j p(kl|c_j, p) / n per state
};

inline PredictiveSamples predictive_distributions(const std::vector<GibbsState>& states,
                                                  const PhenotypeCounts& counts,
                                                  const PhenotypeMap& map, std::size_t k,
                                                  std::size_t l) {
  if (states.empty()) {
    throw std::invalid_argument("predictive_distributions: no retained states");
  }
  const std::size_t R = map.allele_count();
  const std::size_t j = map.phenotype_index_of_pair(k, l);
  const auto nj = static_cast<double>(counts.counts.at(j));
  const auto n = static_cast<double>(counts.total());
  const std::size_t pix = pair_index(R, k, l);

  PredictiveSamples out;
  out.plug_in.reserve(states.size());
  out.raw_imputation.reserve(states.size());
  out.rao_blackwellized.reserve(states.size());
  for (const auto& state : states) {
    out.plug_in.push_back(hw_genotype_prob(state.allele_freqs, k, l));
    out.raw_imputation.push_back(static_cast<double>(state.genotype_counts.at(pix)) / n);
    const double q = phenotype_prob_hw(state.allele_freqs, map, j);
    if (!(q > 0.0)) {
      throw numerical_error("predictive_distributions: zero phenotype probability");
    }
    out.rao_blackwellized.push_back(nj * hw_genotype_prob(state.allele_freqs, k, l) /
                                    (n * q));
  }
  return out;
}

// Expectation-operator view of a fitted Hardy-Weinberg model; observations
// are phenotype indices. "allele_counts" is the sufficient-statistic vector
// t; "genotype_indicators" covers all unordered pairs.
inline estimators::FittedModel<std::size_t> make_fitted_model(
    const std::vector<double>& p_hat, const PhenotypeMap& map) {
  if (p_hat.size() != map.allele_count()) {
    throw std::invalid_argument("make_fitted_model: allele count mismatch");
  }
  const std::size_t R = map.allele_count();
  estimators::FittedModel<std::size_t> model;
  model.unconditional_mean = [p_hat, R, map](const std::string& summary) -> estimators::Vector {
    if (summary == "allele_counts") {
      estimators::Vector t(R);
      for (std::size_t k = 0; k < R; ++k) t[k] = 2.0 * p_hat[k];
      return t;
    }
    if (summary == "genotype_indicators") {
      estimators::Vector probs(pair_count(R));
      for (std::size_t k = 0; k < R; ++k) {
        for (std::size_t l = k; l < R; ++l) {
          probs[pair_index(R, k, l)] = hw_genotype_prob(p_hat, k, l);
        }
      }
      return probs;
    }
    throw config_error("genotype model: unknown summary '" + summary + "'");
  };
  model.conditional_mean = [p_hat, R, map](const std::string& summary,
                                           const std::size_t& j) -> estimators::Vector {
    const double q = phenotype_prob_hw(p_hat, map, j);
    if (!(q > 0.0)) {
      throw numerical_error("genotype model: zero phenotype probability");
    }
    if (summary == "allele_counts") {
      estimators::Vector t(R, 0.0);
      for (const auto& [k, l] : map.compatible(j)) {
        const double w = hw_genotype_prob(p_hat, k, l) / q;
        t[k] += w;
        t[l] += w;
      }
      return t;
    }
    if (summary == "genotype_indicators") {
      estimators::Vector probs(pair_count(R), 0.0);
      for (const auto& [k, l] : map.compatible(j)) {
        probs[pair_index(R, k, l)] = hw_genotype_prob(p_hat, k, l) / q;
      }
      return probs;
    }
    throw config_error("genotype model: unknown summary '" + summary + "'");
  };
  return model;
}

}  // namespace impest::genotype
