#pragma once

// Labeled evolutionary-distance case study. Group-based nucleotide
// generators (Jukes-Cantor and the Kimura two- and three-parameter models),
// spectral transition matrices, unconditional and endpoint-conditioned
// expected labeled transition counts, closed-form distance MLEs, the
// span-condition check under which plug-in and imputation estimators
// coincide, and the closed-form almost-sure limits of both estimators when a
// Jukes-Cantor model is fitted to Kimura two-parameter data.
//
// Nucleotide state order throughout: A, G, C, T.

#include <Eigen/Dense>
#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdint>
#include <map>
#include <memory>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "impest/errors.hpp"
#include "impest/estimators.hpp"
#include "impest/stats.hpp"

namespace impest::ctmc {

inline constexpr int k_nucleotides = 4;

enum class RateFamily { jukes_cantor, kimura_two_param, kimura_three_param, custom };

// A set of ordered, off-diagonal state pairs labeling the transitions of
// interest.
class LabelSet {
 public:
  LabelSet() = default;

  explicit LabelSet(std::vector<std::pair<int, int>> pairs) : pairs_(std::move(pairs)) {
    for (const auto& [u, v] : pairs_) {
      if (u == v) throw std::invalid_argument("LabelSet: diagonal pairs not allowed");
      if (u < 0 || v < 0) throw std::invalid_argument("LabelSet: negative state index");
    }
    std::sort(pairs_.begin(), pairs_.end());
    pairs_.erase(std::unique(pairs_.begin(), pairs_.end()), pairs_.end());
  }

  const std::vector<std::pair<int, int>>& pairs() const { return pairs_; }
  bool empty() const { return pairs_.empty(); }

  bool contains(int u, int v) const {
    return std::binary_search(pairs_.begin(), pairs_.end(), std::make_pair(u, v));
  }

  int max_state() const {
    int top = -1;
    for (const auto& [u, v] : pairs_) top = std::max({top, u, v});
    return top;
  }

 private:
  std::vector<std::pair<int, int>> pairs_;
};

// Transitions: A<->G and C<->T.
inline const LabelSet& transitions() {
  static const LabelSet set(std::vector<std::pair<int, int>>{{0, 1}, {1, 0}, {2, 3}, {3, 2}});
  return set;
}

// All eight transversions.
inline const LabelSet& transversions() {
  static const LabelSet set(std::vector<std::pair<int, int>>{
      {0, 2}, {2, 0}, {0, 3}, {3, 0}, {1, 2}, {2, 1}, {1, 3}, {3, 1}});
  return set;
}

// The two transversion classes of the Kimura three-parameter model.
inline const LabelSet& transversions_ac_gt() {
  static const LabelSet set(std::vector<std::pair<int, int>>{{0, 2}, {2, 0}, {1, 3}, {3, 1}});
  return set;
}

inline const LabelSet& transversions_at_gc() {
  static const LabelSet set(std::vector<std::pair<int, int>>{{0, 3}, {3, 0}, {1, 2}, {2, 1}});
  return set;
}

inline LabelSet all_substitutions(int states) {
  std::vector<std::pair<int, int>> pairs;
  for (int u = 0; u < states; ++u) {
    for (int v = 0; v < states; ++v) {
      if (u != v) pairs.emplace_back(u, v);
    }
  }
  return LabelSet(std::move(pairs));
}

// Infinitesimal generator with its parameterization tag and the
// partial-derivative basis used by the span condition.
struct Generator {
  Eigen::MatrixXd rates;
  RateFamily family = RateFamily::custom;
  std::vector<double> params;
  std::vector<Eigen::MatrixXd> rate_derivatives;

  int size() const { return static_cast<int>(rates.rows()); }
};

namespace detail {

inline Eigen::MatrixXd adjacency(const LabelSet& labels, int states) {
  Eigen::MatrixXd a = Eigen::MatrixXd::Zero(states, states);
  for (const auto& [u, v] : labels.pairs()) {
    if (u >= states || v >= states) {
      throw std::invalid_argument("LabelSet: state index outside the state space");
    }
    a(u, v) = 1.0;
  }
  return a;
}

inline void fill_diagonal(Eigen::MatrixXd& rates) {
  for (int u = 0; u < rates.rows(); ++u) {
    rates(u, u) = 0.0;
    rates(u, u) = -rates.row(u).sum();
  }
}

}  // namespace detail

// Builds a named-family generator. Rates may be zero (a zero rate gives a
// valid, if degenerate, chain); negative rates are rejected.
inline Generator build_generator(RateFamily family, const std::vector<double>& params) {
  const std::size_t arity = family == RateFamily::jukes_cantor      ? 1
                            : family == RateFamily::kimura_two_param ? 2
                            : family == RateFamily::kimura_three_param
                                ? 3
                                : throw std::invalid_argument(
                                      "build_generator: custom family needs an explicit matrix");
  if (params.size() != arity) {
    throw std::invalid_argument("build_generator: wrong parameter count for family");
  }
  for (double r : params) {
    if (!(r >= 0.0)) throw std::invalid_argument("build_generator: negative rate");
  }
  double a = params[0];
  double b = arity >= 2 ? params[1] : params[0];
  double c = arity >= 3 ? params[2] : b;

  Generator gen;
  gen.family = family;
  gen.params = params;
  gen.rates = a * detail::adjacency(transitions(), k_nucleotides) +
              b * detail::adjacency(transversions_ac_gt(), k_nucleotides) +
              c * detail::adjacency(transversions_at_gc(), k_nucleotides);
  detail::fill_diagonal(gen.rates);

  const Eigen::MatrixXd id = Eigen::MatrixXd::Identity(k_nucleotides, k_nucleotides);
  switch (family) {
    case RateFamily::jukes_cantor:
      gen.rate_derivatives = {detail::adjacency(all_substitutions(k_nucleotides), k_nucleotides) -
                              3.0 * id};
      break;
    case RateFamily::kimura_two_param:
      gen.rate_derivatives = {detail::adjacency(transitions(), k_nucleotides) - id,
                              detail::adjacency(transversions(), k_nucleotides) - 2.0 * id};
      break;
    case RateFamily::kimura_three_param:
      gen.rate_derivatives = {detail::adjacency(transitions(), k_nucleotides) - id,
                              detail::adjacency(transversions_ac_gt(), k_nucleotides) - id,
                              detail::adjacency(transversions_at_gc(), k_nucleotides) - id};
      break;
    case RateFamily::custom:
      break;
  }
  return gen;
}

// Wraps an arbitrary rate matrix; supported for simulation and moment
// computations but carries no derivative basis.
inline Generator custom_generator(const Eigen::MatrixXd& rates) {
  if (rates.rows() != rates.cols() || rates.rows() < 2) {
    throw std::invalid_argument("custom_generator: need a square matrix, size >= 2");
  }
  for (int u = 0; u < rates.rows(); ++u) {
    for (int v = 0; v < rates.cols(); ++v) {
      if (u != v && !(rates(u, v) >= 0.0)) {
        throw std::invalid_argument("custom_generator: negative off-diagonal rate");
      }
    }
    if (std::abs(rates.row(u).sum()) > 1e-12 * std::max(1.0, rates.cwiseAbs().maxCoeff())) {
      throw std::invalid_argument("custom_generator: rows must sum to zero");
    }
  }
  Generator gen;
  gen.rates = rates;
  gen.family = RateFamily::custom;
  return gen;
}

namespace detail {

struct Spectral {
  Eigen::MatrixXcd vectors;
  Eigen::MatrixXcd inverse;
  Eigen::VectorXcd values;
};

inline Spectral decompose(const Eigen::MatrixXd& m) {
  const double scale = std::max(1.0, m.cwiseAbs().maxCoeff());
  Spectral s;
  if ((m - m.transpose()).cwiseAbs().maxCoeff() < 1e-13 * scale) {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(m);
    if (solver.info() != Eigen::Success) {
      throw numerical_error("spectral decomposition failed");
    }
    s.values = solver.eigenvalues().cast<std::complex<double>>();
    s.vectors = solver.eigenvectors().cast<std::complex<double>>();
    s.inverse = solver.eigenvectors().transpose().cast<std::complex<double>>();
  } else {
    Eigen::EigenSolver<Eigen::MatrixXd> solver(m);
    if (solver.info() != Eigen::Success) {
      throw numerical_error("spectral decomposition failed");
    }
    s.values = solver.eigenvalues();
    s.vectors = solver.eigenvectors();
    Eigen::FullPivLU<Eigen::MatrixXcd> lu(s.vectors);
    if (!lu.isInvertible()) {
      throw numerical_error("generator is not diagonalizable");
    }
    s.inverse = lu.inverse();
  }
  const double err =
      (s.vectors * s.values.asDiagonal() * s.inverse - m.cast<std::complex<double>>())
          .cwiseAbs()
          .maxCoeff();
  if (err > 1e-9 * scale) {
    throw numerical_error("spectral decomposition is inaccurate");
  }
  return s;
}

inline Eigen::MatrixXd to_real(const Eigen::MatrixXcd& m, const char* what) {
  if (m.imag().cwiseAbs().maxCoeff() > 1e-9) {
    throw numerical_error(std::string(what) + ": complex residue");
  }
  return m.real();
}

// Entries clamped upward to zero when within tolerance of it.
inline void clamp_nonnegative(Eigen::MatrixXd& m, const char* what) {
  for (int i = 0; i < m.rows(); ++i) {
    for (int j = 0; j < m.cols(); ++j) {
      if (m(i, j) < 0.0) {
        if (m(i, j) < -1e-12) {
          throw numerical_error(std::string(what) + ": negative entry beyond tolerance");
        }
        m(i, j) = 0.0;
      }
    }
  }
}

inline Eigen::MatrixXd label_rate_matrix(const Generator& gen, const LabelSet& labels) {
  if (labels.max_state() >= gen.size()) {
    throw std::invalid_argument("label set addresses states outside the generator");
  }
  Eigen::MatrixXd m = Eigen::MatrixXd::Zero(gen.size(), gen.size());
  for (const auto& [u, v] : labels.pairs()) m(u, v) = gen.rates(u, v);
  return m;
}

inline bool strongly_connected(const Eigen::MatrixXd& rates) {
  const int s = static_cast<int>(rates.rows());
  auto reaches_all = [&](bool forward) {
    std::vector<bool> seen(s, false);
    std::vector<int> stack{0};
    seen[0] = true;
    while (!stack.empty()) {
      const int u = stack.back();
      stack.pop_back();
      for (int v = 0; v < s; ++v) {
        const double rate = forward ? rates(u, v) : rates(v, u);
        if (u != v && rate > 0.0 && !seen[v]) {
          seen[v] = true;
          stack.push_back(v);
        }
      }
    }
    return std::all_of(seen.begin(), seen.end(), [](bool b) { return b; });
  };
  return reaches_all(true) && reaches_all(false);
}

}  // namespace detail

struct StationaryDist {
  std::vector<double> probs;
};

// For the named families the stationary distribution is uniform by the
// symmetry of the rate matrix; custom generators get the normalized left
// null vector, which requires irreducibility.
inline StationaryDist stationary_distribution(const Generator& gen) {
  const int s = gen.size();
  if (gen.family != RateFamily::custom) {
    return StationaryDist{std::vector<double>(s, 1.0 / static_cast<double>(s))};
  }
  if (!detail::strongly_connected(gen.rates)) {
    throw std::invalid_argument("stationary_distribution: reducible generator");
  }
  Eigen::FullPivLU<Eigen::MatrixXd> lu(gen.rates.transpose());
  const Eigen::MatrixXd kernel = lu.kernel();
  if (kernel.cols() != 1) {
    throw std::invalid_argument("stationary_distribution: reducible generator");
  }
  Eigen::VectorXd pi = kernel.col(0);
  const double total = pi.sum();
  if (std::abs(total) < 1e-14) {
    throw numerical_error("stationary_distribution: degenerate null vector");
  }
  pi /= total;
  for (int i = 0; i < s; ++i) {
    if (pi(i) < -1e-12) {
      throw std::invalid_argument("stationary_distribution: reducible generator");
    }
    pi(i) = std::max(pi(i), 0.0);
  }
  if ((pi.transpose() * gen.rates).cwiseAbs().maxCoeff() > 1e-10) {
    throw numerical_error("stationary_distribution: residual too large");
  }
  return StationaryDist{std::vector<double>(pi.data(), pi.data() + s)};
}

// e^(rates * t) via the spectral decomposition.
inline Eigen::MatrixXd transition_matrix(const Generator& gen, double t) {
  if (!(t >= 0.0)) throw std::invalid_argument("transition_matrix: t must be nonnegative");
  const auto spec = detail::decompose(gen.rates);
  Eigen::VectorXcd scaled(spec.values.size());
  for (int i = 0; i < spec.values.size(); ++i) scaled(i) = std::exp(spec.values(i) * t);
  Eigen::MatrixXd p = detail::to_real(spec.vectors * scaled.asDiagonal() * spec.inverse,
                                      "transition_matrix");
  detail::clamp_nonnegative(p, "transition_matrix");
  for (int u = 0; u < p.rows(); ++u) {
    if (std::abs(p.row(u).sum() - 1.0) > 1e-10) {
      throw numerical_error("transition_matrix: row sums drifted from 1");
    }
  }
  return p;
}

// Mean number of labeled transitions per unit time of the stationary chain:
// pi' Lambda_L 1.
inline double mean_labeled_count(const Generator& gen, const LabelSet& labels) {
  const auto pi = stationary_distribution(gen);
  double total = 0.0;
  for (const auto& [u, v] : labels.pairs()) {
    if (u >= gen.size() || v >= gen.size()) {
      throw std::invalid_argument("label set addresses states outside the generator");
    }
    total += pi.probs[u] * gen.rates(u, v);
  }
  return total;
}

// Entry (k,l) is E[N_L 1{X_1 = l} | X_0 = k], computed spectrally: with
// rates = U D U^-1 and B = U^-1 Lambda_L U, the time-ordered integral over
// [0,1] is U (B .* J) U^-1 where J_ij = (e^{d_i} - e^{d_j}) / (d_i - d_j),
// with the limiting value e^{d_i} on (near-)coincident eigenvalues.
inline Eigen::MatrixXd joint_restricted_moment(const Generator& gen, const LabelSet& labels) {
  const int s = gen.size();
  const Eigen::MatrixXd labeled = detail::label_rate_matrix(gen, labels);
  const auto spec = detail::decompose(gen.rates);
  const Eigen::MatrixXcd b = spec.inverse * labeled * spec.vectors;
  Eigen::MatrixXcd j(s, s);
  for (int r = 0; r < s; ++r) {
    const std::complex<double> er = std::exp(spec.values(r));
    for (int c = 0; c < s; ++c) {
      const std::complex<double> diff = spec.values(r) - spec.values(c);
      j(r, c) = std::abs(diff) < 1e-10 ? er : (er - std::exp(spec.values(c))) / diff;
    }
  }
  Eigen::MatrixXd moment = detail::to_real(
      spec.vectors * b.cwiseProduct(j) * spec.inverse, "joint_restricted_moment");
  detail::clamp_nonnegative(moment, "joint_restricted_moment");
  return moment;
}

// E[N_L | X_0 = k, X_1 = l] under the fitted generator.
inline double conditional_expected_count(const Generator& gen, const LabelSet& labels,
                                         int start, int end) {
  if (start < 0 || end < 0 || start >= gen.size() || end >= gen.size()) {
    throw std::invalid_argument("conditional_expected_count: state out of range");
  }
  const Eigen::MatrixXd p = transition_matrix(gen, 1.0);
  if (!(p(start, end) > 0.0)) {
    throw std::invalid_argument("conditional_expected_count: zero transition probability");
  }
  return joint_restricted_moment(gen, labels)(start, end) / p(start, end);
}

// Aligned start/end state counts m_kl.
struct PairCounts {
  explicit PairCounts(int state_count)
      : states(state_count), m(static_cast<std::size_t>(state_count) * state_count, 0) {
    if (state_count < 2) throw std::invalid_argument("PairCounts: need at least 2 states");
  }

  int states;
  std::vector<std::uint64_t> m;

  std::uint64_t& at(int k, int l) { return m[static_cast<std::size_t>(k) * states + l]; }
  std::uint64_t at(int k, int l) const { return m[static_cast<std::size_t>(k) * states + l]; }

  std::uint64_t total() const {
    std::uint64_t n = 0;
    for (auto c : m) n += c;
    return n;
  }
};

inline double class_frequency(const PairCounts& counts, const LabelSet& labels) {
  const std::uint64_t n = counts.total();
  if (n == 0) throw std::invalid_argument("class_frequency: empty counts");
  std::uint64_t hits = 0;
  for (const auto& [u, v] : labels.pairs()) {
    if (u >= counts.states || v >= counts.states) {
      throw std::invalid_argument("class_frequency: label outside the state space");
    }
    hits += counts.at(u, v);
  }
  return static_cast<double>(hits) / static_cast<double>(n);
}

inline double diagonal_frequency(const PairCounts& counts) {
  const std::uint64_t n = counts.total();
  if (n == 0) throw std::invalid_argument("diagonal_frequency: empty counts");
  std::uint64_t hits = 0;
  for (int k = 0; k < counts.states; ++k) hits += counts.at(k, k);
  return static_cast<double>(hits) / static_cast<double>(n);
}

// One aligned column per draw: start from the stationary distribution, end
// from the time-1 transition row.
inline PairCounts simulate_alignment(const Generator& gen, std::uint64_t n,
                                     stats::SeededStream& rng) {
  if (n == 0) throw std::invalid_argument("simulate_alignment: n must be positive");
  const int s = gen.size();
  const auto pi = stationary_distribution(gen);
  const Eigen::MatrixXd p = transition_matrix(gen, 1.0);
  std::vector<std::vector<double>> rows(s, std::vector<double>(s));
  for (int u = 0; u < s; ++u) {
    for (int v = 0; v < s; ++v) rows[u][v] = p(u, v);
  }
  PairCounts counts(s);
  for (std::uint64_t i = 0; i < n; ++i) {
    const auto start = static_cast<int>(stats::sample_categorical(rng, pi.probs));
    const auto end = static_cast<int>(stats::sample_categorical(rng, rows[start]));
    ++counts.at(start, end);
  }
  return counts;
}

struct K2pRates {
  double alpha = 0.0;
  double beta = 0.0;
};

struct K3pRates {
  double alpha = 0.0;
  double beta = 0.0;
  double gamma = 0.0;
};

// Jukes-Cantor distance from the observed identity fraction:
// gamma-hat = -(1/4) ln[1 - (4/3)(1 - f_D)], defined only for 1 - f_D < 3/4.
inline double fit_jc_from_diagonal_freq(double f_diag) {
  const double mismatch = 1.0 - f_diag;
  if (!(mismatch < 0.75)) {
    throw saturation_error("fit_jc: observed divergence saturates the Jukes-Cantor distance");
  }
  return 0.0 - 0.25 * std::log(1.0 - (4.0 / 3.0) * mismatch);
}

inline double fit_jc(const PairCounts& counts) {
  return fit_jc_from_diagonal_freq(diagonal_frequency(counts));
}

// Kimura two-parameter MLE by inverting the three mutation-class
// probabilities.
inline K2pRates fit_k2p_from_class_freqs(double f_transitions, double f_transversions) {
  const double arg_beta = 1.0 - 2.0 * f_transversions;
  const double arg_sum = 1.0 - 2.0 * f_transitions - f_transversions;
  if (!(arg_beta > 0.0) || !(arg_sum > 0.0)) {
    throw saturation_error("fit_k2p: observed divergence saturates the Kimura distances");
  }
  K2pRates rates;
  rates.beta = 0.0 - 0.25 * std::log(arg_beta);
  rates.alpha = 0.0 - 0.5 * std::log(arg_sum) - rates.beta;
  return rates;
}

inline K2pRates fit_k2p(const PairCounts& counts) {
  if (counts.states != k_nucleotides) {
    throw std::invalid_argument("fit_k2p: needs the four-state nucleotide space");
  }
  return fit_k2p_from_class_freqs(class_frequency(counts, transitions()),
                                  class_frequency(counts, transversions()));
}

// Kimura three-parameter MLE: the Klein-group characters turn the four class
// frequencies into the three exponential decay factors, which invert to the
// rates.
inline K3pRates fit_k3p_from_class_freqs(double f_transitions, double f_ac_gt,
                                         double f_at_gc) {
  const double f_same = 1.0 - f_transitions - f_ac_gt - f_at_gc;
  const double e1 = f_same + f_transitions - f_ac_gt - f_at_gc;  // e^{-2(beta+gamma)}
  const double e2 = f_same - f_transitions + f_ac_gt - f_at_gc;  // e^{-2(alpha+gamma)}
  const double e3 = f_same - f_transitions - f_ac_gt + f_at_gc;  // e^{-2(alpha+beta)}
  if (!(e1 > 0.0) || !(e2 > 0.0) || !(e3 > 0.0)) {
    throw saturation_error("fit_k3p: observed divergence saturates the Kimura distances");
  }
  K3pRates rates;
  rates.alpha = 0.0 - 0.25 * std::log(e2 * e3 / e1);
  rates.beta = 0.0 - 0.25 * std::log(e1 * e3 / e2);
  rates.gamma = 0.0 - 0.25 * std::log(e1 * e2 / e3);
  return rates;
}

inline K3pRates fit_k3p(const PairCounts& counts) {
  if (counts.states != k_nucleotides) {
    throw std::invalid_argument("fit_k3p: needs the four-state nucleotide space");
  }
  return fit_k3p_from_class_freqs(class_frequency(counts, transitions()),
                                  class_frequency(counts, transversions_ac_gt()),
                                  class_frequency(counts, transversions_at_gc()));
}

inline double plugin_labeled(const Generator& fitted, const LabelSet& labels) {
  return mean_labeled_count(fitted, labels);
}

// (1/n) sum over observed pairs of the endpoint-conditioned expectations.
inline double imputation_labeled(const Generator& fitted, const LabelSet& labels,
                                 const PairCounts& counts) {
  if (counts.states != fitted.size()) {
    throw std::invalid_argument("imputation_labeled: state-space mismatch");
  }
  const std::uint64_t n = counts.total();
  if (n == 0) throw std::invalid_argument("imputation_labeled: empty counts");
  const Eigen::MatrixXd p = transition_matrix(fitted, 1.0);
  const Eigen::MatrixXd moment = joint_restricted_moment(fitted, labels);
  double acc = 0.0;
  for (int k = 0; k < counts.states; ++k) {
    for (int l = 0; l < counts.states; ++l) {
      const std::uint64_t m = counts.at(k, l);
      if (m == 0) continue;
      if (!(p(k, l) > 0.0)) {
        throw std::invalid_argument(
            "imputation_labeled: observed pair has zero transition probability");
      }
      acc += static_cast<double>(m) * moment(k, l) / p(k, l);
    }
  }
  return acc / static_cast<double>(n);
}

struct SpanCheck {
  bool holds = false;
  double residual = 0.0;  // Frobenius norm of the least-squares misfit
};

// Checks whether Lambda_L(theta-hat) - I (pi' Lambda_L 1) lies in the span of
// the generator's parameter derivatives; when it does, plug-in and imputation
// estimators of E(N_L) coincide at the MLE.
inline SpanCheck theorem1_condition(const Generator& fitted, const LabelSet& labels) {
  if (fitted.rate_derivatives.empty()) {
    throw std::invalid_argument("theorem1_condition: generator has no derivative basis");
  }
  const int s = fitted.size();
  const Eigen::MatrixXd target = detail::label_rate_matrix(fitted, labels) -
                                 mean_labeled_count(fitted, labels) *
                                     Eigen::MatrixXd::Identity(s, s);
  const auto r = static_cast<int>(fitted.rate_derivatives.size());
  Eigen::MatrixXd basis(s * s, r);
  for (int j = 0; j < r; ++j) {
    const auto& d = fitted.rate_derivatives[j];
    if (d.rows() != s || d.cols() != s) {
      throw std::invalid_argument("theorem1_condition: derivative size mismatch");
    }
    basis.col(j) = Eigen::Map<const Eigen::VectorXd>(d.data(), s * s);
  }
  const Eigen::VectorXd flat = Eigen::Map<const Eigen::VectorXd>(target.data(), s * s);
  const Eigen::VectorXd coeffs = basis.colPivHouseholderQr().solve(flat);
  SpanCheck check;
  check.residual = (basis * coeffs - flat).norm();
  check.holds = check.residual <= 1e-8 * flat.norm();
  return check;
}

struct AsymptoticLimits {
  double truth = 0.0;       // E(N_L1) under the true K2P model: alpha
  double plug_in = 0.0;     // a.s. limit of the JC plug-in estimator
  double imputation = 0.0;  // a.s. limit of the JC imputation estimator
};

// Almost-sure limits of the plug-in and imputation estimators of the mean
// transition count when a Jukes-Cantor model is fitted to Kimura
// two-parameter data.
inline AsymptoticLimits theorem2_limits(double alpha, double beta) {
  if (!(alpha > 0.0) || !(beta > 0.0)) {
    throw std::invalid_argument("theorem2_limits: rates must be positive");
  }
  AsymptoticLimits lim;
  lim.truth = alpha;
  lim.plug_in = beta - 0.25 * std::log((1.0 + 2.0 * std::exp(2.0 * (beta - alpha))) / 3.0);
  // With u = e^{-4 beta}, v = e^{-2(alpha+beta)} and A = (u + 2v)/3, the
  // imputation limit is the plug-in limit times 1 + 4A(u - v)/(3(1 - A));
  // note 3(1 - A) = 3 - u - 2v.
  const double u = std::exp(-4.0 * beta);
  const double v = std::exp(-2.0 * (alpha + beta));
  lim.imputation =
      lim.plug_in * (1.0 + 4.0 * (u + 2.0 * v) * (u - v) / (3.0 * (3.0 - u - 2.0 * v)));
  return lim;
}

struct PathOracleResult {
  double mean = 0.0;
  double std_error = 0.0;
  std::uint64_t accepted = 0;
  std::uint64_t attempted = 0;
};

// Independent Monte Carlo check of the endpoint-conditioned moment: simulate
// jump-chain paths over [0,1] from `start`, keep those ending at `end`, and
// average the labeled jump counts.
inline PathOracleResult mc_path_oracle(const Generator& gen, const LabelSet& labels,
                                       int start, int end, std::uint64_t samples,
                                       stats::SeededStream& rng) {
  const int s = gen.size();
  if (start < 0 || end < 0 || start >= s || end >= s) {
    throw std::invalid_argument("mc_path_oracle: state out of range");
  }
  if (samples == 0) throw std::invalid_argument("mc_path_oracle: need at least one sample");
  if (labels.max_state() >= s) {
    throw std::invalid_argument("mc_path_oracle: label outside the state space");
  }

  std::vector<double> exit_rate(s);
  std::vector<std::vector<double>> jump_probs(s);
  std::vector<std::vector<bool>> labeled(s, std::vector<bool>(s, false));
  for (const auto& [u, v] : labels.pairs()) labeled[u][v] = true;
  for (int u = 0; u < s; ++u) {
    exit_rate[u] = -gen.rates(u, u);
    jump_probs[u].resize(s, 0.0);
    if (exit_rate[u] > 0.0) {
      for (int v = 0; v < s; ++v) {
        if (v != u) jump_probs[u][v] = gen.rates(u, v) / exit_rate[u];
      }
    }
  }

  PathOracleResult result;
  double sum = 0.0, sum_sq = 0.0;
  while (result.accepted < samples) {
    ++result.attempted;
    if (result.attempted >= 10'000'000 &&
        static_cast<double>(result.accepted) <
            1e-6 * static_cast<double>(result.attempted)) {
      throw infeasible_error("mc_path_oracle: acceptance probability below 1e-6");
    }
    int state = start;
    double clock = 0.0;
    std::uint64_t labeled_jumps = 0;
    for (;;) {
      if (exit_rate[state] <= 0.0) break;  // absorbing under this generator
      clock += stats::sample_exponential(rng, exit_rate[state]);
      if (clock > 1.0) break;
      const auto next = static_cast<int>(stats::sample_categorical(rng, jump_probs[state]));
      if (labeled[state][next]) ++labeled_jumps;
      state = next;
    }
    if (state != end) continue;
    ++result.accepted;
    const auto x = static_cast<double>(labeled_jumps);
    sum += x;
    sum_sq += x * x;
  }
  const auto m = static_cast<double>(result.accepted);
  result.mean = sum / m;
  const double var = m > 1.0 ? std::max(0.0, (sum_sq - sum * sum / m) / (m - 1.0)) : 0.0;
  result.std_error = std::sqrt(var / m);
  return result;
}

// Expectation-operator view of a fitted generator. Each registered summary
// is the labeled transition count of one label set; observations are
// (start, end) state pairs.
inline estimators::FittedModel<std::pair<int, int>> make_fitted_model(
    const Generator& fitted, const std::map<std::string, LabelSet>& summaries) {
  struct Cache {
    Eigen::MatrixXd p;
    std::map<std::string, double> plug_in;
    std::map<std::string, Eigen::MatrixXd> moments;
  };
  auto cache = std::make_shared<Cache>();
  cache->p = transition_matrix(fitted, 1.0);
  for (const auto& [name, labels] : summaries) {
    cache->plug_in[name] = mean_labeled_count(fitted, labels);
    cache->moments[name] = joint_restricted_moment(fitted, labels);
  }

  estimators::FittedModel<std::pair<int, int>> model;
  model.unconditional_mean = [cache](const std::string& summary) -> estimators::Vector {
    auto found = cache->plug_in.find(summary);
    if (found == cache->plug_in.end()) {
      throw config_error("ctmc model: unknown summary '" + summary + "'");
    }
    return {found->second};
  };
  model.conditional_mean = [cache](const std::string& summary,
                                   const std::pair<int, int>& obs) -> estimators::Vector {
    auto found = cache->moments.find(summary);
    if (found == cache->moments.end()) {
      throw config_error("ctmc model: unknown summary '" + summary + "'");
    }
    const auto& [k, l] = obs;
    if (k < 0 || l < 0 || k >= cache->p.rows() || l >= cache->p.cols()) {
      throw std::invalid_argument("ctmc model: state out of range");
    }
    if (!(cache->p(k, l) > 0.0)) {
      throw std::invalid_argument("ctmc model: zero transition probability");
    }
    return {found->second(k, l) / cache->p(k, l)};
  };
  return model;
}

}  // namespace impest::ctmc
