#include <catch2/catch_amalgamated.hpp>

#include <Eigen/Dense>

#include <cmath>
#include <map>
#include <utility>
#include <vector>

#include "impest/ctmc.hpp"
#include "impest/estimators.hpp"
#include "impest/stats.hpp"
#include "test_support.hpp"

using namespace impest;
using ctmc::Generator;
using ctmc::PairCounts;
using ctmc::RateFamily;

namespace {

constexpr int A = 0, G = 1, C = 2, T = 3;

Generator jc(double gamma) { return ctmc::build_generator(RateFamily::jukes_cantor, {gamma}); }

Generator k2p(double alpha, double beta) {
  return ctmc::build_generator(RateFamily::kimura_two_param, {alpha, beta});
}

Generator k3p(double a, double b, double c) {
  return ctmc::build_generator(RateFamily::kimura_three_param, {a, b, c});
}

// Multinomial class log-likelihood of a pair-count table under a named
// family, used as the numeric-MLE oracle.
double observed_log_likelihood(const PairCounts& counts, const Generator& gen) {
  const Eigen::MatrixXd p = ctmc::transition_matrix(gen, 1.0);
  double ll = 0.0;
  for (int k = 0; k < 4; ++k) {
    for (int l = 0; l < 4; ++l) {
      if (counts.at(k, l) == 0) continue;
      if (!(p(k, l) > 0.0)) return -1e300;
      ll += static_cast<double>(counts.at(k, l)) * std::log(0.25 * p(k, l));
    }
  }
  return ll;
}

}  // namespace

TEST_CASE("generator construction follows the three-class layout") {
  const auto gen = k3p(0.1, 0.2, 0.3);
  REQUIRE(gen.rates(A, G) == 0.1);
  REQUIRE(gen.rates(A, C) == 0.2);
  REQUIRE(gen.rates(A, T) == 0.3);
  REQUIRE(gen.rates(G, C) == 0.3);
  REQUIRE(gen.rates(G, T) == 0.2);
  REQUIRE(gen.rates(C, T) == 0.1);
  REQUIRE(gen.rates(T, A) == 0.3);
  for (int u = 0; u < 4; ++u) {
    REQUIRE(std::abs(gen.rates.row(u).sum()) < 1e-12);
  }

  const auto jc_gen = jc(0.17);
  const auto k3_as_jc = k3p(0.17, 0.17, 0.17);
  REQUIRE((jc_gen.rates - k3_as_jc.rates).cwiseAbs().maxCoeff() == 0.0);

  const auto k2 = k2p(0.3, 0.05);
  REQUIRE(k2.rates(A, A) == Catch::Approx(-(0.3 + 2 * 0.05)));
  REQUIRE(k2.rate_derivatives.size() == 2);

  REQUIRE_THROWS_AS(ctmc::build_generator(RateFamily::jukes_cantor, {-0.1}),
                    std::invalid_argument);
  REQUIRE_THROWS_AS(ctmc::build_generator(RateFamily::kimura_two_param, {0.1}),
                    std::invalid_argument);
  REQUIRE_THROWS_AS(ctmc::custom_generator(Eigen::MatrixXd::Ones(3, 3)),
                    std::invalid_argument);
}

TEST_CASE("transition matrix matches the closed forms") {
  const auto identity = ctmc::transition_matrix(k2p(0.2, 0.1), 0.0);
  REQUIRE((identity - Eigen::MatrixXd::Identity(4, 4)).cwiseAbs().maxCoeff() < 1e-12);

  // Spec anchor: JC diagonal at gamma = 0.25, t = 1.
  const auto p_jc = ctmc::transition_matrix(jc(0.25), 1.0);
  REQUIRE(p_jc(A, A) == Catch::Approx(0.25 + 0.75 * std::exp(-1.0)).epsilon(1e-12));

  auto rng = stats::derive_stream(501, 0);
  for (double t : {0.1, 0.5, 1.0, 2.0}) {
    const double gamma = 0.01 + rng.uniform() * 0.99;
    const auto pj = ctmc::transition_matrix(jc(gamma), t);
    const double alpha = 0.01 + rng.uniform() * 0.99;
    const double beta = 0.01 + rng.uniform() * 0.99;
    const auto pk = ctmc::transition_matrix(k2p(alpha, beta), t);
    for (int k = 0; k < 4; ++k) {
      REQUIRE(std::abs(pj.row(k).sum() - 1.0) < 1e-10);
      for (int l = 0; l < 4; ++l) {
        REQUIRE(pj(k, l) ==
                Catch::Approx(test_support::jc_prob(gamma, t, k == l)).margin(1e-12));
        const bool is_transition = ctmc::transitions().contains(k, l);
        REQUIRE(pk(k, l) ==
                Catch::Approx(test_support::k2p_prob(alpha, beta, t, is_transition, k == l))
                    .margin(1e-12));
      }
    }
  }
  REQUIRE_THROWS_AS(ctmc::transition_matrix(jc(0.1), -1.0), std::invalid_argument);
}

TEST_CASE("stationary distributions") {
  for (const auto& gen : {jc(0.3), k2p(0.2, 0.05), k3p(0.1, 0.2, 0.3)}) {
    const auto pi = ctmc::stationary_distribution(gen);
    for (double p : pi.probs) REQUIRE(p == 0.25);
  }

  Eigen::MatrixXd two(2, 2);
  const double a = 1.3, b = 0.4;
  two << -a, a, b, -b;
  const auto pi = ctmc::stationary_distribution(ctmc::custom_generator(two));
  REQUIRE(pi.probs[0] == Catch::Approx(b / (a + b)).epsilon(1e-12));
  REQUIRE(pi.probs[1] == Catch::Approx(a / (a + b)).epsilon(1e-12));
  Eigen::RowVector2d pv(pi.probs[0], pi.probs[1]);
  REQUIRE((pv * two).cwiseAbs().maxCoeff() < 1e-10);

  Eigen::MatrixXd absorbing(2, 2);
  absorbing << -1.0, 1.0, 0.0, 0.0;
  REQUIRE_THROWS_AS(ctmc::stationary_distribution(ctmc::custom_generator(absorbing)),
                    std::invalid_argument);
}

TEST_CASE("mean labeled count reads off the class rates") {
  const auto gen = k2p(0.23, 0.07);
  REQUIRE(ctmc::mean_labeled_count(gen, ctmc::transitions()) == Catch::Approx(0.23));
  REQUIRE(ctmc::mean_labeled_count(gen, ctmc::transversions()) == Catch::Approx(0.14));
  REQUIRE(ctmc::mean_labeled_count(gen, ctmc::LabelSet{}) == 0.0);
  // JC with all off-diagonal labels: 3 gamma.
  REQUIRE(ctmc::mean_labeled_count(jc(0.1), ctmc::all_substitutions(4)) ==
          Catch::Approx(0.3).epsilon(1e-12));
}

TEST_CASE("joint restricted moment matches the JC closed form and commutation") {
  const double gamma = 0.1;
  const auto gen = jc(gamma);
  const auto moment = ctmc::joint_restricted_moment(gen, ctmc::transitions());

  const double on_label = gamma * (0.25 + 0.75 * std::exp(-4.0 * gamma));
  const double off_label = gamma * (0.25 - 0.25 * std::exp(-4.0 * gamma));
  REQUIRE(on_label == Catch::Approx(0.0752740).margin(5e-7));
  for (int k = 0; k < 4; ++k) {
    for (int l = 0; l < 4; ++l) {
      const double expected = ctmc::transitions().contains(k, l) ? on_label : off_label;
      REQUIRE(moment(k, l) == Catch::Approx(expected).margin(1e-12));
    }
  }

  // Commutation shortcut: the integral equals Lambda_L e^{Lambda} for JC.
  Eigen::MatrixXd labeled = Eigen::MatrixXd::Zero(4, 4);
  for (const auto& [u, v] : ctmc::transitions().pairs()) labeled(u, v) = gamma;
  const Eigen::MatrixXd shortcut = labeled * test_support::expm_series(gen.rates);
  REQUIRE((moment - shortcut).cwiseAbs().maxCoeff() < 1e-12);

  const auto zero = ctmc::joint_restricted_moment(gen, ctmc::LabelSet{});
  REQUIRE(zero.cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("joint restricted moment agrees with direct quadrature") {
  for (const auto& gen : {k2p(0.15, 0.05), k3p(0.3, 0.1, 0.2)}) {
    for (const auto* labels : {&ctmc::transitions(), &ctmc::transversions_at_gc()}) {
      Eigen::MatrixXd labeled = Eigen::MatrixXd::Zero(4, 4);
      for (const auto& [u, v] : labels->pairs()) labeled(u, v) = gen.rates(u, v);
      const auto expected = test_support::moment_integral_quadrature(gen.rates, labeled);
      const auto moment = ctmc::joint_restricted_moment(gen, *labels);
      REQUIRE((moment - expected).cwiseAbs().maxCoeff() < 1e-9);
    }
  }

  // A non-symmetric custom generator goes through the complex spectral path.
  Eigen::MatrixXd rates(3, 3);
  rates << -0.5, 0.3, 0.2, 0.1, -0.4, 0.3, 0.25, 0.05, -0.3;
  const auto gen = ctmc::custom_generator(rates);
  const ctmc::LabelSet labels(std::vector<std::pair<int, int>>{{0, 1}, {2, 0}});
  Eigen::MatrixXd labeled = Eigen::MatrixXd::Zero(3, 3);
  for (const auto& [u, v] : labels.pairs()) labeled(u, v) = rates(u, v);
  const auto expected = test_support::moment_integral_quadrature(rates, labeled);
  REQUIRE((ctmc::joint_restricted_moment(gen, labels) - expected).cwiseAbs().maxCoeff() < 1e-9);
}

TEST_CASE("row sums of the restricted moment give the unconditional expectation") {
  // Summing E[N 1{X1=l} | X0=k] over l and weighting starts by pi recovers
  // the total jump rate when every substitution is labeled.
  const auto gen = k3p(0.12, 0.28, 0.07);
  const auto moment = ctmc::joint_restricted_moment(gen, ctmc::all_substitutions(4));
  const auto pi = ctmc::stationary_distribution(gen);
  double total = 0.0;
  for (int k = 0; k < 4; ++k) total += pi.probs[k] * moment.row(k).sum();
  double jump_rate = 0.0;
  for (int u = 0; u < 4; ++u) jump_rate -= pi.probs[u] * gen.rates(u, u);
  REQUIRE(total == Catch::Approx(jump_rate).epsilon(1e-10));
}

TEST_CASE("conditional expected count behaves across the rate range") {
  const double gamma = 0.1;
  const auto gen = jc(gamma);
  const double expected =
      gamma * (0.25 + 0.75 * std::exp(-4.0 * gamma)) / (0.25 - 0.25 * std::exp(-4.0 * gamma));
  REQUIRE(ctmc::conditional_expected_count(gen, ctmc::transitions(), A, G) ==
          Catch::Approx(expected).epsilon(1e-12));

  // Conditional on one observed change, the labeled count approaches one as
  // the rate vanishes.
  REQUIRE(ctmc::conditional_expected_count(jc(1e-5), ctmc::transitions(), C, T) ==
          Catch::Approx(1.0).margin(1e-3));

  for (int k = 0; k < 4; ++k) {
    for (int l = 0; l < 4; ++l) {
      REQUIRE(ctmc::conditional_expected_count(gen, ctmc::transversions(), k, l) >= 0.0);
    }
  }

  // A zero-rate generator never leaves the diagonal.
  REQUIRE_THROWS_AS(ctmc::conditional_expected_count(jc(0.0), ctmc::transitions(), A, G),
                    std::invalid_argument);
}

TEST_CASE("simulated alignments have the right marginals") {
  auto rng = stats::derive_stream(502, 0);

  const auto frozen = ctmc::simulate_alignment(jc(0.0), 1000, rng);
  REQUIRE(ctmc::diagonal_frequency(frozen) == 1.0);

  const auto single = ctmc::simulate_alignment(k2p(0.2, 0.1), 1, rng);
  REQUIRE(single.total() == 1);

  const double alpha = 0.18, beta = 0.06;
  const auto counts = ctmc::simulate_alignment(k2p(alpha, beta), 1000000, rng);
  const double p1 = test_support::k2p_prob(alpha, beta, 1.0, true, false) * 4.0 * 0.25;
  const double p2 = test_support::k2p_prob(alpha, beta, 1.0, false, false) * 8.0 * 0.25;
  const double pd = test_support::k2p_prob(alpha, beta, 1.0, false, true) * 4.0 * 0.25;
  REQUIRE(std::abs(ctmc::class_frequency(counts, ctmc::transitions()) - p1) < 0.005);
  REQUIRE(std::abs(ctmc::class_frequency(counts, ctmc::transversions()) - p2) < 0.005);
  REQUIRE(std::abs(ctmc::diagonal_frequency(counts) - pd) < 0.005);
}

TEST_CASE("JC distance fit: closed form, saturation, numeric check") {
  REQUIRE(ctmc::fit_jc_from_diagonal_freq(1.0) == 0.0);
  REQUIRE_THROWS_AS(ctmc::fit_jc_from_diagonal_freq(0.25), saturation_error);
  const double expected = -0.25 * std::log(1.0 - (4.0 / 3.0) * 0.1);
  REQUIRE(ctmc::fit_jc_from_diagonal_freq(0.9) == Catch::Approx(expected).epsilon(1e-14));

  // Numeric maximization of the observed-data likelihood agrees.
  auto rng = stats::derive_stream(503, 0);
  for (int rep = 0; rep < 5; ++rep) {
    const double gamma = 0.02 + rng.uniform() * 0.3;
    const auto counts = ctmc::simulate_alignment(jc(gamma), 3000, rng);
    const double closed = ctmc::fit_jc(counts);
    const auto numeric = test_support::nelder_mead_max(
        [&](const std::vector<double>& x) {
          return observed_log_likelihood(counts, jc(std::exp(x[0])));
        },
        {std::log(0.1)}, 0.4);
    REQUIRE(closed == Catch::Approx(std::exp(numeric[0])).margin(1e-4));
  }
}

TEST_CASE("K2P fit inverts the class probabilities") {
  const double alpha = 0.23, beta = 0.083;
  const double p1 = test_support::k2p_prob(alpha, beta, 1.0, true, false) * 4.0 * 0.25;
  const double p2 = test_support::k2p_prob(alpha, beta, 1.0, false, false) * 8.0 * 0.25;
  const auto fit = ctmc::fit_k2p_from_class_freqs(p1, p2);
  REQUIRE(fit.alpha == Catch::Approx(alpha).margin(1e-12));
  REQUIRE(fit.beta == Catch::Approx(beta).margin(1e-12));

  // Class frequencies consistent with alpha = beta reduce to the JC fit.
  const double g1 = test_support::jc_prob(0.14, 1.0, false) * 4.0 * 0.25;
  const auto nested = ctmc::fit_k2p_from_class_freqs(g1, 2.0 * g1);
  const double jc_fit = ctmc::fit_jc_from_diagonal_freq(1.0 - 3.0 * g1);
  REQUIRE(nested.alpha == Catch::Approx(nested.beta).margin(1e-12));
  REQUIRE(nested.alpha == Catch::Approx(jc_fit).margin(1e-12));

  REQUIRE_THROWS_AS(ctmc::fit_k2p_from_class_freqs(0.3, 0.5), saturation_error);

  auto rng = stats::derive_stream(504, 0);
  const auto counts = ctmc::simulate_alignment(k2p(0.1, 0.05), 100000, rng);
  const auto sim_fit = ctmc::fit_k2p(counts);
  REQUIRE(std::abs(sim_fit.alpha - 0.1) < 0.01);
  REQUIRE(std::abs(sim_fit.beta - 0.05) < 0.01);
}

TEST_CASE("K3P fit inverts the class probabilities and nests") {
  const double a = 0.1, b = 0.2, c = 0.3;
  const auto p = ctmc::transition_matrix(k3p(a, b, c), 1.0);
  const double fa = p(A, G), fb = p(A, C), fc = p(A, T);
  const auto fit = ctmc::fit_k3p_from_class_freqs(fa, fb, fc);
  REQUIRE(fit.alpha == Catch::Approx(a).margin(1e-12));
  REQUIRE(fit.beta == Catch::Approx(b).margin(1e-12));
  REQUIRE(fit.gamma == Catch::Approx(c).margin(1e-12));

  const double g1 = test_support::jc_prob(0.2, 1.0, false);
  const auto nested = ctmc::fit_k3p_from_class_freqs(g1, g1, g1);
  REQUIRE(nested.alpha == Catch::Approx(0.2).margin(1e-12));
  REQUIRE(nested.beta == Catch::Approx(0.2).margin(1e-12));
  REQUIRE(nested.gamma == Catch::Approx(0.2).margin(1e-12));

  auto rng = stats::derive_stream(505, 0);
  const auto counts = ctmc::simulate_alignment(k3p(a, b, c), 100000, rng);
  const auto sim_fit = ctmc::fit_k3p(counts);
  REQUIRE(std::abs(sim_fit.alpha - a) < 0.01);
  REQUIRE(std::abs(sim_fit.beta - b) < 0.01);
  REQUIRE(std::abs(sim_fit.gamma - c) < 0.01);

  // Numeric maximization over the three log-rates agrees with the inversion.
  for (int rep = 0; rep < 3; ++rep) {
    const auto data = ctmc::simulate_alignment(
        k3p(0.05 + rng.uniform() * 0.2, 0.05 + rng.uniform() * 0.2,
            0.05 + rng.uniform() * 0.2),
        3000, rng);
    const auto closed = ctmc::fit_k3p(data);
    const auto numeric = test_support::nelder_mead_max(
        [&](const std::vector<double>& x) {
          return observed_log_likelihood(data, k3p(std::exp(x[0]), std::exp(x[1]), std::exp(x[2])));
        },
        {std::log(0.1), std::log(0.1), std::log(0.1)}, 0.4);
    REQUIRE(closed.alpha == Catch::Approx(std::exp(numeric[0])).margin(2e-4));
    REQUIRE(closed.beta == Catch::Approx(std::exp(numeric[1])).margin(2e-4));
    REQUIRE(closed.gamma == Catch::Approx(std::exp(numeric[2])).margin(2e-4));
  }
}

TEST_CASE("K2P numeric maximizer validates the closed-form inversion") {
  auto rng = stats::derive_stream(506, 0);
  for (int rep = 0; rep < 20; ++rep) {
    const double alpha = 0.03 + rng.uniform() * 0.35;
    const double beta = 0.03 + rng.uniform() * 0.35;
    const auto counts = ctmc::simulate_alignment(k2p(alpha, beta), 2000, rng);
    const auto closed = ctmc::fit_k2p(counts);
    const auto numeric = test_support::nelder_mead_max(
        [&](const std::vector<double>& x) {
          return observed_log_likelihood(counts, k2p(std::exp(x[0]), std::exp(x[1])));
        },
        {std::log(0.1), std::log(0.1)}, 0.4);
    REQUIRE(closed.alpha == Catch::Approx(std::exp(numeric[0])).margin(2e-4));
    REQUIRE(closed.beta == Catch::Approx(std::exp(numeric[1])).margin(2e-4));
  }
}

TEST_CASE("plug-in and imputation coincide where the span condition holds") {
  auto rng = stats::derive_stream(507, 0);

  // K2P fit on K2P data: both labeled classes.
  const auto counts = ctmc::simulate_alignment(k2p(0.12, 0.3), 20000, rng);
  const auto fit = ctmc::fit_k2p(counts);
  const auto fitted = k2p(fit.alpha, fit.beta);
  for (const auto* labels : {&ctmc::transitions(), &ctmc::transversions()}) {
    const double pi = ctmc::plugin_labeled(fitted, *labels);
    const double im = ctmc::imputation_labeled(fitted, *labels, counts);
    REQUIRE(std::abs(pi - im) < 1e-8 * std::max(1.0, std::abs(pi)));
  }

  // JC fit with the total substitution count (its sufficient statistic).
  const auto jc_fit = jc(ctmc::fit_jc(counts));
  const auto all = ctmc::all_substitutions(4);
  const double pi_all = ctmc::plugin_labeled(jc_fit, all);
  const double im_all = ctmc::imputation_labeled(jc_fit, all, counts);
  REQUIRE(std::abs(pi_all - im_all) < 1e-8 * std::max(1.0, std::abs(pi_all)));

  // But the JC fit's transition-class estimators diverge on K2P data.
  const double pi_l1 = ctmc::plugin_labeled(jc_fit, ctmc::transitions());
  const double im_l1 = ctmc::imputation_labeled(jc_fit, ctmc::transitions(), counts);
  REQUIRE(std::abs(pi_l1 - im_l1) > 1e-3);
}

TEST_CASE("span condition holds for K2P classes and fails for the JC basis") {
  auto rng = stats::derive_stream(508, 0);
  const auto counts = ctmc::simulate_alignment(k2p(0.1, 0.05), 10000, rng);

  const auto k2p_fit = ctmc::fit_k2p(counts);
  const auto k2p_gen = k2p(k2p_fit.alpha, k2p_fit.beta);
  const auto check_l1 = ctmc::theorem1_condition(k2p_gen, ctmc::transitions());
  const auto check_l2 = ctmc::theorem1_condition(k2p_gen, ctmc::transversions());
  REQUIRE(check_l1.holds);
  REQUIRE(check_l2.holds);

  const double gamma_hat = ctmc::fit_jc(counts);
  const auto jc_gen = jc(gamma_hat);
  const auto jc_check = ctmc::theorem1_condition(jc_gen, ctmc::transitions());
  REQUIRE_FALSE(jc_check.holds);
  // Least-squares geometry: residual is gamma-hat sqrt(8/3).
  REQUIRE(jc_check.residual == Catch::Approx(gamma_hat * std::sqrt(8.0 / 3.0)).epsilon(1e-9));
  REQUIRE(jc_check.residual > 1e-3);

  Eigen::MatrixXd rates(2, 2);
  rates << -1.0, 1.0, 1.0, -1.0;
  REQUIRE_THROWS_AS(
      ctmc::theorem1_condition(ctmc::custom_generator(rates), ctmc::LabelSet{}),
      std::invalid_argument);
}

TEST_CASE("theorem-2 limits: degenerate equality, ordering, dominance") {
  const auto equal = ctmc::theorem2_limits(0.1, 0.1);
  REQUIRE(equal.truth == Catch::Approx(0.1));
  REQUIRE(equal.plug_in == Catch::Approx(0.1).margin(1e-14));
  REQUIRE(equal.imputation == Catch::Approx(0.1).margin(1e-14));

  const auto fig3 = ctmc::theorem2_limits(0.1, 0.2);
  REQUIRE(std::abs(fig3.imputation - fig3.truth) < std::abs(fig3.plug_in - fig3.truth));

  // The imputation limit sits between the truth and the plug-in limit.
  for (double beta = 0.02; beta <= 0.3; beta += 0.02) {
    const auto lim = ctmc::theorem2_limits(0.01, beta);
    if (std::abs(0.01 - beta) < 1e-12) continue;
    const double lo = std::min(lim.truth, lim.plug_in);
    const double hi = std::max(lim.truth, lim.plug_in);
    REQUIRE(lim.imputation > lo);
    REQUIRE(lim.imputation < hi);
  }

  REQUIRE_THROWS_AS(ctmc::theorem2_limits(0.0, 0.1), std::invalid_argument);
}

TEST_CASE("path oracle edge cases") {
  auto rng = stats::derive_stream(509, 0);

  const auto empty = ctmc::mc_path_oracle(jc(0.2), ctmc::LabelSet{}, A, G, 2000, rng);
  REQUIRE(empty.mean == 0.0);
  REQUIRE(empty.std_error == 0.0);

  // Quick agreement check; the full-size comparison lives in the acceptance
  // suite.
  const auto oracle = ctmc::mc_path_oracle(jc(0.2), ctmc::transitions(), A, G, 20000, rng);
  const double expected = ctmc::conditional_expected_count(jc(0.2), ctmc::transitions(), A, G);
  REQUIRE(std::abs(oracle.mean - expected) < 5.0 * oracle.std_error);

  const auto lazy = ctmc::mc_path_oracle(jc(1e-4), ctmc::transitions(), A, A, 5000, rng);
  REQUIRE(lazy.mean < 1e-2);

  REQUIRE_THROWS_AS(ctmc::mc_path_oracle(jc(1e-8), ctmc::transitions(), A, G, 100, rng),
                    infeasible_error);
}

TEST_CASE("fitted-model adapter exposes labeled counts as summaries") {
  auto rng = stats::derive_stream(510, 0);
  const auto counts = ctmc::simulate_alignment(k2p(0.15, 0.08), 5000, rng);
  const auto fit = ctmc::fit_k2p(counts);
  const auto fitted = k2p(fit.alpha, fit.beta);
  const auto model = ctmc::make_fitted_model(
      fitted, {{"transitions", ctmc::transitions()}, {"transversions", ctmc::transversions()}});

  std::vector<std::pair<int, int>> observations;
  for (int k = 0; k < 4; ++k) {
    for (int l = 0; l < 4; ++l) {
      observations.insert(observations.end(), counts.at(k, l), {k, l});
    }
  }
  const auto pair = estimators::estimate_pair(model, "transitions", observations);
  REQUIRE(pair.plug_in[0] == Catch::Approx(fit.alpha).margin(1e-12));
  REQUIRE(pair.imputation[0] ==
          Catch::Approx(ctmc::imputation_labeled(fitted, ctmc::transitions(), counts))
              .margin(1e-12));
  REQUIRE_THROWS_AS(estimators::plug_in_estimate(model, "unknown"), config_error);
}
