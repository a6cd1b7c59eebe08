#pragma once

// Configuration-driven experiment runners. Each experiment consumes a JSON
// config (unknown keys are errors), fans replicates out over derived random
// substreams, and emits CSV files with fixed headers. Replicate results are
// concatenated in replicate order regardless of thread count, and floats are
// printed with shortest round-trip precision, so a (config, seed) pair maps
// to byte-identical output files.

#include <atomic>
#include <charconv>
#include <cstdint>
#include <exception>
#include <filesystem>
#include <fstream>
#include <mutex>
#include <stdexcept>
#include <string>
#include <thread>
#include <utility>
#include <vector>

#include "json.hpp"

#include "impest/ctmc.hpp"
#include "impest/errors.hpp"
#include "impest/estimators.hpp"
#include "impest/genotype.hpp"
#include "impest/mixture.hpp"
#include "impest/stats.hpp"

namespace impest::experiments {

using json = nlohmann::json;

inline std::string format_double(double v) {
  char buf[40];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

template <typename Fn>
void parallel_for(std::size_t count, unsigned threads, Fn&& fn) {
  if (threads <= 1 || count <= 1) {
    for (std::size_t i = 0; i < count; ++i) fn(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;
  auto worker = [&] {
    for (;;) {
      const std::size_t i = next.fetch_add(1);
      if (i >= count) return;
      try {
        fn(i);
      } catch (...) {
        std::lock_guard<std::mutex> lock(failure_mutex);
        if (!failure) failure = std::current_exception();
        next.store(count);
        return;
      }
    }
  };
  const unsigned pool_size = static_cast<unsigned>(
      std::min<std::size_t>(threads, count));
  std::vector<std::thread> pool;
  pool.reserve(pool_size);
  for (unsigned t = 0; t < pool_size; ++t) pool.emplace_back(worker);
  for (auto& t : pool) t.join();
  if (failure) std::rethrow_exception(failure);
}

struct MixtureParams {
  std::size_t n = 1000;
  double log_mean1 = 1.5;
  double log_mean2 = 2.5;
  double log_sd1 = 0.2;
  double log_sd2 = 0.25;
  double weight1 = 0.3;
  std::vector<double> thresholds = {5.0, 5.5, 6.0, 6.5};

  mixture::LogNormalMixtureParams truth() const {
    return mixture::LogNormalMixtureParams{log_mean1, log_mean2, log_sd1, log_sd2, weight1};
  }
};

struct GenotypeParams {
  std::size_t n = 1000;
  std::vector<double> allele_freqs = {0.3, 0.2, 0.2, 0.3};
  std::vector<double> inbreeding = {0.0, 0.125, 0.25, 0.375, 0.5};
  std::vector<std::string> mappings = {"h1", "h2"};
};

struct GenotypeBayesParams {
  GenotypeParams base;
  std::vector<double> prior = {1.0, 1.0, 1.0, 1.0};
  int iterations = 10000;
  int burn_in = 1000;
};

struct CtmcLimitsParams {
  std::vector<double> alphas = {0.01, 0.1};
  std::vector<double> betas;

  CtmcLimitsParams() {
    for (int i = 1; i <= 60; ++i) betas.push_back(0.005 * i);
  }
};

struct CtmcSimParams {
  std::vector<std::pair<double, double>> rate_pairs = {{0.01, 0.15}, {0.1, 0.05}, {0.1, 0.2}};
  std::vector<std::uint64_t> sites = {200000};
};

struct RunConfig {
  std::string experiment;
  std::uint64_t seed = 1729;
  std::uint64_t replicates = 1;
  std::string out_dir;
  MixtureParams mixture_params;
  GenotypeParams genotype_params;
  GenotypeBayesParams genotype_bayes_params;
  CtmcLimitsParams ctmc_limits_params;
  CtmcSimParams ctmc_sim_params;
};

inline const std::vector<std::string>& experiment_names() {
  static const std::vector<std::string> names = {"mixture", "genotype-ml", "genotype-bayes",
                                                 "ctmc-limits", "ctmc-sim"};
  return names;
}

inline RunConfig default_config(const std::string& experiment) {
  RunConfig cfg;
  cfg.experiment = experiment;
  if (experiment == "mixture" || experiment == "genotype-ml") {
    cfg.replicates = 1000;
  } else if (experiment == "genotype-bayes" || experiment == "ctmc-limits" ||
             experiment == "ctmc-sim") {
    cfg.replicates = 1;
  } else {
    throw config_error("config: unknown experiment '" + experiment + "'");
  }
  return cfg;
}

namespace detail {

inline void require_keys(const json& obj, const std::vector<std::string>& allowed,
                         const std::string& where) {
  for (auto it = obj.begin(); it != obj.end(); ++it) {
    bool known = false;
    for (const auto& key : allowed) {
      if (it.key() == key) {
        known = true;
        break;
      }
    }
    if (!known) throw config_error("config: unknown key '" + it.key() + "' in " + where);
  }
}

inline const genotype::PhenotypeMap& mapping_fixture(const std::string& name) {
  static const genotype::PhenotypeMap h1 = genotype::PhenotypeMap::table_h1();
  static const genotype::PhenotypeMap h2 = genotype::PhenotypeMap::table_h2();
  if (name == "h1") return h1;
  if (name == "h2") return h2;
  throw config_error("config: unknown phenotype mapping '" + name + "'");
}

inline void validate_impl(const RunConfig& cfg);

inline void validate(const RunConfig& cfg) {
  try {
    validate_impl(cfg);
  } catch (const config_error&) {
    throw;
  } catch (const std::invalid_argument& e) {
    // Module preconditions checked up front count as config errors.
    throw config_error(std::string("config: ") + e.what());
  }
}

inline void validate_impl(const RunConfig& cfg) {
  if (cfg.replicates == 0) throw config_error("config: replicates must be positive");
  if (cfg.experiment == "mixture") {
    const auto& p = cfg.mixture_params;
    if (p.n == 0) throw config_error("config: mixture n must be positive");
    if (p.thresholds.empty()) throw config_error("config: mixture thresholds empty");
    p.truth().validate();
  } else if (cfg.experiment == "genotype-ml" || cfg.experiment == "genotype-bayes") {
    const auto& p = cfg.experiment == "genotype-ml" ? cfg.genotype_params
                                                    : cfg.genotype_bayes_params.base;
    if (p.n == 0) throw config_error("config: genotype n must be positive");
    if (p.inbreeding.empty() || p.mappings.empty()) {
      throw config_error("config: genotype grids must be nonempty");
    }
    for (const auto& name : p.mappings) mapping_fixture(name);
    for (double f : p.inbreeding) {
      genotype::InbreedingModel{p.allele_freqs, f}.validate();
    }
    if (cfg.experiment == "genotype-bayes") {
      const auto& b = cfg.genotype_bayes_params;
      if (b.prior.size() != p.allele_freqs.size()) {
        throw config_error("config: prior size must match allele count");
      }
      for (double a : b.prior) {
        if (!(a > 0.0)) throw config_error("config: prior entries must be positive");
      }
      if (!(b.iterations > b.burn_in && b.burn_in >= 0)) {
        throw config_error("config: need iterations > burn_in >= 0");
      }
    }
  } else if (cfg.experiment == "ctmc-limits") {
    const auto& p = cfg.ctmc_limits_params;
    if (p.alphas.empty() || p.betas.empty()) {
      throw config_error("config: ctmc-limits grids must be nonempty");
    }
    for (double a : p.alphas) {
      if (!(a > 0.0)) throw config_error("config: alphas must be positive");
    }
    for (double b : p.betas) {
      if (!(b > 0.0)) throw config_error("config: betas must be positive");
    }
  } else if (cfg.experiment == "ctmc-sim") {
    const auto& p = cfg.ctmc_sim_params;
    if (p.rate_pairs.empty() || p.sites.empty()) {
      throw config_error("config: ctmc-sim grids must be nonempty");
    }
    for (const auto& [a, b] : p.rate_pairs) {
      if (!(a > 0.0) || !(b > 0.0)) {
        throw config_error("config: rate pairs must be positive");
      }
    }
    for (auto n : p.sites) {
      if (n == 0) throw config_error("config: sites must be positive");
    }
  }
}

}  // namespace detail

inline RunConfig parse_config(const json& doc) {
  try {
    if (!doc.is_object()) throw config_error("config: top level must be an object");
    detail::require_keys(doc, {"experiment", "seed", "replicates", "out", "params"}, "config");
    if (!doc.contains("experiment")) throw config_error("config: missing 'experiment'");
    RunConfig cfg = default_config(doc.at("experiment").get<std::string>());
    if (doc.contains("seed")) cfg.seed = doc.at("seed").get<std::uint64_t>();
    if (doc.contains("replicates")) cfg.replicates = doc.at("replicates").get<std::uint64_t>();
    if (doc.contains("out")) cfg.out_dir = doc.at("out").get<std::string>();

    if (doc.contains("params")) {
      const json& p = doc.at("params");
      if (!p.is_object()) throw config_error("config: 'params' must be an object");
      if (cfg.experiment == "mixture") {
        detail::require_keys(p,
                             {"n", "log_mean1", "log_mean2", "log_sd1", "log_sd2", "weight1",
                              "thresholds"},
                             "params");
        auto& m = cfg.mixture_params;
        if (p.contains("n")) m.n = p.at("n").get<std::size_t>();
        if (p.contains("log_mean1")) m.log_mean1 = p.at("log_mean1").get<double>();
        if (p.contains("log_mean2")) m.log_mean2 = p.at("log_mean2").get<double>();
        if (p.contains("log_sd1")) m.log_sd1 = p.at("log_sd1").get<double>();
        if (p.contains("log_sd2")) m.log_sd2 = p.at("log_sd2").get<double>();
        if (p.contains("weight1")) m.weight1 = p.at("weight1").get<double>();
        if (p.contains("thresholds")) m.thresholds = p.at("thresholds").get<std::vector<double>>();
      } else if (cfg.experiment == "genotype-ml") {
        detail::require_keys(p, {"n", "allele_freqs", "inbreeding", "mappings"}, "params");
        auto& g = cfg.genotype_params;
        if (p.contains("n")) g.n = p.at("n").get<std::size_t>();
        if (p.contains("allele_freqs")) {
          g.allele_freqs = p.at("allele_freqs").get<std::vector<double>>();
        }
        if (p.contains("inbreeding")) g.inbreeding = p.at("inbreeding").get<std::vector<double>>();
        if (p.contains("mappings")) g.mappings = p.at("mappings").get<std::vector<std::string>>();
      } else if (cfg.experiment == "genotype-bayes") {
        detail::require_keys(
            p, {"n", "allele_freqs", "inbreeding", "mappings", "prior", "iterations", "burn_in"},
            "params");
        auto& g = cfg.genotype_bayes_params;
        if (p.contains("n")) g.base.n = p.at("n").get<std::size_t>();
        if (p.contains("allele_freqs")) {
          g.base.allele_freqs = p.at("allele_freqs").get<std::vector<double>>();
        }
        if (p.contains("inbreeding")) {
          g.base.inbreeding = p.at("inbreeding").get<std::vector<double>>();
        }
        if (p.contains("mappings")) {
          g.base.mappings = p.at("mappings").get<std::vector<std::string>>();
        }
        if (p.contains("prior")) g.prior = p.at("prior").get<std::vector<double>>();
        if (p.contains("iterations")) g.iterations = p.at("iterations").get<int>();
        if (p.contains("burn_in")) g.burn_in = p.at("burn_in").get<int>();
      } else if (cfg.experiment == "ctmc-limits") {
        detail::require_keys(p, {"alphas", "betas"}, "params");
        auto& c = cfg.ctmc_limits_params;
        if (p.contains("alphas")) c.alphas = p.at("alphas").get<std::vector<double>>();
        if (p.contains("betas")) c.betas = p.at("betas").get<std::vector<double>>();
      } else if (cfg.experiment == "ctmc-sim") {
        detail::require_keys(p, {"rate_pairs", "sites"}, "params");
        auto& c = cfg.ctmc_sim_params;
        if (p.contains("rate_pairs")) {
          c.rate_pairs.clear();
          for (const auto& entry : p.at("rate_pairs")) {
            const auto pair = entry.get<std::vector<double>>();
            if (pair.size() != 2) {
              throw config_error("config: each rate pair needs exactly [alpha, beta]");
            }
            c.rate_pairs.emplace_back(pair[0], pair[1]);
          }
        }
        if (p.contains("sites")) c.sites = p.at("sites").get<std::vector<std::uint64_t>>();
      }
    }
    detail::validate(cfg);
    return cfg;
  } catch (const json::exception& e) {
    throw config_error(std::string("config: malformed document: ") + e.what());
  }
}

struct ExperimentOutput {
  // file name -> full CSV content
  std::vector<std::pair<std::string, std::string>> files;
};

inline ExperimentOutput run_mixture_experiment(const RunConfig& cfg, unsigned threads = 1) {
  const auto& mp = cfg.mixture_params;
  const auto truth_params = mp.truth();
  std::vector<double> truths(mp.thresholds.size());
  for (std::size_t ci = 0; ci < mp.thresholds.size(); ++ci) {
    truths[ci] = mixture::lognormal_tail_mass(truth_params, mp.thresholds[ci]);
  }

  std::vector<std::string> error_chunks(cfg.replicates);
  std::vector<std::string> cluster_chunks(cfg.replicates);
  parallel_for(cfg.replicates, threads, [&](std::size_t r) {
    auto rng = stats::derive_stream(cfg.seed, r);
    const auto sample = mixture::simulate_lognormal_mixture(truth_params, mp.n, rng);
    const auto misspec = mixture::em_normal_mixture(sample.data);
    const auto correct = mixture::fit_lognormal_mixture(sample.data);

    std::string rows;
    const std::string rep = std::to_string(r);
    for (std::size_t ci = 0; ci < mp.thresholds.size(); ++ci) {
      const double c = mp.thresholds[ci];
      const double correct_est = mixture::lognormal_tail_mass(correct.params, c);
      const double plugin_est = mixture::plugin_tail(misspec.params, c);
      const double imput_est = mixture::imputation_tail(misspec.params, sample.data, c);
      const std::string prefix = rep + "," + format_double(c) + ",";
      rows += prefix + "plugin-correct," +
              format_double(estimators::relative_error(correct_est, truths[ci])) + "\n";
      rows += prefix + "plugin-misspec," +
              format_double(estimators::relative_error(plugin_est, truths[ci])) + "\n";
      rows += prefix + "imputation," +
              format_double(estimators::relative_error(imput_est, truths[ci])) + "\n";
    }
    error_chunks[r] = std::move(rows);

    // Model-based clustering under the three density estimates.
    const auto z = mixture::responsibilities(misspec.params, sample.data);
    const auto& ln = correct.params;
    const auto& nm = misspec.params;
    const double correct_err = mixture::classify_and_error(
        [&](double y) { return mixture::lognormal_pdf(y, ln.log_mean1, ln.log_sd1); },
        [&](double y) { return mixture::lognormal_pdf(y, ln.log_mean2, ln.log_sd2); },
        ln.weight1, 1.0 - ln.weight1, sample.data, sample.labels);
    const double plugin_err = mixture::classify_and_error(
        [&](double y) { return mixture::normal_pdf(y, nm.mean1, nm.sd1); },
        [&](double y) { return mixture::normal_pdf(y, nm.mean2, nm.sd2); },
        nm.weight1, 1.0 - nm.weight1, sample.data, sample.labels);
    std::vector<double> w2(z.size());
    for (std::size_t i = 0; i < z.size(); ++i) w2[i] = z.comp2(i);
    const auto kde1 = mixture::weighted_kde(sample.data, z.comp1);
    const auto kde2 = mixture::weighted_kde(sample.data, w2);
    double alpha_im = 0.0;
    for (double v : z.comp1) alpha_im += v;
    alpha_im /= static_cast<double>(z.size());
    const double imput_err = mixture::classify_and_error(
        kde1, kde2, alpha_im, 1.0 - alpha_im, sample.data, sample.labels);

    cluster_chunks[r] = rep + ",correct-model," + format_double(correct_err) + "\n" + rep +
                        ",plugin-misspec," + format_double(plugin_err) + "\n" + rep +
                        ",imputation-kde," + format_double(imput_err) + "\n";
  });

  std::string errors = "replicate,c,estimator,relative_error\n";
  std::string clusters = "replicate,method,error\n";
  for (std::size_t r = 0; r < cfg.replicates; ++r) {
    errors += error_chunks[r];
    clusters += cluster_chunks[r];
  }
  return ExperimentOutput{{{"mixture_relative_errors.csv", std::move(errors)},
                           {"mixture_clustering_errors.csv", std::move(clusters)}}};
}

inline ExperimentOutput run_genotype_experiment(const RunConfig& cfg, unsigned threads = 1) {
  const auto& gp = cfg.genotype_params;
  const std::size_t n_f = gp.inbreeding.size();
  const std::size_t units = gp.mappings.size() * n_f * cfg.replicates;
  // Genotype targets (B,C) and (B,D) share the ambiguous phenotype.
  constexpr std::size_t B = 1, C = 2, D = 3;

  std::vector<std::string> chunks(units);
  parallel_for(units, threads, [&](std::size_t u) {
    const std::size_t mi = u / (n_f * cfg.replicates);
    const std::size_t fi = (u / cfg.replicates) % n_f;
    const std::size_t r = u % cfg.replicates;
    const auto& map = detail::mapping_fixture(gp.mappings[mi]);
    const double f = gp.inbreeding[fi];
    const genotype::InbreedingModel model{gp.allele_freqs, f};

    auto rng = stats::derive_stream(cfg.seed, u);
    const auto counts = genotype::simulate_phenotypes(model, map, gp.n, rng);
    const auto fit = genotype::em_allele_freqs(counts, map);

    const double truth_bc = genotype::genotype_prob(model, B, C);
    const double truth_bd = genotype::genotype_prob(model, B, D);
    const std::string prefix =
        gp.mappings[mi] + "," + format_double(f) + "," + std::to_string(r) + ",";
    std::string rows;
    rows += prefix + "BC,plugin," +
            format_double(estimators::relative_error(
                genotype::plugin_genotype_freq(fit.freqs, B, C), truth_bc)) +
            "\n";
    rows += prefix + "BC,imputation," +
            format_double(estimators::relative_error(
                genotype::imputation_genotype_freq(fit.freqs, counts, map, B, C), truth_bc)) +
            "\n";
    rows += prefix + "BD,plugin," +
            format_double(estimators::relative_error(
                genotype::plugin_genotype_freq(fit.freqs, B, D), truth_bd)) +
            "\n";
    rows += prefix + "BD,imputation," +
            format_double(estimators::relative_error(
                genotype::imputation_genotype_freq(fit.freqs, counts, map, B, D), truth_bd)) +
            "\n";
    chunks[u] = std::move(rows);
  });

  std::string out = "mapping,f,replicate,target,estimator,relative_error\n";
  for (const auto& chunk : chunks) out += chunk;
  return ExperimentOutput{{{"genotype_relative_errors.csv", std::move(out)}}};
}

inline ExperimentOutput run_genotype_bayes(const RunConfig& cfg, unsigned threads = 1) {
  const auto& bp = cfg.genotype_bayes_params;
  const auto& gp = bp.base;
  const std::size_t n_f = gp.inbreeding.size();
  const std::size_t units = gp.mappings.size() * n_f;  // one data set per cell
  constexpr std::size_t B = 1, C = 2, D = 3;

  std::vector<std::string> chunks(units);
  parallel_for(units, threads, [&](std::size_t u) {
    const std::size_t mi = u / n_f;
    const std::size_t fi = u % n_f;
    const auto& map = detail::mapping_fixture(gp.mappings[mi]);
    const double f = gp.inbreeding[fi];
    const genotype::InbreedingModel model{gp.allele_freqs, f};

    auto rng = stats::derive_stream(cfg.seed, u);
    const auto counts = genotype::simulate_phenotypes(model, map, gp.n, rng);
    const auto states =
        genotype::gibbs_sampler(counts, map, bp.prior, bp.iterations, bp.burn_in, rng);

    std::string rows;
    const std::string prefix = gp.mappings[mi] + "," + format_double(f) + ",";
    for (const auto& [target, k, l] :
         {std::tuple<const char*, std::size_t, std::size_t>{"BC", B, C},
          std::tuple<const char*, std::size_t, std::size_t>{"BD", B, D}}) {
      const auto pred = genotype::predictive_distributions(states, counts, map, k, l);
      for (double v : pred.plug_in) {
        rows += prefix + target + ",plugin," + format_double(v) + "\n";
      }
      for (double v : pred.raw_imputation) {
        rows += prefix + target + ",imputation," + format_double(v) + "\n";
      }
      for (double v : pred.rao_blackwellized) {
        rows += prefix + target + ",rao-blackwell," + format_double(v) + "\n";
      }
    }
    chunks[u] = std::move(rows);
  });

  std::string out = "mapping,f,target,estimator,value\n";
  for (const auto& chunk : chunks) out += chunk;
  return ExperimentOutput{{{"genotype_posterior_samples.csv", std::move(out)}}};
}

inline ExperimentOutput run_ctmc_limits(const RunConfig& cfg, unsigned /*threads*/ = 1) {
  const auto& lp = cfg.ctmc_limits_params;
  std::string out = "alpha,beta,mu,mu_pi_inf,mu_im_inf\n";
  for (double a : lp.alphas) {
    for (double b : lp.betas) {
      const auto lim = ctmc::theorem2_limits(a, b);
      out += format_double(a) + "," + format_double(b) + "," + format_double(lim.truth) + "," +
             format_double(lim.plug_in) + "," + format_double(lim.imputation) + "\n";
    }
  }
  return ExperimentOutput{{{"ctmc_limits.csv", std::move(out)}}};
}

inline ExperimentOutput run_ctmc_sim(const RunConfig& cfg, unsigned threads = 1) {
  const auto& sp = cfg.ctmc_sim_params;
  const std::size_t n_sites = sp.sites.size();
  const std::size_t units = sp.rate_pairs.size() * n_sites * cfg.replicates;

  std::vector<std::string> chunks(units);
  parallel_for(units, threads, [&](std::size_t u) {
    const std::size_t pi = u / (n_sites * cfg.replicates);
    const std::size_t si = (u / cfg.replicates) % n_sites;
    const std::size_t r = u % cfg.replicates;
    const auto [alpha, beta] = sp.rate_pairs[pi];
    const std::uint64_t n = sp.sites[si];

    auto rng = stats::derive_stream(cfg.seed, u);
    const auto truth_gen =
        ctmc::build_generator(ctmc::RateFamily::kimura_two_param, {alpha, beta});
    const auto counts = ctmc::simulate_alignment(truth_gen, n, rng);
    const double gamma_hat = ctmc::fit_jc(counts);
    const auto fitted = ctmc::build_generator(ctmc::RateFamily::jukes_cantor, {gamma_hat});
    const double plugin = ctmc::plugin_labeled(fitted, ctmc::transitions());
    const double imputation = ctmc::imputation_labeled(fitted, ctmc::transitions(), counts);
    const auto lim = ctmc::theorem2_limits(alpha, beta);

    const std::string prefix = format_double(alpha) + "," + format_double(beta) + "," +
                               std::to_string(n) + "," + std::to_string(r) + ",";
    chunks[u] = prefix + "plugin," + format_double(plugin) + "," +
                format_double(lim.plug_in) + "\n" + prefix + "imputation," +
                format_double(imputation) + "," + format_double(lim.imputation) + "\n";
  });

  std::string out = "alpha,beta,n,replicate,estimator,estimate,closed_form_limit\n";
  for (const auto& chunk : chunks) out += chunk;
  return ExperimentOutput{{{"ctmc_sim.csv", std::move(out)}}};
}

inline ExperimentOutput run_experiment(const RunConfig& cfg, unsigned threads = 1) {
  detail::validate(cfg);
  if (cfg.experiment == "mixture") return run_mixture_experiment(cfg, threads);
  if (cfg.experiment == "genotype-ml") return run_genotype_experiment(cfg, threads);
  if (cfg.experiment == "genotype-bayes") return run_genotype_bayes(cfg, threads);
  if (cfg.experiment == "ctmc-limits") return run_ctmc_limits(cfg, threads);
  if (cfg.experiment == "ctmc-sim") return run_ctmc_sim(cfg, threads);
  throw config_error("config: unknown experiment '" + cfg.experiment + "'");
}

inline std::vector<std::string> write_output(const ExperimentOutput& output,
                                             const std::string& out_dir) {
  if (out_dir.empty()) throw config_error("config: no output directory given");
  std::filesystem::create_directories(out_dir);
  std::vector<std::string> written;
  for (const auto& [name, content] : output.files) {
    const auto path = std::filesystem::path(out_dir) / name;
    std::ofstream file(path, std::ios::binary);
    if (!file) throw std::runtime_error("cannot open output file " + path.string());
    file << content;
    written.push_back(path.string());
  }
  return written;
}

}  // namespace impest::experiments
