// mfising command-line tool.
//
// Exit codes: 0 success, 1 usage or config error, 2 data error, 3 numerical failure.
//
// --config FILE reads a JSON object with flat dotted keys. A key "fit.chains"
// applies to the fit subcommand only; "sampler.iters" or "iters" applies to
// any subcommand that has an --iters flag. Flags given on the command line win.

#include "mfising/diagnostics.hpp"
#include "mfising/io.hpp"
#include "mfising/parallel.hpp"
#include "mfising/reproduce.hpp"
#include "mfising/samplers.hpp"

#include <CLI11.hpp>
#include <fmt/format.h>

#include <cmath>
#include <cstdio>
#include <iostream>
#include <limits>
#include <map>
#include <set>
#include <sstream>

namespace fs = std::filesystem;
using mfising::io::json;

namespace {

enum Exit : int { kOk = 0, kUsage = 1, kData = 2, kNumerical = 3 };

// Config keys that do not name a subcommand section.
const std::set<std::string> kSharedSections{"model", "data", "sampler", "prior", "grid", "rng", "run", "coverage"};
const std::set<std::string> kCommands{"simulate", "fit", "init-grid", "density", "diagnose", "coverage", "reproduce"};

std::string scalar_text(const json& v, const std::string& key) {
  if (v.is_string()) return v.get<std::string>();
  if (v.is_boolean()) return v.get<bool>() ? "true" : "false";
  if (v.is_number_integer()) return std::to_string(v.get<long long>());
  if (v.is_number()) return mfising::io::format_double(v.get<double>());
  throw CLI::ValidationError(key, "config values must be scalars or arrays of scalars");
}

// Expands config entries into "--flag=value" tokens for `command`, skipping
// flags the user already gave. Keys unknown to every subcommand are errors.
std::vector<std::string> config_args(const json& cfg, const std::string& command,
                                     const std::vector<std::string>& user_args, CLI::App& app) {
  if (!cfg.is_object()) throw CLI::ValidationError("--config", "config file must hold a JSON object");
  CLI::App* sub = app.get_subcommand(command);
  auto user_has = [&](const std::string& flag) {
    for (const auto& a : user_args)
      if (a == flag || a.rfind(flag + "=", 0) == 0) return true;
    return false;
  };
  auto known_anywhere = [&](const std::string& flag) {
    for (const auto* s : app.get_subcommands([](const CLI::App*) { return true; })) {
      for (const auto* o : s->get_options())
        if (o->check_lname(flag.substr(2))) return true;
    }
    return false;
  };

  std::vector<std::string> out;
  for (const auto& [key, value] : cfg.items()) {
    std::string section;
    std::string name = key;
    if (const auto dot = key.rfind('.'); dot != std::string::npos) {
      section = key.substr(0, dot);
      name = key.substr(dot + 1);
    }
    if (!section.empty() && !kCommands.count(section) && !kSharedSections.count(section))
      throw CLI::ValidationError("--config", fmt::format("unknown config section in key '{}'", key));
    for (auto& ch : name)
      if (ch == '_') ch = '-';
    const std::string flag = "--" + name;
    if (!known_anywhere(flag)) throw CLI::ValidationError("--config", fmt::format("unknown config key '{}'", key));
    if (kCommands.count(section) && section != command) continue;
    bool has = false;
    for (const auto* o : sub->get_options())
      if (o->check_lname(name)) has = true;
    if (!has || user_has(flag)) continue;
    if (value.is_array()) {
      for (const auto& v : value) out.push_back(flag + "=" + scalar_text(v, key));
    } else {
      out.push_back(flag + "=" + scalar_text(value, key));
    }
  }
  return out;
}

// A single number is broadcast to all three components when `broadcast` is set.
mfising::Vec3 parse_triple(const std::string& text, const std::string& what, bool broadcast = true) {
  std::vector<double> v;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    try {
      std::size_t used = 0;
      v.push_back(std::stod(item, &used));
      if (used != item.size()) throw std::invalid_argument(item);
    } catch (const std::exception&) {
      throw CLI::ValidationError(what, fmt::format("cannot parse '{}' as a number", item));
    }
  }
  if (broadcast && v.size() == 1) return mfising::Vec3::Constant(v[0]);
  if (v.size() != 3)
    throw CLI::ValidationError(what, fmt::format("expected {}3 comma-separated numbers, got '{}'",
                                                 broadcast ? "1 or " : "", text));
  return {v[0], v[1], v[2]};
}

struct ThetaOpts {
  double K = 0.0, J = 0.0, h = 0.0;
  std::string theta;
  void add(CLI::App* app) {
    app->add_option("--K", K, "cubic coupling K");
    app->add_option("--J", J, "pairwise coupling J");
    app->add_option("--h", h, "external field h");
    app->add_option("--theta", theta, "K,J,h in one flag (overrides --K/--J/--h)");
  }
  mfising::Theta get() const {
    if (!theta.empty()) {
      const auto v = parse_triple(theta, "--theta", false);
      return mfising::Theta::from(v);
    }
    return {K, J, h};
  }
};

struct SamplerOpts {
  std::string kernel = "hybrid";
  mfising::SamplerConfig cfg;
  void add(CLI::App* app, bool with_kernel) {
    if (with_kernel) app->add_option("--kernel", kernel, "amh, rmahmc or hybrid");
    app->add_option("--iters", cfg.n_iter, "iterations per chain");
    app->add_option("--burnin", cfg.burn_in, "burn-in iterations discarded from summaries");
    app->add_option("--leapfrog", cfg.leapfrog_steps, "leapfrog steps per RMAHMC trajectory");
    app->add_option("--eps", cfg.step_size, "leapfrog step size");
    app->add_flag("--adapt-eps", cfg.adapt_step_size, "dual-averaging step-size adaptation during burn-in");
    app->add_option("--target-accept", cfg.target_accept, "adaptation target acceptance rate");
    app->add_option("--chi-burnin", cfg.chi.burn_in, "metric off-diagonal shrinkage during burn-in");
    app->add_option("--chi-after", cfg.chi.after, "metric off-diagonal shrinkage after burn-in");
    app->add_option("--amh-scale", cfg.amh_scale, "AMH proposal covariance scale");
    app->add_option("--amh-warmup", cfg.amh_warmup, "draws before AMH uses its empirical covariance");
    app->add_option("--amh-fallback-sd", cfg.amh_fallback_sd, "AMH diagonal fallback proposal sd");
    app->add_option("--jitter", cfg.jitter, "relative diagonal jitter for mass matrices");
  }
  mfising::SamplerConfig get(const mfising::RngSpec& rng) const {
    auto c = cfg;
    c.kernel = mfising::parse_kernel(kernel);
    c.rng = rng;
    c.validate();
    return c;
  }
};

struct PriorGridOpts {
  std::string prior_sd = "1.4142135623730951";
  std::string grid_lo = "-2";
  std::string grid_hi = "2";
  double grid_step = 0.2;
  void add(CLI::App* app) {
    app->add_option("--prior-sd", prior_sd, "Gaussian prior sd, one value or K,J,h; inf for flat");
    app->add_option("--grid-lo", grid_lo, "grid lower corner, one value or K,J,h");
    app->add_option("--grid-hi", grid_hi, "grid upper corner, one value or K,J,h");
    app->add_option("--grid-step", grid_step, "grid spacing");
  }
  mfising::PriorSpec prior() const {
    mfising::PriorSpec p{parse_triple(prior_sd, "--prior-sd")};
    p.validate();
    return p;
  }
  mfising::GridSpec grid() const {
    return {parse_triple(grid_lo, "--grid-lo"), parse_triple(grid_hi, "--grid-hi"), grid_step};
  }
};

struct RngOpts {
  std::uint64_t seed = 0;
  std::uint64_t stream = 0;
  void add(CLI::App* app, std::uint64_t default_seed = 0) {
    seed = default_seed;
    app->add_option("--seed", seed, "random seed");
    app->add_option("--stream", stream, "random stream within the seed");
  }
  mfising::RngSpec get() const { return {seed, stream}; }
};

json grid_json(const mfising::GridSpec& g) {
  return {{"lo", mfising::io::vec_json(g.lo)}, {"hi", mfising::io::vec_json(g.hi)}, {"step", g.step}};
}

std::vector<mfising::Vec3> chain_starts(const mfising::Posterior& post, const std::vector<std::string>& init,
                                        const mfising::GridSpec& grid, std::size_t chains) {
  std::vector<mfising::Vec3> starts;
  if (init.empty()) {
    for (const auto& t : mfising::grid_starts(post, grid, chains)) starts.push_back(t.vec());
    return starts;
  }
  if (init.size() != 1 && init.size() != chains)
    throw CLI::ValidationError("--init", fmt::format("give one start or one per chain ({}), got {}", chains, init.size()));
  for (std::size_t c = 0; c < chains; ++c) {
    const auto v = parse_triple(init[init.size() == 1 ? 0 : c], "--init");
    if (!v.allFinite()) throw CLI::ValidationError("--init", "start must be finite");
    starts.push_back(v);
  }
  return starts;
}

void print_json(const json& j) { std::cout << mfising::io::dump(j); }

std::string histogram_summary(const mfising::Dataset& d) {
  constexpr int kBins = 20;
  std::array<std::int64_t, kBins> bins{};
  for (double m : d.values()) {
    int b = static_cast<int>(std::floor((m + 1.0) / 2.0 * kBins));
    bins[static_cast<std::size_t>(std::clamp(b, 0, kBins - 1))]++;
  }
  const auto peak = *std::max_element(bins.begin(), bins.end());
  std::string out;
  for (int b = 0; b < kBins; ++b) {
    const double lo = -1.0 + 2.0 * b / kBins;
    const auto n = bins[static_cast<std::size_t>(b)];
    const int bar = peak > 0 ? static_cast<int>(std::lround(40.0 * static_cast<double>(n) / static_cast<double>(peak))) : 0;
    out += fmt::format("{:>6.2f} {:>6} {}\n", lo, n, std::string(static_cast<std::size_t>(bar), '#'));
  }
  return out;
}

unsigned resolve_workers(int flag) { return flag > 0 ? static_cast<unsigned>(flag) : mfising::default_workers(); }

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Bayesian inference for the mean-field Ising model with cubic coupling"};
  app.set_help_flag("--help", "print help and exit");  // -h would clash with --h
  app.option_defaults()->always_capture_default();
  app.require_subcommand(1);
  std::string config_path;
  int workers = 0;
  app.add_option("--config", config_path, "JSON config with flat dotted keys; flags win");
  app.add_option("--workers", workers, "worker threads (default: MFISING_WORKERS or hardware)");

  // simulate
  auto* sim = app.add_subcommand("simulate", "draw M magnetizations from the model");
  ThetaOpts sim_theta;
  sim_theta.add(sim);
  int sim_n = 300, sim_m = 1000;
  RngOpts sim_rng;
  std::string sim_out = "dataset";
  sim->add_option("--n", sim_n, "spins per configuration");
  sim->add_option("--m", sim_m, "number of configurations");
  sim_rng.add(sim);
  sim->add_option("--out", sim_out, "output prefix; writes PREFIX.csv and PREFIX.json");

  // fit
  auto* fit = app.add_subcommand("fit", "sample the posterior of (K, J, h)");
  std::string fit_data;
  int fit_n = 0;
  std::size_t fit_chains = 4;
  double fit_level = 0.95;
  std::vector<std::string> fit_init;
  std::string fit_out = "fit";
  SamplerOpts fit_sampler;
  PriorGridOpts fit_pg;
  RngOpts fit_rng;
  fit->add_option("data,--data", fit_data, "dataset CSV or JSON")->required();
  fit->add_option("--n", fit_n, "spins per configuration (needed for CSV input)");
  fit->add_option("--chains", fit_chains, "number of chains")->check(CLI::PositiveNumber);
  fit->add_option("--level", fit_level, "credible level");
  fit->add_option("--init", fit_init, "start K,J,h (once for all chains or once per chain); skips grid search");
  fit->add_option("--out", fit_out, "output directory");
  fit_sampler.add(fit, true);
  fit_pg.add(fit);
  fit_rng.add(fit);

  // init-grid
  auto* ig = app.add_subcommand("init-grid", "grid search for chain starting points");
  std::string ig_data;
  int ig_n = 0;
  std::size_t ig_top = 4;
  PriorGridOpts ig_pg;
  ig->add_option("data,--data", ig_data, "dataset CSV or JSON")->required();
  ig->add_option("--n", ig_n, "spins per configuration (needed for CSV input)");
  ig->add_option("--top", ig_top, "number of best points to list")->check(CLI::PositiveNumber);
  ig_pg.add(ig);

  // density
  auto* den = app.add_subcommand("density", "model pmf over the spectrum for one or more parameters");
  int den_n = 300;
  std::vector<std::string> den_theta;
  std::string den_out = "density.csv";
  den->add_option("--n", den_n, "spins per configuration");
  den->add_option("--theta", den_theta, "K,J,h; repeat for more columns")->required();
  den->add_option("--out", den_out, "output CSV, '-' for stdout");

  // diagnose
  auto* dia = app.add_subcommand("diagnose", "Gelman-Rubin and credible intervals from chain CSVs");
  std::vector<std::string> dia_chains;
  int dia_burnin = 2500;
  double dia_level = 0.95;
  bool dia_split = false;
  std::string dia_out;
  dia->add_option("chains", dia_chains, "chain CSV files")->required();
  dia->add_option("--burnin", dia_burnin, "draws discarded from each chain");
  dia->add_option("--level", dia_level, "credible level");
  dia->add_flag("--split", dia_split, "split each chain in half before Gelman-Rubin");
  dia->add_option("--out", dia_out, "report JSON path (default: stdout only)");

  // coverage
  auto* cov = app.add_subcommand("coverage", "credible-interval coverage over simulated replications");
  ThetaOpts cov_theta;
  cov_theta.add(cov);
  int cov_n = 300, cov_m = 1000;
  std::size_t cov_reps = 20;
  double cov_level = 0.95;
  std::string cov_out = "coverage.json";
  SamplerOpts cov_sampler;
  PriorGridOpts cov_pg;
  RngOpts cov_rng;
  cov->add_option("--n", cov_n, "spins per configuration");
  cov->add_option("--m", cov_m, "configurations per replication");
  cov->add_option("--reps", cov_reps, "replications")->check(CLI::PositiveNumber);
  cov->add_option("--level", cov_level, "credible level");
  cov->add_option("--out", cov_out, "coverage JSON path");
  cov_sampler.add(cov, false);
  cov_pg.add(cov);
  cov_rng.add(cov);

  // reproduce
  auto* rep = app.add_subcommand("reproduce", "run a named scenario end to end and write a results manifest");
  std::string rep_name;
  std::string rep_out;
  int rep_n = 300, rep_m = 1000;
  std::size_t rep_chains = 4;
  double rep_level = 0.95;
  SamplerOpts rep_sampler;
  PriorGridOpts rep_pg;
  std::uint64_t rep_seed = 7;
  std::uint64_t rep_stream = 0;
  rep->add_option("scenario", rep_name, "bimodal1, bimodal2, unimodal1, critical or nonident")->required();
  rep->add_option("--out", rep_out, "output directory (default: reproduce_<scenario>)");
  rep->add_option("--n", rep_n, "spins per configuration");
  rep->add_option("--m", rep_m, "configurations");
  rep->add_option("--chains", rep_chains, "chains per kernel")->check(CLI::PositiveNumber);
  rep->add_option("--level", rep_level, "credible level");
  rep->add_option("--seed", rep_seed, "random seed");
  rep->add_option("--stream", rep_stream, "random stream within the seed");
  rep_sampler.add(rep, false);
  rep_pg.add(rep);

  try {
    // Locate the subcommand and --config before the real parse.
    std::vector<std::string> args(argv + 1, argv + argc);
    std::string command;
    std::size_t command_pos = args.size();
    for (std::size_t i = 0; i < args.size(); ++i) {
      if (args[i] == "--config" && i + 1 < args.size()) config_path = args[i + 1];
      else if (args[i].rfind("--config=", 0) == 0) config_path = args[i].substr(9);
      if (command.empty() && kCommands.count(args[i])) {
        command = args[i];
        command_pos = i;
      }
    }
    if (!config_path.empty() && !command.empty()) {
      json cfg;
      try {
        cfg = json::parse(mfising::io::read_text(config_path));
      } catch (const json::exception& e) {
        throw CLI::ValidationError("--config", fmt::format("cannot parse '{}': {}", config_path, e.what()));
      } catch (const mfising::DataError& e) {
        throw CLI::ValidationError("--config", e.what());
      }
      const std::vector<std::string> user(args.begin() + static_cast<std::ptrdiff_t>(command_pos) + 1, args.end());
      const auto extra = config_args(cfg, command, user, app);
      args.insert(args.begin() + static_cast<std::ptrdiff_t>(command_pos) + 1, extra.begin(), extra.end());
    }
    std::reverse(args.begin(), args.end());
    app.parse(args);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? kOk : kUsage;
  }

  try {
    const unsigned nworkers = resolve_workers(workers);

    if (*sim) {
      const auto theta = sim_theta.get();
      if (!theta.finite()) throw mfising::DomainError("parameters must be finite");
      const auto data = mfising::sample_dataset(theta, sim_n, sim_m, sim_rng.get());
      mfising::io::write_text(sim_out + ".csv", mfising::io::dataset_csv(data));
      mfising::io::write_text(sim_out + ".json", mfising::io::dump(mfising::io::dataset_json(data)));
      const auto& s = data.suffstats();
      print_json({{"command", "simulate"},
                  {"config", {{"theta", mfising::io::theta_json(theta)}, {"n", sim_n}, {"m", sim_m},
                              {"seed", sim_rng.seed}, {"stream", sim_rng.stream}, {"out", sim_out}}},
                  {"suffstats", {{"s1", s.s1}, {"s2", s.s2}, {"s3", s.s3}}},
                  {"moments", {s.s1 / sim_m, s.s2 / sim_m, s.s3 / sim_m}},
                  {"files", {sim_out + ".csv", sim_out + ".json"}}});
      std::cerr << histogram_summary(data);
      return kOk;
    }

    if (*fit) {
      const auto data = mfising::io::load_dataset(fit_data, fit_n);
      const auto prior = fit_pg.prior();
      const auto grid = fit_pg.grid();
      const auto cfg = fit_sampler.get(fit_rng.get());
      if (!(fit_level > 0.0 && fit_level < 1.0)) throw mfising::DomainError("--level must lie in (0, 1)");
      const mfising::Posterior post(data, prior);
      const auto starts = chain_starts(post, fit_init, grid, fit_chains);
      const auto chains = mfising::run_chains(post, cfg, starts, nworkers);

      json config = {{"command", "fit"},
                     {"data", fit_data},
                     {"n", data.n()},
                     {"m_count", data.m_count()},
                     {"chains", fit_chains},
                     {"level", fit_level},
                     {"sampler", mfising::io::sampler_json(cfg)},
                     {"prior_sd", mfising::io::vec_json(prior.sd)},
                     {"grid", grid_json(grid)},
                     {"init", fit_init.empty() ? "grid" : "given"},
                     {"starts", json::array()},
                     {"workers", nworkers}};
      for (const auto& s : starts) config["starts"].push_back(mfising::io::vec_json(s));
      const fs::path out(fit_out);
      for (std::size_t c = 0; c < chains.size(); ++c)
        mfising::io::write_text(out / fmt::format("chain_{}.csv", c), mfising::io::chain_csv(chains[c]));
      mfising::io::write_text(out / "config.json", mfising::io::dump(config));
      json report;
      if (cfg.burn_in + 1 < cfg.n_iter) {
        report = mfising::io::report_json(
            mfising::summarize(chains, static_cast<std::size_t>(cfg.burn_in), fit_level));
        mfising::io::write_text(out / "report.json", mfising::io::dump(report));
      }
      print_json({{"config", config}, {"report", report}});
      return kOk;
    }

    if (*ig) {
      const auto data = mfising::io::load_dataset(ig_data, ig_n);
      const auto prior = ig_pg.prior();
      const auto grid = ig_pg.grid();
      const mfising::Posterior post(data, prior);
      const auto points = mfising::grid_search(post, grid);
      json top = json::array();
      for (std::size_t i = 0; i < std::min(ig_top, points.size()); ++i)
        top.push_back({{"theta", mfising::io::theta_json(points[i].theta)}, {"log_post", points[i].log_post}});
      print_json({{"config", {{"data", ig_data}, {"n", data.n()}, {"prior_sd", mfising::io::vec_json(prior.sd)},
                              {"grid", grid_json(grid)}}},
                  {"points", points.size()},
                  {"argmax", mfising::io::theta_json(points.front().theta)},
                  {"top", top}});
      return kOk;
    }

    if (*den) {
      std::vector<mfising::Theta> thetas;
      for (const auto& t : den_theta) {
        const auto th = mfising::Theta::from(parse_triple(t, "--theta", false));
        if (!th.finite()) throw mfising::DomainError("parameters must be finite");
        thetas.push_back(th);
      }
      const mfising::LogCountTable table(den_n);
      std::vector<std::vector<double>> pmfs;
      for (const auto& t : thetas) pmfs.push_back(mfising::model_summary(t, table).pmf);
      std::string csv = "m";
      for (std::size_t j = 0; j < thetas.size(); ++j) csv += fmt::format(",pmf_{}", j + 1);
      csv += '\n';
      for (int k = 0; k <= den_n; ++k) {
        csv += mfising::io::format_double(mfising::atom(den_n, k));
        for (const auto& p : pmfs) csv += "," + mfising::io::format_double(p[static_cast<std::size_t>(k)]);
        csv += '\n';
      }
      json info = {{"config", {{"n", den_n}, {"theta", json::array()}, {"out", den_out}}}, {"tv_vs_first", json::array()}};
      for (std::size_t j = 0; j < thetas.size(); ++j) {
        info["config"]["theta"].push_back(mfising::io::theta_json(thetas[j]));
        info["tv_vs_first"].push_back(mfising::density_compare(thetas[0], thetas[j], den_n));
      }
      if (den_out == "-") {
        std::cout << csv;
        std::cerr << mfising::io::dump(info);
      } else {
        mfising::io::write_text(den_out, csv);
        print_json(info);
      }
      return kOk;
    }

    if (*dia) {
      std::vector<mfising::Chain> chains;
      for (const auto& p : dia_chains) chains.push_back(mfising::io::parse_chain_csv(mfising::io::read_text(p)));
      if (dia_burnin < 0) throw mfising::DomainError("--burnin must be non-negative");
      auto report = mfising::summarize(chains, static_cast<std::size_t>(dia_burnin), dia_level);
      if (dia_split) report.psrf = mfising::gelman_rubin(chains, static_cast<std::size_t>(dia_burnin), true);
      const auto j = mfising::io::report_json(report);
      if (!dia_out.empty()) mfising::io::write_text(dia_out, mfising::io::dump(j));
      print_json(j);
      return kOk;
    }

    if (*cov) {
      mfising::CoverageOptions opts;
      opts.N = cov_n;
      opts.M = cov_m;
      opts.n_reps = cov_reps;
      opts.level = cov_level;
      opts.rng = cov_rng.get();
      opts.sampler = cov_sampler.get(opts.rng);
      opts.prior = cov_pg.prior();
      opts.grid = cov_pg.grid();
      opts.workers = nworkers;
      const auto theta = cov_theta.get();
      const auto result = mfising::coverage_study(theta, opts);
      auto j = mfising::io::coverage_json(result);
      j["config"] = {{"n", cov_n}, {"m", cov_m}, {"reps", cov_reps}, {"level", cov_level},
                     {"sampler", mfising::io::sampler_json(opts.sampler)},
                     {"prior_sd", mfising::io::vec_json(opts.prior.sd)}, {"grid", grid_json(opts.grid)}};
      mfising::io::write_text(cov_out, mfising::io::dump(j));
      print_json(j);
      return kOk;
    }

    if (*rep) {
      mfising::ReproduceOptions opts;
      opts.N = rep_n;
      opts.M = rep_m;
      opts.chains = rep_chains;
      opts.seed = rep_seed;
      opts.stream = rep_stream;
      opts.level = rep_level;
      opts.sampler = rep_sampler.get({rep_seed, rep_stream});
      opts.prior = rep_pg.prior();
      opts.grid = rep_pg.grid();
      opts.workers = nworkers;
      (void)mfising::find_scenario(rep_name);
      const auto result = mfising::reproduce_scenario(rep_name, opts);
      const fs::path out = rep_out.empty() ? fs::path("reproduce_" + rep_name) : fs::path(rep_out);
      mfising::write_bundle(result, out);
      for (const auto& c : result.checks)
        std::cout << fmt::format("{} {} = {} ({})\n", c.pass ? "PASS" : "FAIL", c.name, c.value, c.rule);
      std::cout << fmt::format("manifest: {}\n", (out / "manifest.json").string());
      return kOk;
    }
  } catch (const CLI::ValidationError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kUsage;
  } catch (const mfising::DataError& e) {
    std::cerr << "data error: " << e.what() << '\n';
    return kData;
  } catch (const mfising::DomainError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kUsage;
  } catch (const mfising::NumericalError& e) {
    std::cerr << "numerical error: " << e.what() << '\n';
    return kNumerical;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kUsage;
  }
  return kUsage;
}
