#include "mfising/reproduce.hpp"

#include <algorithm>
#include <fmt/format.h>

namespace mfising {

const std::vector<ScenarioSpec>& scenarios() {
  static const std::vector<ScenarioSpec> kScenarios{
      {"bimodal1", {1.67, 0.01, 0.1}, {0.224, 0.284, 0.077}, {0.95, 0.96, 0.97}, 1.01, 1.18, 2.02},
      {"bimodal2", {0.0, 1.2, 0.0}, {0.042, 0.019, 0.006}, {0.98, 0.94, 0.98}, 1.009, 2.26, 10.69},
      {"unimodal1", {0.5, 0.3, 0.1}, {0.990, 0.373, 0.033}, {0.97, 0.97, 0.99}, 1.008, 1.08, 1.66},
      {"critical", {0.0, 1.0, 0.0}, {0.055, 0.014, 0.003}, {0.96, 0.90, 0.95}, 1.01, 8.44, 20.98},
      {"nonident", {0.5, 0.3, 0.9}, {1.610, 2.813, 1.367}, {1.0, 1.0, 1.0}, 1.0001, 4.75, 1.005},
  };
  return kScenarios;
}

const ScenarioSpec& find_scenario(const std::string& name) {
  for (const auto& s : scenarios())
    if (s.name == name) return s;
  std::string names;
  for (const auto& s : scenarios()) names += (names.empty() ? "" : ", ") + s.name;
  throw DomainError(fmt::format("unknown scenario '{}' (valid: {})", name, names));
}

const KernelRun* ScenarioResult::run(Kernel k) const {
  for (const auto& r : runs)
    if (r.kernel == k) return &r;
  return nullptr;
}

bool ScenarioResult::all_pass() const {
  return std::all_of(checks.begin(), checks.end(), [](const Check& c) { return c.pass; });
}

std::size_t count_local_maxima(const std::vector<double>& pmf) {
  std::size_t peaks = 0;
  for (std::size_t k = 0; k < pmf.size(); ++k) {
    const bool left = k == 0 || pmf[k] > pmf[k - 1];
    const bool right = k + 1 == pmf.size() || pmf[k] > pmf[k + 1];
    if (left && right) ++peaks;
  }
  return peaks;
}

namespace {

constexpr const char* kParam[3] = {"K", "J", "h"};

void add_check(ScenarioResult& r, std::string name, double value, std::string rule, bool pass) {
  r.checks.push_back({std::move(name), value, std::move(rule), pass});
}

void add_scenario_checks(ScenarioResult& r) {
  const auto& spec = r.spec;
  const Vec3 truth = spec.theta.vec();
  const KernelRun* hyb = r.run(Kernel::kHybrid);
  const KernelRun* amh = r.run(Kernel::kAmh);
  if (hyb == nullptr) return;
  const auto& rep = hyb->report;

  auto covers = [&] {
    for (int p = 0; p < 3; ++p)
      add_check(r, fmt::format("hybrid_ci_covers_{}", kParam[p]), truth[p], "inside interval",
                rep.ci[static_cast<std::size_t>(p)].contains(truth[p]));
  };
  auto psrf_hybrid = [&] {
    for (int p = 0; p < 3; ++p)
      add_check(r, fmt::format("hybrid_psrf_{}", kParam[p]), rep.psrf[p], "<= 1.05", rep.psrf[p] <= 1.05);
  };
  auto widths_factor2 = [&] {
    for (int p = 0; p < 3; ++p) {
      const double w = rep.ci[static_cast<std::size_t>(p)].width();
      const double ratio = w / spec.ref_width[p];
      add_check(r, fmt::format("hybrid_width_ratio_{}", kParam[p]), ratio, "in [0.5, 2]",
                ratio >= 0.5 && ratio <= 2.0);
    }
  };

  if (spec.name == "unimodal1") {
    covers();
    psrf_hybrid();
    widths_factor2();
    add_check(r, "tv_truth_vs_hybrid_mean", r.tv_hybrid_mean, "< 0.05", r.tv_hybrid_mean < 0.05);
  } else if (spec.name == "bimodal2") {
    psrf_hybrid();
    if (amh != nullptr)
      add_check(r, "amh_psrf_K", amh->report.psrf[0], ">= 1.5", amh->report.psrf[0] >= 1.5);
    covers();
    widths_factor2();
  } else if (spec.name == "critical") {
    psrf_hybrid();
    if (amh != nullptr) add_check(r, "amh_psrf_K", amh->report.psrf[0], "> 2", amh->report.psrf[0] > 2.0);
    covers();
    add_check(r, "tv_truth_vs_hybrid_mean", r.tv_hybrid_mean, "< 0.05", r.tv_hybrid_mean < 0.05);
  } else if (spec.name == "bimodal1") {
    covers();
    add_check(r, "hybrid_mean_pmf_peaks", static_cast<double>(r.hybrid_pmf_peaks), ">= 2",
              r.hybrid_pmf_peaks >= 2);
  } else if (spec.name == "nonident") {
    covers();
    for (int p = 0; p < 2; ++p) {
      const double w = rep.ci[static_cast<std::size_t>(p)].width();
      add_check(r, fmt::format("hybrid_width_{}", kParam[p]), w, "> 0.5", w > 0.5);
    }
    add_check(r, "b_interval_covers_true_b", r.b_true, "inside interval", r.b_interval.contains(r.b_true));
  }
}

}  // namespace

ScenarioResult reproduce_scenario(const std::string& name, const ReproduceOptions& opts) {
  const ScenarioSpec& spec = find_scenario(name);
  const RngSpec base{opts.seed, opts.stream};
  ScenarioResult r{spec, opts, sample_dataset(spec.theta, opts.N, opts.M, base), {}, {}, 0.0, {}, 0.0, 0, {}};

  const Posterior posterior(r.data, opts.prior);
  r.starts = grid_starts(posterior, opts.grid, opts.chains);
  std::vector<Vec3> starts;
  for (const auto& t : r.starts) starts.push_back(t.vec());

  for (std::size_t i = 0; i < opts.kernels.size(); ++i) {
    SamplerConfig cfg = opts.sampler;
    cfg.kernel = opts.kernels[i];
    cfg.rng = base.with_salt(0x6b65726e656cULL + static_cast<std::uint64_t>(cfg.kernel));
    KernelRun run;
    run.kernel = cfg.kernel;
    run.chains = run_chains(posterior, cfg, starts, opts.workers);
    run.report = summarize(run.chains, static_cast<std::size_t>(cfg.burn_in), opts.level);
    r.runs.push_back(std::move(run));
  }

  if (const KernelRun* hyb = r.run(Kernel::kHybrid)) {
    const Theta mean = Theta::from(hyb->report.post_mean);
    const LogCountTable table(opts.N);
    r.tv_hybrid_mean = density_compare(spec.theta, mean, opts.N);
    r.hybrid_pmf_peaks = count_local_maxima(model_summary(mean, table).pmf);
    r.b_true = model_summary(spec.theta, table).mean();
    std::vector<double> b;
    for (const auto& c : hyb->chains)
      for (std::size_t i = static_cast<std::size_t>(opts.sampler.burn_in); i < c.size(); ++i)
        b.push_back(model_summary(Theta::from(c.draws[i]), table).mean());
    std::sort(b.begin(), b.end());
    const double tail = 0.5 * (1.0 - opts.level);
    r.b_interval = {quantile_sorted(b, tail), quantile_sorted(b, 1.0 - tail)};
  }
  add_scenario_checks(r);
  return r;
}

io::json manifest_json(const ScenarioResult& r) {
  using io::json;
  json j;
  j["scenario"] = r.spec.name;
  j["theta_true"] = io::theta_json(r.spec.theta);
  json cfg;
  cfg["n"] = r.options.N;
  cfg["m"] = r.options.M;
  cfg["chains"] = r.options.chains;
  cfg["seed"] = r.options.seed;
  cfg["stream"] = r.options.stream;
  cfg["level"] = r.options.level;
  cfg["sampler"] = io::sampler_json(r.options.sampler);
  cfg["sampler"].erase("kernel");
  cfg["prior_sd"] = io::vec_json(r.options.prior.sd);
  cfg["grid"] = {{"lo", io::vec_json(r.options.grid.lo)},
                 {"hi", io::vec_json(r.options.grid.hi)},
                 {"step", r.options.grid.step}};
  j["config"] = cfg;
  j["dataset"] = {{"m_count", r.data.m_count()},
                  {"s1", r.data.suffstats().s1},
                  {"s2", r.data.suffstats().s2},
                  {"s3", r.data.suffstats().s3}};
  j["starts"] = json::array();
  for (const auto& t : r.starts) j["starts"].push_back(io::theta_json(t));
  j["kernels"] = json::object();
  for (const auto& run : r.runs) {
    json k = io::report_json(run.report);
    json acc = json::array();
    for (const auto& c : run.chains) {
      acc.push_back({{"amh", c.acceptance_rate(Kernel::kAmh)}, {"rmahmc", c.acceptance_rate(Kernel::kRmahmc)}});
    }
    k["acceptance"] = acc;
    j["kernels"][std::string(kernel_name(run.kernel))] = k;
  }
  j["reference"] = {{"width", io::vec_json(r.spec.ref_width)},
                    {"coverage", io::vec_json(r.spec.ref_coverage)},
                    {"psrf_K_5000", {{"AMH", r.spec.ref_psrf_amh},
                                     {"RMAHMC", r.spec.ref_psrf_rmahmc},
                                     {"HYBRID", r.spec.ref_psrf_hybrid}}}};
  j["tv_truth_vs_hybrid_mean"] = r.tv_hybrid_mean;
  j["b_true"] = r.b_true;
  j["b_interval"] = {r.b_interval.lo, r.b_interval.hi};
  j["hybrid_mean_pmf_peaks"] = r.hybrid_pmf_peaks;
  j["checks"] = json::array();
  for (const auto& c : r.checks)
    j["checks"].push_back({{"name", c.name}, {"value", c.value}, {"rule", c.rule}, {"pass", c.pass}});
  j["pass"] = r.all_pass();
  return j;
}

void write_bundle(const ScenarioResult& r, const std::filesystem::path& dir) {
  std::filesystem::create_directories(dir);
  io::write_text(dir / "dataset.csv", io::dataset_csv(r.data));
  io::write_text(dir / "dataset.json", io::dump(io::dataset_json(r.data)));
  for (const auto& run : r.runs) {
    std::string tag(kernel_name(run.kernel));
    std::transform(tag.begin(), tag.end(), tag.begin(), [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
    for (std::size_t c = 0; c < run.chains.size(); ++c)
      io::write_text(dir / fmt::format("chain_{}_{}.csv", tag, c), io::chain_csv(run.chains[c]));
  }
  const LogCountTable table(r.options.N);
  const auto truth = model_summary(r.spec.theta, table).pmf;
  std::string density = "m,pmf_true";
  std::vector<double> est;
  if (const KernelRun* hyb = r.run(Kernel::kHybrid)) {
    density += ",pmf_hybrid_mean";
    est = model_summary(Theta::from(hyb->report.post_mean), table).pmf;
  }
  density += '\n';
  for (std::size_t k = 0; k < truth.size(); ++k) {
    density += fmt::format("{},{}", atom(r.options.N, static_cast<int>(k)), truth[k]);
    if (!est.empty()) density += fmt::format(",{}", est[k]);
    density += '\n';
  }
  io::write_text(dir / "density.csv", density);
  if (const KernelRun* hyb = r.run(Kernel::kHybrid)) {
    std::string b = "chain,iter,b\n";
    for (std::size_t c = 0; c < hyb->chains.size(); ++c)
      for (std::size_t i = 0; i < hyb->chains[c].size(); ++i)
        b += fmt::format("{},{},{}\n", c, i + 1, model_summary(Theta::from(hyb->chains[c].draws[i]), table).mean());
    io::write_text(dir / "b_trace.csv", b);
  }
  io::write_text(dir / "manifest.json", io::dump(manifest_json(r)));
}

}  // namespace mfising
