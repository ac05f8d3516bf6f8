#include "mfising/io.hpp"

#include <charconv>
#include <cmath>
#include <fmt/format.h>
#include <fstream>
#include <sstream>

namespace mfising::io {

std::string format_double(double x) { return fmt::format("{}", x); }

void write_text(const std::filesystem::path& path, const std::string& text) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw std::runtime_error(fmt::format("cannot open '{}' for writing", path.string()));
  out << text;
  if (!out) throw std::runtime_error(fmt::format("failed writing '{}'", path.string()));
}

std::string read_text(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError(fmt::format("cannot open '{}' for reading", path.string()));
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

namespace {

std::vector<std::string> split_lines(const std::string& text) {
  std::vector<std::string> lines;
  std::istringstream in(text);
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (!line.empty()) lines.push_back(line);
  }
  return lines;
}

std::vector<std::string> split_fields(const std::string& line) {
  std::vector<std::string> out;
  std::string field;
  std::istringstream in(line);
  while (std::getline(in, field, ',')) out.push_back(field);
  return out;
}

double parse_double(const std::string& s, std::size_t row) {
  double v = 0.0;
  const char* first = s.data();
  const char* last = s.data() + s.size();
  while (first < last && *first == ' ') ++first;
  const auto [ptr, ec] = std::from_chars(first, last, v);
  if (ec != std::errc() || ptr != last)
    throw DataError(fmt::format("row {}: cannot parse '{}' as a number", row, s), static_cast<std::ptrdiff_t>(row));
  return v;
}

}  // namespace

std::string dataset_csv(const Dataset& data) {
  std::string out = "m\n";
  for (double v : data.values()) {
    out += format_double(v);
    out += '\n';
  }
  return out;
}

Dataset parse_dataset_csv(const std::string& text, int N) {
  const auto lines = split_lines(text);
  if (lines.empty() || lines.front() != "m") throw DataError("dataset CSV must start with header 'm'");
  std::vector<double> values;
  for (std::size_t i = 1; i < lines.size(); ++i) values.push_back(parse_double(lines[i], i - 1));
  return Dataset(N, std::move(values));
}

json theta_json(const Theta& t) { return json::array({t.K, t.J, t.h}); }

// JSON has no NaN or infinity; undefined or divergent statistics become null.
json vec_json(const Vec3& v) {
  json out = json::array();
  for (int i = 0; i < 3; ++i) out.push_back(std::isfinite(v[i]) ? json(v[i]) : json(nullptr));
  return out;
}

json dataset_json(const Dataset& data) {
  json j;
  j["n"] = data.n();
  j["m_count"] = data.m_count();
  j["seed"] = data.rng().seed;
  j["stream"] = data.rng().stream;
  j["theta_true"] = data.theta_true() ? theta_json(*data.theta_true()) : json(nullptr);
  j["values"] = data.values();
  return j;
}

Dataset parse_dataset_json(const json& j) {
  try {
    const int n = j.at("n").get<int>();
    auto values = j.at("values").get<std::vector<double>>();
    if (j.contains("m_count") && j.at("m_count").get<std::size_t>() != values.size())
      throw DataError("m_count does not match the number of values");
    std::optional<Theta> truth;
    if (j.contains("theta_true") && !j.at("theta_true").is_null()) {
      const auto t = j.at("theta_true").get<std::vector<double>>();
      if (t.size() != 3) throw DataError("theta_true must have three components");
      truth = Theta{t[0], t[1], t[2]};
    }
    RngSpec rng;
    if (j.contains("seed")) rng.seed = j.at("seed").get<std::uint64_t>();
    if (j.contains("stream")) rng.stream = j.at("stream").get<std::uint64_t>();
    return Dataset(n, std::move(values), truth, rng);
  } catch (const json::exception& e) {
    throw DataError(fmt::format("malformed dataset JSON: {}", e.what()));
  }
}

Dataset load_dataset(const std::filesystem::path& path, int N) {
  const auto text = read_text(path);
  if (path.extension() == ".json") {
    try {
      return parse_dataset_json(json::parse(text));
    } catch (const json::exception& e) {
      throw DataError(fmt::format("malformed dataset JSON: {}", e.what()));
    }
  }
  if (N < 1) throw DomainError("reading a dataset CSV requires the spin count N");
  return parse_dataset_csv(text, N);
}

std::string chain_csv(const Chain& chain) {
  std::string out = "iter,kernel,accepted,K,J,h,logpost\n";
  for (std::size_t i = 0; i < chain.size(); ++i) {
    const auto& d = chain.draws[i];
    out += fmt::format("{},{},{},{},{},{},{}\n", i + 1, kernel_name(chain.kernel_tag[i]),
                       static_cast<int>(chain.accepted[i]), d[0], d[1], d[2], chain.log_post[i]);
  }
  return out;
}

Chain parse_chain_csv(const std::string& text) {
  const auto lines = split_lines(text);
  if (lines.empty() || lines.front() != "iter,kernel,accepted,K,J,h,logpost")
    throw DataError("chain CSV must start with header 'iter,kernel,accepted,K,J,h,logpost'");
  Chain c;
  for (std::size_t i = 1; i < lines.size(); ++i) {
    const auto f = split_fields(lines[i]);
    if (f.size() != 7) throw DataError(fmt::format("row {}: expected 7 fields", i - 1), static_cast<std::ptrdiff_t>(i - 1));
    const auto row = static_cast<std::ptrdiff_t>(i - 1);
    if (f[1] == "AMH") c.kernel_tag.push_back(Kernel::kAmh);
    else if (f[1] == "RMAHMC") c.kernel_tag.push_back(Kernel::kRmahmc);
    else throw DataError(fmt::format("row {}: kernel must be AMH or RMAHMC, got '{}'", i - 1, f[1]), row);
    if (f[2] != "0" && f[2] != "1")
      throw DataError(fmt::format("row {}: accepted must be 0 or 1, got '{}'", i - 1, f[2]), row);
    c.accepted.push_back(f[2] == "1" ? 1 : 0);
    c.draws.emplace_back(parse_double(f[3], i - 1), parse_double(f[4], i - 1), parse_double(f[5], i - 1));
    c.log_post.push_back(parse_double(f[6], i - 1));
  }
  return c;
}

json report_json(const DiagnosticsReport& r) {
  json j;
  j["psrf"] = vec_json(r.psrf);
  j["mean"] = vec_json(r.post_mean);
  j["ci"] = json::array();
  for (const auto& iv : r.ci) j["ci"].push_back({iv.lo, iv.hi});
  j["level"] = r.level;
  j["n_chains"] = r.n_chains;
  j["draws_used"] = r.draws_used;
  return j;
}

json coverage_json(const CoverageResult& r) {
  json j;
  j["theta_true"] = theta_json(r.theta_true);
  j["n_replications"] = r.n_replications;
  j["coverage"] = vec_json(r.coverage);
  j["mean_width"] = vec_json(r.mean_width);
  j["level"] = r.level;
  j["failures"] = r.failures();
  j["replications"] = json::array();
  for (const auto& rec : r.replications) {
    json x;
    x["index"] = rec.index;
    x["ok"] = rec.ok;
    if (!rec.ok) x["error"] = rec.error;
    x["start"] = theta_json(rec.start);
    x["ci"] = json::array();
    for (const auto& iv : rec.ci) x["ci"].push_back({iv.lo, iv.hi});
    x["hit"] = rec.hit;
    j["replications"].push_back(x);
  }
  return j;
}

json sampler_json(const SamplerConfig& cfg) {
  json j;
  j["kernel"] = std::string(kernel_name(cfg.kernel));
  j["iters"] = cfg.n_iter;
  j["burnin"] = cfg.burn_in;
  j["leapfrog"] = cfg.leapfrog_steps;
  j["eps"] = cfg.step_size;
  j["adapt_eps"] = cfg.adapt_step_size;
  j["target_accept"] = cfg.target_accept;
  j["chi_burnin"] = cfg.chi.burn_in;
  j["chi_after"] = cfg.chi.after;
  j["amh_scale"] = cfg.amh_scale;
  j["amh_warmup"] = cfg.amh_warmup;
  j["amh_fallback_sd"] = cfg.amh_fallback_sd;
  j["jitter"] = cfg.jitter;
  j["seed"] = cfg.rng.seed;
  j["stream"] = cfg.rng.stream;
  return j;
}

std::string dump(const json& j) { return j.dump(2) + "\n"; }

}  // namespace mfising::io
