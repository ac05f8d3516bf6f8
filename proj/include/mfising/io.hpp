#pragma once

// File formats:
//   Dataset CSV   header `m`, one magnetization per row (shortest round-trip decimal)
//   Dataset JSON  {n, m_count, seed, stream, theta_true|null, values}
//   Chain CSV     iter,kernel,accepted,K,J,h,logpost (iter is 1-based)
//   Report JSON   {psrf, mean, ci, level, n_chains, draws_used}

#include "mfising/dataset.hpp"
#include "mfising/diagnostics.hpp"
#include "mfising/samplers.hpp"

#include <nlohmann/json.hpp>

#include <filesystem>
#include <string>

namespace mfising::io {

using json = nlohmann::json;

/// Shortest decimal that parses back to the same double.
[[nodiscard]] std::string format_double(double x);

void write_text(const std::filesystem::path& path, const std::string& text);
[[nodiscard]] std::string read_text(const std::filesystem::path& path);

[[nodiscard]] std::string dataset_csv(const Dataset& data);
[[nodiscard]] Dataset parse_dataset_csv(const std::string& text, int N);
[[nodiscard]] json dataset_json(const Dataset& data);
[[nodiscard]] Dataset parse_dataset_json(const json& j);
/// Reads .json envelopes directly; CSV files need the spin count.
[[nodiscard]] Dataset load_dataset(const std::filesystem::path& path, int N = 0);

[[nodiscard]] std::string chain_csv(const Chain& chain);
[[nodiscard]] Chain parse_chain_csv(const std::string& text);

[[nodiscard]] json theta_json(const Theta& t);
[[nodiscard]] json vec_json(const Vec3& v);
[[nodiscard]] json report_json(const DiagnosticsReport& r);
[[nodiscard]] json coverage_json(const CoverageResult& r);
[[nodiscard]] json sampler_json(const SamplerConfig& cfg);

/// Pretty-printed with a trailing newline.
[[nodiscard]] std::string dump(const json& j);

}  // namespace mfising::io
