#include "mfising/diagnostics.hpp"
#include "mfising/io.hpp"
#include "mfising/model.hpp"
#include "mfising/posterior.hpp"
#include "mfising/reproduce.hpp"
#include "mfising/samplers.hpp"

#include <pybind11/eigen.h>
#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>
#include <pybind11/stl/filesystem.h>

namespace py = pybind11;
using namespace mfising;

namespace {

py::object to_python(const io::json& j) {
  switch (j.type()) {
    case io::json::value_t::null: return py::none();
    case io::json::value_t::boolean: return py::bool_(j.get<bool>());
    case io::json::value_t::number_integer: return py::int_(j.get<std::int64_t>());
    case io::json::value_t::number_unsigned: return py::int_(j.get<std::uint64_t>());
    case io::json::value_t::number_float: return py::float_(j.get<double>());
    case io::json::value_t::string: return py::str(j.get<std::string>());
    case io::json::value_t::array: {
      py::list out;
      for (const auto& x : j) out.append(to_python(x));
      return out;
    }
    case io::json::value_t::object: {
      py::dict out;
      for (const auto& [k, v] : j.items()) out[py::str(k)] = to_python(v);
      return out;
    }
    default: return py::none();
  }
}

Theta theta_of(const Vec3& v) { return Theta::from(v); }

// prior_sd may be a scalar (shared by all components) or a 3-vector.
PriorSpec prior_of(const py::object& sd) {
  if (sd.is_none()) return {};
  PriorSpec p;
  if (py::isinstance<py::float_>(sd) || py::isinstance<py::int_>(sd)) {
    p.sd = Vec3::Constant(sd.cast<double>());
  } else {
    p.sd = sd.cast<Vec3>();
  }
  p.validate();
  return p;
}

GridSpec grid_of(const Vec3& lo, const Vec3& hi, double step) { return {lo, hi, step}; }

py::array_t<double> draws_array(const Chain& c) {
  py::array_t<double> out({static_cast<py::ssize_t>(c.size()), py::ssize_t{3}});
  auto view = out.mutable_unchecked<2>();
  for (std::size_t i = 0; i < c.size(); ++i)
    for (int p = 0; p < 3; ++p) view(static_cast<py::ssize_t>(i), p) = c.draws[i][p];
  return out;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Mean-field Ising model: exact likelihood, MCMC samplers and diagnostics";

  auto domain = py::register_exception<DomainError>(m, "DomainError", PyExc_ValueError);
  py::register_exception<DataError>(m, "DataError", domain.ptr());
  auto numerical = py::register_exception<NumericalError>(m, "NumericalError", PyExc_ArithmeticError);
  py::register_exception<ConvergenceError>(m, "ConvergenceError", numerical.ptr());

  // model
  m.def("spectrum", &spectrum, py::arg("n"));
  m.def(
      "model_summary",
      [](const Vec3& theta, int n) {
        const auto s = model_summary(theta_of(theta), n);
        py::dict d;
        d["log_z"] = s.log_z;
        d["pmf"] = py::array_t<double>(static_cast<py::ssize_t>(s.pmf.size()), s.pmf.data());
        d["moments"] = s.mu;
        d["stat_mean"] = s.stat_mean;
        d["stat_cov"] = s.stat_cov;
        return d;
      },
      py::arg("theta"), py::arg("n"), "log Z, pmf over the spectrum and E[m^1..6]");
  m.def("log_count", &log_count, py::arg("n"), py::arg("m"));
  m.def("entropy", &entropy_I, py::arg("m"));
  m.def("free_energy", [](const Vec3& t, double x) { return free_energy_density(theta_of(t), x); },
        py::arg("theta"), py::arg("m"));
  m.def(
      "pressure_limit",
      [](const Vec3& t) {
        const auto p = pressure_limit(theta_of(t));
        return py::make_tuple(p.pressure, p.argmax);
      },
      py::arg("theta"), "(max f(m), maximizers)");
  m.def("solve_consistency", [](const Vec3& t, double m0) { return solve_consistency(theta_of(t), m0); },
        py::arg("theta"), py::arg("m0"));
  m.def("theoretical_mean", [](const Vec3& t, int n) { return theoretical_mean(theta_of(t), n); },
        py::arg("theta"), py::arg("n"));
  m.def("density_compare", [](const Vec3& a, const Vec3& b, int n) { return density_compare(theta_of(a), theta_of(b), n); },
        py::arg("a"), py::arg("b"), py::arg("n"), "total variation distance between two model pmfs");

  // data
  py::class_<Dataset>(m, "Dataset")
      .def(py::init([](int n, std::vector<double> values) { return Dataset(n, std::move(values)); }),
           py::arg("n"), py::arg("values"))
      .def_property_readonly("n", &Dataset::n)
      .def_property_readonly("m_count", &Dataset::m_count)
      .def_property_readonly("values", [](const Dataset& d) {
        return py::array_t<double>(static_cast<py::ssize_t>(d.values().size()), d.values().data());
      })
      .def_property_readonly("counts", &Dataset::counts)
      .def_property_readonly("suffstats", [](const Dataset& d) {
        return py::make_tuple(d.suffstats().s1, d.suffstats().s2, d.suffstats().s3);
      })
      .def_property_readonly("theta_true", [](const Dataset& d) -> py::object {
        if (!d.theta_true()) return py::none();
        return py::cast(d.theta_true()->vec());
      })
      .def("to_csv", &io::dataset_csv)
      .def("to_json", [](const Dataset& d) { return to_python(io::dataset_json(d)); })
      .def("__len__", &Dataset::m_count);

  m.def(
      "simulate",
      [](const Vec3& theta, int n, int m_count, std::uint64_t seed, std::uint64_t stream) {
        py::gil_scoped_release release;
        return sample_dataset(theta_of(theta), n, m_count, {seed, stream});
      },
      py::arg("theta"), py::arg("n") = 300, py::arg("m") = 1000, py::arg("seed") = 0, py::arg("stream") = 0);
  m.def("load_dataset", &io::load_dataset, py::arg("path"), py::arg("n") = 0);

  // posterior
  py::class_<Posterior>(m, "Posterior")
      .def(py::init([](const Dataset& d, const py::object& sd) { return Posterior(d, prior_of(sd)); }),
           py::arg("data"), py::arg("prior_sd") = py::none())
      .def("log_likelihood", [](const Posterior& p, const Vec3& t) { return p.log_likelihood(theta_of(t)); })
      .def("log_posterior", [](const Posterior& p, const Vec3& t) { return p.log_posterior(theta_of(t)); })
      .def("grad_log_posterior", [](const Posterior& p, const Vec3& t) { return p.grad_log_posterior(theta_of(t)); })
      .def("grad_log_likelihood", [](const Posterior& p, const Vec3& t) { return p.grad_log_likelihood(theta_of(t)); })
      .def("metric", [](const Posterior& p, const Vec3& t, double chi) { return p.metric_G(theta_of(t), chi); },
           py::arg("theta"), py::arg("chi") = 0.0);

  // samplers
  py::class_<SamplerConfig>(m, "SamplerConfig")
      .def(py::init<>())
      .def_readwrite("n_iter", &SamplerConfig::n_iter)
      .def_readwrite("burn_in", &SamplerConfig::burn_in)
      .def_readwrite("leapfrog_steps", &SamplerConfig::leapfrog_steps)
      .def_readwrite("step_size", &SamplerConfig::step_size)
      .def_readwrite("adapt_step_size", &SamplerConfig::adapt_step_size)
      .def_readwrite("target_accept", &SamplerConfig::target_accept)
      .def_property(
          "chi", [](const SamplerConfig& c) { return py::make_tuple(c.chi.burn_in, c.chi.after); },
          [](SamplerConfig& c, std::pair<double, double> v) { c.chi = {v.first, v.second}; })
      .def_readwrite("amh_scale", &SamplerConfig::amh_scale)
      .def_readwrite("amh_warmup", &SamplerConfig::amh_warmup)
      .def_readwrite("amh_fallback_sd", &SamplerConfig::amh_fallback_sd)
      .def_readwrite("jitter", &SamplerConfig::jitter)
      .def_property(
          "kernel", [](const SamplerConfig& c) { return std::string(kernel_name(c.kernel)); },
          [](SamplerConfig& c, const std::string& k) { c.kernel = parse_kernel(k); })
      .def_property(
          "seed", [](const SamplerConfig& c) { return c.rng.seed; },
          [](SamplerConfig& c, std::uint64_t s) { c.rng.seed = s; })
      .def_property(
          "stream", [](const SamplerConfig& c) { return c.rng.stream; },
          [](SamplerConfig& c, std::uint64_t s) { c.rng.stream = s; })
      .def("validate", &SamplerConfig::validate)
      .def("to_dict", [](const SamplerConfig& c) { return to_python(io::sampler_json(c)); });

  py::class_<Chain>(m, "Chain")
      .def_property_readonly("draws", &draws_array)
      .def_property_readonly("kernel", [](const Chain& c) {
        std::vector<std::string> out;
        for (Kernel k : c.kernel_tag) out.emplace_back(kernel_name(k));
        return out;
      })
      .def_property_readonly("accepted", [](const Chain& c) {
        return py::array_t<std::uint8_t>(static_cast<py::ssize_t>(c.accepted.size()), c.accepted.data());
      })
      .def_property_readonly("log_post", [](const Chain& c) {
        return py::array_t<double>(static_cast<py::ssize_t>(c.log_post.size()), c.log_post.data());
      })
      .def("acceptance_rate", [](const Chain& c, const std::string& k) { return c.acceptance_rate(parse_kernel(k)); },
           py::arg("kernel"))
      .def("to_csv", &io::chain_csv)
      .def("__len__", &Chain::size);
  m.def("parse_chain_csv", &io::parse_chain_csv, py::arg("text"));

  m.def(
      "grid_starts",
      [](const Dataset& d, std::size_t count, const py::object& sd, const Vec3& lo, const Vec3& hi, double step) {
        const Posterior post(d, prior_of(sd));
        std::vector<Vec3> out;
        for (const auto& t : grid_starts(post, grid_of(lo, hi, step), count)) out.push_back(t.vec());
        return out;
      },
      py::arg("data"), py::arg("count") = 1, py::arg("prior_sd") = py::none(),
      py::arg("lo") = Vec3::Constant(-2.0), py::arg("hi") = Vec3::Constant(2.0), py::arg("step") = 0.2,
      "best lattice points of the log-posterior, best first");

  m.def(
      "run_chains",
      [](const Dataset& d, const SamplerConfig& cfg, const std::vector<Vec3>& starts, const py::object& sd,
         unsigned workers) {
        const Posterior post(d, prior_of(sd));
        py::gil_scoped_release release;
        return run_chains(post, cfg, starts, workers);
      },
      py::arg("data"), py::arg("config"), py::arg("starts"), py::arg("prior_sd") = py::none(),
      py::arg("workers") = 0, "one chain per start; chain c uses the c-th derived random stream");

  // diagnostics
  m.def(
      "summarize",
      [](const std::vector<Chain>& chains, std::size_t burn_in, double level) {
        return to_python(io::report_json(summarize(chains, burn_in, level)));
      },
      py::arg("chains"), py::arg("burn_in"), py::arg("level") = 0.95);
  m.def("gelman_rubin", &gelman_rubin, py::arg("chains"), py::arg("burn_in"), py::arg("split") = false);

  m.def(
      "coverage_study",
      [](const Vec3& theta, int n, int m_count, std::size_t reps, double level, const SamplerConfig& cfg,
         std::uint64_t seed, std::uint64_t stream, unsigned workers) {
        CoverageOptions o;
        o.N = n;
        o.M = m_count;
        o.n_reps = reps;
        o.level = level;
        o.sampler = cfg;
        o.rng = {seed, stream};
        o.workers = workers;
        CoverageResult r;
        {
          py::gil_scoped_release release;
          r = coverage_study(theta_of(theta), o);
        }
        return to_python(io::coverage_json(r));
      },
      py::arg("theta"), py::arg("n") = 300, py::arg("m") = 1000, py::arg("reps") = 20, py::arg("level") = 0.95,
      py::arg("config") = SamplerConfig{}, py::arg("seed") = 0, py::arg("stream") = 0, py::arg("workers") = 0);

  m.def("scenarios", [] {
    std::vector<std::string> names;
    for (const auto& s : scenarios()) names.push_back(s.name);
    return names;
  });
  m.def(
      "reproduce",
      [](const std::string& name, std::uint64_t seed, int n, int m_count, std::size_t chains,
         const SamplerConfig& cfg, const std::optional<std::filesystem::path>& out, unsigned workers) {
        ReproduceOptions o;
        o.seed = seed;
        o.N = n;
        o.M = m_count;
        o.chains = chains;
        o.sampler = cfg;
        o.workers = workers;
        std::optional<ScenarioResult> r;
        {
          py::gil_scoped_release release;
          r = reproduce_scenario(name, o);
          if (out) write_bundle(*r, *out);
        }
        return to_python(manifest_json(*r));
      },
      py::arg("name"), py::arg("seed") = 7, py::arg("n") = 300, py::arg("m") = 1000, py::arg("chains") = 4,
      py::arg("config") = SamplerConfig{}, py::arg("out") = py::none(), py::arg("workers") = 0,
      "simulate, fit with every kernel and return the manifest; writes the bundle when out is given");
}
