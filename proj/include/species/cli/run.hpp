#pragma once

// Batch front end: a parsed RunConfig is executed against an output stream
// and yields a process exit code. Output is one JSON document or a CSV table,
// and depends only on the configuration (seed included).

#include <cmath>
#include <cstdint>
#include <iomanip>
#include <limits>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "json.hpp"
#include "species/cli/validate.hpp"
#include "species/species.hpp"

namespace species::cli {

enum class Command { Pmf, Estimate, Hpd, Simulate, SampleLimit, Validate };
enum class OutputFormat { Json, Csv };
enum class Engine { Auto, Exact, Asymptotic };

inline constexpr int kExitSuccess = 0;
inline constexpr int kExitUsage = 1;
inline constexpr int kExitValidationFailed = 2;

inline std::string to_string(Command c) {
  switch (c) {
    case Command::Pmf: return "pmf";
    case Command::Estimate: return "estimate";
    case Command::Hpd: return "hpd";
    case Command::Simulate: return "simulate";
    case Command::SampleLimit: return "sample-limit";
    case Command::Validate: return "validate";
  }
  return "unknown";
}

struct RunConfig {
  Command command = Command::Estimate;
  ModelParams model;
  SampleSummary sample;
  long m = 0;
  double alpha = 0.05;
  long n_draws = 100000;
  std::uint64_t seed = 42;
  long precision_bits = kDefaultPrecisionBits;
  OutputFormat output_format = OutputFormat::Json;
  Engine engine = Engine::Auto;
};

/// Invalid configuration; `flag` names the offending command-line flag.
class UsageError : public std::invalid_argument {
 public:
  UsageError(std::string flag, const std::string& message)
      : std::invalid_argument(flag + ": " + message), flag_(std::move(flag)) {}
  const std::string& flag() const { return flag_; }

 private:
  std::string flag_;
};

inline void validate_config(const RunConfig& c) {
  const auto& p = c.model;
  if (!(p.sigma > 0.0 && p.sigma < 1.0)) throw UsageError("--sigma", "must lie in (0, 1)");
  if (p.family == Family::NGG && !(p.beta >= 0.0 && std::isfinite(p.beta))) {
    throw UsageError("--beta", "must be a finite value >= 0");
  }
  if (p.family == Family::PD && !(p.theta > -p.sigma && std::isfinite(p.theta))) {
    throw UsageError("--theta", "must be finite and > -sigma");
  }
  if (c.sample.n < 1) throw UsageError("--n", "must be >= 1");
  if (c.sample.j < 1 || c.sample.j > c.sample.n) throw UsageError("--j", "must lie in [1, n]");
  if (c.m < 0) throw UsageError("--m", "must be >= 0");
  if (!(c.alpha > 0.0 && c.alpha < 1.0)) throw UsageError("--alpha", "must lie in (0, 1)");
  if (c.n_draws < 1) throw UsageError("--draws", "must be >= 1");
  if (c.precision_bits < kMinPrecisionBits || c.precision_bits > (1L << 20)) {
    throw UsageError("--precision-bits", "must lie in [64, 1048576]");
  }
  const bool exact_only = c.command == Command::Pmf || c.command == Command::Hpd;
  if (exact_only && c.engine == Engine::Asymptotic) {
    throw UsageError("--force-asymptotic", "not available for " + to_string(c.command));
  }
  if (exact_only && c.m > kExactMaxM) {
    throw UsageError("--m", "exact computation is limited to m <= " + std::to_string(kExactMaxM));
  }
  if (c.engine == Engine::Exact && c.m > kExactMaxM) {
    throw UsageError("--force-exact", "exact computation is limited to m <= " + std::to_string(kExactMaxM));
  }
  const bool asymptotic = c.command == Command::Estimate &&
                          (c.engine == Engine::Asymptotic || (c.engine == Engine::Auto && c.m > kExactMaxM));
  if (asymptotic && c.m < 1) throw UsageError("--m", "must be >= 1 for the asymptotic engine");
  if (asymptotic && c.n_draws < 1000) throw UsageError("--draws", "must be >= 1000 for the asymptotic engine");
}

namespace detail {

using Json = nlohmann::ordered_json;

inline Json model_json(const ModelParams& p) {
  Json j;
  j["family"] = to_string(p.family);
  j["sigma"] = p.sigma;
  if (p.family == Family::NGG) {
    j["beta"] = p.beta;
  } else {
    j["theta"] = p.theta;
  }
  return j;
}

inline Json header_json(const RunConfig& c) {
  Json j;
  j["command"] = to_string(c.command);
  j["model"] = model_json(c.model);
  j["sample"] = {{"n", c.sample.n}, {"j", c.sample.j}};
  j["m"] = c.m;
  return j;
}

inline std::string format_double(double v) {
  std::ostringstream s;
  s << std::setprecision(std::numeric_limits<double>::max_digits10) << v;
  return s.str();
}

template <class Row>
void write_csv(std::ostream& out, const std::string& header, std::size_t rows, Row&& row) {
  out << header << '\n';
  for (std::size_t i = 0; i < rows; ++i) out << row(i) << '\n';
}

inline void write_key_values(std::ostream& out, const Json& doc) {
  out << "key,value\n";
  for (const auto& [key, value] : doc.items()) {
    if (value.is_object()) {
      for (const auto& [k2, v2] : value.items()) {
        out << key << '.' << k2 << ',' << (v2.is_string() ? v2.get<std::string>() : v2.dump()) << '\n';
      }
    } else {
      out << key << ',' << (value.is_string() ? value.get<std::string>() : value.dump()) << '\n';
    }
  }
}

inline int emit(std::ostream& out, const RunConfig& c, const Json& doc) {
  if (c.output_format == OutputFormat::Json) {
    out << doc.dump(2) << '\n';
  } else {
    write_key_values(out, doc);
  }
  return kExitSuccess;
}

inline int run_pmf(const RunConfig& c, std::ostream& out) {
  const PosteriorPMF pmf = exact_pmf(c.model, c.sample, c.m, c.precision_bits);
  if (c.output_format == OutputFormat::Csv) {
    write_csv(out, "k,prob", pmf.probs.size(),
              [&](std::size_t k) { return std::to_string(k) + "," + format_double(pmf.probs[k]); });
    return kExitSuccess;
  }
  Json doc = header_json(c);
  doc["method"] = "exact";
  doc["precision_bits"] = c.precision_bits;
  doc["total"] = pmf.total();
  doc["prob"] = pmf.probs;
  return emit(out, c, doc);
}

inline int run_estimate(const RunConfig& c, std::ostream& out) {
  Json doc = header_json(c);
  const bool asymptotic = c.engine == Engine::Asymptotic || (c.engine == Engine::Auto && c.m > kExactMaxM);
  if (!asymptotic) {
    const PosteriorPMF pmf = exact_pmf(c.model, c.sample, c.m, c.precision_bits);
    const HpdInterval hpd = hpd_interval(pmf, 1.0 - c.alpha);
    doc["method"] = "exact";
    doc["precision_bits"] = c.precision_bits;
    doc["alpha"] = c.alpha;
    doc["point"] = posterior_mean(pmf);
    doc["interval"] = {{"kind", "hpd"}, {"lower", hpd.lo}, {"upper", hpd.hi}, {"mass", hpd.mass}};
    return emit(out, c, doc);
  }
  const AsymptoticEstimate est =
      approximate_posterior(c.model, c.sample, c.m, c.alpha, c.n_draws, RandomState(c.seed));
  doc["method"] = "asymptotic";
  doc["seed"] = c.seed;
  doc["draws"] = c.n_draws;
  doc["alpha"] = c.alpha;
  doc["point"] = est.point;
  doc["interval"] = {{"kind", "equal_tailed"}, {"lower", est.lower}, {"upper", est.upper}};
  doc["mc_stderr"] = est.mc_stderr;
  doc["norm_const"] = est.norm_const;
  doc["note"] = "leading-order m^sigma limit; finite-m bias is not corrected";
  return emit(out, c, doc);
}

inline int run_hpd(const RunConfig& c, std::ostream& out) {
  const PosteriorPMF pmf = exact_pmf(c.model, c.sample, c.m, c.precision_bits);
  const HpdInterval hpd = hpd_interval(pmf, 1.0 - c.alpha);
  Json doc = header_json(c);
  doc["method"] = "exact";
  doc["precision_bits"] = c.precision_bits;
  doc["alpha"] = c.alpha;
  doc["lower"] = hpd.lo;
  doc["upper"] = hpd.hi;
  doc["mass"] = hpd.mass;
  return emit(out, c, doc);
}

inline int run_simulate(const RunConfig& c, std::ostream& out) {
  const std::vector<long> k =
      simulate_replications(c.model, c.sample, c.m, static_cast<std::size_t>(c.n_draws), RandomState(c.seed));
  if (c.output_format == OutputFormat::Csv) {
    write_csv(out, "replication,k", k.size(),
              [&](std::size_t i) { return std::to_string(i) + "," + std::to_string(k[i]); });
    return kExitSuccess;
  }
  Json doc = header_json(c);
  doc["method"] = "exact_simulation";
  doc["seed"] = c.seed;
  doc["draws"] = c.n_draws;
  doc["k"] = k;
  return emit(out, c, doc);
}

inline int run_sample_limit(const RunConfig& c, std::ostream& out) {
  const LimitLaw law = make_limit_law(c.model, c.sample, c.precision_bits);
  const std::vector<double> z =
      sample_limit_replications(law, static_cast<std::size_t>(c.n_draws), RandomState(c.seed));
  if (c.output_format == OutputFormat::Csv) {
    write_csv(out, "replication,z", z.size(),
              [&](std::size_t i) { return std::to_string(i) + "," + format_double(z[i]); });
    return kExitSuccess;
  }
  Json doc = header_json(c);
  doc["method"] = "limit_sampler";
  doc["seed"] = c.seed;
  doc["draws"] = c.n_draws;
  doc["norm_const"] = law.norm_const.to_double();
  doc["z"] = z;
  return emit(out, c, doc);
}

inline int run_validate(const RunConfig& c, std::ostream& out) {
  const std::vector<CheckResult> checks = run_validation_suite(c.seed, c.precision_bits);
  bool all = true;
  for (const auto& r : checks) all = all && r.passed;
  if (c.output_format == OutputFormat::Csv) {
    write_csv(out, "check,passed,value,tolerance", checks.size(), [&](std::size_t i) {
      const auto& r = checks[i];
      return r.name + "," + (r.passed ? "true" : "false") + "," + format_double(r.value) + "," +
             format_double(r.tolerance);
    });
  } else {
    Json doc;
    doc["command"] = "validate";
    doc["seed"] = c.seed;
    doc["precision_bits"] = c.precision_bits;
    doc["passed"] = all;
    Json list = Json::array();
    for (const auto& r : checks) {
      list.push_back({{"name", r.name}, {"passed", r.passed}, {"value", r.value}, {"tolerance", r.tolerance}});
    }
    doc["checks"] = list;
    out << doc.dump(2) << '\n';
  }
  return all ? kExitSuccess : kExitValidationFailed;
}

}  // namespace detail

/// Executes the command. Usage errors are reported on `err` with exit code 1;
/// a failing validate run returns 2.
inline int run(const RunConfig& config, std::ostream& out, std::ostream& err) {
  try {
    validate_config(config);
    switch (config.command) {
      case Command::Pmf: return detail::run_pmf(config, out);
      case Command::Estimate: return detail::run_estimate(config, out);
      case Command::Hpd: return detail::run_hpd(config, out);
      case Command::Simulate: return detail::run_simulate(config, out);
      case Command::SampleLimit: return detail::run_sample_limit(config, out);
      case Command::Validate: return detail::run_validate(config, out);
    }
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  }
  return kExitUsage;
}

}  // namespace species::cli
