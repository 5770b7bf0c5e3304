#include "cli.hpp"

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <map>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "monadforge/acceptance/criteria.hpp"
#include "monadforge/invariants.hpp"
#include "monadforge/sampling.hpp"
#include "monadforge/serialization.hpp"
#include "monadforge/stabilization.hpp"

namespace monadforge::cli {
namespace {

using nlohmann::json;
namespace fs = std::filesystem;

constexpr const char* kTolEnv = "MONADFORGE_TOL";

struct Context {
  std::ostream& out;
  std::ostream& err;
};

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Flag beats environment beats the built-in default.
ToleranceModel resolve_tolerance(const std::optional<double>& flag) {
  ToleranceModel tol;
  if (flag) {
    tol.base_tol = *flag;
  } else if (const char* env = std::getenv(kTolEnv); env != nullptr && *env != '\0') {
    char* end = nullptr;
    const double value = std::strtod(env, &end);
    if (end == env || *end != '\0') {
      throw UsageError(std::string(kTolEnv) + " is not a number: '" + env + "'");
    }
    tol.base_tol = value;
  }
  if (!std::isfinite(tol.base_tol) || tol.base_tol < 0.0) {
    throw UsageError("tolerance must be finite and nonnegative");
  }
  return tol;
}

std::string format_complex(Complex z) {
  std::ostringstream os;
  os << std::setprecision(6) << '(' << z.real() << ", " << z.imag() << ')';
  return os.str();
}

std::string format_real(double v) {
  std::ostringstream os;
  os << std::setprecision(6) << v;
  return os.str();
}

// Reads and parses a configuration file; returns the exit code on failure.
std::optional<Configuration> load(const std::string& path, Context& ctx, int& code) {
  std::ifstream in(path);
  if (!in) {
    ctx.err << "error: cannot read '" << path << "'\n";
    code = kIoError;
    return std::nullopt;
  }
  std::stringstream buffer;
  buffer << in.rdbuf();
  try {
    return parse_configuration(buffer.str());
  } catch (const Error& e) {
    ctx.err << "error: " << path << ": " << e.what() << '\n';
    code = kSchemaError;
    return std::nullopt;
  }
}

int verdict_code(const ValidationReport& report) {
  if (!report.integrable) return kNotIntegrable;
  if (!report.nondegenerate) return kDegenerate;
  return kOk;
}

void print_report(const Configuration& config, const ValidationReport& report, std::ostream& out) {
  out << "configuration: k=" << config.k() << " n=" << config.n() << '\n';
  const IntegrabilityCheck integ = check_integrable(config, report.tolerances);
  out << "integrability residual: " << format_real(report.integrability_residual_norm)
      << " (threshold " << format_real(integ.threshold) << ")\n";
  out << "integrable: " << (report.integrable ? "yes" : "no") << '\n';
  if (report.nondegenerate) {
    out << "non-degenerate: yes (margin " << format_real(report.margin) << ")\n";
  } else {
    const auto& w = *report.witness;
    out << "non-degenerate: no\n";
    out << "witness: side=" << to_string(w.side) << " lambda=" << format_complex(w.lambda[0]) << ' '
        << format_complex(w.lambda[1]) << " mu=" << format_complex(w.mu[0]) << ' '
        << format_complex(w.mu[1]) << '\n';
    out << "witness vector:";
    for (Eigen::Index i = 0; i < w.vec.size(); ++i) out << ' ' << format_complex(w.vec(i));
    out << "\nwitness residuals:";
    for (double r : w.residuals) out << ' ' << format_real(r);
    out << '\n';
  }
  const char* verdict = report.valid() ? "VALID" : !report.integrable ? "NOT INTEGRABLE" : "DEGENERATE";
  out << "verdict: " << verdict << '\n';
}

int cmd_validate(const std::string& path, const ToleranceModel& tol, bool as_json, Context& ctx) {
  int code = kOk;
  const auto config = load(path, ctx, code);
  if (!config) return code;
  const ValidationReport report = validate(*config, tol);
  code = verdict_code(report);
  if (as_json) {
    ctx.out << json{{"file", path},
                    {"k", config->k()},
                    {"n", config->n()},
                    {"report", to_json(report)},
                    {"exit_code", code}}
                   .dump(2)
            << '\n';
  } else {
    print_report(*config, report, ctx.out);
  }
  return code;
}

struct SampleArgs {
  int k = 1;
  int n = 2;
  std::uint64_t seed = 0;
  int count = 1;
  std::string out_dir;
};

int cmd_sample(const SampleArgs& args, const ToleranceModel& tol, Context& ctx) {
  if (args.count < 1) throw UsageError("--count must be >= 1");
  if (args.k < 0 || args.n < 1) throw UsageError("need --k >= 0 and --n >= 1");
  if (args.k >= 1 && args.n == 1) {
    ctx.err << "UNSAMPLEABLE: no integrable non-degenerate configuration exists for n = 1, k = "
            << args.k << "\n";
    return kUnsampleable;
  }
  if (args.n < args.k) {
    ctx.err << "UNSUPPORTED-REGIME: sampling needs n >= k (got k = " << args.k
            << ", n = " << args.n << ")\n";
    return kUnsampleable;
  }
  std::error_code ec;
  fs::create_directories(args.out_dir, ec);
  if (ec) {
    ctx.err << "error: cannot create '" << args.out_dir << "': " << ec.message() << '\n';
    return kIoError;
  }
  std::vector<std::string> failures;
  for (int i = 0; i < args.count; ++i) {
    SampleSpec spec;
    spec.k = args.k;
    spec.n = args.n;
    spec.seed = derive_seed(args.seed, static_cast<std::uint64_t>(i));
    spec.tol = tol;
    const fs::path file = fs::path(args.out_dir) / ("sample-" + std::to_string(args.k) + "-" +
                                                    std::to_string(args.n) + "-" +
                                                    std::to_string(args.seed) + "-" +
                                                    std::to_string(i) + ".json");
    try {
      const SampleResult result = sample_config(spec);
      std::ofstream stream(file, std::ios::binary);
      stream << serialize(result.config);
      if (!stream) {
        ctx.err << "error: cannot write '" << file.string() << "'\n";
        return kIoError;
      }
      ctx.out << file.string() << " (attempts " << result.attempts << ")\n";
    } catch (const Error& e) {
      failures.push_back("index " + std::to_string(i) + ": " + e.what());
    }
  }
  for (const auto& f : failures) ctx.err << "failed " << f << '\n';
  return failures.empty() ? kOk : kPartialFailure;
}

int cmd_homotopy(const std::string& path, int samples, const ToleranceModel& tol, bool as_json,
                 Context& ctx) {
  if (samples < 2) throw UsageError("--samples must be >= 2");
  int code = kOk;
  const auto config = load(path, ctx, code);
  if (!config) return code;
  const ValidationReport report = validate(*config, tol);
  if (!report.valid()) {
    code = verdict_code(report);
    if (as_json) {
      ctx.out << json{{"file", path}, {"report", to_json(report)}, {"exit_code", code}}.dump(2)
              << '\n';
    } else {
      ctx.err << "homotopy needs a valid configuration\n";
      print_report(*config, report, ctx.out);
    }
    return code;
  }
  const HomotopyCertificate cert = homotopy_certify(*config, samples, tol);
  code = cert.passed ? kOk : kCheckFailed;
  if (as_json) {
    ctx.out << json{{"file", path}, {"certificate", to_json(cert)}, {"exit_code", code}}.dump(2)
            << '\n';
    return code;
  }
  ctx.out << "homotopy H_t into rank n+2k = " << config->n() + 2 * config->k() << ", "
          << samples << " samples, identity gap bound " << format_real(cert.identity_gap_bound)
          << '\n';
  for (const auto& s : cert.samples) {
    ctx.out << "t=" << std::fixed << std::setprecision(4) << s.t << std::defaultfloat
            << " residual=" << format_real(s.residual_norm) << " gap=" << format_real(s.identity_gap)
            << " margin=" << format_real(s.margin)
            << (s.integrable && s.nondegenerate ? "" : " FAIL");
    if (s.t == 0.0) {
      ctx.out << " [equals rank embedding: " << (cert.start_equals_embedding ? "yes" : "NO") << ']';
    }
    if (s.t == 1.0) {
      ctx.out << " [constant endpoint: " << (cert.end_is_constant ? "yes" : "NO") << ']';
    }
    ctx.out << '\n';
  }
  ctx.out << "certificate: " << (cert.passed ? "PASS" : "FAIL") << '\n';
  return code;
}

struct ReportArgs {
  std::string kind;
  std::vector<int> grid{3, 4};
  std::uint64_t seed = 0;
  int trials = 3;
};

struct CellOutcome {
  int k = 0;
  int n = 0;
  std::string status;  // ok, FAIL, UNSAMPLEABLE, UNSUPPORTED, SAMPLING-FAILED
  json values;
  std::string summary;
};

CellOutcome report_cell(const ReportArgs& args, int k, int n, const ToleranceModel& tol) {
  CellOutcome cell{k, n, "ok", json::object(), ""};
  if (n == 1) {
    cell.status = "UNSAMPLEABLE";
    return cell;
  }
  if (n < k) {
    cell.status = "UNSUPPORTED";
    return cell;
  }
  const std::uint64_t cell_seed = derive_seed(args.seed, static_cast<std::uint64_t>(k * 1000 + n));
  std::vector<int> dims, ranks, stabs;
  double min_gap = kInfinity, max_dev = 0.0;
  bool ok = true;
  for (int t = 0; t < args.trials; ++t) {
    SampleSpec spec;
    spec.k = k;
    spec.n = n;
    spec.seed = derive_seed(cell_seed, static_cast<std::uint64_t>(t));
    spec.tol = tol;
    Configuration config;
    try {
      config = sample_config(spec).config;
    } catch (const Error& e) {
      cell.status = "SAMPLING-FAILED";
      cell.summary = e.what();
      return cell;
    }
    if (args.kind == "dimension") {
      const DimensionReport rep = moduli_dimension_report(config, tol);
      dims.push_back(rep.moduli_dimension);
      ranks.push_back(rep.jacobian_rank);
      min_gap = std::min({min_gap, rep.jacobian_gap, rep.stabilizer_gap});
      ok = ok && rep.moduli_dimension == 2 * n * k && rep.jacobian_rank == k * k;
    } else if (args.kind == "freeness") {
      const StabilizerInfo info = stabilizer_info(config, tol);
      stabs.push_back(info.dimension);
      min_gap = std::min(min_gap, info.rank.spectral_gap);
      ok = ok && info.dimension == 0;
    } else {
      Rng rng(derive_seed(spec.seed, 0x9e));
      const GroupElement g = random_group_element(k, rng, 10.0);
      const FingerprintComparison cmp =
          compare_fingerprints(fingerprint(config), fingerprint(act(g, config)), 1e-8, 1e-8);
      max_dev = std::max({max_dev, cmp.spectrum_deviation, cmp.trace_deviation, cmp.endo_deviation});
      ok = ok && cmp.agree;
    }
  }
  std::ostringstream summary;
  if (args.kind == "dimension") {
    cell.values = {{"moduli_dimensions", dims},
                   {"expected", 2 * n * k},
                   {"jacobian_ranks", ranks},
                   {"min_gap", real_to_json(min_gap)}};
    summary << "dim " << json(dims).dump() << " expected " << 2 * n * k << " rank "
            << json(ranks).dump() << " gap>=" << format_real(min_gap);
  } else if (args.kind == "freeness") {
    cell.values = {{"stabilizer_dimensions", stabs}, {"min_gap", real_to_json(min_gap)}};
    summary << "stabilizer " << json(stabs).dump() << " gap>=" << format_real(min_gap);
  } else {
    cell.values = {{"max_deviation", max_dev}};
    summary << "max deviation " << format_real(max_dev);
  }
  cell.summary = summary.str();
  if (!ok) cell.status = "FAIL";
  return cell;
}

int cmd_report(const ReportArgs& args, const ToleranceModel& tol, bool as_json, Context& ctx) {
  if (args.grid.size() != 2 || args.grid[0] < 1 || args.grid[1] < 1) {
    throw UsageError("--grid takes two positive integers: kmax nmax");
  }
  if (args.trials < 1) throw UsageError("--trials must be >= 1");
  std::vector<CellOutcome> cells;
  for (int k = 1; k <= args.grid[0]; ++k) {
    for (int n = 1; n <= args.grid[1]; ++n) cells.push_back(report_cell(args, k, n, tol));
  }
  bool ok = true;
  for (const auto& c : cells) ok = ok && (c.status == "ok" || c.status == "UNSAMPLEABLE" ||
                                          c.status == "UNSUPPORTED");
  const int code = ok ? kOk : kCheckFailed;
  if (as_json) {
    json rows = json::array();
    for (const auto& c : cells) {
      rows.push_back({{"k", c.k}, {"n", c.n}, {"status", c.status}, {"values", c.values}});
    }
    ctx.out << json{{"report", args.kind},
                    {"seed", args.seed},
                    {"trials", args.trials},
                    {"cells", rows},
                    {"exit_code", code}}
                   .dump(2)
            << '\n';
    return code;
  }
  ctx.out << args.kind << " report, seed " << args.seed << ", " << args.trials
          << " trials per cell\n";
  ctx.out << std::left << std::setw(4) << "k" << std::setw(4) << "n" << std::setw(17) << "status"
          << "values\n";
  for (const auto& c : cells) {
    ctx.out << std::left << std::setw(4) << c.k << std::setw(4) << c.n << std::setw(17)
            << c.status << c.summary << '\n';
  }
  return code;
}

int cmd_selftest(bool list, const std::vector<std::string>& only, Context& ctx) {
  if (list) {
    for (const auto& c : acceptance::criteria()) ctx.out << c.id << ' ' << c.title << '\n';
    return kOk;
  }
  const auto results = acceptance::run(ctx.out, only);
  if (results.empty()) {
    ctx.err << "no criterion matched\n";
    return kSchemaError;
  }
  const bool ok = acceptance::all_passed(results);
  ctx.out << (ok ? "selftest: all criteria passed\n" : "selftest: FAILED\n");
  return ok ? kOk : kCheckFailed;
}

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  Context ctx{out, err};
  CLI::App app{"monadforge: monad data for based instantons on the reversed complex projective plane"};
  app.require_subcommand(1);

  std::optional<double> tol_flag;
  bool as_json = false;

  std::string path;
  auto* validate_cmd = app.add_subcommand("validate", "Check integrability and non-degeneracy");
  validate_cmd->add_option("path", path, "Configuration document")->required();
  validate_cmd->add_option("--tol", tol_flag, "Base tolerance");
  validate_cmd->add_flag("--json", as_json, "Structured output");

  SampleArgs sample_args;
  auto* sample_cmd = app.add_subcommand("sample", "Write seeded valid configurations");
  sample_cmd->add_option("--k", sample_args.k, "Charge")->required();
  sample_cmd->add_option("--n", sample_args.n, "Rank")->required();
  sample_cmd->add_option("--seed", sample_args.seed, "Seed");
  sample_cmd->add_option("--count", sample_args.count, "Number of samples");
  sample_cmd->add_option("--out", sample_args.out_dir, "Output directory")->required();
  sample_cmd->add_option("--tol", tol_flag, "Base tolerance");

  int samples = 11;
  auto* homotopy_cmd = app.add_subcommand("homotopy", "Certify the contraction homotopy");
  homotopy_cmd->add_option("path", path, "Configuration document")->required();
  homotopy_cmd->add_option("--samples", samples, "Number of t samples");
  homotopy_cmd->add_option("--tol", tol_flag, "Base tolerance");
  homotopy_cmd->add_flag("--json", as_json, "Structured output");

  ReportArgs report_args;
  auto* report_cmd = app.add_subcommand("report", "Tabulate checks over a (k, n) grid");
  report_cmd->add_option("kind", report_args.kind, "dimension | freeness | invariance")
      ->required()
      ->check(CLI::IsMember({"dimension", "freeness", "invariance"}));
  report_cmd->add_option("--grid", report_args.grid, "kmax nmax")->expected(2);
  report_cmd->add_option("--seed", report_args.seed, "Seed");
  report_cmd->add_option("--trials", report_args.trials, "Samples per cell");
  report_cmd->add_option("--tol", tol_flag, "Base tolerance");
  report_cmd->add_flag("--json", as_json, "Structured output");

  bool list = false;
  std::vector<std::string> only;
  auto* selftest_cmd = app.add_subcommand("selftest", "Run the acceptance criteria");
  selftest_cmd->add_flag("--list", list, "List criterion identifiers");
  selftest_cmd->add_option("--only", only, "Run only these criteria");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kOk : kSchemaError;
  }

  try {
    if (*selftest_cmd) return cmd_selftest(list, only, ctx);
    const ToleranceModel tol = resolve_tolerance(tol_flag);
    if (*validate_cmd) return cmd_validate(path, tol, as_json, ctx);
    if (*sample_cmd) return cmd_sample(sample_args, tol, ctx);
    if (*homotopy_cmd) return cmd_homotopy(path, samples, tol, as_json, ctx);
    if (*report_cmd) return cmd_report(report_args, tol, as_json, ctx);
  } catch (const UsageError& e) {
    err << "error: " << e.what() << '\n';
    return kSchemaError;
  }
  return kSchemaError;
}

}  // namespace monadforge::cli
