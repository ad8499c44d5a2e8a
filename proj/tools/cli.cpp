#include "cli.hpp"

#include <algorithm>
#include <cmath>

#include <CLI11.hpp>
#include <fmt/format.h>
#include <nlohmann/json.hpp>

#include "fcoord/distributions.hpp"
#include "fcoord/io.hpp"
#include "fcoord/kernels.hpp"
#include "fcoord/suites.hpp"

namespace fcoord::cli {

namespace {

class HelpRequested : public Error {
 public:
  using Error::Error;
};

constexpr const char* kCommands[] = {"verify", "transform", "residual"};

std::vector<std::string> as_list(const nlohmann::json& j) {
  if (j.is_string()) {
    return {j.get<std::string>()};
  }
  return j.get<std::vector<std::string>>();
}

void apply_config_file(RunConfig& c, const nlohmann::json& j) {
  if (!j.is_object()) {
    throw ConfigError("configuration file must hold a JSON object");
  }
  auto grid_field = [&](const nlohmann::json& g, const std::string& key) {
    if (key == "lo") c.grid.lo = g.at(key).get<double>();
    else if (key == "hi") c.grid.hi = g.at(key).get<double>();
    else if (key == "n") c.grid.n = g.at(key).get<int>();
    else if (key == "periodic") c.grid.periodic = g.at(key).get<bool>();
    else return false;
    return true;
  };
  for (const auto& [key, value] : j.items()) {
    if (grid_field(j, key)) {
      continue;
    }
    if (key == "grid") {
      for (const auto& [gk, gv] : value.items()) {
        if (!grid_field(value, gk)) {
          throw ConfigError("unknown grid field '" + gk + "'");
        }
      }
    } else if (key == "kernel") {
      c.kernel = value.get<std::string>();
    } else if (key == "suites" || key == "suite") {
      c.suites = as_list(value);
    } else if (key == "tolerances") {
      c.tolerances.clear();
      for (const auto& [tk, tv] : value.items()) {
        c.tolerances[tk] = tv.get<double>();
      }
    } else if (key == "out") {
      c.out = value.get<std::string>();
    } else if (key == "formats" || key == "format") {
      const auto list = as_list(value);
      c.formats = {list.begin(), list.end()};
    } else if (key == "seed") {
      c.seed = value.get<std::uint64_t>();
    } else if (key == "invert") {
      c.invert = value.get<bool>();
    } else if (key == "threshold") {
      c.threshold = value.get<double>();
    } else if (key == "order_x") {
      c.order_x = value.get<int>();
    } else if (key == "order_y") {
      c.order_y = value.get<int>();
    } else if (key == "a") {
      c.a = value.get<std::string>();
    } else if (key == "b") {
      c.b = value.get<std::string>();
    } else if (key == "g0") {
      c.g0 = value.get<std::string>();
    } else if (key == "input") {
      c.input = value.get<std::string>();
    } else if (key == "export_kernel") {
      c.export_kernel = value.get<bool>();
    } else {
      throw ConfigError("unknown configuration field '" + key + "'");
    }
  }
}

std::pair<std::string, double> parse_tolerance(const std::string& text) {
  const auto eq = text.find('=');
  if (eq == std::string::npos || eq == 0) {
    throw ConfigError("tolerance override must read suite.label=value, got '" + text + "'");
  }
  const std::string value = text.substr(eq + 1);
  char* stop = nullptr;
  const double v = std::strtod(value.c_str(), &stop);
  if (value.empty() || *stop != '\0') {
    throw ConfigError("tolerance value '" + value + "' is not a number");
  }
  return {text.substr(0, eq), v};
}

bool is_riccati(const std::string& kernel) { return kernel == "riccati"; }

Grid resolve_grid(const RunConfig& c) {
  GridSpec d;
  if (c.kernel == "fourier") {
    d = {0.0, 2.0 * kPi, 32, true};
  } else if (c.kernel == "exp_exp_plus" || c.kernel == "exp_exp_minus") {
    d = {0.0, 1.0, 21, false};
  } else if (is_riccati(c.kernel)) {
    d = {0.0, 1.0, 33, false};
  } else {
    d = {-6.0, 6.0, 64, false};
  }
  return make_uniform_grid(c.grid.lo.value_or(*d.lo), c.grid.hi.value_or(*d.hi),
                           c.grid.n.value_or(*d.n), c.grid.periodic.value_or(*d.periodic));
}

Kernel build_kernel(const RunConfig& c, const Grid& grid) {
  if (is_riccati(c.kernel)) {
    return riccati_kernel(coefficient_from_name(c.a), coefficient_from_name(c.b),
                          coefficient_from_name(c.g0), grid);
  }
  return kernel_from_id(c.kernel);
}

void prepare_out(const RunConfig& c) {
  std::error_code ec;
  std::filesystem::create_directories(c.out, ec);
  if (ec) {
    throw IoError("cannot create output directory " + c.out.string() + ": " + ec.message());
  }
}

bool wants(const RunConfig& c, const char* format) { return c.formats.contains(format); }

nlohmann::json real_list(const RealVector& v) {
  return std::vector<double>(v.begin(), v.end());
}

}  // namespace

RunConfig parse_args(const std::vector<std::string>& args) {
  CLI::App app{"Kernel coordinate transformations: verification suites and data export",
               "fcoord"};
  app.require_subcommand(1, 1);
  app.fallthrough();
  for (const char* name : kCommands) {
    app.add_subcommand(name, std::string(name) == "verify"      ? "run verification suites"
                             : std::string(name) == "transform" ? "apply a kernel to a generalized function"
                                                                : "evaluate a kernel-equation residual");
  }

  std::string config_path;
  std::vector<std::string> suites;
  std::string kernel;
  int n = 0;
  double lo = 0.0;
  double hi = 0.0;
  bool periodic = false;
  bool invert = false;
  double threshold = 0.0;
  std::uint64_t seed = 0;
  std::string out;
  std::vector<std::string> formats;
  std::vector<std::string> tols;
  int order_x = 0;
  int order_y = 0;
  std::string a;
  std::string b;
  std::string g0;
  std::string input;
  bool export_kernel = false;

  auto* o_config = app.add_option("--config", config_path, "JSON configuration file");
  auto* o_suite = app.add_option("--suite", suites, "suite id(s) or 'all'")->delimiter(',');
  auto* o_kernel = app.add_option("--kernel", kernel, "kernel id");
  auto* o_n = app.add_option("--n", n, "grid size");
  auto* o_lo = app.add_option("--lo", lo, "grid left end");
  auto* o_hi = app.add_option("--hi", hi, "grid right end");
  auto* o_periodic = app.add_flag("--periodic", periodic, "periodic grid");
  auto* o_invert = app.add_flag("--invert", invert, "report the regularized inverse");
  auto* o_threshold = app.add_option("--threshold", threshold, "relative SVD truncation");
  auto* o_seed = app.add_option("--seed", seed, "seed of randomized suites");
  auto* o_out = app.add_option("--out", out, "output directory");
  auto* o_format = app.add_option("--format", formats, "csv,json")->delimiter(',');
  auto* o_tol = app.add_option("--tol", tols, "tolerance override suite.label=value");
  auto* o_ox = app.add_option("--order-x", order_x, "x-derivative order n");
  auto* o_oy = app.add_option("--order-y", order_y, "y-derivative order m");
  auto* o_a = app.add_option("--a", a, "coefficient a(x)");
  auto* o_b = app.add_option("--b", b, "coefficient b(y)");
  auto* o_g0 = app.add_option("--g0", g0, "Riccati initial value g0(y)");
  auto* o_input = app.add_option("--input", input, "generalized function JSON");
  auto* o_export = app.add_flag("--export-kernel", export_kernel, "write kernel.csv");

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    throw HelpRequested(app.help());
  } catch (const CLI::ParseError& e) {
    throw ConfigError(e.what());
  }

  RunConfig c;
  c.command = app.get_subcommands().front()->get_name();
  if (o_config->count()) {
    const std::string text = read_text_file(config_path);
    try {
      apply_config_file(c, nlohmann::json::parse(text));
    } catch (const nlohmann::json::exception& e) {
      throw ConfigError("configuration file " + config_path + ": " + e.what());
    }
  }
  if (o_suite->count()) c.suites = suites;
  if (o_kernel->count()) c.kernel = kernel;
  if (o_n->count()) c.grid.n = n;
  if (o_lo->count()) c.grid.lo = lo;
  if (o_hi->count()) c.grid.hi = hi;
  if (o_periodic->count()) c.grid.periodic = periodic;
  if (o_invert->count()) c.invert = invert;
  if (o_threshold->count()) c.threshold = threshold;
  if (o_seed->count()) c.seed = seed;
  if (o_out->count()) c.out = out;
  if (o_format->count()) c.formats = {formats.begin(), formats.end()};
  if (o_tol->count()) {
    for (const auto& t : tols) {
      c.tolerances.insert_or_assign(parse_tolerance(t).first, parse_tolerance(t).second);
    }
  }
  if (o_ox->count()) c.order_x = order_x;
  if (o_oy->count()) c.order_y = order_y;
  if (o_a->count()) c.a = a;
  if (o_b->count()) c.b = b;
  if (o_g0->count()) c.g0 = g0;
  if (o_input->count()) c.input = input;
  if (o_export->count()) c.export_kernel = export_kernel;
  validate(c);
  return c;
}

void validate(const RunConfig& c) {
  for (const auto& s : c.suites) {
    if (s != "all" && !is_suite_id(s)) {
      throw ConfigError("unknown suite '" + s + "'");
    }
  }
  for (const auto& [key, value] : c.tolerances) {
    const auto dot = key.find('.');
    if (dot == std::string::npos || !is_suite_id(key.substr(0, dot))) {
      throw ConfigError("tolerance key '" + key + "' must start with a suite id");
    }
    if (!(value > 0.0) || !std::isfinite(value)) {
      throw ConfigError("tolerance for '" + key + "' must be positive");
    }
  }
  if (!is_riccati(c.kernel)) {
    try {
      (void)kernel_from_id(c.kernel);
    } catch (const DomainError& e) {
      throw ConfigError(e.what());
    }
  }
  for (const auto& f : c.formats) {
    if (f != "csv" && f != "json") {
      throw ConfigError("unknown output format '" + f + "'");
    }
  }
  if (c.grid.n && *c.grid.n < Grid::kMinNodes) {
    throw ConfigError("grid size " + std::to_string(*c.grid.n) + " is below the minimum of " +
                      std::to_string(Grid::kMinNodes));
  }
  if (c.grid.lo && c.grid.hi && !(*c.grid.hi > *c.grid.lo)) {
    throw ConfigError("grid needs hi > lo");
  }
  if (!(c.threshold > 0.0 && c.threshold < 1.0)) {
    throw ConfigError("threshold must lie in (0, 1)");
  }
  if (c.order_x < 0 || c.order_y < 0) {
    throw ConfigError("derivative orders must be nonnegative");
  }
  for (const auto* name : {&c.a, &c.b, &c.g0}) {
    try {
      (void)coefficient_from_name(*name);
    } catch (const DomainError& e) {
      throw ConfigError(e.what());
    }
  }
}

int cmd_verify(const RunConfig& c, std::ostream& out) {
  std::vector<std::string> ids;
  for (const auto& s : c.suites) {
    if (s == "all") {
      ids = suite_ids();
      break;
    }
    if (std::find(ids.begin(), ids.end(), s) == ids.end()) {
      ids.push_back(s);
    }
  }
  // Keep the declared order regardless of how suites were listed.
  std::vector<std::string> ordered;
  for (const auto& id : suite_ids()) {
    if (std::find(ids.begin(), ids.end(), id) != ids.end()) {
      ordered.push_back(id);
    }
  }
  SuiteOptions options;
  options.seed = c.seed;
  options.n = c.grid.n;
  options.tolerance_overrides = c.tolerances;

  prepare_out(c);
  nlohmann::json summary;
  summary["seed"] = c.seed;
  summary["suites"] = nlohmann::json::array();
  bool all_passed = true;
  for (const auto& id : ordered) {
    const VerificationReport report = run_suite(id, options);
    write_text_file(c.out / (id + ".json"), dump_json(to_json(report)));
    summary["suites"].push_back({{"name", id}, {"passed", report.passed}});
    all_passed = all_passed && report.passed;
    out << fmt::format("{:<16} {}\n", id, report.passed ? "PASS" : "FAIL");
    for (const auto& [label, value] : report.residuals) {
      const double tol = report.tolerances.at(label);
      if (!(value <= tol)) {
        out << fmt::format("  {} = {:.3e} exceeds {:.3e}\n", label, value, tol);
      }
    }
  }
  summary["passed"] = all_passed;
  write_text_file(c.out / "summary.json", dump_json(summary));
  return all_passed ? kPass : kSuiteFailure;
}

int cmd_transform(const RunConfig& c, std::ostream& out) {
  if (!c.input) {
    throw ConfigError("transform needs --input <generalized function JSON>");
  }
  const std::string text = read_text_file(*c.input);
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError("input " + c.input->string() + ": " + e.what());
  }
  const GeneralizedFunction f = generalized_function_from_json(j);
  const Grid& grid = f.grid();
  if ((c.grid.lo && *c.grid.lo != grid.lo()) || (c.grid.hi && *c.grid.hi != grid.hi()) ||
      (c.grid.n && *c.grid.n != grid.size()) ||
      (c.grid.periodic && *c.grid.periodic != grid.periodic())) {
    throw ConfigError("grid flags disagree with the input's grid");
  }
  const Kernel k = build_kernel(c, grid);
  const ComplexVector values = apply(k, f);
  const bool complex = k.is_complex() || !values.imag().isZero(0.0);

  prepare_out(c);
  nlohmann::json report;
  report["kernel"] = k.id();
  report["grid"] = grid_to_json(grid);
  report["x"] = real_list(grid.nodes());
  if (complex) {
    report["values_re"] = real_list(values.real());
    report["values_im"] = real_list(values.imag());
  } else {
    report["values"] = real_list(values.real());
  }
  report["condition"] = nullptr;
  if (c.invert) {
    const Inverse inv = invert(discretize(k, grid), c.threshold);
    report["condition"] = to_json(inv.report);
    out << "condition: " << to_json(inv.report).dump() << "\n";
  }
  if (wants(c, "csv")) {
    write_text_file(c.out / "transform.csv", to_csv(samples_table(grid.nodes(), values, complex)));
    if (c.export_kernel && !k.is_diagonal()) {
      write_text_file(c.out / "kernel.csv", to_csv(kernel_table(k, grid)));
    }
  }
  if (wants(c, "json")) {
    write_text_file(c.out / "transform.json", dump_json(report));
  }
  out << fmt::format("transformed {} samples with kernel {}\n", grid.size(), k.id());
  return kPass;
}

int cmd_residual(const RunConfig& c, std::ostream& out) {
  const Grid grid = resolve_grid(c);
  const Kernel k = build_kernel(c, grid);
  const ScalarFunction a = coefficient_from_name(c.a);
  const ScalarFunction b = coefficient_from_name(c.b);
  const ResidualField field = kernel_pde_residual(k, c.order_x, c.order_y, a, b, grid);
  const bool complex = !field.values.imag().isZero(0.0);

  prepare_out(c);
  nlohmann::json report;
  report["kernel"] = k.id();
  report["n"] = c.order_x;
  report["m"] = c.order_y;
  report["a"] = c.a;
  report["b"] = c.b;
  report["grid"] = grid_to_json(grid);
  report["max_norm"] = field.max_norm;
  if (wants(c, "csv")) {
    write_text_file(c.out / "residual.csv", to_csv(residual_table(field, complex)));
    if (c.export_kernel) {
      write_text_file(c.out / "kernel.csv", to_csv(kernel_table(k, grid)));
    }
  }
  if (wants(c, "json")) {
    write_text_file(c.out / "residual.json", dump_json(report));
  }
  out << "max_norm: " << format_double(field.max_norm) << "\n";
  return kPass;
}

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  try {
    const RunConfig c = parse_args(args);
    if (c.command == "verify") {
      return cmd_verify(c, out);
    }
    if (c.command == "transform") {
      return cmd_transform(c, out);
    }
    return cmd_residual(c, out);
  } catch (const HelpRequested& h) {
    out << h.what();
    return kPass;
  } catch (const IoError& e) {
    err << "error: " << e.what() << "\n";
    return kIoError;
  } catch (const std::filesystem::filesystem_error& e) {
    err << "error: " << e.what() << "\n";
    return kIoError;
  } catch (const ConfigError& e) {
    err << "error: " << e.what() << "\n";
    return kConfigError;
  } catch (const DomainError& e) {
    err << "error: " << e.what() << "\n";
    return kConfigError;
  } catch (const UnsupportedOrderError& e) {
    err << "error: " << e.what() << "\n";
    return kConfigError;
  } catch (const PreconditionError& e) {
    err << "error: " << e.what() << "\n";
    return kConfigError;
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return kSuiteFailure;
  }
}

}  // namespace fcoord::cli
