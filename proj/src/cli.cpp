#include "vexs/cli.hpp"

#include <CLI11.hpp>

#include <filesystem>
#include <list>
#include <optional>
#include <sstream>

#include "vexs/errors.hpp"

namespace vexs {

namespace {

namespace fs = std::filesystem;

enum class ArgType { number, integer, list, text, flag };

struct FlagSpec {
  std::string key;
  ArgType type;
  std::string value;
  bool on = false;
  CLI::Option* option = nullptr;
};

double parse_number(const std::string& s, const std::string& what) {
  std::size_t used = 0;
  double v = 0.0;
  try {
    v = std::stod(s, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used == 0 || used != s.size() || !std::isfinite(v)) throw ConfigError(what + ": '" + s + "' is not a number");
  return v;
}

long long parse_integer(const std::string& s, const std::string& what) {
  std::size_t used = 0;
  long long v = 0;
  try {
    v = std::stoll(s, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used == 0 || used != s.size()) throw ConfigError(what + ": '" + s + "' is not an integer");
  return v;
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> parts;
  std::string cur;
  std::istringstream in(s);
  while (std::getline(in, cur, sep)) parts.push_back(cur);
  if (!s.empty() && s.back() == sep) parts.emplace_back();
  return parts;
}

json spec_value(const std::string& v, const std::string& what) {
  if (v.find(';') != std::string::npos) {
    json arr = json::array();
    for (const auto& e : split(v, ';')) arr.push_back(parse_number(e, what));
    return arr;
  }
  try {
    return json(parse_number(v, what));
  } catch (const ConfigError&) {
    return json(v);
  }
}

json list_value(const std::string& v, const std::string& what) {
  json arr = json::array();
  for (const auto& e : split(v, ',')) arr.push_back(parse_number(e, what));
  return arr;
}

// Flags of one subcommand, mapped onto dotted scenario keys.
class FlagSet {
 public:
  explicit FlagSet(CLI::App* app) : app_(app) {}

  void add(const std::string& name, const std::string& key, ArgType type, const std::string& help) {
    FlagSpec& f = flags_.emplace_back();
    f.key = key;
    f.type = type;
    if (type == ArgType::flag)
      f.option = app_->add_flag(name, f.on, help);
    else
      f.option = app_->add_option(name, f.value, help);
  }

  bool given(const std::string& key) const {
    for (const auto& f : flags_)
      if (f.key == key && f.option->count() > 0) return true;
    return false;
  }

  std::optional<std::string> raw(const std::string& key) const {
    for (const auto& f : flags_)
      if (f.key == key && f.option->count() > 0) return f.value;
    return std::nullopt;
  }

  // Writes every given flag whose key starts with `prefix.` into `target`.
  void apply(const std::string& prefix, json& target) const {
    const std::string head = prefix + ".";
    for (const auto& f : flags_) {
      if (f.option->count() == 0 || f.key.rfind(head, 0) != 0) continue;
      const std::string key = f.key.substr(head.size());
      const std::string what = "--" + f.option->get_name().substr(f.option->get_name().find_first_not_of('-'));
      switch (f.type) {
        case ArgType::number: target[key] = parse_number(f.value, what); break;
        case ArgType::integer: target[key] = parse_integer(f.value, what); break;
        case ArgType::list: target[key] = list_value(f.value, what); break;
        case ArgType::text: target[key] = f.value; break;
        case ArgType::flag: target[key] = f.on; break;
      }
    }
  }

 private:
  CLI::App* app_;
  std::list<FlagSpec> flags_;
};

struct Command {
  std::string name;
  CLI::App* app = nullptr;
  std::unique_ptr<FlagSet> flags;
  bool problem = true;
};

void add_problem_flags(FlagSet& f) {
  f.add("--name", "top.name", ArgType::text, "Scenario name (also the output file stem)");
  f.add("--field", "problem.field", ArgType::text, "Field, e.g. gaussian:sigma=0.5 or log_singular:window=1");
  f.add("--dim", "problem.dim", ArgType::integer, "Dimension of the field and exponent");
  f.add("--p", "problem.p", ArgType::text, "Constant exponent");
  f.add("--exponent", "problem.exponent", ArgType::text, "Exponent, e.g. inverse_quadratic:a=2,b=1");
  f.add("--rel-tol", "quadrature.rel_tol", ArgType::number, "Inner relative tolerance");
  f.add("--outer-tol", "quadrature.outer_x_tolerance", ArgType::number, "Outer relative tolerance");
  f.add("--radius", "quadrature.truncation_radius", ArgType::number, "Explicit core radius");
  f.add("--h-max", "quadrature.h_max", ArgType::number, "Radial cutoff of the inner integrals");
  f.add("--sphere-res", "quadrature.sphere_resolution", ArgType::integer, "Sphere rule resolution");
  f.add("--max-intervals", "quadrature.max_intervals", ArgType::integer, "Adaptive interval budget");
}

void add_command_flags(const std::string& name, FlagSet& f) {
  if (name == "constants") {
    f.add("--n", "params.n", ArgType::list, "Dimensions, comma separated");
    f.add("--p", "params.p", ArgType::list, "Exponents, comma separated");
    f.add("--resolution-2d", "params.resolution_2d", ArgType::integer, "Circle rule size");
    f.add("--resolution-3d", "params.resolution_3d", ArgType::integer, "Sphere rule size");
  } else if (name == "modular") {
    f.add("--lambda", "params.lambda", ArgType::number, "Scaling lambda");
    f.add("--part", "params.part", ArgType::text, "value or gradient");
    f.add("--weight", "params.weight", ArgType::text, "none or pK");
  } else if (name == "norm") {
    f.add("--part", "params.part", ArgType::text, "value or gradient");
    f.add("--weight", "params.weight", ArgType::text, "none or pK");
  } else if (name == "fracnorm") {
    f.add("--s", "params.s", ArgType::number, "Smoothness s in (0, 1)");
    f.add("--q-exponent", "fracnorm.q", ArgType::text, "Exponent of the Lebesgue part");
  } else if (name == "nguyen") {
    f.add("--delta", "params.delta", ArgType::number, "Threshold delta");
    f.add("--mode", "params.mode", ArgType::text, "unit or p_of_x");
  } else if (name == "eps") {
    f.add("--epsilon", "params.epsilon", ArgType::number, "Epsilon");
    f.add("--mode", "params.mode", ArgType::text, "full, small_jump or large_jump_tail");
  } else if (name == "bbm") {
    f.add("--s", "params.s", ArgType::number, "Smoothness s in (0, 1)");
  } else if (name == "sweep") {
    f.add("--kind", "params.kind", ArgType::text, "nguyen-unit, nguyen-weighted, eps-small-jump, eps-full or bbm");
    f.add("--grid", "params.grid", ArgType::list, "Parameter grid, comma separated");
    f.add("--start", "grid.start", ArgType::number, "First grid value (geometric grid)");
    f.add("--count", "grid.count", ArgType::integer, "Number of grid values");
    f.add("--uniform-bound", "params.uniform_bound", ArgType::flag, "Also report the gradient bound");
  } else if (name == "lemma41") {
    f.add("--preset", "params.preset", ArgType::text, "unit-distance or random");
    f.add("--count", "params.count", ArgType::integer, "Random instances");
  } else if (name == "maximal") {
    f.add("--points", "params.points", ArgType::list, "Evaluation points (first coordinate)");
    f.add("--from", "params.from", ArgType::number, "Start of the evaluation line");
    f.add("--to", "params.to", ArgType::number, "End of the evaluation line");
    f.add("--count", "params.count", ArgType::integer, "Points on the line");
    f.add("--r-max", "params.r_max", ArgType::number, "Largest radius");
    f.add("--depth", "params.depth", ArgType::integer, "Refinement iterations");
    f.add("--kind", "params.kind", ArgType::text, "hl or directional");
    f.add("--omega", "params.omega", ArgType::list, "Direction for the directional kind");
  } else if (name == "counterexample") {
    f.add("--R", "params.R", ArgType::list, "Truncation radii, comma separated");
    f.add("--depth", "params.depth", ArgType::integer, "Refinement iterations");
  } else if (name == "bmo") {
    f.add("--dyadic", "params.dyadic", ArgType::integer, "Number of dyadic balls at 0");
  } else if (name == "diagnose-exponent") {
    f.add("--pairs", "params.pairs", ArgType::integer, "Sampled pairs");
    f.add("--box", "params.box", ArgType::number, "Half width of the sampling box");
    f.add("--threshold", "params.threshold", ArgType::number, "Flag constants above this");
  } else if (name == "keyineq") {
    f.add("--delta", "params.delta", ArgType::number, "Threshold delta");
    f.add("--omega", "params.omega", ArgType::list, "Direction");
    f.add("--depth", "params.depth", ArgType::integer, "Refinement iterations");
  } else if (name == "luxnorm") {
    f.add("--epsilon", "params.epsilon", ArgType::number, "Epsilon");
  } else if (name == "uniform-bound") {
    f.add("--grid", "params.grid", ArgType::list, "Delta grid, comma separated");
  }
}

json exponent_flag(const FlagSet& f, int dim) {
  if (auto p = f.raw("problem.p"))
    return {{"family", "constant"}, {"dimension", dim}, {"params", {{"value", parse_number(*p, "--p")}}}};
  return parse_family_spec(*f.raw("problem.exponent"), dim);
}

json build_scenario(const Command& cmd, const std::string& config_path, const long long* seed) {
  json sc = config_path.empty() ? json::object() : load_json_file(config_path);
  if (!sc.is_object()) throw ConfigError("config: expected a JSON object");
  if (cmd.name != "run") {
    if (sc.contains("operation") && sc["operation"] != cmd.name)
      throw ConfigError("config operation '" + sc["operation"].dump() + "' does not match subcommand '" + cmd.name +
                        "'");
    sc["operation"] = cmd.name;
  } else if (config_path.empty()) {
    throw ConfigError("run needs --config");
  }
  if (seed) {
    if (*seed < 0) throw ConfigError("--seed: must be non-negative");
    sc["seed"] = *seed;
  }
  if (!cmd.flags) return sc;
  const FlagSet& f = *cmd.flags;
  if (auto n = f.raw("top.name")) sc["name"] = *n;

  int dim = 1;
  if (auto d = f.raw("problem.dim"))
    dim = static_cast<int>(parse_integer(*d, "--dim"));
  else if (sc.contains("field") && sc["field"].is_object() && sc["field"].contains("dimension") &&
           sc["field"]["dimension"].is_number_integer())
    dim = sc["field"]["dimension"].get<int>();
  if (f.given("problem.field")) sc["field"] = parse_family_spec(*f.raw("problem.field"), dim);
  if (f.given("problem.p") && f.given("problem.exponent")) throw ConfigError("give either --p or --exponent");
  if (cmd.problem && (f.given("problem.p") || f.given("problem.exponent"))) sc["exponent"] = exponent_flag(f, dim);
  if (f.given("problem.dim") && !f.given("problem.field") && sc.contains("field") && sc["field"].is_object())
    sc["field"]["dimension"] = dim;

  json quad = sc.contains("quadrature") ? sc["quadrature"] : json::object();
  f.apply("quadrature", quad);
  if (!quad.empty()) sc["quadrature"] = quad;

  json params = sc.contains("params") ? sc["params"] : json::object();
  if (!params.is_object()) throw ConfigError("params: expected an object");
  f.apply("params", params);
  json grid = json::object();
  f.apply("grid", grid);
  if (!grid.empty()) {
    if (f.given("params.grid")) throw ConfigError("give either --grid or --start/--count");
    if (!grid.contains("start") || !grid.contains("count")) throw ConfigError("--start and --count go together");
    params["grid"] = grid;
  }
  if (auto q = f.raw("fracnorm.q")) params["q_exponent"] = parse_family_spec(*q, dim);
  if (!params.empty() || sc.contains("params")) sc["params"] = params;
  return sc;
}

struct Destinations {
  std::optional<fs::path> report;
  std::optional<fs::path> csv;
  std::optional<fs::path> plot;
  bool any() const { return report || csv || plot; }
};

Destinations destinations(const json& sc, const std::string& out_dir, const ScenarioOutput& res) {
  Destinations d;
  if (!out_dir.empty()) {
    const fs::path dir(out_dir);
    d.report = dir / (res.name + ".json");
    if (res.csv) d.csv = dir / (res.name + ".csv");
    if (res.plot) d.plot = dir / (res.name + ".plot");
    return d;
  }
  if (sc.contains("outputs")) {
    const json& o = sc["outputs"];
    if (o.contains("report")) d.report = o["report"].get<std::string>();
    if (o.contains("csv") && res.csv) d.csv = o["csv"].get<std::string>();
    if (o.contains("plot_data") && res.plot) d.plot = o["plot_data"].get<std::string>();
  }
  return d;
}

int execute(const Command& cmd, const std::string& config, const std::string& out_dir, const long long* seed,
            bool quiet, std::ostream& out) {
  const json sc = build_scenario(cmd, config, seed);
  const ScenarioOutput res = run_scenario(sc);
  if (res.name.empty() || res.name.find('/') != std::string::npos || res.name == "." || res.name == "..")
    throw ConfigError("scenario name must be a plain file stem");
  const std::string report = res.report.dump(2) + "\n";
  const Destinations d = destinations(sc, out_dir, res);
  if (d.any()) {
    if (d.report) write_atomic(*d.report, report);
    if (d.csv) write_atomic(*d.csv, *res.csv);
    if (d.plot) write_atomic(*d.plot, *res.plot);
  } else if (cmd.name == "constants" && res.csv) {
    out << *res.csv;
  } else {
    out << report;
  }
  if (!quiet) out << res.summary << "\n";
  return kExitOk;
}

}  // namespace

json parse_family_spec(const std::string& text, int dimension) {
  const std::size_t colon = text.find(':');
  const std::string family = text.substr(0, colon);
  if (family.empty()) throw ConfigError("empty family in '" + text + "'");
  json params = json::object();
  if (colon != std::string::npos) {
    for (const auto& kv : split(text.substr(colon + 1), ',')) {
      const std::size_t eq = kv.find('=');
      if (eq == std::string::npos || eq == 0) throw ConfigError("expected key=value in '" + text + "'");
      const std::string key = kv.substr(0, eq);
      params[key] = spec_value(kv.substr(eq + 1), family + "." + key);
    }
  }
  json j = {{"family", family}, {"dimension", dimension}};
  if (!params.empty()) j["params"] = params;
  return j;
}

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Variable-exponent nonlocal functionals: scenario runner"};
  app.name("vexs");
  app.require_subcommand(1);
  std::string config, out_dir;
  long long seed_value = 0;
  bool quiet = false;
  auto* seed_opt = app.add_option("--seed", seed_value, "Seed for randomized operations");
  app.add_option("--config", config, "Scenario JSON file");
  app.add_option("--out", out_dir, "Directory for report, CSV and plot-data files");
  app.add_flag("--quiet,-q", quiet, "Suppress the summary line");

  static const char* const names[] = {"constants", "modular", "norm", "fracnorm", "nguyen", "eps",
                                      "bbm", "sweep", "lemma41", "maximal", "counterexample", "bmo",
                                      "diagnose-exponent", "keyineq", "luxnorm", "uniform-bound"};
  std::list<Command> commands;
  for (const char* n : names) {
    Command& c = commands.emplace_back();
    c.name = n;
    c.app = app.add_subcommand(n, std::string("Run the ") + n + " operation");
    c.app->fallthrough();
    c.flags = std::make_unique<FlagSet>(c.app);
    c.problem = c.name != "constants";
    if (c.problem) add_problem_flags(*c.flags);
    add_command_flags(c.name, *c.flags);
  }
  Command& run = commands.emplace_back();
  run.name = "run";
  run.app = app.add_subcommand("run", "Run the scenario given by --config");
  run.app->fallthrough();
  run.problem = false;

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitValidation;
  }

  const Command* chosen = nullptr;
  for (const auto& c : commands)
    if (c.app->parsed()) chosen = &c;
  const long long* seed = seed_opt->count() ? &seed_value : nullptr;

  try {
    return execute(*chosen, config, out_dir, seed, quiet, out);
  } catch (const DivergenceError& e) {
    err << "vexs: divergence in operation '" << e.operation() << "': " << e.what() << "\n";
    return kExitDivergence;
  } catch (const ConfigError& e) {
    err << "vexs: invalid configuration: " << e.what() << "\n";
    return kExitValidation;
  } catch (const DomainError& e) {
    err << "vexs: argument out of domain: " << e.what() << "\n";
    return kExitValidation;
  } catch (const UnsupportedError& e) {
    err << "vexs: unsupported: " << e.what() << "\n";
    return kExitValidation;
  } catch (const json::exception& e) {
    err << "vexs: invalid configuration: " << e.what() << "\n";
    return kExitValidation;
  } catch (const std::exception& e) {
    err << "vexs: internal error: " << e.what() << "\n";
    return kExitInternal;
  }
}

}  // namespace vexs
