#include "vexs/scenario.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <numbers>
#include <random>
#include <set>
#include <sstream>
#include <system_error>
#include <unistd.h>

#include "vexs/errors.hpp"
#include "vexs/maximal.hpp"
#include "vexs/nonlocal.hpp"
#include "vexs/sphere.hpp"
#include "vexs/vex_spaces.hpp"

namespace vexs {

namespace {

// Strict view of a JSON object: every key must be consumed.
class Reader {
 public:
  Reader(const json& j, std::string where) : j_(j), where_(std::move(where)) {
    if (!j_.is_object()) throw ConfigError(where_ + ": expected an object");
  }

  bool has(const std::string& key) const { return j_.contains(key); }

  const json& raw(const std::string& key) {
    if (!j_.contains(key)) throw ConfigError(where_ + ": missing required key '" + key + "'");
    used_.insert(key);
    return j_.at(key);
  }

  double number(const std::string& key) {
    const json& v = raw(key);
    if (!v.is_number()) throw ConfigError(path(key) + ": expected a number");
    const double d = v.get<double>();
    if (!std::isfinite(d)) throw ConfigError(path(key) + ": expected a finite number");
    return d;
  }
  double number(const std::string& key, double def) { return has(key) ? number(key) : def; }

  long long integer(const std::string& key) {
    const json& v = raw(key);
    if (!v.is_number_integer()) throw ConfigError(path(key) + ": expected an integer");
    return v.get<long long>();
  }
  long long integer(const std::string& key, long long def) { return has(key) ? integer(key) : def; }

  std::string text(const std::string& key) {
    const json& v = raw(key);
    if (!v.is_string()) throw ConfigError(path(key) + ": expected a string");
    return v.get<std::string>();
  }
  std::string text(const std::string& key, const std::string& def) { return has(key) ? text(key) : def; }

  bool flag(const std::string& key, bool def) {
    if (!has(key)) return def;
    const json& v = raw(key);
    if (!v.is_boolean()) throw ConfigError(path(key) + ": expected true or false");
    return v.get<bool>();
  }

  std::vector<double> numbers(const std::string& key) {
    const json& v = raw(key);
    if (v.is_number()) return {number(key)};
    if (!v.is_array()) throw ConfigError(path(key) + ": expected an array of numbers");
    std::vector<double> out;
    for (const auto& e : v) {
      if (!e.is_number() || !std::isfinite(e.get<double>()))
        throw ConfigError(path(key) + ": expected an array of finite numbers");
      out.push_back(e.get<double>());
    }
    return out;
  }

  Point point(const std::string& key) {
    const auto v = numbers(key);
    if (v.empty() || v.size() > 3) throw ConfigError(path(key) + ": a point has 1 to 3 coordinates");
    if (v.size() == 1) return Point{v[0]};
    if (v.size() == 2) return Point{v[0], v[1]};
    return Point{v[0], v[1], v[2]};
  }

  Reader object(const std::string& key) { return Reader(raw(key), path(key)); }

  std::string path(const std::string& key) const { return where_ + "." + key; }
  const std::string& where() const { return where_; }

  void finish() const {
    for (auto it = j_.begin(); it != j_.end(); ++it)
      if (!used_.count(it.key())) throw ConfigError(where_ + ": unknown key '" + it.key() + "'");
  }

 private:
  const json& j_;
  std::string where_;
  std::set<std::string> used_;
};

json point_json(const Point& x) {
  json a = json::array();
  for (int i = 0; i < x.dim(); ++i) a.push_back(x[i]);
  return a;
}

Point as_point(const json& j, const std::string& where) {
  if (!j.is_array() || j.empty() || j.size() > 3) throw ConfigError(where + ": a point is an array of 1 to 3 numbers");
  std::vector<double> c;
  for (const auto& e : j) {
    if (!e.is_number()) throw ConfigError(where + ": point coordinates must be numbers");
    c.push_back(e.get<double>());
  }
  if (c.size() == 1) return Point{c[0]};
  if (c.size() == 2) return Point{c[0], c[1]};
  return Point{c[0], c[1], c[2]};
}

int dimension_of(Reader& r) {
  const long long n = r.integer("dimension", 1);
  if (n < 1 || n > 3) throw ConfigError(r.path("dimension") + ": dimension must be 1, 2 or 3");
  return static_cast<int>(n);
}

const json& params_of(Reader& r) {
  static const json empty = json::object();
  return r.has("params") ? r.raw("params") : empty;
}

}  // namespace

ScalarField field_from_json(const json& j) {
  Reader r(j, "field");
  const std::string family = r.text("family");
  const int n = dimension_of(r);
  Reader pr(params_of(r), "field.params");
  auto one_dim = [&](const char* what) {
    if (n != 1) throw ConfigError(std::string("field: ") + what + " is one-dimensional");
  };
  std::optional<ScalarField> u;
  if (family == "gaussian") {
    const double sigma = pr.number("sigma", 1.0);
    const Point c = pr.has("center") ? pr.point("center") : Point::filled(n, 0.0);
    if (c.dim() != n) throw ConfigError("field.params.center: dimension mismatch");
    u = ScalarField::gaussian(n, sigma, c);
  } else if (family == "tent") {
    u = ScalarField::tent(n);
  } else if (family == "smooth_bump") {
    u = ScalarField::smooth_bump(n);
  } else if (family == "power_tail") {
    one_dim("power_tail");
    u = ScalarField::power_tail();
  } else if (family == "log_singular") {
    u = ScalarField::log_singular(n, pr.number("window", 1.0));
  } else if (family == "sampled_table") {
    one_dim("sampled_table");
    if (pr.has("csv"))
      u = ScalarField::sampled_table_csv(pr.text("csv"));
    else
      u = ScalarField::sampled_table(pr.numbers("x"), pr.numbers("u"));
  } else if (family == "constant") {
    u = ScalarField::constant(n, pr.number("value"));
  } else {
    throw ConfigError("field.family: unknown family '" + family + "'");
  }
  pr.finish();
  if (r.has("amplitude")) u = u->scaled(r.number("amplitude"));
  if (r.has("gradient")) {
    const std::string g = r.text("gradient");
    if (g == "finite_difference")
      u = u->with_gradient(GradientKind::finite_difference);
    else if (g != "analytic")
      throw ConfigError("field.gradient: expected 'analytic' or 'finite_difference'");
  }
  r.finish();
  return *u;
}

ExponentField exponent_from_json(const json& j) {
  Reader r(j, "exponent");
  const std::string family = r.text("family");
  const int n = dimension_of(r);
  Reader pr(params_of(r), "exponent.params");
  std::optional<ExponentField> p;
  if (family == "constant") {
    p = ExponentField::constant(n, pr.number("value"));
  } else if (family == "inverse_quadratic") {
    p = ExponentField::inverse_quadratic(n, pr.number("a"), pr.number("b"));
  } else if (family == "sin_squared") {
    const double a = pr.number("a"), b = pr.number("b");
    const Point d = pr.has("direction") ? pr.point("direction") : Point::axis(n, 0);
    if (d.dim() != n) throw ConfigError("exponent.params.direction: dimension mismatch");
    p = ExponentField::sin_squared(n, a, b, d);
  } else if (family == "piecewise_table") {
    if (n != 1) throw ConfigError("exponent: piecewise_table is one-dimensional");
    p = ExponentField::piecewise_table(pr.numbers("knots"), pr.numbers("values"));
  } else {
    throw ConfigError("exponent.family: unknown family '" + family + "'");
  }
  pr.finish();
  r.finish();
  return *p;
}

QuadratureSpec quadrature_from_json(const json& j) {
  Reader r(j, "quadrature");
  QuadratureSpec q;
  if (r.has("truncation_radius")) q.truncation_radius = r.number("truncation_radius");
  q.truncation_tol = r.number("truncation_tol", q.truncation_tol);
  q.sphere_resolution = static_cast<int>(r.integer("sphere_resolution", q.sphere_resolution));
  q.outer_x_tolerance = r.number("outer_x_tolerance", q.outer_x_tolerance);
  q.h_bracket_grid = static_cast<int>(r.integer("h_bracket_grid", q.h_bracket_grid));
  if (r.has("h_max")) q.h_max = r.number("h_max");
  q.rel_tol = r.number("rel_tol", q.rel_tol);
  q.max_intervals = static_cast<int>(r.integer("max_intervals", q.max_intervals));
  const long long seed = r.integer("seed", 0);
  if (seed < 0) throw ConfigError("quadrature.seed: must be non-negative");
  q.seed = static_cast<std::uint64_t>(seed);
  r.finish();
  q.validate();
  return q;
}

json to_json(const QuadratureSpec& q) {
  json j;
  j["truncation_radius"] = q.truncation_radius ? json(*q.truncation_radius) : json(nullptr);
  j["truncation_tol"] = q.truncation_tol;
  j["sphere_resolution"] = q.sphere_resolution;
  j["outer_x_tolerance"] = q.outer_x_tolerance;
  j["h_bracket_grid"] = q.h_bracket_grid;
  j["h_max"] = q.h_max ? json(*q.h_max) : json(nullptr);
  j["rel_tol"] = q.rel_tol;
  j["max_intervals"] = q.max_intervals;
  j["seed"] = q.seed;
  return j;
}

json to_json(const FunctionalValue& v) {
  return json{{"value", v.value},
              {"error_estimate", v.error_estimate},
              {"truncation_radius", v.truncation_radius},
              {"node_count", v.node_count},
              {"empty_superlevel", v.empty_superlevel},
              {"converged", v.converged}};
}

json to_json(const SweepReport& r) {
  json values = json::array();
  for (const auto& v : r.values) values.push_back(to_json(v));
  return json{{"kind", std::string(to_string(r.kind))},
              {"parameter_name", r.parameter_name},
              {"grid", r.grid},
              {"values", values},
              {"target", r.target},
              {"extrapolated", r.extrapolated},
              {"fit_exponent", r.fit_exponent},
              {"fit_coefficient", r.fit_coefficient},
              {"fit_points", r.fit_points},
              {"flagged", r.flagged},
              {"flag_reason", r.flag_reason},
              {"deviations", r.deviations},
              {"sup_over_grid", sup_over_grid(r)}};
}

namespace {

// Shortest decimal string that reads back to the same double.
std::string shortest(double v) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

std::string fmt(double v, int digits = 10) {
  std::ostringstream s;
  s.precision(digits);
  s << v;
  return s.str();
}

std::string fmt_fixed(double v, int digits) {
  std::ostringstream s;
  s.setf(std::ios::fixed);
  s.precision(digits);
  s << v;
  return s.str();
}

}  // namespace

std::string plot_data(const SweepReport& r) {
  std::string s = "# target " + shortest(r.target) + "\n";
  for (std::size_t i = 0; i < r.grid.size(); ++i) s += shortest(r.grid[i]) + " " + shortest(r.values[i].value) + "\n";
  return s;
}

void write_atomic(const std::filesystem::path& path, const std::string& content) {
  namespace fs = std::filesystem;
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  fs::path tmp = path;
  tmp += ".tmp." + std::to_string(::getpid());
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw ConfigError("cannot write " + tmp.string());
    out << content;
    out.flush();
    if (!out) throw ConfigError("failed writing " + tmp.string());
  }
  std::error_code ec;
  fs::rename(tmp, path, ec);
  if (ec) {
    fs::remove(tmp);
    throw ConfigError("cannot rename into " + path.string() + ": " + ec.message());
  }
}

json load_json_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file " + path.string());
  try {
    return json::parse(in);
  } catch (const json::parse_error& e) {
    throw ConfigError("malformed JSON in " + path.string() + ": " + e.what());
  }
}

// ---- operations ----

namespace {

struct Context {
  std::optional<ScalarField> field;
  std::optional<ExponentField> exponent;
  QuadratureSpec quad;
  std::uint64_t seed = 0;

  const ScalarField& u() const {
    if (!field) throw ConfigError("this operation needs a 'field'");
    return *field;
  }
  const ExponentField& p() const {
    if (!exponent) throw ConfigError("this operation needs an 'exponent'");
    return *exponent;
  }
};

std::string csv_line(std::initializer_list<std::string> cells) {
  std::string s;
  bool first = true;
  for (const auto& c : cells) {
    if (!first) s += ",";
    s += c;
    first = false;
  }
  return s + "\n";
}


void op_constants(Reader& par, ScenarioOutput& out) {
  std::vector<int> ns;
  for (double v : par.numbers("n")) {
    if (v != std::floor(v) || v < 1 || v > 3) throw ConfigError("params.n: dimensions must be 1, 2 or 3");
    ns.push_back(static_cast<int>(v));
  }
  const auto ps = par.numbers("p");
  for (double p : ps)
    if (!(p >= 1.0)) throw ConfigError("params.p: exponents must be >= 1");
  const int res2 = static_cast<int>(par.integer("resolution_2d", 1 << 16));
  const int res3 = static_cast<int>(par.integer("resolution_3d", 512));
  const auto rows = sphere_constant_table(ns, ps, res2, res3);
  json arr = json::array();
  std::string csv = csv_line({"n", "p", "k_closed", "k_quad", "rel_diff"});
  for (const auto& row : rows) {
    arr.push_back({{"n", row.n}, {"p", row.p}, {"k_closed", row.k_closed}, {"k_quad", row.k_quad},
                   {"rel_diff", row.rel_diff}});
    csv += csv_line({std::to_string(row.n), shortest(row.p), shortest(row.k_closed), shortest(row.k_quad), shortest(row.rel_diff)});
  }
  out.report["results"] = {{"rows", arr}};
  out.csv = csv;
  std::string s;
  for (const auto& row : rows) {
    if (!s.empty()) s += "; ";
    s += "K_{" + std::to_string(row.n) + "," + fmt(row.p, 6) + "} = " + fmt(row.k_closed, 12);
  }
  out.summary = s;
}

FieldPart part_from(Reader& par) {
  const std::string part = par.text("part", "value");
  if (part == "value") return FieldPart::value;
  if (part == "gradient") return FieldPart::gradient_norm;
  throw ConfigError("params.part: expected 'value' or 'gradient'");
}

Weight weight_from(Reader& par, const ExponentField& p) {
  const std::string w = par.text("weight", "none");
  if (w == "none") return {};
  if (w == "pK") {
    const int n = p.dimension();
    return [p, n](const Point& x) {
      const double px = p(x);
      return px * k_np(n, px);
    };
  }
  throw ConfigError("params.weight: expected 'none' or 'pK'");
}

void op_modular(Reader& par, const Context& c, ScenarioOutput& out) {
  ModularOptions o;
  o.lambda = par.number("lambda", 1.0);
  o.part = part_from(par);
  o.weight = weight_from(par, c.p());
  const ModularValue m = modular(c.u(), c.p(), o, c.quad);
  out.report["results"] = {{"value", m.value},
                           {"error_estimate", m.error_estimate},
                           {"truncation_radius", m.truncation_radius},
                           {"node_count", m.node_count}};
  out.summary = "modular = " + fmt(m.value, 12);
}

void op_norm(Reader& par, const Context& c, ScenarioOutput& out) {
  const FieldPart part = part_from(par);
  const Weight w = weight_from(par, c.p());
  const NormResult n = luxemburg_norm(c.u(), c.p(), w, c.quad, part);
  const NormModularCheck chk = norm_modular_inequality_check(c.u(), c.p(), w, c.quad, part);
  out.report["results"] = {{"norm", n.norm},
                           {"modular_at_norm", n.modular_at_norm},
                           {"iterations", n.iterations},
                           {"node_count", n.node_count},
                           {"bracket", {n.bracket_lo, n.bracket_hi}},
                           {"modular_at_1", chk.modular_at_1},
                           {"sandwich_lower", chk.lower},
                           {"sandwich_upper", chk.upper},
                           {"sandwich_holds", chk.holds}};
  out.summary = "norm = " + fmt(n.norm, 12) + " (" + std::to_string(n.iterations) + " iterations), sandwich " +
                (chk.holds ? "PASS" : "FAIL");
}

void op_fracnorm(Reader& par, const Context& c, ScenarioOutput& out) {
  const double s = par.number("s");
  const PairExponent pe(c.p());
  json res;
  if (par.has("q_exponent")) {
    const ExponentField qx = exponent_from_json(par.raw("q_exponent"));
    const FractionalSpaceNorm f = fractional_space_norm(c.u(), qx, s, pe, c.quad);
    res = {{"lq_norm", f.lq_norm}, {"seminorm", f.seminorm}, {"total", f.total}};
    out.summary = "||u||_q + [u]_{s,p} = " + fmt(f.total, 12);
  } else {
    const NormResult n = frac_seminorm(c.u(), s, pe, c.quad);
    const ModularValue m = frac_modular(c.u(), s, pe, 1.0, c.quad);
    res = {{"seminorm", n.norm}, {"iterations", n.iterations}, {"modular_at_1", m.value}, {"node_count", n.node_count}};
    out.summary = "[u]_{s,p} = " + fmt(n.norm, 12);
  }
  out.report["results"] = res;
}

WeightMode weight_mode_from(const std::string& s) {
  if (s == "unit") return WeightMode::unit;
  if (s == "p_of_x") return WeightMode::p_of_x;
  throw ConfigError("params.mode: expected 'unit' or 'p_of_x'");
}

EpsMode eps_mode_from(const std::string& s) {
  if (s == "full") return EpsMode::full;
  if (s == "small_jump") return EpsMode::small_jump;
  if (s == "large_jump_tail") return EpsMode::large_jump_tail;
  throw ConfigError("params.mode: expected 'full', 'small_jump' or 'large_jump_tail'");
}

void op_nguyen(Reader& par, const Context& c, ScenarioOutput& out) {
  const double delta = par.number("delta");
  const WeightMode mode = weight_mode_from(par.text("mode", "unit"));
  const FunctionalValue v = nguyen_functional(c.u(), c.p(), delta, mode, c.quad);
  const FunctionalValue target = local_energy(c.u(), c.p(), mode, c.quad);
  out.report["results"] = {{"functional", to_json(v)}, {"target", target.value}};
  out.summary = "nguyen(delta=" + fmt(delta, 6) + ") = " + fmt(v.value, 12) + ", target " + fmt(target.value, 12);
}

void op_eps(Reader& par, const Context& c, ScenarioOutput& out) {
  const EpsMode mode = eps_mode_from(par.text("mode", "small_jump"));
  const double eps = mode == EpsMode::large_jump_tail ? par.number("epsilon", 0.0) : par.number("epsilon");
  const FunctionalValue v = eps_functional(c.u(), c.p(), eps, mode, c.quad);
  json res = {{"functional", to_json(v)}};
  if (mode != EpsMode::large_jump_tail) res["target"] = local_energy(c.u(), c.p(), WeightMode::p_of_x, c.quad).value;
  out.report["results"] = res;
  out.summary = "eps(" + std::string(to_string(mode)) + ", eps=" + fmt(eps, 6) + ") = " + fmt(v.value, 12);
}

void op_bbm(Reader& par, const Context& c, ScenarioOutput& out) {
  const double s = par.number("s");
  if (!c.p().is_constant()) throw ConfigError("bbm needs a constant exponent");
  const double p = c.p().p_minus();
  const FunctionalValue v = bbm_functional(c.u(), p, s, c.quad);
  const FunctionalValue target = local_energy(c.u(), c.p(), WeightMode::unit, c.quad);
  out.report["results"] = {{"functional", to_json(v)}, {"target", target.value}};
  out.summary = "bbm(s=" + fmt(s, 6) + ") = " + fmt(v.value, 12) + ", target " + fmt(target.value, 12);
}

std::vector<double> grid_from(Reader& par, SweepKind kind) {
  if (!par.has("grid")) return default_grid(kind, kind == SweepKind::bbm ? 0.3 : 0.2, 5);
  const json& g = par.raw("grid");
  if (g.is_object()) {
    Reader gr(g, "params.grid");
    const double start = gr.number("start");
    const long long count = gr.integer("count");
    gr.finish();
    if (count < 3 || count > 64) throw ConfigError("params.grid.count: must be between 3 and 64");
    return default_grid(kind, start, static_cast<int>(count));
  }
  std::vector<double> out;
  if (!g.is_array()) throw ConfigError("params.grid: expected an array or {start, count}");
  for (const auto& e : g) {
    if (!e.is_number()) throw ConfigError("params.grid: values must be numbers");
    out.push_back(e.get<double>());
  }
  return out;
}

void op_sweep(Reader& par, const Context& c, ScenarioOutput& out) {
  const std::string kind_name = par.text("kind");
  const auto kind = sweep_kind_from_string(kind_name);
  if (!kind) throw ConfigError("params.kind: unknown sweep kind '" + kind_name + "'");
  const auto grid = grid_from(par, *kind);
  const SweepReport r = run_sweep(*kind, c.u(), c.p(), grid, c.quad);
  json res = to_json(r);
  if (par.flag("uniform_bound", false)) {
    ModularOptions grad;
    grad.part = FieldPart::gradient_norm;
    const int n = c.u().dimension();
    res["rhs_bound"] = modular(c.u(), ExponentField::constant(n, c.p().p_plus()), grad, c.quad).value +
                       modular(c.u(), ExponentField::constant(n, c.p().p_minus()), grad, c.quad).value;
  }
  out.report["results"] = res;
  out.plot = plot_data(r);
  std::string csv = csv_line({r.parameter_name, "value", "deviation", "node_count"});
  for (std::size_t i = 0; i < r.grid.size(); ++i)
    csv += csv_line({shortest(r.grid[i]), shortest(r.values[i].value), shortest(r.deviations[i]),
                     std::to_string(r.values[i].node_count)});
  out.csv = csv;
  out.summary = std::string(to_string(r.kind)) + ": extrapolated = " + fmt(r.extrapolated, 8) + ", target = " +
                fmt(r.target, 8) + ", fit exponent = " + fmt(r.fit_exponent, 4) +
                (r.flagged ? " [flagged: " + r.flag_reason + "]" : "");
}

PairFunction pair_from_json(const json& j, const std::string& where) {
  Reader r(j, where);
  const std::string kind = r.text("kind");
  PairFunction f;
  if (kind == "constant") {
    f = PairFunction::constant(r.number("c0", 1.0));
  } else if (kind == "abs_diff") {
    f = PairFunction::abs_diff(r.number("c0", 1.0));
  } else if (kind == "sine") {
    f = PairFunction::sine(r.number("c0", 1.0), r.number("k1", 0.0), r.number("k2", 0.0), r.number("theta", 0.0));
  } else if (kind == "exp_linear") {
    f = PairFunction::exp_linear(r.number("c0", 1.0), r.number("k1", 0.0), r.number("k2", 0.0));
  } else if (kind == "field_diff") {
    f = PairFunction::field_diff(field_from_json(r.raw("field")));
  } else {
    throw ConfigError(where + ".kind: unknown pair function '" + kind + "'");
  }
  r.finish();
  return f;
}

json layer_json(const LayerCakeResult& l) {
  return {{"lhs", l.lhs},
          {"rhs_small", l.rhs_small},
          {"rhs_large", l.rhs_large},
          {"rhs", l.rhs_small + l.rhs_large},
          {"residual", l.residual},
          {"node_count", l.node_count},
          {"pass", l.residual <= 1e-6}};
}

void op_lemma41(Reader& par, const Context& c, ScenarioOutput& out) {
  const std::string preset = par.text("preset", "");
  json res;
  if (preset == "unit-distance") {
    const LayerCakeResult l = layer_cake_check(PairFunction::abs_diff(), PairFunction::constant(1.0),
                                               ShiftedExponent{ExponentField::constant(1, 1.0), -1.0}, 0.0, 1.0, c.quad);
    res = layer_json(l);
    res["preset"] = preset;
    out.summary = "lhs = " + fmt_fixed(l.lhs, 6) + ", rhs = " + fmt_fixed(l.rhs_small + l.rhs_large, 6) + ", " +
                  (l.residual <= 1e-6 ? "PASS" : "FAIL");
  } else if (preset == "random") {
    const long long count = par.integer("count", 5);
    if (count < 1 || count > 100) throw ConfigError("params.count: must be between 1 and 100");
    std::mt19937_64 rng(c.seed);
    std::uniform_real_distribution<double> U(0.0, 1.0);
    auto uni = [&](double a, double b) { return a + (b - a) * U(rng); };
    json cases = json::array();
    double worst = 0.0;
    for (long long i = 0; i < count; ++i) {
      const PairFunction phi = PairFunction::sine(uni(0.5, 1.5), uni(-3, 3), uni(-3, 3), uni(0, 2 * std::numbers::pi));
      const PairFunction psi = PairFunction::exp_linear(uni(0.5, 1.5), uni(-1, 1), uni(-1, 1));
      const double eps = uni(0.05, 0.5);
      const ShiftedExponent alpha{ExponentField::inverse_quadratic(1, uni(1.0, 2.0), uni(0.0, 1.0)), eps - 1.0};
      const LayerCakeResult l = layer_cake_check(phi, psi, alpha, 0.0, 1.0, c.quad);
      json cj = layer_json(l);
      cj["phi"] = {{"kind", "sine"}, {"c0", phi.c0}, {"k1", phi.k1}, {"k2", phi.k2}, {"theta", phi.theta}};
      cj["psi"] = {{"kind", "exp_linear"}, {"c0", psi.c0}, {"k1", psi.k1}, {"k2", psi.k2}};
      const auto& iq = std::get<InverseQuadraticExponent>(alpha.base.family());
      cj["alpha"] = {{"a", iq.a}, {"b", iq.b}, {"shift", alpha.shift}};
      cases.push_back(cj);
      worst = std::max(worst, l.residual);
    }
    res = {{"preset", preset}, {"cases", cases}, {"max_residual", worst}, {"pass", worst <= 1e-6}};
    out.summary = "max residual = " + fmt(worst, 3) + " over " + std::to_string(count) + " cases, " +
                  (worst <= 1e-6 ? "PASS" : "FAIL");
  } else if (preset.empty()) {
    const PairFunction phi = pair_from_json(par.raw("phi"), "params.phi");
    const PairFunction psi = pair_from_json(par.raw("psi"), "params.psi");
    const ExponentField base = par.has("alpha") ? exponent_from_json(par.raw("alpha")) : ExponentField::constant(1, 1.0);
    const double shift = par.number("alpha_shift", -1.0);
    const double a = par.number("a", 0.0), b = par.number("b", 1.0);
    const LayerCakeResult l = layer_cake_check(phi, psi, ShiftedExponent{base, shift}, a, b, c.quad);
    res = layer_json(l);
    out.summary = "lhs = " + fmt(l.lhs, 10) + ", rhs = " + fmt(l.rhs_small + l.rhs_large, 10) + ", residual " +
                  fmt(l.residual, 3) + (l.residual <= 1e-6 ? " PASS" : " FAIL");
  } else {
    throw ConfigError("params.preset: expected 'unit-distance' or 'random'");
  }
  out.report["results"] = res;
}

std::vector<Point> points_from(Reader& par, int n) {
  std::vector<Point> pts;
  if (par.has("points")) {
    const json& arr = par.raw("points");
    if (!arr.is_array()) throw ConfigError("params.points: expected an array of points");
    for (const auto& e : arr) {
      Point x = e.is_number() ? Point{e.get<double>()} : as_point(e, "params.points");
      if (x.dim() != n) throw ConfigError("params.points: dimension mismatch");
      pts.push_back(x);
    }
    return pts;
  }
  const double from = par.number("from", -3.0), to = par.number("to", 3.0);
  const long long count = par.integer("count", 13);
  if (count < 1 || count > 100000) throw ConfigError("params.count: must be between 1 and 100000");
  for (long long i = 0; i < count; ++i) {
    const double t = count == 1 ? from : from + (to - from) * static_cast<double>(i) / static_cast<double>(count - 1);
    Point x = Point::filled(n, 0.0);
    x[0] = t;
    pts.push_back(x);
  }
  return pts;
}

void op_maximal(Reader& par, const Context& c, ScenarioOutput& out) {
  const ScalarField& u = c.u();
  const auto pts = points_from(par, u.dimension());
  const double r_max = par.number("r_max", 10.0);
  const int depth = static_cast<int>(par.integer("depth", 30));
  const std::string kind = par.text("kind", "hl");
  json rows = json::array();
  std::string csv = csv_line({"x", "value"});
  std::vector<double> vals;
  if (kind == "hl") {
    const MaximalProfile prof = hl_maximal_profile(u, pts, r_max, depth, c.quad);
    for (std::size_t i = 0; i < pts.size(); ++i) {
      rows.push_back({{"x", point_json(pts[i])}, {"value", prof.values[i]}, {"best_radius", prof.best_radii[i]}});
      vals.push_back(prof.values[i]);
    }
  } else if (kind == "directional") {
    const Point omega = par.point("omega");
    for (const Point& x : pts) {
      const double v = directional_maximal(u, x, omega, r_max, depth, c.quad);
      rows.push_back({{"x", point_json(x)}, {"value", v}});
      vals.push_back(v);
    }
  } else {
    throw ConfigError("params.kind: expected 'hl' or 'directional'");
  }
  for (std::size_t i = 0; i < pts.size(); ++i) csv += csv_line({shortest(pts[i][0]), shortest(vals[i])});
  out.report["results"] = {{"kind", kind}, {"r_max", r_max}, {"depth", depth}, {"rows", rows}};
  out.csv = csv;
  double mx = 0.0;
  for (double v : vals) mx = std::max(mx, v);
  out.summary = "maximal (" + kind + ") at " + std::to_string(pts.size()) + " points, max = " + fmt(mx, 10);
}

void op_counterexample(Reader& par, const Context& c, ScenarioOutput& out) {
  const std::vector<double> Rs = par.has("R") ? par.numbers("R") : std::vector<double>{10, 100, 1000, 10000};
  const int depth = static_cast<int>(par.integer("depth", 40));
  const CounterexampleReport r = counterexample_experiment(Rs, c.quad, depth);
  json rows = json::array();
  std::string csv = csv_line({"R", "modular_u", "modular_Mu"});
  for (const auto& row : r.rows) {
    rows.push_back({{"R", row.R}, {"modular_u", row.modular_u}, {"modular_Mu", row.modular_Mu}});
    csv += csv_line({shortest(row.R), shortest(row.modular_u), shortest(row.modular_Mu)});
  }
  out.report["results"] = {{"rows", rows},
                           {"modular_u", r.modular_u},
                           {"growth_exponent_fit", r.growth_exponent_fit},
                           {"loglog_slope", r.loglog_slope},
                           {"node_count", r.node_count}};
  out.csv = csv;
  out.summary = "modular(u) = " + fmt(r.modular_u, 10) + ", modular(Mu) grows like R^" + fmt(r.growth_exponent_fit, 4);
}

void op_bmo(Reader& par, const Context& c, ScenarioOutput& out) {
  const ScalarField& u = c.u();
  const int n = u.dimension();
  Ball domain{Point::filled(n, 0.5), 0.5};
  if (par.has("domain")) {
    Reader d = par.object("domain");
    domain.center = d.point("center");
    domain.radius = d.number("radius");
    d.finish();
  }
  std::vector<Ball> balls;
  if (par.has("balls")) {
    const json& arr = par.raw("balls");
    if (!arr.is_array()) throw ConfigError("params.balls: expected an array");
    for (const auto& e : arr) {
      Reader b(e, "params.balls[]");
      balls.push_back({b.point("center"), b.number("radius")});
      b.finish();
    }
  } else {
    // Dyadic balls (0, 2^-k) inside the domain (0, 1).
    const long long count = par.integer("dyadic", 10);
    if (n != 1) throw ConfigError("params.dyadic: dyadic balls are one-dimensional");
    for (long long k = 1; k <= count; ++k) {
      const double r = std::ldexp(1.0, static_cast<int>(-k - 1));
      balls.push_back({Point{r}, r});
    }
  }
  const BmoResult res = bmo_quantity(u, domain, balls, c.quad);
  json rows = json::array();
  std::string csv = csv_line({"center", "radius", "value"});
  double mn = res.per_ball.empty() ? 0.0 : res.per_ball.front();
  for (std::size_t i = 0; i < balls.size(); ++i) {
    rows.push_back({{"center", point_json(balls[i].center)}, {"radius", balls[i].radius}, {"value", res.per_ball[i]}});
    csv += csv_line({shortest(balls[i].center[0]), shortest(balls[i].radius), shortest(res.per_ball[i])});
    mn = std::min(mn, res.per_ball[i]);
  }
  out.report["results"] = {{"rows", rows}, {"sup", res.sup}, {"min", mn}};
  out.csv = csv;
  out.summary = "BMO quantity over " + std::to_string(balls.size()) + " balls: sup = " + fmt(res.sup, 10);
}

void op_diagnose(Reader& par, const Context& c, ScenarioOutput& out) {
  const ExponentField& p = c.p();
  const int n = p.dimension();
  const long long count = par.integer("pairs", 2000);
  const double box = par.number("box", 10.0);
  const double threshold = par.number("threshold", 1.0);
  if (count < 1 || count > 10000000) throw ConfigError("params.pairs: must be between 1 and 1e7");
  std::mt19937_64 rng(c.seed);
  std::uniform_real_distribution<double> U(-1.0, 1.0);
  std::vector<std::pair<Point, Point>> sample;
  for (long long i = 0; i < count; ++i) {
    Point x = Point::filled(n, 0.0), d = Point::filled(n, 0.0);
    for (int k = 0; k < n; ++k) {
      x[k] = box * U(rng);
      d[k] = U(rng);
    }
    const double dn = d.norm();
    const double r = std::pow(10.0, -6.0 + 6.0 * 0.5 * (U(rng) + 1.0));
    sample.emplace_back(x, dn > 0.0 ? x + d * (r / dn) : x);
  }
  const LogHolderDiagnosis dgn = log_holder_diagnose(p, sample, threshold);
  out.report["results"] = {{"c_holder_estimate", dgn.c_holder_estimate},
                           {"c_decay_estimate", dgn.c_decay_estimate ? json(*dgn.c_decay_estimate) : json(nullptr)},
                           {"satisfied", dgn.satisfied},
                           {"flagged_large", dgn.flagged_large},
                           {"pairs_used", dgn.pairs_used},
                           {"pairs_skipped", dgn.pairs_skipped},
                           {"p_minus", p.p_minus()},
                           {"p_plus", p.p_plus()}};
  out.summary = "log-Hoelder constant ~ " + fmt(dgn.c_holder_estimate, 6) + (dgn.flagged_large ? " [large]" : "");
}

void op_keyineq(Reader& par, const Context& c, ScenarioOutput& out) {
  const double delta = par.number("delta");
  const Point omega = par.has("omega") ? par.point("omega") : Point{1.0};
  const int depth = static_cast<int>(par.integer("depth", 30));
  const KeyInequality k = key_inequality_check(c.u(), c.p(), delta, omega, c.quad, depth);
  out.report["results"] = {{"lhs", k.lhs}, {"rhs", k.rhs}, {"holds", k.holds}};
  out.summary = "directional bound: " + fmt(k.lhs, 10) + " <= " + fmt(k.rhs, 10) + (k.holds ? " PASS" : " FAIL");
}

void op_luxnorm(Reader& par, const Context& c, ScenarioOutput& out) {
  const double eps = par.number("epsilon");
  const LuxnormBound b = luxnorm_bound(c.u(), c.p(), eps, c.quad);
  out.report["results"] = {
      {"weighted_gradient_norm", b.weighted_gradient_norm}, {"eps_functional", b.eps_functional}, {"rhs", b.rhs}};
  out.summary = "weighted gradient norm = " + fmt(b.weighted_gradient_norm, 10) + ", eps bound = " + fmt(b.rhs, 10);
}

void op_uniform_bound(Reader& par, const Context& c, ScenarioOutput& out) {
  const auto grid = par.numbers("grid");
  const UniformBound b = uniform_bound_check(c.u(), c.p(), grid, c.quad);
  out.report["results"] = {{"deltas", b.deltas}, {"values", b.values}, {"sup_value", b.sup_value}, {"rhs_bound", b.rhs_bound}};
  out.summary = "sup over deltas = " + fmt(b.sup_value, 10) + ", gradient bound = " + fmt(b.rhs_bound, 10);
}

}  // namespace

ScenarioOutput run_scenario(const json& scenario) {
  Reader top(scenario, "scenario");
  if (top.has("schema") && top.text("schema") != kSchema)
    throw ConfigError(std::string("scenario.schema: expected '") + kSchema + "'");
  ScenarioOutput out;
  const std::string op = top.text("operation");
  out.name = top.text("name", op);
  Context c;
  if (top.has("field")) c.field = field_from_json(top.raw("field"));
  if (top.has("exponent")) c.exponent = exponent_from_json(top.raw("exponent"));
  if (top.has("quadrature")) c.quad = quadrature_from_json(top.raw("quadrature"));
  const long long seed = top.integer("seed", static_cast<long long>(c.quad.seed));
  if (seed < 0) throw ConfigError("scenario.seed: must be non-negative");
  c.seed = static_cast<std::uint64_t>(seed);
  if (top.has("outputs")) {
    // Output paths are consumed by the caller; only validate the shape here.
    Reader o = top.object("outputs");
    for (const char* k : {"report", "csv", "plot_data"})
      if (o.has(k)) o.text(k);
    o.finish();
  }
  if (c.field && c.exponent && c.field->dimension() != c.exponent->dimension())
    throw ConfigError("field and exponent dimensions differ");

  static const json empty = json::object();
  Reader par(top.has("params") ? top.raw("params") : empty, "params");
  top.finish();

  out.report["schema"] = kSchema;
  out.report["name"] = out.name;
  out.report["operation"] = op;
  out.report["seed"] = c.seed;
  if (c.field) out.report["field"] = scenario.at("field");
  if (c.exponent) out.report["exponent"] = scenario.at("exponent");
  out.report["quadrature"] = to_json(c.quad);
  out.report["params"] = top.has("params") ? scenario.at("params") : json::object();

  if (op == "constants")
    op_constants(par, out);
  else if (op == "modular")
    op_modular(par, c, out);
  else if (op == "norm")
    op_norm(par, c, out);
  else if (op == "fracnorm")
    op_fracnorm(par, c, out);
  else if (op == "nguyen")
    op_nguyen(par, c, out);
  else if (op == "eps")
    op_eps(par, c, out);
  else if (op == "bbm")
    op_bbm(par, c, out);
  else if (op == "sweep")
    op_sweep(par, c, out);
  else if (op == "lemma41")
    op_lemma41(par, c, out);
  else if (op == "maximal")
    op_maximal(par, c, out);
  else if (op == "counterexample")
    op_counterexample(par, c, out);
  else if (op == "bmo")
    op_bmo(par, c, out);
  else if (op == "diagnose-exponent")
    op_diagnose(par, c, out);
  else if (op == "keyineq")
    op_keyineq(par, c, out);
  else if (op == "luxnorm")
    op_luxnorm(par, c, out);
  else if (op == "uniform-bound")
    op_uniform_bound(par, c, out);
  else
    throw ConfigError("scenario.operation: unknown operation '" + op + "'");
  par.finish();
  return out;
}

}  // namespace vexs
