// mvk_cli: evaluate polynomials, run verification suites, compute and compare
// transition functions, simulate.
//
// Exit status: 0 all requested checks passed, 1 a check failed, 2 malformed
// spec or arguments, 3 numeric failure (flagged truncation or rounding).

#include <CLI11.hpp>

#include <charconv>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "mvk/all.hpp"
#include "mvk/io.hpp"
#include "mvk/verify.hpp"

namespace {

using mvk::Json;
using mvk::Rational;

enum Status { Ok = 0, CheckFailed = 1, BadInput = 2, NumericFailure = 3 };

struct Global {
  std::string format = "json";
  bool floating = false;
  double tol = 1e-8;
  std::uint64_t seed = 1;
};

struct Table {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;
};

struct Outcome {
  Json json;
  Table csv;
  int status = Ok;
};

std::string csv_cell(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

void emit(const Global& g, const Outcome& o) {
  if (g.format == "csv") {
    auto line = [](const std::vector<std::string>& cells) {
      for (std::size_t i = 0; i < cells.size(); ++i) std::cout << (i ? "," : "") << csv_cell(cells[i]);
      std::cout << '\n';
    };
    line(o.csv.header);
    for (const auto& r : o.csv.rows) line(r);
  } else {
    std::cout << o.json.dump(2) << '\n';
  }
}

/// Shortest round-trip representation.
std::string num(double v) {
  char buf[32];
  const auto r = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, r.ptr);
}

/// Rejects decimal literals for rates and probabilities unless --float was given.
std::string literal(const std::string& s, const Global& g, const std::string& what) {
  if (s.empty()) throw mvk::ValidationError("missing --" + what);
  if (!g.floating && s.find_first_of(".eE") != std::string::npos) {
    throw mvk::ValidationError("--" + what + " " + s + ": float literals need --float");
  }
  return s;
}

std::vector<std::string> split(const std::string& s) {
  std::vector<std::string> out;
  std::stringstream in(s);
  std::string item;
  while (std::getline(in, item, ',')) out.push_back(item);
  return out;
}

std::vector<int> int_list(const std::string& s, const std::string& what) {
  if (s.empty()) throw mvk::ValidationError("missing --" + what);
  std::vector<int> out;
  for (const auto& item : split(s)) {
    std::size_t used = 0;
    int v = 0;
    try {
      v = std::stoi(item, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used == 0 || used != item.size()) throw mvk::ValidationError("--" + what + ": '" + item + "' is not an integer");
    out.push_back(v);
  }
  return out;
}

std::vector<double> double_list(const std::string& s, const std::string& what) {
  std::vector<double> out;
  for (const auto& item : split(s)) {
    try {
      out.push_back(mvk::parse_scalar<double>(item));
    } catch (const std::exception&) {
      throw mvk::ValidationError("--" + what + ": '" + item + "' is not a number");
    }
  }
  if (out.empty()) throw mvk::ValidationError("missing --" + what);
  return out;
}

Json load_json(const std::string& path) {
  if (path.empty()) throw mvk::ValidationError("missing --spec");
  std::ifstream in(path);
  if (!in) throw mvk::ValidationError("cannot read " + path);
  try {
    return Json::parse(in);
  } catch (const Json::parse_error& e) {
    throw mvk::ValidationError(path + ": " + e.what());
  }
}

std::string state_str(const std::vector<int>& s) { return mvk::Composition(s).str(); }

// ---------------------------------------------------------------- eval

struct EvalArgs {
  std::string family, n, x, p, beta, c, nu, a, b, basis;
  int N = -1;
  int d = 3;
};

template <class T>
Outcome run_eval(const EvalArgs& a, const Global& g) {
  auto scalar = [&](const std::string& s, const std::string& what) { return mvk::parse_scalar<T>(literal(s, g, what)); };
  auto need_N = [&] {
    if (a.N < 0) throw mvk::ValidationError("missing --N");
    return a.N;
  };
  T value;
  if (a.family == "mvk") {
    const auto x = int_list(a.x, "x");
    const auto n = int_list(a.n, "n");
    int total = 0;
    for (int v : x) total += v;
    auto basis = [&]() -> mvk::Basis<T> {
      if (!a.basis.empty()) return mvk::basis_from_json<T>(load_json(a.basis), {g.floating});
      if constexpr (mvk::is_exact_v<T>) {
        return mvk::exact_orthonormal_basis(a.d);
      } else {
        return mvk::float_orthonormal_basis(a.d);
      }
    }();
    value = mvk::mvk_eval(mvk::MultiIndex(n, total), mvk::Composition(x), basis);
  } else {
    const auto n = int_list(a.n, "n");
    if (n.size() != 1) throw mvk::ValidationError("--n takes one degree for a univariate family");
    std::optional<mvk::FamilyParams<T>> fam;
    if (a.family == "krawtchouk") {
      fam = mvk::KrawtchoukParams<T>(need_N(), scalar(a.p, "p"));
    } else if (a.family == "meixner") {
      fam = mvk::MeixnerParams<T>(scalar(a.beta, "beta"), scalar(a.c, "c"));
    } else if (a.family == "charlier") {
      fam = mvk::CharlierParams<T>(scalar(a.nu, "nu"));
    } else if (a.family == "laguerre") {
      fam = mvk::LaguerreParams<T>(scalar(a.beta, "beta"));
    } else if (a.family == "dual-hahn") {
      fam = mvk::DualHahnParams<T>(scalar(a.a, "a"), scalar(a.b, "b"), need_N());
    } else {
      throw mvk::ValidationError("unknown family '" + a.family + "'");
    }
    const T x = a.family == "laguerre" ? scalar(a.x, "x") : T(int_list(a.x, "x").at(0));
    value = mvk::evaluate(*fam, n[0], x);
  }
  Outcome o;
  o.json = {{"family", a.family}, {"n", a.n}, {"x", a.x}, {"value", mvk::scalar_to_json(value)}};
  o.csv = {{"family", "n", "x", "value"}, {{a.family, a.n, a.x, mvk::format_scalar(value)}}};
  return o;
}

// ---------------------------------------------------------------- verify

Json check_json(const mvk::CheckResult& c) {
  return {{"property", c.property}, {"passed", c.passed},   {"max_residual", c.max_residual},
          {"tolerance", c.tolerance}, {"cases", c.cases}, {"note", c.note}};
}

Outcome report_outcome(const mvk::SuiteReport& r) {
  Outcome o;
  Json checks = Json::array();
  o.csv.header = {"suite", "property", "passed", "max_residual", "tolerance", "cases", "note"};
  for (const auto& c : r.checks) {
    checks.push_back(check_json(c));
    o.csv.rows.push_back({r.suite, c.property, c.passed ? "true" : "false", num(c.max_residual), num(c.tolerance),
                          std::to_string(c.cases), c.note});
  }
  o.json = {{"suite", r.suite}, {"passed", r.passed()}, {"checks", checks}};
  o.status = r.passed() ? Ok : CheckFailed;
  return o;
}

struct VerifyArgs {
  std::string suite, spec, p = "1/2", t = "1/10,1";
  int d = 3, N = 4, top = 5, reach = 60, oracle = 80;
};

Outcome run_verify(const VerifyArgs& a, const Global& g) {
  const auto& builtin = mvk::builtin_suites();
  if (auto it = builtin.find(a.suite); it != builtin.end()) {
    mvk::SuiteParams s;
    s.d = a.d;
    s.N = a.N;
    s.p = literal(a.p, g, "p");
    s.seed = g.seed;
    s.tol = g.tol;
    s.floating = g.floating;
    return report_outcome(it->second(s));
  }
  const auto times = double_list(a.t, "t");
  const mvk::ReadOptions ro{g.floating};
  if (a.suite == "spectral") {
    const auto p = mvk::process_from_json<double>(load_json(a.spec), ro);
    return report_outcome(
        {a.suite, mvk::spectral_checks(p.spec, times, a.top, a.reach, p.truncation.value_or(a.oracle), g.tol)});
  }
  if (a.suite == "composition") {
    return report_outcome({a.suite, mvk::composition_checks(mvk::composition_from_json<double>(load_json(a.spec), ro),
                                                            times, g.tol)});
  }
  if (a.suite == "urn") {
    return report_outcome({a.suite, mvk::urn_checks(mvk::urn_from_json<double>(load_json(a.spec), ro), times, g.tol)});
  }
  if (a.suite == "additive-identity") {
    const auto j = load_json(a.spec);
    // exact when every parameter is rational
    try {
      const mvk::SpectralData<Rational> data(mvk::process_from_json<Rational>(j, ro).spec);
      return report_outcome({a.suite, {mvk::additive_identity_suite(data, a.N, 4, 10, g.seed, g.tol)}});
    } catch (const mvk::UnsupportedError&) {
      const mvk::SpectralData<double> data(mvk::process_from_json<double>(j, ro).spec);
      return report_outcome({a.suite, {mvk::additive_identity_suite(data, a.N, 4, 10, g.seed, g.tol)}});
    }
  }
  std::string names;
  for (const auto& [k, v] : builtin) names += k + ", ";
  throw mvk::ValidationError("unknown suite '" + a.suite + "' (" + names +
                             "spectral, composition, urn, additive-identity)");
}

// ---------------------------------------------------------------- basis

struct BasisArgs {
  std::string p, file;
  int d = 0;
  bool orthonormal = false;
};

template <class T>
Outcome basis_outcome(const mvk::Basis<T>& b, bool validated) {
  Outcome o;
  o.json = mvk::basis_to_json(b);
  o.json["orthonormal"] = b.orthonormal();
  if (validated) o.json["valid"] = true;
  o.csv.header = {"function"};
  for (std::size_t j = 0; j < b.dim(); ++j) o.csv.header.push_back("c" + std::to_string(j));
  o.csv.header.push_back("norm");
  std::vector<std::string> prow{"p"};
  for (const auto& v : b.p()) prow.push_back(mvk::format_scalar(v));
  prow.push_back("");
  o.csv.rows.push_back(prow);
  for (std::size_t l = 0; l < b.dim(); ++l) {
    std::vector<std::string> row{std::to_string(l)};
    for (std::size_t j = 0; j < b.dim(); ++j) row.push_back(mvk::format_scalar(b.u(l, j)));
    row.push_back(mvk::format_scalar(b.norms()[l]));
    o.csv.rows.push_back(row);
  }
  return o;
}

template <class T>
Outcome run_basis_t(const BasisArgs& a, const Global& g) {
  if (!a.file.empty()) return basis_outcome(mvk::basis_from_json<T>(load_json(a.file), {g.floating}), true);
  if (!a.p.empty()) {
    std::vector<T> p;
    for (const auto& s : split(a.p)) p.push_back(mvk::parse_scalar<T>(literal(s, g, "p")));
    return basis_outcome(a.orthonormal ? mvk::orthonormal_basis_from(p) : mvk::orthogonal_basis_from(p), false);
  }
  if (a.d > 0) {
    if constexpr (mvk::is_exact_v<T>) {
      return basis_outcome(mvk::exact_orthonormal_basis(a.d), false);
    } else {
      return basis_outcome(mvk::float_orthonormal_basis(a.d), false);
    }
  }
  throw mvk::ValidationError("basis needs one of --p, --d, --validate");
}

// ---------------------------------------------------------------- transitions

/// Transition probabilities of any spec by any available method, with the
/// generator rows cached per source.
class Evaluator {
 public:
  Evaluator(mvk::AnySpec<double> spec, double t) : spec_(std::move(spec)), t_(t) {
    if (auto* p = std::get_if<mvk::ProcessSpec<double>>(&spec_)) data_.emplace(p->spec);
  }

  const mvk::Generator& generator() {
    if (!gen_) {
      gen_ = std::visit(
          [](const auto& s) -> mvk::Generator {
            using S = std::decay_t<decltype(s)>;
            if constexpr (std::is_same_v<S, mvk::ProcessSpec<double>>) {
              if (!s.spec.bound() && !s.truncation) {
                throw mvk::ValidationError("infinite process needs truncation.levels for this method");
              }
              return mvk::birth_death_generator(s.spec, s.truncation);
            } else if constexpr (std::is_same_v<S, mvk::CompositionProcess<double>>) {
              return mvk::composition_generator(s);
            } else {
              return mvk::urn_generator(s);
            }
          },
          spec_);
    }
    return *gen_;
  }

  std::vector<std::string> methods() const {
    if (std::holds_alternative<mvk::ProcessSpec<double>>(spec_)) return {"spectral", "expm"};
    if (std::holds_alternative<mvk::UrnSpec<double>>(spec_)) return {"spectral", "expm"};
    return {"spectral", "dual-spectral", "product-oracle", "expm"};
  }

  double operator()(const std::string& method, const std::vector<int>& x, const std::vector<int>& y) {
    const auto known = methods();
    if (std::find(known.begin(), known.end(), method) == known.end()) {
      std::string list;
      for (const auto& m : known) list += (list.empty() ? "" : ", ") + m;
      throw mvk::ValidationError("method '" + method + "' not available for this spec (" + list + ")");
    }
    if (method == "expm") {
      const auto& g = generator();
      const std::size_t src = g.index(x);
      auto it = rows_.find(src);
      if (it == rows_.end()) {
        mvk::UniformizationInfo info;
        it = rows_.emplace(src, mvk::transition_rows(g, t_, {src}, &info).at(0)).first;
      }
      return it->second.at(g.index(y));
    }
    if (auto* p = std::get_if<mvk::ProcessSpec<double>>(&spec_)) {
      (void)p;
      if (x.size() != 1 || y.size() != 1) throw mvk::ValidationError("process states are single integers");
      const auto r = mvk::km_transition(*data_, x[0], y[0], t_);
      flagged_ = flagged_ || r.flagged;
      error_ = std::max(error_, r.tail_estimate + r.rounding_estimate);
      return r.value;
    }
    if (auto* u = std::get_if<mvk::UrnSpec<double>>(&spec_)) {
      return mvk::ehrenfest_dtype(mvk::Composition(x), mvk::Composition(y), t_, *u);
    }
    const auto& c = std::get<mvk::CompositionProcess<double>>(spec_);
    const mvk::Composition cx(x), cy(y);
    if (method == "spectral") return mvk::composition_transition(cx, cy, t_, c).value;
    if (method == "dual-spectral") return mvk::dual_spectral_form(cx, cy, t_, c).value;
    return mvk::product_form_oracle(cx, cy, t_, c);
  }

  bool flagged() const { return flagged_; }
  double error_estimate() const { return error_; }
  const mvk::AnySpec<double>& spec() const { return spec_; }

 private:
  mvk::AnySpec<double> spec_;
  double t_;
  std::optional<mvk::SpectralData<double>> data_;
  std::optional<mvk::Generator> gen_;
  std::map<std::size_t, std::vector<double>> rows_;
  bool flagged_ = false;
  double error_ = 0;
};

double parse_time(const std::string& s) {
  const auto v = double_list(s, "t");
  if (v.size() != 1 || !(v[0] >= 0)) throw mvk::ValidationError("--t must be one nonnegative time");
  return v[0];
}

struct TransitionArgs {
  std::string spec, x, y, t, method = "spectral";
};

Outcome run_transition(const TransitionArgs& a, const Global& g) {
  const double t = parse_time(a.t);
  Evaluator ev(mvk::spec_from_json<double>(load_json(a.spec), {g.floating}), t);
  const auto x = int_list(a.x, "x"), y = int_list(a.y, "y");
  const double p = ev(a.method, x, y);
  Outcome o;
  o.json = {{"x", x}, {"y", y}, {"t", t}, {"p", p}, {"method", a.method}};
  if (a.method == "spectral" && std::holds_alternative<mvk::ProcessSpec<double>>(ev.spec())) {
    o.json["truncation_error_estimate"] = ev.error_estimate();
    o.json["flagged"] = ev.flagged();
  }
  o.csv = {{"x", "y", "t", "p", "method"}, {{state_str(x), state_str(y), num(t), num(p), a.method}}};
  if (ev.flagged()) o.status = NumericFailure;
  return o;
}

// ---------------------------------------------------------------- simulate

struct SimulateArgs {
  std::string spec, x0, t;
  std::size_t replicates = 10000;
  unsigned threads = 0;
};

Outcome run_simulate(const SimulateArgs& a, const Global& g) {
  const double t = parse_time(a.t);
  Evaluator ev(mvk::spec_from_json<double>(load_json(a.spec), {g.floating}), t);
  const auto& gen = ev.generator();
  mvk::SimConfig cfg;
  cfg.seed = g.seed;
  cfg.replicates = a.replicates;
  cfg.t = t;
  cfg.x0 = int_list(a.x0, "x0");
  cfg.threads = a.threads;
  const auto e = mvk::empirical_transition(gen, mvk::simulate_path(gen, cfg));
  std::vector<double> expected;
  for (const auto& s : gen.states) expected.push_back(ev("spectral", cfg.x0, s));
  std::optional<mvk::ChiSquare> chi;
  if (e.overflow == 0) chi = mvk::chi_square_test(gen, e, expected);
  Outcome o;
  o.json = mvk::simulation_record(cfg, e, chi);
  o.csv.header = {"state", "count", "frequency", "standard_error", "expected"};
  for (std::size_t i = 0; i < gen.size(); ++i) {
    const auto& s = gen.states[i];
    const auto it = e.counts.find(s);
    o.csv.rows.push_back({state_str(s), std::to_string(it == e.counts.end() ? 0 : it->second), num(e.frequency(s)),
                          num(e.standard_error(s)), num(expected[i])});
  }
  if (chi && !(chi->p_value > 1e-3)) o.status = CheckFailed;
  if (ev.flagged()) o.status = NumericFailure;
  return o;
}

// ---------------------------------------------------------------- compare

struct CompareArgs {
  std::string spec, t, methods = "spectral,expm", x;
};

Outcome run_compare(const CompareArgs& a, const Global& g) {
  const double t = parse_time(a.t);
  Evaluator ev(mvk::spec_from_json<double>(load_json(a.spec), {g.floating}), t);
  const auto methods = split(a.methods);
  if (methods.size() < 2) throw mvk::ValidationError("--methods needs at least two methods");
  const auto& states = ev.generator().states;
  std::vector<std::vector<int>> sources;
  if (a.x.empty()) {
    sources = states;
  } else {
    sources.push_back(int_list(a.x, "x"));
  }
  std::map<std::string, double> delta;
  Outcome o;
  o.csv.header = {"x", "y"};
  for (const auto& m : methods) o.csv.header.push_back(m);
  Json rows = Json::array();
  for (const auto& x : sources) {
    for (const auto& y : states) {
      Json vals = Json::object();
      std::vector<std::string> row{state_str(x), state_str(y)};
      double ref = 0;
      for (std::size_t k = 0; k < methods.size(); ++k) {
        const double v = ev(methods[k], x, y);
        if (k == 0) ref = v;
        else delta[methods[k]] = std::max(delta[methods[k]], std::abs(v - ref));
        vals[methods[k]] = v;
        row.push_back(num(v));
      }
      rows.push_back({{"x", x}, {"y", y}, {"values", vals}});
      o.csv.rows.push_back(row);
    }
  }
  double worst = 0;
  for (const auto& [m, d] : delta) worst = std::max(worst, d);
  const bool passed = worst < g.tol;
  o.json = {{"t", t},
            {"methods", methods},
            {"reference", methods[0]},
            {"max_abs_delta", delta},
            {"tolerance", g.tol},
            {"passed", passed},
            {"rows", rows}};
  o.status = ev.flagged() ? NumericFailure : passed ? Ok : CheckFailed;
  return o;
}

// ---------------------------------------------------------------- kernel

struct KernelArgs {
  std::string x, y, basis;
  int deg = 0, d = 3;
};

template <class T>
Outcome run_kernel(const KernelArgs& a, const Global& g) {
  const auto basis = [&]() -> mvk::Basis<T> {
    if (!a.basis.empty()) return mvk::basis_from_json<T>(load_json(a.basis), {g.floating});
    if constexpr (mvk::is_exact_v<T>) {
      return mvk::exact_orthonormal_basis(a.d);
    } else {
      return mvk::float_orthonormal_basis(a.d);
    }
  }();
  const auto x = int_list(a.x, "x"), y = int_list(a.y, "y");
  const T v = mvk::reproducing_kernel(a.deg, mvk::Composition(x), mvk::Composition(y), basis);
  Outcome o;
  o.json = {{"degree", a.deg}, {"x", x}, {"y", y}, {"value", mvk::scalar_to_json(v)}};
  o.csv = {{"degree", "x", "y", "value"}, {{std::to_string(a.deg), state_str(x), state_str(y), mvk::format_scalar(v)}}};
  return o;
}

int fail(int status, const std::string& kind, const std::string& message) {
  std::cout << mvk::error_record(kind, message).dump() << '\n';
  std::cerr << "mvk_cli: " << message << '\n';
  return status;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Multivariate Krawtchouk polynomials and composition Markov processes"};
  app.require_subcommand(1);
  Global g;
  if (const char* env = std::getenv("MVK_TOL")) {
    try {
      g.tol = std::stod(env);
    } catch (const std::exception&) {
      return fail(BadInput, "validation", std::string("MVK_TOL is not a number: ") + env);
    }
  }
  app.add_option("--format", g.format, "Output format")->check(CLI::IsMember({"json", "csv"}));
  app.add_flag("--float", g.floating, "Accept float literals and compute in floating point");
  app.add_option("--tol", g.tol, "Floating-point tolerance (default $MVK_TOL or 1e-8)");
  app.add_option("--seed", g.seed, "Random seed");

  EvalArgs ea;
  auto* eval = app.add_subcommand("eval", "Evaluate a polynomial");
  eval->add_option("--family", ea.family, "krawtchouk, meixner, charlier, laguerre, dual-hahn, mvk")->required();
  eval->add_option("--n", ea.n, "Degree (comma list for mvk)")->required();
  eval->add_option("--x", ea.x, "Argument (comma list for mvk)")->required();
  eval->add_option("--N", ea.N, "Trials (krawtchouk, dual-hahn)");
  eval->add_option("--p", ea.p, "Success probability");
  eval->add_option("--beta", ea.beta, "Shape (meixner, laguerre)");
  eval->add_option("--c", ea.c, "Ratio (meixner)");
  eval->add_option("--nu", ea.nu, "Rate (charlier)");
  eval->add_option("--a", ea.a, "Urn a (dual-hahn)");
  eval->add_option("--b", ea.b, "Urn b (dual-hahn)");
  eval->add_option("--basis", ea.basis, "Basis JSON file (mvk)");
  eval->add_option("--d", ea.d, "Built-in orthonormal basis dimension (mvk)");

  VerifyArgs va;
  auto* verify = app.add_subcommand("verify", "Run a verification suite");
  verify->add_option("--suite", va.suite, "Suite name")->required();
  verify->add_option("--d", va.d, "Basis dimension");
  verify->add_option("--N", va.N, "Maximum total");
  verify->add_option("--p", va.p, "Krawtchouk probability");
  verify->add_option("--spec", va.spec, "Spec JSON (spectral, composition, urn, additive-identity)");
  verify->add_option("--t", va.t, "Comma list of times");
  verify->add_option("--top", va.top, "Largest state compared (spectral)");
  verify->add_option("--reach", va.reach, "Largest intermediate state (spectral)");
  verify->add_option("--oracle-levels", va.oracle, "Oracle truncation for an infinite process");

  BasisArgs ba;
  auto* basis = app.add_subcommand("basis", "Build or validate an orthogonal basis");
  basis->add_option("--p", ba.p, "Comma list of category probabilities");
  basis->add_flag("--orthonormal", ba.orthonormal, "Normalize the functions");
  basis->add_option("--d", ba.d, "Built-in orthonormal basis");
  basis->add_option("--validate", ba.file, "Basis JSON file to validate");

  TransitionArgs ta;
  auto* trans = app.add_subcommand("transition", "Transition probability p(x, y; t)");
  trans->add_option("--spec", ta.spec, "Spec JSON")->required();
  trans->add_option("--x", ta.x, "Source state")->required();
  trans->add_option("--y", ta.y, "Target state")->required();
  trans->add_option("--t", ta.t, "Time")->required();
  trans->add_option("--method", ta.method, "spectral, dual-spectral, product-oracle, expm");

  SimulateArgs sa;
  auto* sim = app.add_subcommand("simulate", "Gillespie simulation against the spectral prediction");
  sim->add_option("--spec", sa.spec, "Spec JSON")->required();
  sim->add_option("--x0", sa.x0, "Initial state")->required();
  sim->add_option("--t", sa.t, "Time")->required();
  sim->add_option("--replicates", sa.replicates, "Replicates");
  sim->add_option("--threads", sa.threads, "Worker threads (0: hardware)");

  CompareArgs ca;
  auto* cmp = app.add_subcommand("compare", "Compare transition methods over all state pairs");
  cmp->add_option("--spec", ca.spec, "Spec JSON")->required();
  cmp->add_option("--t", ca.t, "Time")->required();
  cmp->add_option("--methods", ca.methods, "Comma list; the first is the reference");
  cmp->add_option("--x", ca.x, "Restrict to one source state");

  KernelArgs ka;
  auto* kern = app.add_subcommand("kernel", "Reproducing kernel of one degree");
  kern->add_option("--deg", ka.deg, "Degree")->required();
  kern->add_option("--x", ka.x, "First composition")->required();
  kern->add_option("--y", ka.y, "Second composition")->required();
  kern->add_option("--basis", ka.basis, "Orthonormal basis JSON file");
  kern->add_option("--d", ka.d, "Built-in orthonormal basis dimension");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    return fail(BadInput, "usage", e.what());
  }

  try {
    Outcome o;
    if (*eval) {
      o = g.floating ? run_eval<double>(ea, g) : run_eval<Rational>(ea, g);
    } else if (*verify) {
      o = run_verify(va, g);
    } else if (*basis) {
      o = g.floating ? run_basis_t<double>(ba, g) : run_basis_t<Rational>(ba, g);
    } else if (*trans) {
      o = run_transition(ta, g);
    } else if (*sim) {
      o = run_simulate(sa, g);
    } else if (*cmp) {
      o = run_compare(ca, g);
    } else {
      o = g.floating ? run_kernel<double>(ka, g) : run_kernel<Rational>(ka, g);
    }
    emit(g, o);
    return o.status;
  } catch (const mvk::TruncationError& e) {
    return fail(NumericFailure, "truncation", e.what());
  } catch (const mvk::ValidationError& e) {
    return fail(BadInput, "validation", e.what());
  } catch (const mvk::DualityUnavailableError& e) {
    return fail(BadInput, "duality-unavailable", e.what());
  } catch (const mvk::DomainError& e) {
    return fail(BadInput, "domain", e.what());
  } catch (const mvk::UnsupportedError& e) {
    return fail(BadInput, "unsupported", e.what());
  } catch (const mvk::ScaleError& e) {
    return fail(BadInput, "scale", e.what());
  } catch (const Json::exception& e) {
    return fail(BadInput, "json", e.what());
  } catch (const std::exception& e) {
    return fail(NumericFailure, "internal", e.what());
  }
}
