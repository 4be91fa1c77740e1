#ifndef MVK_IO_HPP
#define MVK_IO_HPP

// JSON serialization of bases, process specs and result records. Exact
// values travel as "num/den" strings; bare JSON floats are accepted only when
// the caller opts in.
//
//   basis        {d, p: [...], u: [[...], ...], a: [...]}       (a optional on input)
//   process      {family, params: {...}, truncation: {levels}}  (truncation optional)
//   composition  {base: <process>, N, truncation: {levels}}
//   urn          {N, basis: <basis>, rho: [...]}
//
// Family params: mm-infinity {lambda, mu}; linear {lambda, mu, beta};
// two-urn {a, b, N}; ehrenfest {N, p}.

#include <optional>
#include <set>
#include <string>
#include <variant>
#include <vector>

#include <json.hpp>

#include "mvk/basis.hpp"
#include "mvk/birth_death.hpp"
#include "mvk/composition.hpp"
#include "mvk/error.hpp"
#include "mvk/scalar.hpp"
#include "mvk/sim.hpp"

namespace mvk {

using Json = nlohmann::json;

struct ReadOptions {
  /// Accept bare JSON floats as scalars.
  bool allow_float = false;
};

namespace detail {

inline void require_keys(const Json& j, const std::set<std::string>& allowed, const std::string& what) {
  if (!j.is_object()) throw ValidationError(what + " must be a JSON object");
  for (const auto& [k, v] : j.items()) {
    if (!allowed.count(k)) throw ValidationError(what + ": unknown field '" + k + "'");
  }
}

inline const Json& field(const Json& j, const std::string& key, const std::string& what) {
  const auto it = j.find(key);
  if (it == j.end()) throw ValidationError(what + ": missing field '" + key + "'");
  return *it;
}

inline int int_field(const Json& j, const std::string& key, const std::string& what) {
  const auto& v = field(j, key, what);
  if (!v.is_number_integer()) throw ValidationError(what + ": '" + key + "' must be an integer");
  return v.get<int>();
}

}  // namespace detail

template <class T>
T scalar_from_json(const Json& j, const ReadOptions& opt = {}) {
  if (j.is_string()) return parse_scalar<T>(j.get<std::string>());
  if (j.is_number_integer()) return T(j.get<long long>());
  if (j.is_number_float()) {
    if (!opt.allow_float) throw ValidationError("float literal " + j.dump() + " needs the float opt-in");
    if constexpr (is_exact_v<T>) {
      return parse_scalar<T>(j.dump());
    } else {
      return j.get<double>();
    }
  }
  throw ValidationError("expected a number or \"num/den\" string, got " + j.dump());
}

/// Rationals become strings, doubles numbers.
template <class T>
Json scalar_to_json(const T& v) {
  if constexpr (is_exact_v<T>) {
    return v.str();
  } else {
    return v;
  }
}

template <class T>
std::vector<T> vector_from_json(const Json& j, const ReadOptions& opt, const std::string& what) {
  if (!j.is_array()) throw ValidationError(what + " must be an array");
  std::vector<T> out;
  for (const auto& v : j) out.push_back(scalar_from_json<T>(v, opt));
  return out;
}

template <class T>
Json vector_to_json(const std::vector<T>& v) {
  Json a = Json::array();
  for (const auto& x : v) a.push_back(scalar_to_json(x));
  return a;
}

template <class T>
Json basis_to_json(const Basis<T>& b) {
  Json u = Json::array();
  for (const auto& row : b.table()) u.push_back(vector_to_json(row));
  return {{"d", b.dim()}, {"p", vector_to_json(b.p())}, {"u", u}, {"a", vector_to_json(b.norms())}};
}

template <class T>
Basis<T> basis_from_json(const Json& j, const ReadOptions& opt = {}) {
  detail::require_keys(j, {"d", "p", "u", "a"}, "basis");
  auto p = vector_from_json<T>(detail::field(j, "p", "basis"), opt, "basis.p");
  const auto& ju = detail::field(j, "u", "basis");
  if (!ju.is_array()) throw ValidationError("basis.u must be an array of rows");
  Matrix<T> u;
  for (const auto& row : ju) u.push_back(vector_from_json<T>(row, opt, "basis.u row"));
  if (j.contains("d") && detail::int_field(j, "d", "basis") != static_cast<int>(p.size())) {
    throw ValidationError("basis.d differs from the length of p");
  }
  const double tol = is_exact_v<T> ? 0.0 : 1e-10;
  if (j.contains("a")) {
    const auto a = vector_from_json<T>(j["a"], opt, "basis.a");
    return Basis<T>(std::move(p), std::move(u), a, tol);
  }
  return Basis<T>(std::move(p), std::move(u), tol);
}

template <class T>
struct ProcessSpec {
  BirthDeathSpec<T> spec;
  std::optional<int> truncation;
};

template <class T>
Json process_to_json(const BirthDeathSpec<T>& s, std::optional<int> truncation = std::nullopt) {
  Json params;
  switch (s.family) {
    case Family::MMInfinity: params = {{"lambda", scalar_to_json(s.lambda)}, {"mu", scalar_to_json(s.mu)}}; break;
    case Family::LinearBDP:
      params = {{"lambda", scalar_to_json(s.lambda)}, {"mu", scalar_to_json(s.mu)}, {"beta", scalar_to_json(s.beta)}};
      break;
    case Family::TwoUrn: params = {{"a", scalar_to_json(s.a)}, {"b", scalar_to_json(s.b)}, {"N", s.N}}; break;
    case Family::Ehrenfest: params = {{"N", s.N}, {"p", scalar_to_json(s.p)}}; break;
    case Family::Custom: throw UnsupportedError("custom rates cannot be serialized");
  }
  Json j = {{"family", family_name(s.family)}, {"params", params}};
  if (truncation) j["truncation"] = {{"levels", *truncation}};
  return j;
}

namespace detail {

inline std::optional<int> truncation_from_json(const Json& j, const std::string& what) {
  if (!j.contains("truncation")) return std::nullopt;
  const auto& t = j["truncation"];
  if (t.is_number_integer()) return t.get<int>();
  require_keys(t, {"levels"}, what + ".truncation");
  return int_field(t, "levels", what + ".truncation");
}

}  // namespace detail

template <class T>
ProcessSpec<T> process_from_json(const Json& j, const ReadOptions& opt = {}) {
  detail::require_keys(j, {"family", "params", "truncation"}, "process");
  const auto& fam = detail::field(j, "family", "process");
  if (!fam.is_string()) throw ValidationError("process.family must be a string");
  const std::string f = fam.get<std::string>();
  const auto& prm = detail::field(j, "params", "process");
  auto get = [&](const char* k) { return scalar_from_json<T>(detail::field(prm, k, "process.params"), opt); };
  ProcessSpec<T> out;
  if (f == "mm-infinity") {
    detail::require_keys(prm, {"lambda", "mu"}, "process.params");
    out.spec = BirthDeathSpec<T>::mm_infinity(get("lambda"), get("mu"));
  } else if (f == "linear") {
    detail::require_keys(prm, {"lambda", "mu", "beta"}, "process.params");
    out.spec = BirthDeathSpec<T>::linear(get("lambda"), get("mu"), get("beta"));
  } else if (f == "two-urn") {
    detail::require_keys(prm, {"a", "b", "N"}, "process.params");
    out.spec = BirthDeathSpec<T>::two_urn(get("a"), get("b"), detail::int_field(prm, "N", "process.params"));
  } else if (f == "ehrenfest") {
    detail::require_keys(prm, {"N", "p"}, "process.params");
    out.spec = BirthDeathSpec<T>::ehrenfest(detail::int_field(prm, "N", "process.params"), get("p"));
  } else {
    throw ValidationError("unknown family '" + f + "' (mm-infinity, linear, two-urn, ehrenfest)");
  }
  out.truncation = detail::truncation_from_json(j, "process");
  return out;
}

template <class T>
Json composition_to_json(const CompositionProcess<T>& c) {
  Json j = {{"base", process_to_json(c.base)}, {"N", c.N}};
  if (c.truncated()) j["truncation"] = {{"levels", c.levels}};
  return j;
}

template <class T>
CompositionProcess<T> composition_from_json(const Json& j, const ReadOptions& opt = {}) {
  detail::require_keys(j, {"base", "N", "truncation"}, "composition");
  const auto base = process_from_json<T>(detail::field(j, "base", "composition"), opt);
  auto trunc = detail::truncation_from_json(j, "composition");
  if (!trunc) trunc = base.truncation;
  return CompositionProcess<T>(base.spec, detail::int_field(j, "N", "composition"), trunc);
}

template <class T>
Json urn_to_json(const UrnSpec<T>& u) {
  return {{"N", u.N}, {"basis", basis_to_json(u.basis)}, {"rho", vector_to_json(u.rho)}};
}

template <class T>
UrnSpec<T> urn_from_json(const Json& j, const ReadOptions& opt = {}) {
  detail::require_keys(j, {"N", "basis", "rho"}, "urn");
  return UrnSpec<T>(basis_from_json<T>(detail::field(j, "basis", "urn"), opt),
                    vector_from_json<T>(detail::field(j, "rho", "urn"), opt, "urn.rho"), detail::int_field(j, "N", "urn"),
                    is_exact_v<T> ? 0.0 : 1e-10);
}

template <class T>
using AnySpec = std::variant<ProcessSpec<T>, CompositionProcess<T>, UrnSpec<T>>;

/// Dispatches on the distinguishing field: base (composition), rho (urn) or family (process).
template <class T>
AnySpec<T> spec_from_json(const Json& j, const ReadOptions& opt = {}) {
  if (!j.is_object()) throw ValidationError("spec must be a JSON object");
  if (j.contains("base")) return composition_from_json<T>(j, opt);
  if (j.contains("rho")) return urn_from_json<T>(j, opt);
  if (j.contains("family")) return process_from_json<T>(j, opt);
  throw ValidationError("spec has none of 'family', 'base', 'rho'");
}

inline Json state_to_json(std::span<const int> s) { return Json(std::vector<int>(s.begin(), s.end())); }

inline std::vector<int> state_from_json(const Json& j, const std::string& what) {
  if (!j.is_array()) throw ValidationError(what + " must be an array of counts");
  std::vector<int> out;
  for (const auto& v : j) {
    if (!v.is_number_integer()) throw ValidationError(what + " entries must be integers");
    out.push_back(v.get<int>());
  }
  return out;
}

/// {i, j, t, p, truncation_error_estimate}
template <class T>
Json km_record(int i, int j, const T& t, const KmResult<T>& r) {
  return {{"i", i},
          {"j", j},
          {"t", scalar_to_json(t)},
          {"p", scalar_to_json(r.value)},
          {"truncation_error_estimate", r.tail_estimate + r.rounding_estimate},
          {"flagged", r.flagged}};
}

/// {x, y, t, p, method}
template <class T>
Json transition_record(const Composition& x, const Composition& y, const T& t, const T& p, const std::string& method) {
  return {{"x", state_to_json(x.values())},
          {"y", state_to_json(y.values())},
          {"t", scalar_to_json(t)},
          {"p", scalar_to_json(p)},
          {"method", method}};
}

/// {config, frequencies: {state: [count, freq, se]}, overflow, chi_square, p_value}
inline Json simulation_record(const SimConfig& cfg, const EmpiricalDistribution& e,
                              const std::optional<ChiSquare>& chi = std::nullopt) {
  Json freq = Json::object();
  for (const auto& [s, c] : e.counts) {
    freq[Composition(s).str()] = {c, e.frequency(s), e.standard_error(s)};
  }
  Json j = {{"config",
             {{"seed", cfg.seed}, {"replicates", cfg.replicates}, {"t", cfg.t}, {"x0", state_to_json(cfg.x0)}}},
            {"frequencies", freq},
            {"overflow", e.overflow}};
  j["chi_square"] = chi ? Json(chi->statistic) : Json(nullptr);
  j["p_value"] = chi ? Json(chi->p_value) : Json(nullptr);
  if (chi) j["dof"] = chi->dof;
  return j;
}

/// Machine-readable error record.
inline Json error_record(const std::string& kind, const std::string& message) {
  return {{"error", {{"kind", kind}, {"message", message}}}};
}

}  // namespace mvk

#endif  // MVK_IO_HPP
