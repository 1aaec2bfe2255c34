#pragma once

// Experiment configuration: flat `key = value` text with `#` comments.
//
// Every key has a default, so an empty file is a valid config. Serialization
// writes all keys sorted by name, which makes the text (and its hash)
// independent of the order fields were written in.

#include <cmath>
#include <cstdint>
#include <cstdio>
#include <functional>
#include <map>
#include <numbers>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "awc/coefficients.hpp"
#include "awc/core.hpp"
#include "awc/datagen.hpp"
#include "awc/experiments/text.hpp"

namespace awc::experiments {

class ConfigError : public std::runtime_error {
 public:
  ConfigError(std::string field, const std::string& message)
      : std::runtime_error(field.empty() ? message : field + ": " + message), field_(std::move(field)) {}

  const std::string& field() const { return field_; }

 private:
  std::string field_;
};

enum class DataSource { circle_gap, uniform, file };

struct ExperimentConfig {
  // Dataset
  DataSource source = DataSource::circle_gap;
  std::size_t n = 500;
  double eps = 0.9;
  ManifoldSpec::Kind manifold = ManifoldSpec::Kind::circle;
  double manifold_size = 1.0;
  std::size_t ambient_dim = 2;
  double noise = 0.0;
  std::string input;
  bool labeled = false;

  // Schedule: h0 * b^k for k = 0..K unless explicit radii are given.
  double h0 = 0.25;
  double b = std::numbers::sqrt2;
  int K = 4;
  std::vector<double> radii;

  // λ: "auto" (suggest_lambda with alpha), one value, or a grid to search.
  bool lambda_auto = true;
  std::vector<double> lambdas;
  double alpha = 4.0;

  GeometryParams geometry{1, 0.0, 0.0, 1.5};
  CoefficientRadius coefficient_radius = CoefficientRadius::previous;
  double h_eval = 1.0;

  // Sweeps
  std::vector<double> sweep_eps;
  std::vector<std::size_t> sweep_n;
  std::size_t repeats = 100;

  std::uint64_t seed = 1;
  unsigned threads = 1;

  BandwidthSchedule schedule() const {
    if (!radii.empty()) return BandwidthSchedule{radii};
    return build_schedule(h0, b, K);
  }

  /// λ for a single run on n points; throws unless λ is auto or one value.
  double fixed_lambda(std::size_t points) const {
    if (lambda_auto) return suggest_lambda(static_cast<long long>(points), alpha);
    if (lambdas.size() != 1) throw ConfigError("lambda", "expected a single value");
    return lambdas.front();
  }

  void validate() const;

  friend bool operator==(const ExperimentConfig&, const ExperimentConfig&) = default;
};

namespace detail {

inline double require_double(std::string_view field, std::string_view text) {
  const auto v = parse_double(text);
  if (!v) throw ConfigError(std::string(field), "not a number: '" + std::string(text) + "'");
  return *v;
}

template <class Int>
Int require_integer(std::string_view field, std::string_view text) {
  const auto v = parse_integer<Int>(text);
  if (!v) throw ConfigError(std::string(field), "not an integer: '" + std::string(text) + "'");
  return *v;
}

// Comma-separated numbers; an item "a:step:b" expands to a, a+step, ..., b.
inline std::vector<double> parse_number_list(std::string_view field, std::string_view text) {
  std::vector<double> out;
  if (trim(text).empty()) return out;
  for (auto item : split(text, ',')) {
    const auto parts = split(item, ':');
    if (parts.size() == 1) {
      out.push_back(require_double(field, item));
    } else if (parts.size() == 3) {
      const double lo = require_double(field, parts[0]);
      const double step = require_double(field, parts[1]);
      const double hi = require_double(field, parts[2]);
      if (!(step > 0.0) || !(hi >= lo) || !std::isfinite(hi))
        throw ConfigError(std::string(field), "bad range '" + std::string(item) + "'");
      const auto count = static_cast<std::size_t>(std::floor((hi - lo) / step + 1e-9));
      if (count > 1000000) throw ConfigError(std::string(field), "range too long");
      for (std::size_t k = 0; k <= count; ++k) out.push_back(lo + step * static_cast<double>(k));
    } else {
      throw ConfigError(std::string(field), "bad list item '" + std::string(item) + "'");
    }
  }
  return out;
}

inline std::string join_numbers(const std::vector<double>& v) {
  std::string s;
  for (std::size_t k = 0; k < v.size(); ++k) s += (k ? "," : "") + format_shortest(v[k]);
  return s;
}

inline bool require_bool(std::string_view field, std::string_view text) {
  if (text == "true" || text == "1" || text == "yes") return true;
  if (text == "false" || text == "0" || text == "no") return false;
  throw ConfigError(std::string(field), "expected true or false");
}

struct Field {
  std::function<void(ExperimentConfig&, std::string_view)> set;
  std::function<std::string(const ExperimentConfig&)> get;
};

template <class Enum>
struct EnumNames {
  std::vector<std::pair<Enum, std::string_view>> names;

  Enum parse(std::string_view field, std::string_view text) const {
    for (const auto& [e, name] : names)
      if (name == text) return e;
    std::string allowed;
    for (const auto& [e, name] : names) allowed += (allowed.empty() ? "" : ", ") + std::string(name);
    throw ConfigError(std::string(field), "expected one of " + allowed);
  }

  std::string format(Enum v) const {
    for (const auto& [e, name] : names)
      if (e == v) return std::string(name);
    return "?";
  }
};

inline const EnumNames<DataSource>& source_names() {
  static const EnumNames<DataSource> n{{{DataSource::circle_gap, "circle_gap"},
                                        {DataSource::uniform, "uniform"},
                                        {DataSource::file, "file"}}};
  return n;
}

inline const EnumNames<ManifoldSpec::Kind>& manifold_names() {
  static const EnumNames<ManifoldSpec::Kind> n{{{ManifoldSpec::Kind::circle, "circle"},
                                                {ManifoldSpec::Kind::sphere2, "sphere2"},
                                                {ManifoldSpec::Kind::segment, "segment"}}};
  return n;
}

inline const EnumNames<CoefficientRadius>& radius_names() {
  static const EnumNames<CoefficientRadius> n{
      {{CoefficientRadius::previous, "previous"}, {CoefficientRadius::current, "current"}}};
  return n;
}

#define AWC_DOUBLE_FIELD(key, member)                                                        \
  {key, Field{[](ExperimentConfig& c, std::string_view v) { c.member = require_double(key, v); }, \
              [](const ExperimentConfig& c) { return format_shortest(c.member); }}}

#define AWC_INT_FIELD(key, member, type)                                                            \
  {key, Field{[](ExperimentConfig& c, std::string_view v) { c.member = require_integer<type>(key, v); }, \
              [](const ExperimentConfig& c) { return std::to_string(c.member); }}}

inline const std::map<std::string, Field, std::less<>>& fields() {
  static const std::map<std::string, Field, std::less<>> table{
      {"source", Field{[](ExperimentConfig& c, std::string_view v) { c.source = source_names().parse("source", v); },
                       [](const ExperimentConfig& c) { return source_names().format(c.source); }}},
      AWC_INT_FIELD("n", n, std::size_t),
      AWC_DOUBLE_FIELD("eps", eps),
      {"manifold",
       Field{[](ExperimentConfig& c, std::string_view v) { c.manifold = manifold_names().parse("manifold", v); },
             [](const ExperimentConfig& c) { return manifold_names().format(c.manifold); }}},
      AWC_DOUBLE_FIELD("manifold_size", manifold_size),
      AWC_INT_FIELD("ambient_dim", ambient_dim, std::size_t),
      AWC_DOUBLE_FIELD("noise", noise),
      {"input", Field{[](ExperimentConfig& c, std::string_view v) { c.input = std::string(v); },
                      [](const ExperimentConfig& c) { return c.input; }}},
      {"labeled", Field{[](ExperimentConfig& c, std::string_view v) { c.labeled = require_bool("labeled", v); },
                        [](const ExperimentConfig& c) { return std::string(c.labeled ? "true" : "false"); }}},
      AWC_DOUBLE_FIELD("h0", h0),
      AWC_DOUBLE_FIELD("b", b),
      AWC_INT_FIELD("K", K, int),
      {"radii", Field{[](ExperimentConfig& c, std::string_view v) { c.radii = parse_number_list("radii", v); },
                      [](const ExperimentConfig& c) { return join_numbers(c.radii); }}},
      {"lambda", Field{[](ExperimentConfig& c, std::string_view v) {
                         c.lambda_auto = v == "auto";
                         c.lambdas = c.lambda_auto ? std::vector<double>{} : parse_number_list("lambda", v);
                       },
                       [](const ExperimentConfig& c) {
                         return c.lambda_auto ? std::string("auto") : join_numbers(c.lambdas);
                       }}},
      AWC_DOUBLE_FIELD("alpha", alpha),
      AWC_INT_FIELD("d", geometry.d, int),
      AWC_DOUBLE_FIELD("kappa", geometry.kappa),
      AWC_DOUBLE_FIELD("r_xi", geometry.r_xi),
      AWC_DOUBLE_FIELD("b_prime", geometry.b_prime),
      {"coefficient_radius",
       Field{[](ExperimentConfig& c, std::string_view v) {
               c.coefficient_radius = radius_names().parse("coefficient_radius", v);
             },
             [](const ExperimentConfig& c) { return radius_names().format(c.coefficient_radius); }}},
      AWC_DOUBLE_FIELD("h_eval", h_eval),
      {"sweep_eps", Field{[](ExperimentConfig& c, std::string_view v) { c.sweep_eps = parse_number_list("sweep_eps", v); },
                          [](const ExperimentConfig& c) { return join_numbers(c.sweep_eps); }}},
      {"sweep_n", Field{[](ExperimentConfig& c, std::string_view v) {
                          c.sweep_n.clear();
                          if (trim(v).empty()) return;
                          for (auto item : split(v, ',')) c.sweep_n.push_back(require_integer<std::size_t>("sweep_n", item));
                        },
                        [](const ExperimentConfig& c) {
                          std::string s;
                          for (std::size_t k = 0; k < c.sweep_n.size(); ++k) s += (k ? "," : "") + std::to_string(c.sweep_n[k]);
                          return s;
                        }}},
      AWC_INT_FIELD("repeats", repeats, std::size_t),
      AWC_INT_FIELD("seed", seed, std::uint64_t),
      AWC_INT_FIELD("threads", threads, unsigned),
  };
  return table;
}

#undef AWC_DOUBLE_FIELD
#undef AWC_INT_FIELD

template <class Fn>
void check(bool ok, const char* field, Fn&& message) {
  if (!ok) throw ConfigError(field, message());
}

}  // namespace detail

/// Parses config text. Unknown keys, duplicates and malformed values raise
/// ConfigError naming the field; the result is not yet validated.
inline ExperimentConfig parse_config(std::string_view text) {
  ExperimentConfig cfg;
  std::map<std::string, int, std::less<>> seen;
  std::size_t line_no = 0;
  for (auto raw : split(text, '\n')) {
    ++line_no;
    const auto hash = raw.find('#');
    const auto line = trim(raw.substr(0, hash));
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string_view::npos)
      throw ConfigError("", "line " + std::to_string(line_no) + ": expected 'key = value'");
    const auto key = trim(line.substr(0, eq));
    const auto value = trim(line.substr(eq + 1));
    const auto it = detail::fields().find(key);
    if (it == detail::fields().end()) throw ConfigError(std::string(key), "unknown key");
    if (seen[std::string(key)]++) throw ConfigError(std::string(key), "given more than once");
    it->second.set(cfg, value);
  }
  return cfg;
}

/// Canonical text: every key, sorted, one per line.
inline std::string serialize_config(const ExperimentConfig& cfg) {
  std::string out;
  for (const auto& [key, field] : detail::fields()) out += key + " = " + field.get(cfg) + "\n";
  return out;
}

/// 64-bit FNV-1a of the canonical text, as 16 hex digits.
inline std::string config_hash(const ExperimentConfig& cfg) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char ch : serialize_config(cfg)) {
    h ^= ch;
    h *= 0x100000001b3ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

inline void ExperimentConfig::validate() const {
  using detail::check;
  check(n >= 2, "n", [] { return "must be >= 2"; });
  check(eps >= 0.0 && eps <= 1.0, "eps", [] { return "must lie in [0, 1]"; });
  check(manifold_size > 0.0 && std::isfinite(manifold_size), "manifold_size", [] { return "must be positive"; });
  check(noise >= 0.0 && std::isfinite(noise), "noise", [] { return "must be >= 0"; });
  check(source != DataSource::file || !input.empty(), "input", [] { return "required when source = file"; });
  if (source == DataSource::uniform) {
    try {
      ManifoldSpec{manifold, manifold_size, ambient_dim}.validate();
    } catch (const std::exception& e) {
      throw ConfigError("ambient_dim", e.what());
    }
  }
  try {
    schedule().validate();
  } catch (const std::exception& e) {
    throw ConfigError(radii.empty() ? "h0, b, K" : "radii", e.what());
  }
  try {
    geometry.validate();
  } catch (const std::exception& e) {
    throw ConfigError("d, kappa, r_xi, b_prime", e.what());
  }
  check(lambda_auto || !lambdas.empty(), "lambda", [] { return "must be auto or at least one value"; });
  check(alpha > 0.0 && std::isfinite(alpha), "alpha", [] { return "must be positive"; });
  check(h_eval > 0.0 && std::isfinite(h_eval), "h_eval", [] { return "must be positive"; });
  for (double e : sweep_eps) check(e >= 0.0 && e <= 1.0, "sweep_eps", [] { return "values must lie in [0, 1]"; });
  for (std::size_t m : sweep_n) check(m >= 2, "sweep_n", [] { return "values must be >= 2"; });
  check(repeats >= 1, "repeats", [] { return "must be >= 1"; });
  check(threads >= 1, "threads", [] { return "must be >= 1"; });
}

}  // namespace awc::experiments
