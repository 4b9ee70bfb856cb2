#pragma once

#include <charconv>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <cstdlib>
#include <limits>
#include <optional>
#include <ostream>
#include <string>
#include <string_view>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "gcdmoment/convergence.hpp"
#include "gcdmoment/counting.hpp"
#include "gcdmoment/moments.hpp"

namespace gcdmoment::cli {

using Json = nlohmann::ordered_json;

// ---------------------------------------------------------------------------
// Token parsing

inline double parse_double_strict(std::string_view sv) {
  bool negative = false;
  if (!sv.empty() && (sv.front() == '+' || sv.front() == '-')) {
    negative = sv.front() == '-';
    sv.remove_prefix(1);
  }
  double value = 0.0;
  const auto result = std::from_chars(sv.data(), sv.data() + sv.size(), value);
  if (sv.empty() || result.ec != std::errc() || result.ptr != sv.data() + sv.size()) {
    throw std::domain_error("not a decimal number: '" + std::string(sv) + "'");
  }
  return negative ? -value : value;
}

inline bool is_integer_token(std::string_view sv) {
  if (!sv.empty() && (sv.front() == '+' || sv.front() == '-')) sv.remove_prefix(1);
  if (sv.empty()) return false;
  for (char c : sv) {
    if (c < '0' || c > '9') return false;
  }
  return true;
}

/// The token's shape selects the arithmetic path: an optionally signed
/// integer literal is an exact integer exponent; "a+bi" / "a-bi" or a
/// decimal literal is a complex-double exponent.
inline Exponent parse_exponent(const std::string& token) {
  if (is_integer_token(token)) {
    std::string digits = token;
    if (!digits.empty() && digits.front() == '+') digits.erase(digits.begin());
    return Exponent::exact(BigInt(digits));
  }
  if (!token.empty() && token.back() == 'i') {
    const std::string_view body(token.data(), token.size() - 1);
    for (std::size_t pos = body.size(); pos-- > 1;) {
      const char c = body[pos];
      if ((c == '+' || c == '-') && body[pos - 1] != 'e' && body[pos - 1] != 'E') {
        const double re = parse_double_strict(body.substr(0, pos));
        const double im = parse_double_strict(body.substr(pos));
        return Exponent::floating(Complex(re, im));
      }
    }
    throw std::domain_error("malformed exponent '" + token + "': expected a+bi with explicit real part");
  }
  return Exponent::floating(Complex(parse_double_strict(token), 0.0));
}

/// Comma-separated values and ranges: "1,2,10", "1..50", "100..1000..100".
inline std::vector<std::int64_t> parse_int_list(const std::string& token) {
  constexpr std::size_t kMaxValues = 1'000'000;
  auto parse_i64 = [](std::string_view sv) {
    std::int64_t v = 0;
    const auto result = std::from_chars(sv.data(), sv.data() + sv.size(), v);
    if (sv.empty() || result.ec != std::errc() || result.ptr != sv.data() + sv.size()) {
      throw std::domain_error("not an integer: '" + std::string(sv) + "'");
    }
    return v;
  };
  std::vector<std::int64_t> values;
  std::string_view rest = token;
  while (!rest.empty()) {
    const std::size_t comma = rest.find(',');
    const std::string_view item = rest.substr(0, comma);
    rest = comma == std::string_view::npos ? std::string_view{} : rest.substr(comma + 1);
    const std::size_t dots = item.find("..");
    if (dots == std::string_view::npos) {
      values.push_back(parse_i64(item));
    } else {
      const std::int64_t from = parse_i64(item.substr(0, dots));
      std::string_view tail = item.substr(dots + 2);
      std::int64_t step = 1;
      const std::size_t dots2 = tail.find("..");
      if (dots2 != std::string_view::npos) {
        step = parse_i64(tail.substr(dots2 + 2));
        tail = tail.substr(0, dots2);
      }
      const std::int64_t to = parse_i64(tail);
      if (step < 1) throw std::domain_error("range step must be >= 1");
      if (to < from) throw std::domain_error("descending range '" + std::string(item) + "'");
      for (std::int64_t v = from; v <= to; v += step) {
        values.push_back(v);
        if (values.size() > kMaxValues) throw std::domain_error("list expansion too large");
      }
    }
    if (values.size() > kMaxValues) throw std::domain_error("list expansion too large");
  }
  if (values.empty()) throw std::domain_error("empty list");
  return values;
}

inline std::vector<Exponent> parse_exponent_set(const std::string& token) {
  std::vector<Exponent> values;
  std::string_view rest = token;
  while (!rest.empty()) {
    const std::size_t comma = rest.find(',');
    values.push_back(parse_exponent(std::string(rest.substr(0, comma))));
    rest = comma == std::string_view::npos ? std::string_view{} : rest.substr(comma + 1);
  }
  if (values.empty()) throw std::domain_error("empty exponent set");
  return values;
}

inline std::uint64_t resolve_guard(const std::optional<std::uint64_t>& cli_value) {
  if (cli_value) return *cli_value;
  if (const char* env = std::getenv("GCDMOMENT_GUARD")) {
    const std::string_view sv(env);
    std::uint64_t v = 0;
    const auto result = std::from_chars(sv.data(), sv.data() + sv.size(), v);
    if (sv.empty() || result.ec != std::errc() || result.ptr != sv.data() + sv.size()) {
      throw std::domain_error("GCDMOMENT_GUARD must be an unsigned integer, got '" + std::string(sv) + "'");
    }
    return v;
  }
  return kDefaultBruteGuard;
}

// ---------------------------------------------------------------------------
// Rendering

inline Json scalar_to_json(const Scalar& s) {
  if (s.is_exact()) {
    return Json{{"type", "rational"},
                {"num", numerator(s.rational()).str()},
                {"den", denominator(s.rational()).str()}};
  }
  const Complex z = s.complex_value();
  return Json{{"type", "complex"}, {"re", z.real()}, {"im", z.imag()}};
}

/// Text rendering of a serialized result object; by construction identical
/// to the text-mode rendering of the same value.
inline std::string scalar_json_to_text(const Json& j) {
  if (j.at("type").get<std::string>() == "rational") {
    const std::string num = j.at("num").get<std::string>();
    const std::string den = j.at("den").get<std::string>();
    return den == "1" ? num : num + "/" + den;
  }
  return format_complex(Complex(j.at("re").get<double>(), j.at("im").get<double>()));
}

// ---------------------------------------------------------------------------
// Sweeps (shared between the CLI and the acceptance suite)

struct VerifySummary {
  std::uint64_t checked = 0;
  std::uint64_t brute_compared = 0;
  std::uint64_t brute_skipped = 0;
  std::uint64_t mismatches = 0;
  std::string first_counterexample;
};

namespace detail {

inline bool values_agree(const Scalar& a, const Scalar& b) {
  if (a.is_exact() && b.is_exact()) return a.rational() == b.rational();
  const Complex za = a.complex_value();
  const Complex zb = b.complex_value();
  const double scale = std::max({1.0, std::abs(za), std::abs(zb)});
  return std::abs(za - zb) <= 1e-10 * scale;
}

}  // namespace detail

/// Cross-checks the closed-form, universal and brute-force evaluators over
/// the full grid n <= n_max, r <= r_max, w in w_set. The brute oracle is
/// skipped (never failed) wherever n^r exceeds the guard.
inline VerifySummary verify_sweep(std::uint64_t n_max, std::int64_t r_max,
                                  const std::vector<Exponent>& w_set, std::uint64_t guard) {
  if (n_max < 1 || r_max < 1 || w_set.empty()) {
    throw std::domain_error("verify_sweep: need n_max >= 1, r_max >= 1 and a nonempty exponent set");
  }
  VerifySummary summary;
  auto record = [&](std::uint64_t n, std::int64_t r, const Exponent& w, const char* what,
                    const Scalar& lhs, const Scalar& rhs) {
    ++summary.mismatches;
    if (summary.first_counterexample.empty()) {
      summary.first_counterexample = "n=" + std::to_string(n) + " r=" + std::to_string(r) +
                                     " w=" + w.to_text() + ": " + what + " " + lhs.to_text() +
                                     " != " + rhs.to_text();
    }
  };
  for (std::uint64_t n = 1; n <= n_max; ++n) {
    for (std::int64_t r = 1; r <= r_max; ++r) {
      const bool brute_fits = !power_exceeds(n, r, guard);
      for (const Exponent& w : w_set) {
        ++summary.checked;
        const MomentResult closed = moment_closed(n, r, w);
        const MomentResult universal = moment_universal(n, r, w);
        if (!detail::values_agree(closed.value, universal.value)) {
          record(n, r, w, "closed vs universal", closed.value, universal.value);
        }
        if (brute_fits) {
          ++summary.brute_compared;
          const MomentResult brute = moment_brute(n, r, w, guard);
          if (!detail::values_agree(closed.value, brute.value)) {
            record(n, r, w, "closed vs brute", closed.value, brute.value);
          }
        } else {
          ++summary.brute_skipped;
        }
      }
    }
  }
  return summary;
}

struct IdentitySummary {
  std::uint64_t samples = 0;
  std::uint64_t failures = 0;
  std::string first_failure;
};

/// Samples seeded random rationals with numerator and denominator in
/// [-50, 50] and requires both series identities to vanish exactly.
inline IdentitySummary identity_sweep(std::int64_t terms, std::int64_t order,
                                      std::uint64_t samples, std::uint64_t seed) {
  if (samples < 1) throw std::domain_error("identity_sweep: samples must be >= 1");
  const PolySpec spec{terms, order};
  gcdmoment::detail::validate(spec);
  SplitMix64 rng(seed);
  auto draw = [&rng]() {
    const std::int64_t num = static_cast<std::int64_t>(rng.next() % 101) - 50;
    std::int64_t den = 0;
    while (den == 0) den = static_cast<std::int64_t>(rng.next() % 101) - 50;
    return make_rational(BigInt(num), BigInt(den));
  };
  IdentitySummary summary;
  summary.samples = samples;
  for (std::uint64_t s = 0; s < samples; ++s) {
    const Rational x = draw();
    const Rational y = draw();
    const Rational reflection = reflection_residual(spec, x);
    const Rational extension = extension_residual(spec, x, y);
    if (reflection != 0 || extension != 0) {
      ++summary.failures;
      if (summary.first_failure.empty()) {
        summary.first_failure = "x=" + format_rational(x) + " y=" + format_rational(y) +
                                " reflection=" + format_rational(reflection) +
                                " extension=" + format_rational(extension);
      }
    }
  }
  return summary;
}

struct BenchRow {
  std::int64_t r = 1;
  double closed_seconds = 0.0;
  std::optional<double> brute_seconds;
};

struct BenchReport {
  std::vector<BenchRow> rows;
  double pearson_r = 0.0;  // correlation of closed-form time against r
};

namespace detail {

inline double pearson(const std::vector<double>& xs, const std::vector<double>& ys) {
  const std::size_t n = xs.size();
  if (n < 2) return 0.0;
  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    mx += xs[i];
    my += ys[i];
  }
  mx /= static_cast<double>(n);
  my /= static_cast<double>(n);
  double cov = 0.0, vx = 0.0, vy = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    cov += (xs[i] - mx) * (ys[i] - my);
    vx += (xs[i] - mx) * (xs[i] - mx);
    vy += (ys[i] - my) * (ys[i] - my);
  }
  if (vx <= 0.0 || vy <= 0.0) return 0.0;
  return cov / std::sqrt(vx * vy);
}

template <typename F>
double time_best_of(int reps, F&& body) {
  using clock = std::chrono::steady_clock;
  double best = std::numeric_limits<double>::infinity();
  for (int i = 0; i < reps; ++i) {
    const auto t0 = clock::now();
    body();
    const auto t1 = clock::now();
    best = std::min(best, std::chrono::duration<double>(t1 - t0).count());
  }
  return best;
}

}  // namespace detail

/// Wall-time of the closed form per r, with brute-force timings while n^r
/// stays within the guard. Each timing is the best of three runs.
inline BenchReport bench_sweep(std::uint64_t n, const Exponent& w,
                               const std::vector<std::int64_t>& r_list, std::uint64_t guard) {
  if (r_list.empty()) throw std::domain_error("bench_sweep: empty r list");
  BenchReport report;
  volatile double sink = 0.0;
  // warm-up outside the measurements
  {
    const MomentResult warm = moment_closed(n, r_list.front(), w);
    sink = sink + static_cast<double>(static_cast<int>(warm.method));
  }
  std::vector<double> rs;
  std::vector<double> times;
  for (const std::int64_t r : r_list) {
    if (r < 1) throw std::domain_error("bench_sweep: every r must be >= 1");
    BenchRow row;
    row.r = r;
    row.closed_seconds = detail::time_best_of(3, [&] {
      const MomentResult m = moment_closed(n, r, w);
      sink = sink + static_cast<double>(static_cast<int>(m.method));
    });
    if (!power_exceeds(n, r, guard)) {
      row.brute_seconds = detail::time_best_of(1, [&] {
        const MomentResult m = moment_brute(n, r, w, guard);
        sink = sink + static_cast<double>(static_cast<int>(m.method));
      });
    }
    rs.push_back(static_cast<double>(r));
    times.push_back(row.closed_seconds);
    report.rows.push_back(row);
  }
  report.pearson_r = detail::pearson(rs, times);
  return report;
}

// ---------------------------------------------------------------------------
// Command front end

namespace detail {

inline void emit(std::ostream& out, const Json& j) { out << j.dump(2) << "\n"; }

inline std::string format_seconds(double s) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.6f", s);
  return buf;
}

}  // namespace detail

/// Runs one CLI invocation against the given streams. Exit codes: 0 on
/// success, 1 on a failed verification, 2 on usage or domain errors, 3 when
/// a brute-force enumeration is refused by the tuple guard.
inline int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"exact and floating moments of gcd(n, k_1...k_r) over uniform tuples"};
  app.require_subcommand(1);
  std::string output = "text";
  app.add_option("--output", output, "output format")->check(CLI::IsMember({"text", "json"}));

  std::uint64_t n = 1, p = 2, samples = 100'000, seed = 1;
  std::int64_t r = 1, e = 1;
  std::string w_token = "1", method = "closed", w_set_token, r_list_token;
  std::optional<std::uint64_t> guard_opt;

  CLI::App* cmd_moment = app.add_subcommand("moment", "one moment E[gcd(n, k_1...k_r)^w]");
  cmd_moment->add_option("--n", n, "modulus n")->required()->check(CLI::PositiveNumber);
  cmd_moment->add_option("--r", r, "number of factors r")->required()->check(CLI::PositiveNumber);
  cmd_moment->add_option("--w", w_token, "exponent w (integer, decimal or a+bi)")->required();
  cmd_moment->add_option("--method", method, "evaluator")
      ->check(CLI::IsMember({"closed", "universal", "brute", "mc"}));
  cmd_moment->add_option("--samples", samples, "Monte Carlo sample count")->check(CLI::PositiveNumber);
  cmd_moment->add_option("--seed", seed, "Monte Carlo seed");
  cmd_moment->add_option("--guard", guard_opt, "tuple guard for --method brute");

  CLI::App* cmd_pmf = app.add_subcommand("pmf", "exact law of gcd(n, k_1...k_r)");
  cmd_pmf->add_option("--n", n)->required()->check(CLI::PositiveNumber);
  cmd_pmf->add_option("--r", r)->required()->check(CLI::PositiveNumber);

  CLI::App* cmd_count = app.add_subcommand("count", "closed-form tuple counts for modulus p^e");
  cmd_count->add_option("--p", p)->required()->check(CLI::PositiveNumber);
  cmd_count->add_option("--e", e)->required()->check(CLI::PositiveNumber);
  cmd_count->add_option("--r", r)->required()->check(CLI::PositiveNumber);

  std::uint64_t n_max = 1;
  std::int64_t r_max = 1;
  CLI::App* cmd_verify = app.add_subcommand("verify", "closed vs universal vs brute sweep");
  cmd_verify->add_option("--n-max", n_max)->required()->check(CLI::PositiveNumber);
  cmd_verify->add_option("--r-max", r_max)->required()->check(CLI::PositiveNumber);
  cmd_verify->add_option("--w-set", w_set_token, "comma-separated exponents")->required();
  cmd_verify->add_option("--guard", guard_opt, "tuple guard for the brute oracle");

  CLI::App* cmd_limit = app.add_subcommand("limit", "convergence toward n^w as r grows");
  cmd_limit->add_option("--n", n)->required()->check(CLI::PositiveNumber);
  cmd_limit->add_option("--w", w_token)->required();
  cmd_limit->add_option("--r-list", r_list_token, "values/ranges, e.g. 1..50 or 10,20,40")->required();

  CLI::App* cmd_bench = app.add_subcommand("bench", "closed-form vs brute-force wall time");
  cmd_bench->add_option("--n", n)->required()->check(CLI::PositiveNumber);
  cmd_bench->add_option("--w", w_token)->required();
  cmd_bench->add_option("--r-list", r_list_token)->required();
  cmd_bench->add_option("--guard", guard_opt, "tuple guard for brute rows");

  CLI::App* cmd_identity = app.add_subcommand("identity", "exactness of the series identities");
  cmd_identity->add_option("--e", e, "terms index")->required()->check(CLI::PositiveNumber);
  cmd_identity->add_option("--r", r, "order index")->required()->check(CLI::PositiveNumber);
  cmd_identity->add_option("--samples", samples)->required()->check(CLI::PositiveNumber);
  cmd_identity->add_option("--seed", seed)->required();

  for (CLI::App* sub : app.get_subcommands({})) sub->fallthrough();

  std::vector<const char*> argv;
  argv.reserve(args.size() + 1);
  argv.push_back("gcdmoment");
  for (const std::string& a : args) argv.push_back(a.c_str());

  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::Success& help) {
    out << app.help();
    return 0;
  } catch (const CLI::ParseError& parse_error) {
    err << parse_error.what() << "\n";
    return 2;
  }

  const bool json = output == "json";
  try {
    if (*cmd_moment) {
      const Exponent w = parse_exponent(w_token);
      MomentResult result;
      if (method == "closed") {
        result = moment_closed(n, r, w);
      } else if (method == "universal") {
        result = moment_universal(n, r, w);
      } else if (method == "brute") {
        result = moment_brute(n, r, w, resolve_guard(guard_opt));
      } else {
        result = monte_carlo(n, r, w, samples, seed);
      }
      if (json) {
        Json j;
        j["command"] = "moment";
        j["params"] = Json{{"n", std::to_string(n)}, {"r", r}, {"w", w_token}, {"method", method}};
        if (result.mc) {
          j["params"]["samples"] = std::to_string(samples);
          j["params"]["seed"] = std::to_string(seed);
        }
        j["result"] = scalar_to_json(result.value);
        j["method"] = std::string(method_label(result.method));
        if (result.mc) {
          j["mc"] = Json{{"samples", std::to_string(result.mc->samples)},
                         {"std_error", result.mc->std_error}};
        }
        detail::emit(out, j);
      } else {
        out << result.value.to_text() << "\n";
        if (result.mc) {
          out << "# std_error " << format_double(result.mc->std_error) << " samples "
              << result.mc->samples << "\n";
        }
      }
      return 0;
    }

    if (*cmd_pmf) {
      const Pmf law = pmf(n, r);
      if (json) {
        Json j;
        j["command"] = "pmf";
        j["params"] = Json{{"n", std::to_string(n)}, {"r", r}};
        Json rows = Json::array();
        for (const auto& [f, mass] : law.mass) {
          rows.push_back(Json{{"f", std::to_string(f)}, {"mass", scalar_to_json(Scalar(mass))}});
        }
        j["rows"] = std::move(rows);
        detail::emit(out, j);
      } else {
        out << "# divisor mass\n";
        for (const auto& [f, mass] : law.mass) out << f << " " << format_rational(mass) << "\n";
      }
      return 0;
    }

    if (*cmd_count) {
      std::vector<std::pair<std::int64_t, BigInt>> rows;
      for (std::int64_t d = 0; d <= e; ++d) rows.emplace_back(d, count_prime_power(p, e, r, d));
      if (json) {
        Json j;
        j["command"] = "count";
        j["params"] = Json{{"p", std::to_string(p)}, {"e", e}, {"r", r}};
        Json jrows = Json::array();
        for (const auto& [d, count] : rows) {
          jrows.push_back(Json{{"d", d}, {"f", int_pow(BigInt(p), d).str()}, {"count", count.str()}});
        }
        j["rows"] = std::move(jrows);
        detail::emit(out, j);
      } else {
        out << "# d divisor count\n";
        for (const auto& [d, count] : rows) {
          out << d << " " << int_pow(BigInt(p), d).str() << " " << count.str() << "\n";
        }
      }
      return 0;
    }

    if (*cmd_verify) {
      const std::vector<Exponent> w_set = parse_exponent_set(w_set_token);
      const std::uint64_t guard = resolve_guard(guard_opt);
      const VerifySummary summary = verify_sweep(n_max, r_max, w_set, guard);
      if (json) {
        Json j;
        j["command"] = "verify";
        j["params"] = Json{{"n-max", std::to_string(n_max)},
                           {"r-max", r_max},
                           {"w-set", w_set_token},
                           {"guard", std::to_string(guard)}};
        j["result"] = Json{{"checked", summary.checked},
                           {"brute_compared", summary.brute_compared},
                           {"brute_skipped", summary.brute_skipped},
                           {"mismatches", summary.mismatches}};
        if (!summary.first_counterexample.empty()) {
          j["result"]["first_counterexample"] = summary.first_counterexample;
        }
        j["status"] = summary.mismatches == 0 ? "pass" : "fail";
        detail::emit(out, j);
      } else {
        out << "checked " << summary.checked << " combinations: brute compared "
            << summary.brute_compared << ", brute skipped " << summary.brute_skipped << "\n";
        if (summary.mismatches == 0) {
          out << "all evaluators agree\n";
        } else {
          out << "MISMATCH (" << summary.mismatches << "): " << summary.first_counterexample << "\n";
        }
      }
      return summary.mismatches == 0 ? 0 : 1;
    }

    if (*cmd_limit) {
      const Exponent w = parse_exponent(w_token);
      const ConvergenceReport report = convergence_table(n, w, parse_int_list(r_list_token));
      const ConvergenceCondition cond = convergence_condition(n, w);
      if (json) {
        Json j;
        j["command"] = "limit";
        j["params"] = Json{{"n", std::to_string(n)}, {"w", w_token}, {"r-list", r_list_token}};
        j["result"] = Json{{"limit", scalar_to_json(report.limit)},
                           {"guaranteed", report.guaranteed},
                           {"conservative", report.conservative}};
        Json primes = Json::array();
        for (const auto& d : cond.per_prime) {
          primes.push_back(Json{{"p", std::to_string(d.p)},
                                {"abs_pw_minus_one", d.abs_pw_minus_one},
                                {"abs_pwm1_minus_one", d.abs_pwm1_minus_one}});
        }
        j["per_prime"] = std::move(primes);
        Json rows = Json::array();
        for (const auto& row : report.rows) {
          rows.push_back(Json{{"r", row.r},
                              {"value", scalar_to_json(row.moment.value)},
                              {"method", std::string(method_label(row.moment.method))},
                              {"gap", row.gap}});
        }
        j["rows"] = std::move(rows);
        detail::emit(out, j);
      } else {
        out << "# limit " << report.limit.to_text() << " guaranteed "
            << (report.guaranteed ? "true" : "false") << " conservative "
            << (report.conservative ? "true" : "false") << "\n";
        for (const auto& d : cond.per_prime) {
          out << "# p=" << d.p << " |p^w-1|=" << format_double(d.abs_pw_minus_one)
              << " |p^(w-1)-1|=" << format_double(d.abs_pwm1_minus_one) << "\n";
        }
        out << "# r value gap\n";
        for (const auto& row : report.rows) {
          out << row.r << " " << row.moment.value.to_text() << " " << format_double(row.gap) << "\n";
        }
      }
      return 0;
    }

    if (*cmd_bench) {
      const Exponent w = parse_exponent(w_token);
      const std::uint64_t guard = resolve_guard(guard_opt);
      const BenchReport report = bench_sweep(n, w, parse_int_list(r_list_token), guard);
      if (json) {
        Json j;
        j["command"] = "bench";
        j["params"] = Json{{"n", std::to_string(n)},
                           {"w", w_token},
                           {"r-list", r_list_token},
                           {"guard", std::to_string(guard)}};
        Json rows = Json::array();
        for (const auto& row : report.rows) {
          Json jr{{"r", row.r}, {"closed_seconds", row.closed_seconds}};
          if (row.brute_seconds) jr["brute_seconds"] = *row.brute_seconds;
          rows.push_back(std::move(jr));
        }
        j["rows"] = std::move(rows);
        j["pearson_r"] = report.pearson_r;
        detail::emit(out, j);
      } else {
        out << "# r closed_seconds brute_seconds\n";
        for (const auto& row : report.rows) {
          out << row.r << " " << detail::format_seconds(row.closed_seconds) << " "
              << (row.brute_seconds ? detail::format_seconds(*row.brute_seconds) : std::string("-"))
              << "\n";
        }
        out << "# pearson_r " << format_double(report.pearson_r) << "\n";
      }
      return 0;
    }

    if (*cmd_identity) {
      const IdentitySummary summary = identity_sweep(e, r, samples, seed);
      if (json) {
        Json j;
        j["command"] = "identity";
        j["params"] = Json{{"e", e}, {"r", r}, {"samples", std::to_string(samples)},
                           {"seed", std::to_string(seed)}};
        j["result"] = Json{{"samples", summary.samples}, {"failures", summary.failures}};
        if (!summary.first_failure.empty()) j["result"]["first_failure"] = summary.first_failure;
        j["status"] = summary.failures == 0 ? "pass" : "fail";
        detail::emit(out, j);
      } else {
        if (summary.failures == 0) {
          out << summary.samples << " samples at e=" << e << " r=" << r
              << ": all residuals exactly zero\n";
        } else {
          out << "FAIL (" << summary.failures << "/" << summary.samples
              << " samples): " << summary.first_failure << "\n";
        }
      }
      return summary.failures == 0 ? 0 : 1;
    }
  } catch (const ResourceLimitError& limit_error) {
    err << limit_error.what() << "\n";
    return 3;
  } catch (const std::domain_error& domain) {
    err << domain.what() << "\n";
    return 2;
  } catch (const std::exception& unexpected) {
    err << "error: " << unexpected.what() << "\n";
    return 1;
  }
  return 2;  // unreachable with require_subcommand(1)
}

}  // namespace gcdmoment::cli
