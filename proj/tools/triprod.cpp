// triprod: acceptance sweeps as CSV or JSON tables.
//
// Exit codes: 0 ok, 1 a row carries a mathematical error (or a z-score
// above 4), 2 invalid configuration.

#include <algorithm>
#include <array>
#include <charconv>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <functional>
#include <iostream>
#include <numbers>
#include <optional>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "triprod/triprod.hpp"

using namespace triprod;
using json = nlohmann::ordered_json;

namespace {

constexpr int kSchemaVersion = 1;

struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// ---------------------------------------------------------------------------
// Tables.

using Cell = std::variant<std::monostate, double, std::int64_t, std::string>;

struct Table {
  std::vector<std::string> columns;
  std::vector<std::vector<Cell>> rows;
  json meta = json::object();
  bool flagged = false;  // drives exit code 1
};

std::string format_double(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[32];
  const auto r = std::to_chars(buf, buf + sizeof buf, v);  // shortest round-trip, no locale
  return std::string(buf, r.ptr);
}

std::string csv_escape(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

json cell_json(const Cell& c) {
  if (std::holds_alternative<double>(c)) {
    const double v = std::get<double>(c);
    return std::isfinite(v) ? json(v) : json(format_double(v));
  }
  if (std::holds_alternative<std::int64_t>(c)) return std::get<std::int64_t>(c);
  if (std::holds_alternative<std::string>(c)) return std::get<std::string>(c);
  return nullptr;
}

std::string cell_csv(const Cell& c) {
  if (std::holds_alternative<double>(c)) return format_double(std::get<double>(c));
  if (std::holds_alternative<std::int64_t>(c)) return std::to_string(std::get<std::int64_t>(c));
  if (std::holds_alternative<std::string>(c)) return csv_escape(std::get<std::string>(c));
  return "";
}

void write_table(std::ostream& os, const Table& t, const std::string& format) {
  if (format == "json") {
    json rows = json::array();
    for (const auto& r : t.rows) {
      json o = json::object();
      for (std::size_t i = 0; i < t.columns.size(); ++i) o[t.columns[i]] = cell_json(r[i]);
      rows.push_back(std::move(o));
    }
    json doc = json::object();
    doc["meta"] = t.meta;
    doc["rows"] = std::move(rows);
    os << doc.dump(2) << "\n";
    return;
  }
  for (const auto& [k, v] : t.meta.items()) os << "# " << k << ": " << v.dump() << "\n";
  for (std::size_t i = 0; i < t.columns.size(); ++i) os << (i ? "," : "") << t.columns[i];
  os << "\n";
  for (const auto& r : t.rows) {
    for (std::size_t i = 0; i < r.size(); ++i) os << (i ? "," : "") << cell_csv(r[i]);
    os << "\n";
  }
}

// ---------------------------------------------------------------------------
// Parsing helpers.

double parse_real(std::string_view s, const std::string& whole) {
  double v = 0.0;
  const auto r = std::from_chars(s.data(), s.data() + s.size(), v);
  if (r.ec != std::errc() || r.ptr != s.data() + s.size()) throw ConfigError("bad number '" + whole + "'");
  return v;
}

// Accepts 0, 1.5, i, -2i, 0.5+3i, 1e-3-i.
Complex parse_complex(std::string s) {
  std::erase(s, ' ');
  if (s.empty()) throw ConfigError("empty complex value");
  if (s.back() != 'i') return parse_real(s, s);
  const std::string body = s.substr(0, s.size() - 1);
  // Split at the last sign that is not an exponent sign or the leading sign.
  std::size_t split = std::string::npos;
  for (std::size_t k = body.size(); k-- > 1;) {
    if ((body[k] == '+' || body[k] == '-') && body[k - 1] != 'e' && body[k - 1] != 'E') {
      split = k;
      break;
    }
  }
  const std::string re = split == std::string::npos ? "" : body.substr(0, split);
  std::string im = split == std::string::npos ? body : body.substr(split);
  if (im.empty() || im == "+") im = "1";
  if (im == "-") im = "-1";
  if (im.front() == '+') im.erase(0, 1);
  return {re.empty() ? 0.0 : parse_real(re, s), parse_real(im, s)};
}

std::vector<Complex> parse_complex_list(const std::vector<std::string>& items) {
  std::vector<Complex> out;
  for (const auto& it : items)
    if (!it.empty()) out.push_back(parse_complex(it));  // bare --grid arrives as one empty item
  return out;
}

std::string complex_text(Complex z) {
  return format_double(z.real()) + (std::signbit(z.imag()) ? "" : "+") + format_double(z.imag()) + "i";
}

json complex_json(Complex z) { return complex_text(z); }

// ---------------------------------------------------------------------------
// Commands.

struct Common {
  std::string out = "-";
  std::string format = "csv";
  std::uint64_t seed = 1;
  std::int64_t samples = 1'000'000;
  int max_mode = 64;
  int quad_levels = 4;
  bool no_timing = false;
};

std::vector<std::array<Complex, 3>> cube(const std::vector<Complex>& g) {
  std::vector<std::array<Complex, 3>> out;
  for (Complex a : g)
    for (Complex b : g)
      for (Complex c : g) out.push_back({a, b, c});
  return out;
}

json grid_json(const std::vector<Complex>& g) {
  json a = json::array();
  for (Complex z : g) a.push_back(complex_json(z));
  return a;
}

void add_triple_cells(std::vector<Cell>& row, const std::array<Complex, 3>& t) {
  for (Complex z : t) {
    row.emplace_back(z.real());
    row.emplace_back(z.imag());
  }
}

const std::vector<std::string> kTripleColumns{"l1_re", "l1_im", "l2_re", "l2_im", "l3_re", "l3_im"};

Table cmd_closed_form(const std::vector<Complex>& grid) {
  Table t;
  t.columns = kTripleColumns;
  for (const char* c : {"abs_A", "arg_A", "k_lambda", "envelope", "normalized", "error"}) t.columns.push_back(c);
  t.meta["config"] = {{"grid", grid_json(grid)}};
  for (const auto& tr : cube(grid)) {
    std::vector<Cell> row;
    add_triple_cells(row, tr);
    try {
      const LogGammaResult lg = closed_form_A_log(tr[0], tr[1], tr[2]);
      row.emplace_back(lg.modulus());
      row.emplace_back(std::remainder(lg.phase, 2.0 * std::numbers::pi));
      row.emplace_back(std::exp(2.0 * lg.log_modulus));
      // Envelope only along the principal series with |λ3| >= 1.
      const SeriesParam l3(tr[2]);
      if (l3.is_principal() && std::abs(tr[2].imag()) >= 1.0) {
        row.emplace_back(asymptotic_envelope(l3));
        row.emplace_back(normalized_decay(tr[0], tr[1], l3));
      } else {
        row.emplace_back(std::monostate{});
        row.emplace_back(std::monostate{});
      }
      row.emplace_back(std::string());
    } catch (const Error& e) {
      row.resize(kTripleColumns.size() + 5);
      row.emplace_back(std::string(to_string(e.kind())));
      t.flagged = true;
    }
    t.rows.push_back(std::move(row));
  }
  return t;
}

Table cmd_quadrature_check(const std::vector<Complex>& grid, const QuadratureConfig& cfg) {
  Table t;
  t.columns = kTripleColumns;
  for (const char* c : {"quad_re", "quad_im", "closed_re", "closed_im", "rel_deviation", "error_bound", "evaluations",
                        "error"})
    t.columns.push_back(c);
  t.meta["config"] = {{"grid", grid_json(grid)},
                      {"scheme", std::string(to_string(cfg.scheme))},
                      {"points_per_panel", cfg.points_per_panel},
                      {"refinement_levels", cfg.refinement_levels},
                      {"target_rel_error", cfg.target_rel_error}};
  const CircleFunction one = CircleFunction::constant(1.0);
  double worst = 0.0;
  for (const auto& tr : cube(grid)) {
    std::vector<Cell> row;
    add_triple_cells(row, tr);
    std::string err;
    std::optional<Estimate> q;
    Complex exact;
    try {
      exact = closed_form_A(tr[0], tr[1], tr[2]).value;
      try {
        q = model_triple_quadrature(one, one, one, tr[0], tr[1], tr[2], cfg);
      } catch (const NonConvergentError& e) {
        q = e.best();
        err = "NonConvergent";
      }
    } catch (const Error& e) {
      err = std::string(to_string(e.kind()));
    }
    if (q) {
      const double dev = std::abs(q->value - exact) / std::abs(exact);
      worst = std::max(worst, dev);
      for (double v : {q->value.real(), q->value.imag(), exact.real(), exact.imag(), dev, q->error_bound})
        row.emplace_back(v);
      row.emplace_back(q->cost);
    } else {
      row.resize(kTripleColumns.size() + 7);
    }
    if (!err.empty()) t.flagged = true;
    row.emplace_back(err);
    t.rows.push_back(std::move(row));
  }
  t.meta["max_rel_deviation"] = worst;
  return t;
}

Table cmd_gaussian_check(const Common& c) {
  Table t;
  t.columns = {"identity", "params", "seed", "lhs_re", "lhs_im", "rhs_re", "rhs_im", "lhs_error_bound", "z", "error"};
  t.meta["config"] = {{"samples", c.samples}, {"base_seed", c.seed}};
  std::uint64_t seed = c.seed;
  const auto add = [&](const std::string& name, const std::string& params, const std::function<IdentityCheck(GaussianSpec)>& run,
                       int dim) {
    std::vector<Cell> row{name, params, static_cast<std::int64_t>(seed)};
    const GaussianSpec spec{dim, seed++, c.samples};
    try {
      const IdentityCheck r = run(spec);
      const double z = r.z_score();
      for (double v : {r.lhs.value.real(), r.lhs.value.imag(), r.rhs.value.real(), r.rhs.value.imag(), r.lhs.error_bound, z})
        row.emplace_back(v);
      row.emplace_back(std::string());
      if (!(z <= 4.0)) t.flagged = true;
    } catch (const Error& e) {
      row.resize(9);
      row.emplace_back(std::string(to_string(e.kind())));
      t.flagged = true;
    }
    t.rows.push_back(std::move(row));
  };
  const auto plain = [](const GaussianIntegrand& f, Complex exact) {
    return [f, exact](GaussianSpec s) {
      IdentityCheck r;
      r.lhs = gaussian_expect(s, f);
      r.rhs.value = exact;
      return r;
    };
  };
  const Complex I(0.0, 1.0);
  for (Complex s : {Complex(0.0), Complex(1.0), Complex(2.0), I, 2.0 * I}) {
    for (int n = 1; n <= 3; ++n) {
      const std::string p = "s=" + complex_text(s) + " n=" + std::to_string(n);
      add("classic_radius", p,
          plain([s](std::span<const double> x) {
            double r2 = 0.0;
            for (double v : x) r2 += v * v;
            return std::exp(0.5 * s * std::log(r2));
          }, classic_radius(n, s)), n);
      add("classic_linear", p + " h=e1",
          plain([s](std::span<const double> x) { return std::exp(s * std::log(std::abs(x[0]))); }, classic_linear(1.0, s)),
          n);
    }
    add("classic_det", "s=" + complex_text(s),
        plain([s](std::span<const double> x) { return std::exp(s * std::log(std::abs(x[0] * x[3] - x[1] * x[2]))); },
              classic_det(s)),
        4);
  }
  CircleFunction cos2(1);
  cos2.coeff_ref(0) = 0.5;
  cos2.coeff_ref(1) = 0.25;
  cos2.coeff_ref(-1) = 0.25;
  add("corB", "lambda=0 h=1", [](GaussianSpec s) { return corB_check(0.0, CircleFunction::constant(1.0), s); }, 2);
  add("corB", "lambda=0 h=cos^2", [&](GaussianSpec s) { return corB_check(0.0, cos2, s); }, 2);
  add("corB", "lambda=2i h=1+(0.3+0.1i)e_2", [&](GaussianSpec s) {
    return corB_check(2.0 * I, CircleFunction::constant(1.0) + CircleFunction::mode(2, Complex(0.3, 0.1)), s);
  }, 2);
  for (Complex s : {Complex(1.0), Complex(2.0), I})
    add("comparison", "s=" + complex_text(s), [s](GaussianSpec g) { return comparison_a(s, g); }, 6);
  for (auto l : {std::array<Complex, 3>{0.0, 0.0, 0.0}, {2.0 * I, 0.0, 0.0}, {I, 2.0 * I, 0.0}})
    add("propAB", "(" + complex_text(l[0]) + "," + complex_text(l[1]) + "," + complex_text(l[2]) + ")",
        [l](GaussianSpec g) { return propAB_check(l[0], l[1], l[2], g); }, 6);
  return t;
}

Table cmd_decay_scan(Complex tau, Complex tau_prime, const std::vector<double>& ladder) {
  Table t;
  t.columns = {"abs_lambda", "normalized", "rel_difference"};
  t.meta["config"] = {{"tau", complex_json(tau)}, {"tau_prime", complex_json(tau_prime)}, {"ladder", ladder}};
  try {
    const DecayScan s = decay_scan(tau, tau_prime, ladder);
    for (std::size_t i = 0; i < s.normalized.size(); ++i) {
      t.rows.push_back({s.abs_lambda[i], s.normalized[i], i == 0 ? Cell{} : Cell{s.rel_differences[i - 1]}});
    }
    t.meta["c_estimate"] = s.c_estimate;
    t.meta["c_error"] = std::isfinite(s.c_error) ? json(s.c_error) : json(format_double(s.c_error));
    t.meta["extrapolated"] = s.extrapolated;
  } catch (const Error& e) {
    t.meta["error"] = std::string(to_string(e.kind()));
    t.flagged = true;
  }
  return t;
}

struct SobolevArgs {
  int l = 2;
  std::vector<double> T{2.0, 4.0, 8.0};
  std::string lambda_rule = "iT";
  Complex lambda_fixed = 0.0;
  Complex tau{0.0, 1.0};
  Complex tau_prime{0.0, 2.0};
  int k_modes = 32;
};

Table cmd_sobolev_trace(const SobolevArgs& a, int n) {
  Table t;
  t.columns = {"T", "lambda_re", "lambda_im", "rho", "rho_T2l", "dimension", "boundary_trace_fraction", "error"};
  t.meta["config"] = {{"l", a.l},           {"T", a.T},
                      {"lambda_rule", a.lambda_rule}, {"lambda", complex_json(a.lambda_fixed)},
                      {"tau", complex_json(a.tau)},   {"tau_prime", complex_json(a.tau_prime)},
                      {"truncation", n},            {"k_modes", a.k_modes}};
  const QuadratureConfig modal{QuadratureScheme::modal_series};
  for (double T : a.T) {
    const Complex lam = a.lambda_rule == "iT" ? Complex(0.0, T) : a.lambda_fixed;
    std::vector<Cell> row{T, lam.real(), lam.imag()};
    try {
      double rho = 0.0;
      std::int64_t dim = 0;
      HmodDiagnostics diag;
      if (a.l >= 2) {
        const SobolevTrace s = sobolev_test_functional(a.l, T, lam, a.tau, a.tau_prime, n, a.k_modes, modal);
        rho = s.rho;
        dim = s.dimension;
        diag = s.hmod;
      } else {
        // Below the range of the lower bound; the bare relative trace.
        const HermitianForm h = hmod_form(lam, a.tau, a.tau_prime, n, a.k_modes, modal, &diag);
        rho = relative_trace(h, sobolev_form(a.l, T, a.tau, a.tau_prime, n));
        dim = h.dimension();
      }
      row.emplace_back(rho);
      row.emplace_back(rho * std::pow(T, 2 * a.l));
      row.emplace_back(dim);
      row.emplace_back(diag.boundary_trace_fraction);
      row.emplace_back(std::string());
    } catch (const Error& e) {
      row.resize(7);
      row.emplace_back(std::string(to_string(e.kind())));
      t.flagged = true;
    }
    t.rows.push_back(std::move(row));
  }
  return t;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"triprod: trilinear invariant functional checks"};
  app.require_subcommand(1);
  app.fallthrough();  // global options may follow the subcommand
  app.set_version_flag("--version", std::string(kVersion));

  Common c;
  app.add_option("--out", c.out, "Output path ('-' for stdout)");
  app.add_option("--format", c.format, "csv or json")->check(CLI::IsMember({"csv", "json"}));
  app.add_option("--seed", c.seed, "Base seed for Monte Carlo");
  app.add_option("--samples", c.samples, "Monte Carlo samples per identity");
  app.add_option("--max-mode", c.max_mode, "Truncation N of V_N ⊗ V_N");
  app.add_option("--quad-levels", c.quad_levels, "Quadrature refinement levels");
  app.add_flag("--no-timing", c.no_timing, "Omit wall time from the output (byte-reproducible)");

  std::vector<std::string> grid_text{"0", "i", "2i"};
  auto* cf = app.add_subcommand("closed-form", "A(λ1,λ2,λ3) on a grid cube");
  cf->add_option("--grid", grid_text, "Values of λ; every triple is evaluated")->expected(0, -1);

  std::string scheme_text = "graded_mesh";
  double target = 1e-8;
  auto* qc = app.add_subcommand("quadrature-check", "Triple quadrature against the closed form");
  qc->add_option("--grid", grid_text, "Values of λ; every triple is evaluated")->expected(0, -1);
  qc->add_option("--scheme", scheme_text, "graded_mesh, singularity_split or modal_series");
  qc->add_option("--target", target, "Relative error target");

  auto* gc = app.add_subcommand("gaussian-check", "Monte Carlo Gaussian identities");

  std::string tau_text = "0", tau_prime_text = "0";
  std::vector<double> ladder{25.0, 50.0, 100.0, 200.0, 400.0};
  auto* ds = app.add_subcommand("decay-scan", "Normalized k_λ along λ = i|λ|");
  ds->add_option("--tau", tau_text, "τ");
  ds->add_option("--tau-prime", tau_prime_text, "τ'");
  ds->add_option("--ladder", ladder, "|λ| rungs")->expected(0, -1);

  SobolevArgs sa;
  std::string s_tau = "i", s_tau_prime = "2i", s_lambda = "0";
  auto* st = app.add_subcommand("sobolev-trace", "ρ = tr(H^mod | Q_{l,T}) over a T ladder");
  st->add_option("--l", sa.l, "Sobolev order");
  st->add_option("--T", sa.T, "T values")->expected(1, -1);
  st->add_option("--lambda-rule", sa.lambda_rule, "iT or fixed")->check(CLI::IsMember({"iT", "fixed"}));
  st->add_option("--lambda", s_lambda, "λ for --lambda-rule fixed");
  st->add_option("--tau", s_tau, "τ");
  st->add_option("--tau-prime", s_tau_prime, "τ'");
  st->add_option("--k-modes", sa.k_modes, "Target modes |k| <= K");

  try {
    app.parse(argc, argv);
  } catch (const CLI::Success& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  Table table;
  json config;
  const auto t0 = std::chrono::steady_clock::now();
  std::string command;
  try {
    if (c.samples <= 0) throw ConfigError("--samples must be positive");
    if (c.max_mode < 0) throw ConfigError("--max-mode must be non-negative");
    if (c.quad_levels < 1) throw ConfigError("--quad-levels must be >= 1");
    if (*cf) {
      command = "closed-form";
      table = cmd_closed_form(parse_complex_list(grid_text));
    } else if (*qc) {
      command = "quadrature-check";
      QuadratureConfig cfg;
      cfg.scheme = parse_quadrature_scheme(scheme_text);
      cfg.refinement_levels = c.quad_levels;
      cfg.target_rel_error = target;
      cfg.validate();
      table = cmd_quadrature_check(parse_complex_list(grid_text), cfg);
    } else if (*gc) {
      command = "gaussian-check";
      table = cmd_gaussian_check(c);
    } else if (*ds) {
      command = "decay-scan";
      for (double v : ladder)
        if (!(v >= 1.0)) throw ConfigError("--ladder rungs must be >= 1");
      table = cmd_decay_scan(parse_complex(tau_text), parse_complex(tau_prime_text), ladder);
    } else if (*st) {
      command = "sobolev-trace";
      if (sa.l < 0) throw ConfigError("--l must be non-negative");
      if (sa.k_modes < 0) throw ConfigError("--k-modes must be non-negative");
      for (double T : sa.T)
        if (!(T > 0.0)) throw ConfigError("--T values must be positive");
      sa.tau = parse_complex(s_tau);
      sa.tau_prime = parse_complex(s_tau_prime);
      sa.lambda_fixed = parse_complex(s_lambda);
      table = cmd_sobolev_trace(sa, c.max_mode);
    }
  } catch (const ConfigError& e) {
    std::cerr << "triprod: " << e.what() << "\n";
    return 2;
  } catch (const Error& e) {
    if (e.kind() != ErrorKind::PreconditionViolated) throw;
    std::cerr << "triprod: " << e.what() << "\n";
    return 2;
  }

  json meta = json::object();
  meta["schema"] = "triprod." + command + "/" + std::to_string(kSchemaVersion);
  meta["version"] = kVersion;
  meta["command"] = command;
  meta["seed"] = c.seed;
  meta["options"] = {{"samples", c.samples}, {"max_mode", c.max_mode}, {"quad_levels", c.quad_levels}};
  for (const auto& [k, v] : table.meta.items()) meta[k] = v;
  meta["rows"] = table.rows.size();
  meta["flagged"] = table.flagged;
  if (!c.no_timing) {
    meta["wall_time_s"] = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  }
  table.meta = std::move(meta);

  if (c.out == "-") {
    write_table(std::cout, table, c.format);
  } else {
    std::ofstream f(c.out, std::ios::binary);
    if (!f) {
      std::cerr << "triprod: cannot open " << c.out << "\n";
      return 2;
    }
    write_table(f, table, c.format);
  }
  return table.flagged ? 1 : 0;
}
