// Command-line front end: admissibility reports, regression coefficients,
// recurrence tables, operator/matrix identity verification, quadrature
// rules, and the all-suites verifier. Output is JSON (or CSV where noted)
// and deterministic for fixed inputs and mode.

#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "harnesslab/banded.hpp"
#include "harnesslab/json_io.hpp"
#include "harnesslab/presets.hpp"
#include "harnesslab/qops.hpp"
#include "harnesslab/quadrature.hpp"
#include "harnesslab/recurrence.hpp"
#include "harnesslab/regression.hpp"
#include "harnesslab/verify.hpp"

namespace hl = harnesslab;
using hl::json;

namespace {

struct CommonOpts {
  std::string params_file;
  std::string preset;
  std::string out_file;
  bool use_float = false;
};

void add_common(CLI::App* cmd, CommonOpts& c, bool with_mode = true) {
  cmd->add_option("--params", c.params_file, "parameter JSON file");
  cmd->add_option("--preset", c.preset, "built-in parameter set")
      ->check(CLI::IsMember(hl::preset_names()));
  cmd->add_option("--out", c.out_file, "write the report to a file instead of stdout");
  if (with_mode) {
    cmd->add_flag("--float", c.use_float, "binary64 mode (default: exact rationals)");
    auto* exact = cmd->add_flag("--exact", "exact rational mode (default)");
    exact->excludes("--float");
  }
}

hl::ParamSet<hl::Rational> load_exact(const CommonOpts& c) {
  if (!c.preset.empty()) return hl::preset_params(c.preset);
  if (c.params_file.empty())
    throw CLI::ValidationError("--params or --preset is required");
  return hl::load_params<hl::Rational>(c.params_file);
}

void emit(const CommonOpts& c, const std::string& text) {
  if (c.out_file.empty()) {
    std::cout << text << "\n";
  } else {
    std::ofstream out(c.out_file);
    if (!out) throw std::runtime_error("cannot write " + c.out_file);
    out << text << "\n";
  }
}

void emit(const CommonOpts& c, const json& j) { emit(c, j.dump(2)); }

std::vector<std::string> split_commas(const std::string& s) {
  std::vector<std::string> parts;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ',')) parts.push_back(item);
  return parts;
}

template <class T>
std::vector<T> parse_times(const std::string& s, std::size_t expected) {
  const auto parts = split_commas(s);
  if (parts.size() != expected)
    throw CLI::ValidationError("expected " + std::to_string(expected) + " comma-separated times");
  std::vector<T> out;
  for (const auto& p : parts) {
    if constexpr (hl::is_exact_v<T>)
      out.push_back(hl::parse_rational(p));
    else
      out.push_back(std::stod(p));
  }
  return out;
}

std::string scalar_str(const hl::Rational& v) { return hl::to_string(v); }

// ---------------------------------------------------------------- params

int run_params(const CommonOpts& c) {
  const auto p = load_exact(c);
  json j;
  j["schema"] = "harnesslab/1";
  j["suite"] = "params";
  j["params"] = hl::params_to_json(p);
  j["mode"] = "exact";
  const auto rep = hl::validate(p);
  json cons = json::array();
  for (const auto& k : rep.constraints)
    cons.push_back({{"name", k.name},
                    {"satisfied", k.satisfied},
                    {"assumed", k.assumed}});
  j["constraints"] = cons;
  j["admissible"] = rep.admissible;
  json tags = json::array();
  for (auto t : hl::classify(p)) tags.push_back(hl::family_name(t));
  j["families"] = tags;
  j["time_inverted"] = hl::params_to_json(hl::time_invert(p));
  emit(c, j);
  return rep.admissible ? 0 : 1;
}

// ------------------------------------------------------------ regression

template <class T>
int run_regression(const CommonOpts& c, const hl::ParamSet<T>& p, const std::string& times,
                   const std::string& verify4) {
  json j;
  j["schema"] = "harnesslab/1";
  j["suite"] = "regression";
  j["params"] = hl::params_to_json(p);
  j["mode"] = hl::is_exact_v<T> ? "exact" : "float";
  bool pass = true;
  if (!verify4.empty()) {
    const auto ts = parse_times<T>(verify4, 4);
    const auto rep = hl::verify_chain_identities(p, ts[0], ts[1], ts[2], ts[3]);
    json entries = json::array();
    for (const auto& e : rep.entries)
      entries.push_back({{"name", e.name}, {"residual", hl::scalar_to_json(e.value)}});
    j["residuals"] = entries;
    if constexpr (hl::is_exact_v<T>) {
      pass = rep.all_zero();
    } else {
      pass = hl::to_double(rep.max_abs()) < 1e-10;
    }
    j["pass"] = pass;
  } else {
    const auto ts = parse_times<T>(times, 3);
    const hl::TimeTriple<T> tr{ts[0], ts[1], ts[2]};
    const auto fc = hl::form_coeffs(p, tr);
    j["times"] = {hl::scalar_to_json(tr.s), hl::scalar_to_json(tr.t), hl::scalar_to_json(tr.u)};
    j["coeffs"] = {{"A", hl::scalar_to_json(fc.A)}, {"B", hl::scalar_to_json(fc.B)},
                   {"C", hl::scalar_to_json(fc.C)}, {"D", hl::scalar_to_json(fc.D)},
                   {"E", hl::scalar_to_json(fc.E)}, {"F", hl::scalar_to_json(fc.F)}};
    const auto back = hl::extract_params(fc, tr);
    j["round_trip"] = back == p;
    pass = back == p;
  }
  emit(c, j);
  return pass ? 0 : 1;
}

// ----------------------------------------------------------------- recur

hl::FamilyTag pick_family(const std::string& name, const hl::ParamSet<hl::Rational>& p) {
  if (name == "free") return hl::FamilyTag::Free;
  if (name == "classical") return hl::FamilyTag::Classical;
  if (name == "sigma0") return hl::FamilyTag::SigmaZero;
  if (name == "tau0") return hl::FamilyTag::TauZero;
  if (name == "qmeixner") return hl::FamilyTag::QMeixner;
  if (name == "bipoisson") return hl::FamilyTag::BiPoisson;
  if (name == "general") return hl::FamilyTag::General;
  // auto: most specific family first, engine otherwise
  const auto tags = hl::classify(p);
  for (auto t : {hl::FamilyTag::BiPoisson, hl::FamilyTag::QMeixner, hl::FamilyTag::SigmaZero,
                 hl::FamilyTag::TauZero, hl::FamilyTag::Free, hl::FamilyTag::Classical})
    if (tags.count(t)) return t;
  return hl::FamilyTag::General;
}

int run_recur(const CommonOpts& c, int N, const std::string& family, const std::string& t_str) {
  const auto p = load_exact(c);
  const auto tag = pick_family(family, p);
  const hl::Rational t = hl::parse_rational(t_str.empty() ? "1" : t_str);
  const auto seq = hl::closed_family(p, tag, N);
  std::ostringstream csv;
  csv << "n,a_n,b_n,c_n\n";
  for (int n = 0; n <= N; ++n) {
    csv << n << "," << scalar_str(seq[static_cast<std::size_t>(n)].a(t)) << ","
        << scalar_str(seq[static_cast<std::size_t>(n)].b(t)) << ","
        << scalar_str(seq[static_cast<std::size_t>(n)].c(t)) << "\n";
  }
  std::cout << csv.str();
  if (!c.out_file.empty()) {
    // Greek tables as JSON alongside the CSV
    const auto tbl = hl::build_tables(p, N);
    json j;
    j["schema"] = "harnesslab/1";
    j["suite"] = "recur";
    j["params"] = hl::params_to_json(p);
    j["family"] = hl::family_name(tag);
    j["N"] = N;
    auto dump = [](const std::vector<hl::Rational>& v) {
      json a = json::array();
      for (const auto& x : v) a.push_back(hl::to_string(x));
      return a;
    };
    j["alpha"] = dump(tbl.alpha);
    j["beta"] = dump(tbl.beta);
    j["gamma"] = dump(tbl.gamma);
    j["delta"] = dump(tbl.delta);
    j["epsilon"] = dump(tbl.epsilon);
    j["phi"] = dump(tbl.phi);
    j["omega"] = dump(tbl.omega);
    std::ofstream out(c.out_file);
    if (!out) throw std::runtime_error("cannot write " + c.out_file);
    out << j.dump(2) << "\n";
  }
  return 0;
}

// ------------------------------------------------------------------ qops

int run_qops_table1(const std::string& q_str, int N, const CommonOpts& c) {
  const hl::Rational q = hl::parse_rational(q_str);
  const auto cells = hl::table1_verify(q, N);
  json j;
  j["schema"] = "harnesslab/1";
  j["suite"] = "qops-table1";
  j["q"] = hl::to_string(q);
  j["N"] = N;
  bool pass = true;
  json arr = json::array();
  for (const auto& cell : cells) {
    arr.push_back({{"name", cell.name},
                   {"zero", cell.zero},
                   {"checked_upto", cell.checked_upto}});
    pass = pass && cell.zero;
  }
  j["cells"] = arr;
  j["pass"] = pass;
  emit(c, j);
  return pass ? 0 : 1;
}

int run_qops_ccom(const CommonOpts& c, const std::string& family, int N) {
  const auto p = load_exact(c);
  const auto tag = pick_family(family, p);
  if (tag != hl::FamilyTag::QMeixner && tag != hl::FamilyTag::BiPoisson)
    throw CLI::ValidationError("operator realizations exist for qmeixner and bipoisson only");
  const auto [x, y] = hl::realization(tag, p, N);
  const auto [dx, dy] = hl::dual_realization(tag, p, N);
  const auto primal = hl::verify_ccom(x, y, p);
  const auto dual = hl::verify_ccom_dual(dx, dy, p);
  json j;
  j["schema"] = "harnesslab/1";
  j["suite"] = "qops-ccom";
  j["params"] = hl::params_to_json(p);
  j["family"] = hl::family_name(tag);
  j["N"] = N;
  j["primal"] = {{"zero", primal.zero}, {"checked_upto", primal.checked_upto}};
  j["dual"] = {{"zero", dual.zero}, {"checked_upto", dual.checked_upto}};
  const bool pass = primal.zero && dual.zero;
  j["pass"] = pass;
  emit(c, j);
  return pass ? 0 : 1;
}

// ---------------------------------------------------------------- matrix

template <class T>
int run_matrix_verify(const CommonOpts& c, const hl::ParamSet<T>& p, const std::string& times,
                      int N) {
  const auto ts = parse_times<T>(times, 3);
  const hl::TimeTriple<T> tr{ts[0], ts[1], ts[2]};
  const auto tbl = hl::build_tables(p, N + 2);
  const auto ccom = hl::verify_matrix_ccom(tbl, N);
  const auto quad = hl::verify_matrix_quadratic(tbl, tr, N);
  const auto dual = hl::verify_matrix_quadratic_dual(tbl, tr, N);
  auto block_max = [&](const hl::BandedMatrix<T>& m) {
    T mx(0);
    const int k = std::min(m.valid_block(), N - 2);
    for (int i = 0; i < k; ++i)
      for (int jj = 0; jj < k; ++jj) {
        T a = hl::tabs(m.get(i, jj));
        if (mx < a) mx = a;
      }
    return mx;
  };
  json j;
  j["schema"] = "harnesslab/1";
  j["suite"] = "matrix-verify";
  j["params"] = hl::params_to_json(p);
  j["mode"] = hl::is_exact_v<T> ? "exact" : "float";
  j["N"] = N;
  j["times"] = {hl::scalar_to_json(tr.s), hl::scalar_to_json(tr.t), hl::scalar_to_json(tr.u)};
  const T m1 = block_max(ccom), m2 = block_max(quad), m3 = block_max(dual);
  j["residuals"] = {{"ccom", hl::scalar_to_json(m1)},
                    {"quadratic", hl::scalar_to_json(m2)},
                    {"dual_quadratic", hl::scalar_to_json(m3)}};
  bool pass;
  if constexpr (hl::is_exact_v<T>) {
    pass = m1 == T(0) && m2 == T(0) && m3 == T(0);
  } else {
    pass = hl::to_double(m1) < 1e-10 && hl::to_double(m2) < 1e-10 && hl::to_double(m3) < 1e-10;
  }
  j["pass"] = pass;
  emit(c, j);
  return pass ? 0 : 1;
}

int run_matrix_moments(const CommonOpts& c, const std::string& t_str, int nmax) {
  const auto p = load_exact(c);
  const auto tbl = hl::build_tables(p, nmax + 2);
  json j;
  j["schema"] = "harnesslab/1";
  j["suite"] = "matrix-moments";
  j["params"] = hl::params_to_json(p);
  j["n"] = nmax;
  json sym = json::array();
  const auto mp = hl::moments_poly(tbl, nmax);
  for (const auto& m : mp) sym.push_back(m.str());
  j["moments_in_t"] = sym;
  if (!t_str.empty()) {
    const hl::Rational t = hl::parse_rational(t_str);
    const auto mv = hl::moments(tbl, t, nmax, nmax + 2);
    json vals = json::array();
    for (const auto& m : mv) vals.push_back(hl::to_string(m));
    j["t"] = hl::to_string(t);
    j["moments_at_t"] = vals;
  }
  emit(c, j);
  return 0;
}

// ------------------------------------------------------------------ quad

int run_quad_rule(const CommonOpts& c, const std::string& t_str, int M) {
  const auto p = hl::to_double_params(load_exact(c));
  const double t = t_str.empty() ? 1.0 : std::stod(t_str);
  const auto coeffs = hl::table_coeffs(hl::build_tables(p, M + 2));
  const auto rule = hl::golub_welsch(coeffs, t, M);
  std::ostringstream csv;
  csv << "node,weight\n";
  csv.precision(17);
  for (std::size_t i = 0; i < rule.nodes.size(); ++i)
    csv << rule.nodes[i] << "," << rule.weights[i] << "\n";
  emit(c, csv.str());
  return 0;
}

int run_quad_martingale(const CommonOpts& c, double s, double t, int nmax, int M) {
  const auto p = hl::to_double_params(load_exact(c));
  const auto rep = hl::martingale_check(p, s, t, nmax, M);
  json j;
  j["schema"] = "harnesslab/1";
  j["suite"] = "quad-martingale";
  j["params"] = hl::params_to_json(p);
  j["s"] = s;
  j["t"] = t;
  j["n"] = nmax;
  j["M"] = M;
  j["max_deviation"] = rep.max_deviation;
  j["covariance_residual"] = rep.covariance_residual;
  const bool pass = rep.max_deviation < 1e-8 && rep.covariance_residual < 1e-8;
  j["pass"] = pass;
  emit(c, j);
  return pass ? 0 : 1;
}

// ------------------------------------------------------------ verify-all

int run_verify_all(const CommonOpts& c, int N, int M, bool timings) {
  const auto p = load_exact(c);
  hl::VerifyOptions opt;
  opt.N = N;
  opt.M = M;
  const auto reports = hl::verify_all(p, opt);
  emit(c, hl::report_to_json(reports, p, opt, "exact", timings));
  return hl::all_pass(reports) ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"quadratic-harness recurrence and identity toolkit"};
  app.require_subcommand(1);

  CommonOpts c_params, c_reg, c_recur, c_qt, c_qc, c_mv, c_mm, c_qr, c_qm, c_va;
  std::string times = "1,2,3", verify4, family = "auto", t_str, q_str = "1/2";
  int N = 40, M = 30, nmax = 8;
  double mart_s = 1.0, mart_t = 2.0;

  auto* cmd_params = app.add_subcommand("params", "admissibility report and classification");
  add_common(cmd_params, c_params, false);

  auto* cmd_reg = app.add_subcommand("regression", "conditional-regression coefficients");
  add_common(cmd_reg, c_reg);
  cmd_reg->add_option("--times", times, "s,t,u");
  cmd_reg->add_option("--verify", verify4, "r,s,t,u: emit the chain-identity residual report");

  auto* cmd_recur = app.add_subcommand("recur", "three-term recurrence tables (CSV + JSON)");
  add_common(cmd_recur, c_recur, false);
  cmd_recur->add_option("-N", N, "truncation order")->capture_default_str();
  cmd_recur->add_option("--family", family,
                        "auto|free|classical|sigma0|tau0|qmeixner|bipoisson|general");
  cmd_recur->add_option("--t", t_str, "evaluation time for the CSV columns");

  auto* cmd_qops = app.add_subcommand("qops", "operator-algebra verification");
  cmd_qops->require_subcommand(1);
  auto* cmd_qt = cmd_qops->add_subcommand("verify-table1", "q-commutator table residuals");
  cmd_qt->add_option("--q", q_str, "q value (rational)")->capture_default_str();
  cmd_qt->add_option("-N", N, "truncation degree")->capture_default_str();
  add_common(cmd_qt, c_qt, false);
  auto* cmd_qc = cmd_qops->add_subcommand("verify-ccom", "commutation residual of a realization");
  add_common(cmd_qc, c_qc, false);
  cmd_qc->add_option("--family", family, "qmeixner|bipoisson|auto");
  cmd_qc->add_option("-N", N, "truncation degree")->capture_default_str();

  auto* cmd_matrix = app.add_subcommand("matrix", "banded-matrix verification and moments");
  cmd_matrix->require_subcommand(1);
  auto* cmd_mv = cmd_matrix->add_subcommand("verify", "commutation and quadratic residuals");
  add_common(cmd_mv, c_mv);
  cmd_mv->add_option("--times", times, "s,t,u");
  cmd_mv->add_option("-N", N, "truncation size")->capture_default_str();
  auto* cmd_mm = cmd_matrix->add_subcommand("moments", "moments of the orthogonality measure");
  add_common(cmd_mm, c_mm, false);
  cmd_mm->add_option("--t", t_str, "evaluation time (symbolic table always included)");
  cmd_mm->add_option("-n", nmax, "highest moment")->capture_default_str();

  auto* cmd_quad = app.add_subcommand("quad", "Gauss rules and kernel checks");
  add_common(cmd_quad, c_qr, false);
  cmd_quad->add_option("--t", t_str, "time of the marginal rule");
  cmd_quad->add_option("-M", M, "rule size")->capture_default_str();
  auto* cmd_qm = cmd_quad->add_subcommand("martingale", "transition-kernel martingale check");
  add_common(cmd_qm, c_qm, false);
  cmd_qm->add_option("--s", mart_s, "conditioning time")->capture_default_str();
  cmd_qm->add_option("--t", mart_t, "target time")->capture_default_str();
  cmd_qm->add_option("-n", nmax, "highest polynomial degree")->capture_default_str();
  cmd_qm->add_option("-M", M, "rule size")->capture_default_str();

  auto* cmd_va = app.add_subcommand("verify-all", "run every verification suite");
  add_common(cmd_va, c_va, false);
  cmd_va->add_option("-N", N, "matrix/recurrence truncation")->capture_default_str();
  cmd_va->add_option("-M", M, "quadrature rule size")->capture_default_str();
  bool timings = false;
  cmd_va->add_flag("--timings", timings, "include per-suite elapsed_ms (not byte-stable)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? 0 : 2;
  }

  try {
    if (*cmd_params) return run_params(c_params);
    if (*cmd_reg) {
      if (c_reg.use_float) {
        const auto p = c_reg.preset.empty() ? hl::load_params<double>(c_reg.params_file)
                                            : hl::to_double_params(hl::preset_params(c_reg.preset));
        return run_regression<double>(c_reg, p, times, verify4);
      }
      return run_regression<hl::Rational>(c_reg, load_exact(c_reg), times, verify4);
    }
    if (*cmd_recur) return run_recur(c_recur, N, family, t_str);
    if (*cmd_qt) return run_qops_table1(q_str, N, c_qt);
    if (*cmd_qc) return run_qops_ccom(c_qc, family, N);
    if (*cmd_mv) {
      if (c_mv.use_float) {
        const auto p = c_mv.preset.empty() ? hl::load_params<double>(c_mv.params_file)
                                           : hl::to_double_params(hl::preset_params(c_mv.preset));
        return run_matrix_verify<double>(c_mv, p, times, N);
      }
      return run_matrix_verify<hl::Rational>(c_mv, load_exact(c_mv), times, N);
    }
    if (*cmd_mm) return run_matrix_moments(c_mm, t_str, nmax);
    if (*cmd_qm) return run_quad_martingale(c_qm, mart_s, mart_t, nmax, M);
    if (*cmd_quad) return run_quad_rule(c_qr, t_str, M);
    if (*cmd_va) return run_verify_all(c_va, N, M, timings);
  } catch (const CLI::ValidationError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 2;
}
