#pragma once

#include "krein/krein.hpp"

#include "CLI11.hpp"

#include <cstdlib>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

namespace krein::cli {

/// Exit codes: the run passed, something is semantically absent (a clause
/// failed, no C-symmetry), or the tool itself could not do its job.
enum Exit : int { pass = 0, operational = 1, semantic = 2 };

struct RunConfig {
  Tolerances tol;
  std::optional<Index> grid_n;
  std::optional<double> grid_l;
  std::string format = "json";
  std::string out;

  SymmetricGrid grid(double default_l, Index default_n) const {
    return SymmetricGrid(grid_l.value_or(default_l), grid_n.value_or(default_n));
  }
};

/// Worker count for sweeps: KREIN_CSYM_THREADS if set, else the hardware
/// concurrency.
inline unsigned thread_cap() {
  unsigned hw = std::max(1u, std::thread::hardware_concurrency());
  if (const char* env = std::getenv("KREIN_CSYM_THREADS")) {
    try {
      const long v = std::stol(env);
      if (v >= 1) return static_cast<unsigned>(v);
    } catch (const std::exception&) {
    }
  }
  return hw;
}

namespace detail {

inline void emit(const RunConfig& cfg, const std::string& text, std::ostream& out) {
  if (cfg.out.empty()) {
    out << text;
  } else {
    io::write_file(cfg.out, text);
  }
}

inline std::string json_number(double v) { return std::isfinite(v) ? io::format_double(v) : "null"; }

inline std::string diagnostic_json(const Construction& b) {
  std::string s = "{\"status\": \"" + std::string(to_string(b.status)) + "\", \"offending_eigenvalue\": ";
  if (b.offending_eigenvalue) {
    s += "{\"re\": " + json_number(b.offending_eigenvalue->real()) +
         ", \"im\": " + json_number(b.offending_eigenvalue->imag()) + "}";
  } else {
    s += "null";
  }
  s += ", \"neutrality_margin\": " + json_number(b.neutrality_margin) + "}\n";
  return s;
}

inline void print_report(const CReport& r, std::ostream& out) {
  out << "involution_defect=" << io::format_double(r.involution_defect) << '\n'
      << "hermiticity_defect=" << io::format_double(r.hermiticity_defect) << '\n'
      << "positivity_margin=" << io::format_double(r.positivity_margin) << '\n';
  if (r.commutation_defect) out << "commutation_defect=" << io::format_double(*r.commutation_defect) << '\n';
  out << "norm_C=" << io::format_double(r.norm_c) << '\n';
  if (r.passed) {
    out << "result=pass\n";
  } else {
    out << "result=fail clause=" << to_string(r.failed_clause) << '\n';
  }
}

inline void require_same_dim(const Matrix& a, const Matrix& b, const char* what) {
  if (a.rows() != b.rows()) {
    throw Error(ErrorCode::DimensionMismatch, std::string(what) + " has a different dimension than J");
  }
}

}  // namespace detail

inline int cmd_verify(const std::string& a_path, const std::string& j_path, const std::string& c_path,
                      const RunConfig& cfg, std::ostream& out, std::ostream& err) {
  const Matrix j = io::load_matrix(j_path);
  const Matrix a = io::load_matrix(a_path);
  const Matrix c = io::load_matrix(c_path);
  detail::require_same_dim(a, j, "A");
  detail::require_same_dim(c, j, "C");
  const KreinStructure ks(j, cfg.tol);
  try {
    const JSelfAdjointOperator op(ks, a, cfg.tol.ver);
    const CReport r = verify_c_symmetry(ks, op, c, cfg.tol);
    detail::print_report(r, out);
    return r.passed ? pass : semantic;
  } catch (const Error& e) {
    if (e.code() != ErrorCode::NotJSelfAdjoint) throw;
    err << "A is not J-self-adjoint: " << e.what() << '\n';
    out << "result=fail clause=A not J-self-adjoint\n";
    return semantic;
  }
}

inline int cmd_construct(const std::string& a_path, const std::string& j_path, const RunConfig& cfg,
                         std::ostream& out, std::ostream& err) {
  const Matrix j = io::load_matrix(j_path);
  const Matrix a = io::load_matrix(a_path);
  detail::require_same_dim(a, j, "A");
  const KreinStructure ks(j, cfg.tol);
  // the defect threshold applies to the matrix actually read, which may be a
  // discretization
  const JSelfAdjointOperator op(ks, a, std::max(cfg.tol.ver, cfg.tol.disc));
  const Construction b = construct_c(ks, op, cfg.tol);
  if (!b.ok()) {
    detail::emit(cfg, detail::diagnostic_json(b), out);
    err << "construct: " << to_string(b.status) << '\n';
    return semantic;
  }
  detail::emit(cfg, io::format_matrix(b.c->C, io::parse_format(cfg.format)), out);
  detail::print_report(b.c->report, err);
  return pass;
}

inline int cmd_hermitize(const std::string& a_path, const std::string& j_path, const std::string& c_path,
                         const RunConfig& cfg, std::ostream& out, std::ostream& err) {
  const Matrix j = io::load_matrix(j_path);
  const Matrix a = io::load_matrix(a_path);
  const Matrix c = io::load_matrix(c_path);
  detail::require_same_dim(a, j, "A");
  detail::require_same_dim(c, j, "C");
  const KreinStructure ks(j, cfg.tol);
  const JSelfAdjointOperator op(ks, a, std::max(cfg.tol.ver, cfg.tol.disc));
  const CReport r = verify_c_symmetry(ks, op, c, cfg.tol);
  if (!r.passed) {
    err << "hermitize: C is not a C-symmetry of A, clause " << to_string(r.failed_clause) << '\n';
    return semantic;
  }
  const Hermitization h = hermitize(ks, a, c);
  detail::emit(cfg, io::format_matrix(h.H, io::parse_format(cfg.format)), out);
  err << "hermitian_defect=" << io::format_double(h.hermitian_defect) << '\n';
  return h.hermitian_defect <= cfg.tol.herm ? pass : semantic;
}

inline std::string sweep_csv(const std::vector<SweepRow>& rows) {
  std::string s = "gamma,max_im_lambda,norm_C,cond_F,status\n";
  for (const auto& r : rows) {
    s += io::format_double(r.gamma) + ',' + io::format_double(r.max_im_lambda) + ',' +
         io::format_double(r.norm_C) + ',' + io::format_double(r.cond_F) + ',' + r.status + '\n';
  }
  return s;
}

inline std::vector<double> linspace(double lo, double hi, int steps) {
  std::vector<double> out;
  for (int k = 0; k < steps; ++k) {
    out.push_back(k + 1 == steps ? hi : lo + (hi - lo) * static_cast<double>(k) / static_cast<double>(steps - 1));
  }
  return out;
}

inline int cmd_sweep(const std::vector<double>& gammas, const RunConfig& cfg, std::ostream& out) {
  const auto rows = gamma_sweep(cfg.grid(20.0, 200), gammas, cfg.tol, thread_cap());
  detail::emit(cfg, sweep_csv(rows), out);
  return pass;
}

inline std::string direct_sum_csv(const UnboundednessTable& table) {
  std::string s = "M,norm_T,norm_C,cond_F\n";
  for (const auto& r : table.rows) {
    s += std::to_string(r.M) + ',' + io::format_double(r.norm_T) + ',' + io::format_double(r.norm_C) + ',' +
         io::format_double(r.cond_F) + '\n';
  }
  return s;
}

inline int cmd_direct_sum(const std::string& rule, const std::vector<Index>& m_values, const RunConfig& cfg,
                          std::ostream& out, std::ostream& err) {
  const UnboundednessTable table =
      unboundedness_table(parse_gamma_rule(rule), m_values, cfg.grid(10.0, 20), cfg.tol);
  detail::emit(cfg, direct_sum_csv(table), out);
  bool verified = true;
  for (const auto& r : table.rows) verified = verified && r.verified;
  if (!verified) err << "direct-sum: a truncation failed verification\n";
  if (!table.monotone) err << "direct-sum: norms are not strictly increasing\n";
  return verified && table.monotone ? pass : semantic;
}

/// Writes <prefix>_A, <prefix>_J and, for gamma != 2, <prefix>_C.
inline int cmd_model(double gamma, const std::string& prefix, const RunConfig& cfg, std::ostream& err) {
  const SymmetricGrid g = cfg.grid(20.0, 200);
  const GammaModel m = make_gamma_model(g, gamma);
  const io::MatrixFormat f = io::parse_format(cfg.format);
  const std::string ext = f == io::MatrixFormat::json ? ".json" : ".csv";
  io::save_matrix(prefix + "_A" + ext, m.A, f);
  io::save_matrix(prefix + "_J" + ext, m.P, f);
  if (m.C) {
    io::save_matrix(prefix + "_C" + ext, *m.C, f);
  } else {
    err << "model: gamma = 2 has no C-symmetry, " << prefix << "_C" << ext << " not written\n";
  }
  return pass;
}

/// Parses argv and runs one subcommand; never throws.
inline int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Krein-space C-symmetry toolkit"};
  app.require_subcommand(1);

  RunConfig cfg;
  Index grid_n = 0;
  double grid_l = 0.0;
  app.add_option("--tol", cfg.tol.ver, "verification tolerance")->check(CLI::PositiveNumber);
  app.add_option("--spec-tol", cfg.tol.spec, "eigenvalue reality and clustering tolerance")->check(CLI::PositiveNumber);
  app.add_option("--disc-tol", cfg.tol.disc, "discretization defect tolerance")->check(CLI::PositiveNumber);
  auto* opt_n = app.add_option("--grid-n", grid_n, "grid points per half-line")->check(CLI::Range(Index{4}, Index{100000}));
  auto* opt_l = app.add_option("--grid-l", grid_l, "grid half-length")->check(CLI::PositiveNumber);
  app.add_option("--format", cfg.format, "matrix output format")->check(CLI::IsMember({"json", "csv"}));
  app.add_option("--out", cfg.out, "output file (default: stdout)");

  std::string a_path, j_path, c_path;
  auto* verify = app.add_subcommand("verify", "check C^2 = I, JC > 0, AC = CA");
  verify->add_option("A", a_path)->required();
  verify->add_option("J", j_path)->required();
  verify->add_option("C", c_path)->required();

  auto* construct = app.add_subcommand("construct", "build a C-symmetry from the spectrum of A");
  construct->add_option("A", a_path)->required();
  construct->add_option("J", j_path)->required();

  auto* herm = app.add_subcommand("hermitize", "H = sqrt(JC) A sqrt(JC)^{-1}");
  herm->add_option("A", a_path)->required();
  herm->add_option("J", j_path)->required();
  herm->add_option("C", c_path)->required();

  double gmin = 0.0, gmax = 4.0;
  int steps = 41;
  std::vector<double> gammas;
  auto* sweep = app.add_subcommand("sweep", "point-interaction sweep over gamma (CSV)");
  auto* opt_gammas = sweep->add_option("--gammas", gammas, "explicit list of couplings")->delimiter(',');
  sweep->add_option("--gamma-min", gmin)->check(CLI::NonNegativeNumber)->excludes(opt_gammas);
  sweep->add_option("--gamma-max", gmax)->check(CLI::NonNegativeNumber)->excludes(opt_gammas);
  sweep->add_option("--steps", steps)->check(CLI::Range(2, 1000000))->excludes(opt_gammas);

  std::string rule = "above";
  std::vector<Index> m_values{5, 10, 20, 100};
  auto* dsum = app.add_subcommand("direct-sum", "norm growth of truncated direct sums (CSV)");
  dsum->add_option("--rule", rule, "above: 2 + 1/i, below: 2 - 1/(i + 1)")->check(CLI::IsMember({"above", "below"}));
  dsum->add_option("--m", m_values, "block counts")->delimiter(',');

  double gamma = 4.0;
  std::string prefix;
  auto* model = app.add_subcommand("model", "write A_gamma, J = P and C_gamma");
  model->add_option("--gamma", gamma)->check(CLI::NonNegativeNumber);
  model->add_option("--prefix", prefix)->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e, out, err) == 0 ? pass : operational;
  }
  if (opt_n->count() > 0) cfg.grid_n = grid_n;
  if (opt_l->count() > 0) cfg.grid_l = grid_l;

  try {
    if (verify->parsed()) return cmd_verify(a_path, j_path, c_path, cfg, out, err);
    if (construct->parsed()) return cmd_construct(a_path, j_path, cfg, out, err);
    if (herm->parsed()) return cmd_hermitize(a_path, j_path, c_path, cfg, out, err);
    if (sweep->parsed()) {
      if (gammas.empty()) {
        if (!(gmin < gmax)) throw Error(ErrorCode::InvalidArgument, "need gamma-min < gamma-max");
        gammas = linspace(gmin, gmax, steps);
      }
      return cmd_sweep(gammas, cfg, out);
    }
    if (dsum->parsed()) return cmd_direct_sum(rule, m_values, cfg, out, err);
    if (model->parsed()) return cmd_model(gamma, prefix, cfg, err);
  } catch (const Error& e) {
    err << "error [" << to_string(e.code()) << "]: " << e.what() << '\n';
    return operational;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return operational;
  }
  return operational;
}

}  // namespace krein::cli
