// Batch front-end: parse a JSON experiment config, dispatch to the library,
// emit CSV/JSON results and verification reports.

#include <CLI11.hpp>
#include <json.hpp>

#include <algorithm>
#include <cstdio>
#include <iostream>
#include <optional>
#include <string>

#include "cmvflows/curve.hpp"
#include "cmvflows/errors.hpp"
#include "cmvflows/flows.hpp"
#include "cmvflows/json_io.hpp"
#include "cmvflows/kernels.hpp"
#include "cmvflows/rng.hpp"

namespace {

using namespace cmvflows;
using nlohmann::json;

constexpr int kOk = 0;
constexpr int kConfigError = 2;
constexpr int kNumericalError = 3;

struct ExperimentConfig {
  int p = 0;
  std::vector<cxd> alpha;
  std::string command;
  HamiltonianSpec hamiltonian;
  bool has_hamiltonian = false;
  double t_end = 1.0;
  double dt = 1e-3;
  int h_samples = 64;
  int truncation = 64;
  double tolerance = 1e-8;
  std::uint64_t seed = 1;
  std::string output;
};

ExperimentConfig parse_config(const std::string& path, const std::string& cli_command,
                              std::optional<std::uint64_t> cli_seed,
                              const std::string& cli_output) {
  json j = json::parse(read_file(path));
  ExperimentConfig c;
  c.p = j.at("p").get<int>();
  if (c.p < 2 || c.p % 2 != 0) throw DomainError("config: p must be even and >= 2");
  if (!j.contains("alpha")) throw DomainError("config: alpha missing");
  for (const auto& e : j.at("alpha"))
    c.alpha.emplace_back(e.at(0).get<double>(), e.at(1).get<double>());
  if (static_cast<int>(c.alpha.size()) != c.p)
    throw DomainError("config: alpha length must equal p");
  for (const auto& a : c.alpha)
    if (std::abs(a) >= 1.0) throw DomainError("config: every |alpha_j| must be < 1");

  c.command = cli_command;
  if (j.contains("command") && j.at("command").get<std::string>() != cli_command)
    throw DomainError("config: command field disagrees with the CLI subcommand");

  if (j.contains("hamiltonian")) {
    const auto& h = j.at("hamiltonian");
    c.hamiltonian.kind = kind_from_string(h.at("kind").get<std::string>());
    c.hamiltonian.n = h.value("n", 0);
    c.has_hamiltonian = true;
  }
  c.t_end = j.value("t_end", 1.0);
  c.dt = j.value("dt", 1e-3);
  if (c.dt <= 0.0) throw DomainError("config: dt must be positive");
  c.h_samples = j.value("h_samples", 64);
  c.truncation = j.value("truncation", 64);
  c.tolerance = j.value("tolerance", 1e-8);
  if (c.h_samples <= 0 || c.truncation <= 0 || c.tolerance <= 0.0)
    throw DomainError("config: h_samples, truncation and tolerance must be positive");
  c.seed = j.value("seed", static_cast<std::uint64_t>(1));
  if (cli_seed) c.seed = *cli_seed;
  c.output = cli_output.empty() ? j.value("output", std::string()) : cli_output;

  if ((c.command == "simulate" || c.command == "factor-flow") && !c.has_hamiltonian)
    throw DomainError("config: command '" + c.command + "' needs a hamiltonian");
  if (c.command == "factor-flow" && c.hamiltonian.kind != HamiltonianKind::ReI &&
      c.hamiltonian.kind != HamiltonianKind::ImI)
    throw DomainError("config: factor-flow supports only kinds ReI and ImI");
  return c;
}

VerblunskyVector state_of(const ExperimentConfig& c) { return VerblunskyVector(c.p, c.alpha); }

// factorization truncation order; h_samples floors the circle-grid
// resolution (the solvers sample at least 2x the order they are given)
int trunc_of(const ExperimentConfig& c) { return std::max(c.truncation, (c.h_samples + 1) / 2); }

std::string default_path(const ExperimentConfig& c, const std::string& fallback) {
  return c.output.empty() ? fallback : c.output;
}

// ---------------------------------------------------------------------------

int cmd_invariants(const ExperimentConfig& c) {
  ConservedSet cs = invariants(state_of(c));
  write_file(default_path(c, "invariants.json"), to_json(cs) + "\n");
  return kOk;
}

int cmd_simulate(const ExperimentConfig& c) {
  Trajectory t = integrate_ode(state_of(c), c.hamiltonian, c.t_end, c.dt);
  std::string csv_path = default_path(c, "trajectory.csv");
  write_file(csv_path, trajectory_csv(t));

  double worst_p = 0.0, worst_i = 0.0, worst_k = 0.0;
  for (const auto& d : t.drift) {
    worst_p = std::max(worst_p, d.dP);
    worst_i = std::max(worst_i, d.max_dI);
    worst_k = std::max(worst_k, d.max_dK);
  }
  JsonWriter w;
  w.begin_object()
      .key("hamiltonian").value(to_string(c.hamiltonian))
      .key("steps").value(static_cast<int>(t.times.size()) - 1)
      .key("t_end").value(t.times.back())
      .key("aborted").value(t.aborted)
      .key("max_P_drift").value(worst_p)
      .key("max_I_drift").value(worst_i)
      .key("max_K_drift").value(worst_k)
      .key("final_alpha").begin_array();
  for (const auto& a : t.states.back().alpha()) w.value(a);
  w.end_array().end_object();
  std::string stem = csv_path;
  if (stem.size() > 4 && stem.substr(stem.size() - 4) == ".csv") stem.resize(stem.size() - 4);
  write_file(stem + "_summary.json", w.str() + "\n");
  if (t.aborted) throw NumericalError("simulate", t.note);
  return kOk;
}

int cmd_curve(const ExperimentConfig& c) {
  SpectralCurveData d = spectral_curve(state_of(c));
  if (d.dirichlet_collision)
    std::cerr << "warning: Dirichlet eigenvalues closer than 1e-6; downstream divisor "
                 "consumers assume simple roots\n";
  write_file(default_path(c, "curve.json"), to_json(d) + "\n");
  return kOk;
}

int cmd_orbit_check(const ExperimentConfig& c) {
  const int trials = 20;
  LaurentMatrix xf = coxeter_element(c.p).assembled;

  struct Trial {
    double recognize_residual;
    double route_mismatch;
    bool pass;
  };
  std::vector<Trial> results(trials);
  std::vector<std::string> errors(trials);

  kernels::parallel_for(trials, [&](int i) {
    SplitMix64 rng(c.seed + static_cast<std::uint64_t>(i) * 0x9E37ULL);
    Eigen::MatrixXcd g0 = Eigen::MatrixXcd::Identity(c.p, c.p);
    Eigen::MatrixXcd g1(c.p, c.p);
    for (int r = 0; r < c.p; ++r)
      for (int cc = 0; cc < c.p; ++cc) {
        g0(r, cc) += 0.25 * cxd(rng.uniform() - 0.5, rng.uniform() - 0.5);
        g1(r, cc) = 0.25 * cxd(rng.uniform() - 0.5, rng.uniform() - 0.5);
      }
    LaurentMatrix g(c.p);
    g.set_coeff(0, g0);
    g.set_coeff(1, g1);
    try {
      LaurentMatrix dressed = dressing_action(g, xf, trunc_of(c), c.tolerance);
      auto v = recognize_floquet(dressed, 1e-7);
      double resid = 1e99;
      if (v) {
        LaurentMatrix rebuilt = build_factors(*v).assembled;
        resid = coeff_distance(dressed, rebuilt);
      }
      results[static_cast<std::size_t>(i)] = {resid, 0.0, v.has_value() && resid < 1e-7};
    } catch (const std::exception& e) {
      errors[static_cast<std::size_t>(i)] = e.what();
      results[static_cast<std::size_t>(i)] = {1e99, 1e99, false};
    }
  });

  bool all = true;
  JsonWriter w;
  w.begin_object().key("trials").begin_array();
  for (int i = 0; i < trials; ++i) {
    const Trial& t = results[static_cast<std::size_t>(i)];
    all = all && t.pass;
    w.begin_object()
        .key("trial").value(i)
        .key("recognize_residual").value(t.recognize_residual)
        .key("pass").value(t.pass);
    if (!errors[static_cast<std::size_t>(i)].empty())
      w.key("error").value(errors[static_cast<std::size_t>(i)]);
    w.end_object();
  }
  w.end_array().key("pass").value(all).end_object();
  write_file(default_path(c, "orbit_check.json"), w.str() + "\n");
  if (!all) throw NumericalError("orbit-check", "some trials failed");
  return kOk;
}

int cmd_bracket_check(const ExperimentConfig& c) {
  VerblunskyVector v = state_of(c);
  InvolutionReport rep = involution_check(v, c.tolerance);

  double skl_worst = 0.0;
  for (int a = 0; a < c.p; ++a)
    for (int b = 0; b < c.p; ++b) {
      cxd got = sklyanin_combined(v, a, b);
      cxd expect = a == b ? cxd(0.0, 2.0) * (1.0 - std::norm(v.at(a))) : cxd(0.0);
      skl_worst = std::max(skl_worst, std::abs(got - expect));
    }

  JsonWriter w;
  w.begin_object().key("involution").raw(to_json(rep))
      .key("sklyanin_max_defect").value(skl_worst)
      .key("sklyanin_pass").value(skl_worst < 1e-10)
      .key("pass").value(rep.pass && skl_worst < 1e-10)
      .end_object();
  write_file(default_path(c, "bracket_check.json"), w.str() + "\n");
  if (!(rep.pass && skl_worst < 1e-10)) throw NumericalError("bracket-check", "defect above tolerance");
  return kOk;
}

int cmd_factor_flow(const ExperimentConfig& c) {
  VerblunskyVector v = state_of(c);
  VerblunskyVector by_factor =
      flow_by_factorization(v, c.hamiltonian, c.t_end, trunc_of(c), c.tolerance);
  VerblunskyVector by_ode = integrate_ode(v, c.hamiltonian, c.t_end, c.dt).states.back();
  double diff = 0.0;
  for (int j = 0; j < c.p; ++j)
    diff = std::max(diff, std::abs(by_factor.alpha()[static_cast<std::size_t>(j)] -
                                   by_ode.alpha()[static_cast<std::size_t>(j)]));
  JsonWriter w;
  w.begin_object()
      .key("hamiltonian").value(to_string(c.hamiltonian))
      .key("t").value(c.t_end)
      .key("factorization_endpoint").begin_array();
  for (const auto& a : by_factor.alpha()) w.value(a);
  w.end_array().key("ode_endpoint").begin_array();
  for (const auto& a : by_ode.alpha()) w.value(a);
  w.end_array()
      .key("max_component_diff").value(diff)
      .key("pass").value(diff < 1e-6)
      .end_object();
  write_file(default_path(c, "factor_flow.json"), w.str() + "\n");
  if (diff >= 1e-6) throw NumericalError("factor-flow", "routes disagree by " + std::to_string(diff));
  return kOk;
}

// the full property suite at the configured state; one line per check
int cmd_verify(const ExperimentConfig& c) {
  VerblunskyVector v = state_of(c);
  SplitMix64 rng(c.seed);
  struct Row {
    std::string name;
    double residual;
    double tol;
    bool pass;
  };
  std::vector<Row> rows;
  auto check = [&](const std::string& name, double residual, double tol) {
    rows.push_back({name, residual, tol, residual < tol});
  };

  FloquetCMV f = build_factors(v);
  check("unitarity E star(E) = I",
        coeff_distance(multiply(f.assembled, star(f.assembled)), LaurentMatrix::identity(c.p)),
        1e-12);

  ConservedSet cs = invariants(v);
  CharPoly cp = char_poly(v);
  double det_resid = 0.0;
  for (int k = 0; k < 20; ++k) {
    cxd z = rng.disk(1.5, 0.4), h = rng.disk(1.4, 0.5);
    cxd lhs = cp.eval(z, h);
    cxd rhs = cs.P * std::pow(z, c.p / 2) * (discriminant(v, z) - h - 1.0 / h);
    det_resid = std::max(det_resid, std::abs(lhs - rhs) / std::max(1.0, std::abs(lhs)));
  }
  check("determinant identity", det_resid, 1e-10);
  check("char poly h-band", cp.max_out_of_band, 1e-12);

  double sym = 0.0;
  for (int j = 0; j <= c.p / 2; ++j)
    sym = std::max(sym, std::abs(std::conj(cs.I_at(j)) - cs.I_at(-j)));
  check("conjugation symmetry of I", sym, 1e-12);

  auto field = hamiltonian_field(obs_K(c.p, 1, 1), v);
  double ground = 0.0;
  for (int j = 0; j < c.p; ++j) {
    cxd expect = cxd(0.0, 1.0) * (1.0 - std::norm(v.at(j))) * (v.at(j - 1) + v.at(j + 1));
    ground = std::max(ground, std::abs(field[static_cast<std::size_t>(j)] - expect));
  }
  check("bracket ground truth ReK_1", ground, 1e-12);

  InvolutionReport rep = involution_check(v, 1e-8);
  check("involution", rep.max_abs, 1e-8);

  double skl = 0.0;
  for (int a = 0; a < c.p; ++a) {
    cxd got = sklyanin_combined(v, a, a);
    skl = std::max(skl, std::abs(got - cxd(0.0, 2.0) * (1.0 - std::norm(v.at(a)))));
  }
  check("sklyanin coordinate brackets", skl, 1e-10);

  Trajectory t = integrate_ode(v, {HamiltonianKind::ReK, 1}, 1.0, 1e-3);
  double drift = 0.0;
  for (const auto& d : t.drift) drift = std::max({drift, d.dP, d.max_dI});
  check("conservation under ReK_1 flow", drift, 1e-8);
  check("unitarity along flow",
        coeff_distance(multiply(build_factors(t.states.back()).assembled,
                                star(build_factors(t.states.back()).assembled)),
                       LaurentMatrix::identity(c.p)),
        1e-9);
  check("isospectrality",
        eigenvalue_multiset_distance(eval(build_factors(v).assembled, cxd(1.0)),
                                     eval(build_factors(t.states.back()).assembled, cxd(1.0))),
        1e-7);

  VerblunskyVector pf = p_flow_exact(v, 1.0);
  Trajectory tp = integrate_ode(v, {HamiltonianKind::LogP, 0}, 1.0, 1e-3);
  double pdiff = 0.0;
  for (int j = 0; j < c.p; ++j)
    pdiff = std::max(pdiff, std::abs(pf.alpha()[static_cast<std::size_t>(j)] -
                                     tp.states.back().alpha()[static_cast<std::size_t>(j)]));
  check("exact P-flow vs ODE", pdiff, 1e-10);

  HamiltonianSpec si{HamiltonianKind::ReI, c.p > 2 ? 1 : 0};
  VerblunskyVector vf = flow_by_factorization(v, si, 0.05, trunc_of(c), c.tolerance);
  VerblunskyVector vo = integrate_ode(v, si, 0.05, 1e-4).states.back();
  double fdiff = 0.0;
  for (int j = 0; j < c.p; ++j)
    fdiff = std::max(fdiff, std::abs(vf.alpha()[static_cast<std::size_t>(j)] -
                                     vo.alpha()[static_cast<std::size_t>(j)]));
  check("factorization route vs ODE", fdiff, 1e-6);

  Eigen::Matrix2cd m = monodromy(v, cxd(0.8, 0.5));
  check("monodromy det", std::abs(m.determinant() - cxd(1.0)), 1e-10);
  check("monodromy trace = discriminant", std::abs(m.trace() - discriminant(v, cxd(0.8, 0.5))),
        1e-10);

  bool curve_ok = true;
  std::string curve_note;
  try {
    SpectralCurveData d = dirichlet_data(v);
    cxd prod(1.0);
    for (const auto& z : d.dirichlet_z) prod *= z;
    check("dirichlet product", std::abs(prod + v.at(c.p - 1) / v.at(c.p - 2)), 1e-8);
  } catch (const std::exception& e) {
    curve_ok = false;
    curve_note = e.what();
  }

  JsonWriter w;
  w.begin_object().key("checks").begin_array();
  bool all = curve_ok;
  for (const auto& r : rows) {
    all = all && r.pass;
    w.begin_object()
        .key("name").value(r.name)
        .key("residual").value(r.residual)
        .key("tol").value(r.tol)
        .key("pass").value(r.pass)
        .end_object();
  }
  w.end_array();
  if (!curve_note.empty()) w.key("note").value(curve_note);
  w.key("pass").value(all).end_object();
  std::string text = w.str() + "\n";
  if (!c.output.empty()) write_file(c.output, text);

  for (const auto& r : rows)
    std::printf("[%s] %-34s residual %.3e (tol %.1e)\n", r.pass ? "PASS" : "FAIL", r.name.c_str(),
                r.residual, r.tol);
  if (!all) throw NumericalError("verify", "property suite failed");
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Isospectral flows on Floquet CMV matrices"};
  app.require_subcommand(1);

  std::string config_path, output;
  std::optional<std::uint64_t> seed;
  const std::pair<const char*, const char*> commands[] = {
      {"simulate", "integrate a Hamiltonian flow; emits trajectory CSV + drift summary"},
      {"invariants", "conserved family P, I_j, K_n of the configured state"},
      {"curve", "branch points and Dirichlet divisor of the spectral curve"},
      {"orbit-check", "20 seeded dressing trials reduced back to Verblunsky data"},
      {"bracket-check", "involution report and Sklyanin coordinate-bracket defect"},
      {"factor-flow", "factorization-route endpoint against the ODE route"},
      {"verify", "full property suite; nonzero exit on any failure"}};
  for (const auto& [name, help] : commands) {
    auto* sub = app.add_subcommand(name, help);
    sub->add_option("--config", config_path, "experiment config (JSON)")->required();
    sub->add_option("--output", output, "output path");
    sub->add_option("--seed", seed, "seed for randomized checks");
  }

  CLI11_PARSE(app, argc, argv);
  std::string cmd = app.get_subcommands().front()->get_name();

  ExperimentConfig cfg;
  try {
    cfg = parse_config(config_path, cmd, seed, output);
  } catch (const std::exception& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kConfigError;
  }

  try {
    if (cmd == "invariants") return cmd_invariants(cfg);
    if (cmd == "simulate") return cmd_simulate(cfg);
    if (cmd == "curve") return cmd_curve(cfg);
    if (cmd == "orbit-check") return cmd_orbit_check(cfg);
    if (cmd == "bracket-check") return cmd_bracket_check(cfg);
    if (cmd == "factor-flow") return cmd_factor_flow(cfg);
    if (cmd == "verify") return cmd_verify(cfg);
  } catch (const std::exception& e) {
    std::cerr << "numerical failure: " << e.what() << "\n";
    return kNumericalError;
  }
  return kConfigError;
}
