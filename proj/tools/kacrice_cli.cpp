// Command-line front end: every closed-form and Monte Carlo computation in
// the library, with reproducible seeds and machine-readable JSON output.

#include <chrono>
#include <cstdint>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "kacrice/circle.hpp"
#include "kacrice/sphere.hpp"
#include "kacrice/symgauss.hpp"
#include "kacrice/torus.hpp"

using nlohmann::json;

namespace {

std::uint64_t default_seed() {
  if (const char* s = std::getenv("RCF_SEED")) {
    try {
      return std::stoull(s);
    } catch (...) {
      std::cerr << "warning: RCF_SEED is not a valid integer; using 0\n";
    }
  }
  return 0;
}

kacrice::MonomialSet load_monomial_set(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("cannot open monomial set file: " + path);
  json j;
  in >> j;
  if (!j.is_array() || j.empty())
    throw std::invalid_argument("monomial set file: expected nonempty array");
  kacrice::MonomialSet ms;
  ms.L = static_cast<int>(j.front().size());
  for (const auto& row : j) {
    if (!row.is_array())
      throw std::invalid_argument("monomial set file: expected array of arrays");
    std::vector<long long> m;
    for (const auto& v : row) m.push_back(v.get<long long>());
    ms.vectors.push_back(std::move(m));
  }
  kacrice::validate_monomial_set(ms);
  return ms;
}

struct Report {
  std::string command;
  json params = json::object();
  double value = 0.0;
  bool has_std_error = false;
  double std_error = 0.0;
  bool has_abs_err = false;
  double abs_err_est = 0.0;
  std::uint64_t n_count = 0;     // n_samples or n_evals
  std::string n_kind;            // "n_samples" or "n_evals"
  std::uint64_t seed = 0;
  bool has_target = false;
  double target_value = 0.0;
  std::string target_note;

  void set_mc(const kacrice::McEstimate& e) {
    value = e.mean;
    has_std_error = true;
    std_error = e.std_error;
    n_kind = "n_samples";
    n_count = e.n_samples;
  }
  void set_target(double v, const std::string& note) {
    has_target = true;
    target_value = v;
    target_note = note;
  }

  void emit(const std::string& csv_path, long long elapsed_ms) const {
    json out;
    out["command"] = command;
    out["params"] = params;
    out["value"] = value;
    if (has_std_error) out["std_error"] = std_error;
    if (has_abs_err) out["abs_err_est"] = abs_err_est;
    if (!n_kind.empty()) out[n_kind] = n_count;
    out["seed"] = seed;
    out["elapsed_ms"] = elapsed_ms;
    if (has_target)
      out["paper_target"] = {{"value", target_value}, {"note", target_note}};
    std::cout << out.dump() << "\n";
    if (!csv_path.empty()) {
      const bool fresh = !std::ifstream(csv_path).good();
      std::ofstream csv(csv_path, std::ios::app);
      if (fresh)
        csv << "command,value,std_error,abs_err_est,n,seed\n";
      char buf[512];
      std::snprintf(buf, sizeof(buf), "%s,%.17g,%.17g,%.17g,%llu,%llu\n",
                    command.c_str(), value, has_std_error ? std_error : 0.0,
                    has_abs_err ? abs_err_est : 0.0,
                    static_cast<unsigned long long>(n_count),
                    static_cast<unsigned long long>(seed));
      csv << buf;
    }
  }
};

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Expected critical points of random trigonometric/spherical "
               "polynomials: closed forms and Monte Carlo verification"};
  app.require_subcommand(1);

  std::uint64_t seed = default_seed();
  std::string csv_path;
  app.add_option("--seed", seed, "RNG seed (default: RCF_SEED env or 0)");
  app.add_option("--csv", csv_path, "append a flat result row to this file");

  int nu = 2, n_param = 2, d = 3, d1 = 3, d2 = 3, l_dim = 1, grid = 64,
      oversample = 16;
  double tol = 1e-8, tmax = 1e4, r_exp = 1.0, a_val = 9.0 / 5.0, b_val = 1.0;
  std::uint64_t samples = 100000;
  std::string set_path, phi_str;
  bool use_mc = false;

  auto* ev = app.add_subcommand("ev-circle", "Kac-Rice circle expectation");
  ev->add_option("--nu", nu)->required();

  auto* var = app.add_subcommand("var-circle", "exact circle variance");
  var->add_option("--nu", nu)->required();
  var->add_option("--tol", tol);

  auto* dinf = app.add_subcommand("delta-inf", "limit variance constant");
  dinf->add_option("--tol", tol);
  dinf->add_option("--tmax", tmax);

  auto* mcc = app.add_subcommand("mc-circle", "Monte Carlo circle moments");
  mcc->add_option("--nu", nu)->required();
  mcc->add_option("--samples", samples);
  mcc->add_option("--oversample", oversample);

  auto* reg = app.add_subcommand("regime", "reshuffled-frequency expectation");
  reg->add_option("--phi", phi_str, "comma-separated positive integers")
      ->required();
  reg->add_option("--nu", nu)->required();

  auto* tev = app.add_subcommand("torus-ev", "torus expectation (MC)");
  tev->add_option("--set", set_path)->required();
  tev->add_option("--samples", samples);

  auto* tmc = app.add_subcommand("torus-mc", "T^2 brute-force count");
  tmc->add_option("--set", set_path)->required();
  tmc->add_option("--samples", samples);
  tmc->add_option("--grid", grid);

  app.add_subcommand("arnold", "Arnold family expectation (closed form)");

  auto* cc = app.add_subcommand("cube-const", "cube-set asymptotic constant");
  cc->add_option("--l", l_dim)->required();
  cc->add_option("--samples", samples);

  auto* sev = app.add_subcommand("sphere-ev", "sphere expectation");
  sev->add_option("--nu", nu)->required();
  sev->add_option("--d", d);
  sev->add_option("--samples", samples);
  sev->add_flag("--mc", use_mc, "force the Monte Carlo path");

  auto* kd = app.add_subcommand("kd", "sphere asymptotic constant K_d");
  kd->add_option("--d", d);
  kd->add_option("--samples", samples);
  kd->add_flag("--mc", use_mc, "force the Monte Carlo path");

  auto* h2 = app.add_subcommand("harm2", "S^2 harmonic eigenspace expectation");
  h2->add_option("--n", n_param)->required();

  auto* gb = app.add_subcommand("gb-check", "signed-determinant Euler check");
  gb->add_option("--n", n_param)->required();

  auto* vp = app.add_subcommand("varpi", "product-sphere growth exponent");
  vp->add_option("--d1", d1)->required();
  vp->add_option("--d2", d2)->required();
  vp->add_option("--r", r_exp)->required();

  auto* ia = app.add_subcommand("iab", "I(a,b) reduction");
  ia->add_option("--a", a_val)->required();
  ia->add_option("--b", b_val)->required();
  ia->add_option("--tol", tol);
  ia->add_option("--samples", samples);
  ia->add_flag("--mc", use_mc, "use the 3-D Monte Carlo path");

  auto* de = app.add_subcommand("detexp", "E|det X| under block covariance");
  de->add_option("--l", l_dim)->required();
  de->add_option("--a", a_val);
  de->add_option("--b", b_val);
  de->add_option("--samples", samples);

  // Let the global --seed/--csv flags be written after the subcommand name.
  for (CLI::App* sub : app.get_subcommands([](const CLI::App*) { return true; }))
    sub->fallthrough();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) return app.exit(e);
    app.exit(e);
    return 2;
  }

  Report rep;
  rep.seed = seed;
  const auto t0 = std::chrono::steady_clock::now();
  try {
    if (ev->parsed()) {
      rep.command = "ev-circle";
      rep.params = {{"nu", nu}};
      rep.value = kacrice::rice_expectation(nu);
      rep.set_target(2.0 * std::sqrt(0.6) * nu,
                     "asymptotic 2*sqrt(3/5)*nu");
    } else if (var->parsed()) {
      rep.command = "var-circle";
      rep.params = {{"nu", nu}, {"tol", tol}};
      rep.value = kacrice::variance_exact(nu, tol);
      rep.has_abs_err = true;
      rep.abs_err_est = tol;
    } else if (dinf->parsed()) {
      rep.command = "delta-inf";
      rep.params = {{"tol", tol}, {"tmax", tmax}};
      auto res = kacrice::delta_infinity(tol, tmax);
      rep.value = res.value;
      rep.has_abs_err = true;
      rep.abs_err_est = res.err_est;
      rep.n_kind = "n_evals";
      rep.n_count = res.n_evals;
      rep.set_target(0.35, "limit variance constant, approx 0.35");
    } else if (mcc->parsed()) {
      rep.command = "mc-circle";
      rep.params = {{"nu", nu}, {"samples", samples}, {"oversample", oversample}};
      auto res = kacrice::mc_moments(nu, samples, seed, oversample);
      rep.set_mc(res.mean);
      rep.params["variance_mean"] = res.variance.mean;
      rep.params["variance_std_error"] = res.variance.std_error;
      rep.params["n_degenerate"] = res.n_degenerate;
      rep.set_target(kacrice::rice_expectation(nu), "closed-form expectation");
    } else if (reg->parsed()) {
      rep.command = "regime";
      std::vector<long long> phi;
      std::stringstream ss(phi_str);
      std::string tok;
      while (std::getline(ss, tok, ',')) phi.push_back(std::stoll(tok));
      rep.params = {{"phi", phi}, {"nu", nu}};
      rep.value = kacrice::regime_expectation(phi, nu);
    } else if (tev->parsed()) {
      rep.command = "torus-ev";
      rep.params = {{"set", set_path}, {"samples", samples}};
      auto ms = load_monomial_set(set_path);
      rep.set_mc(kacrice::expectation(ms, samples, seed));
    } else if (tmc->parsed()) {
      rep.command = "torus-mc";
      rep.params = {{"set", set_path}, {"samples", samples}, {"grid", grid}};
      auto ms = load_monomial_set(set_path);
      auto res = kacrice::mc_count_critical_t2(ms, samples, grid, seed);
      rep.set_mc(res.counts);
      rep.params["n_discarded"] = res.n_discarded;
    } else if (app.get_subcommand("arnold")->parsed()) {
      rep.command = "arnold";
      rep.value = 4.0 * M_PI / 3.0;
      rep.set_target(4.0 * M_PI / 3.0, "Arnold family, 4*pi/3");
    } else if (cc->parsed()) {
      rep.command = "cube-const";
      rep.params = {{"l", l_dim}};
      auto res = kacrice::cube_asymptotic_constant(l_dim, samples, seed);
      if (l_dim <= 2) {
        rep.value = res.mean;
        rep.has_abs_err = true;
        rep.abs_err_est = 1e-12;
      } else {
        rep.set_mc(res);
      }
      if (l_dim == 1) rep.set_target(std::sqrt(0.6), "sqrt(3/5)");
      if (l_dim == 2) rep.set_target(0.4717, "approx 0.4717");
    } else if (sev->parsed()) {
      rep.command = "sphere-ev";
      rep.params = {{"nu", nu}, {"d", d}};
      if (d == 3 && !use_mc) {
        rep.value = kacrice::expectation_sphere_quad(nu);
        rep.has_abs_err = true;
        rep.abs_err_est = 1e-12;
      } else {
        rep.params["samples"] = samples;
        rep.set_mc(kacrice::expectation_sphere(nu, d, samples, seed));
      }
    } else if (kd->parsed()) {
      rep.command = "kd";
      rep.params = {{"d", d}};
      if (d == 3 && !use_mc) {
        rep.value = kacrice::kd_constant_quad_d3();
        rep.has_abs_err = true;
        rep.abs_err_est = 1e-12;
      } else {
        rep.params["samples"] = samples;
        rep.set_mc(kacrice::kd_constant(d, samples, seed));
      }
    } else if (h2->parsed()) {
      rep.command = "harm2";
      rep.params = {{"n", n_param}};
      rep.value = kacrice::s2_harmonic_expectation(n_param);
      rep.set_target(kacrice::s2_asymptotic() *
                         static_cast<double>(n_param) * n_param,
                     "asymptotic (2/sqrt(3))*n^2");
    } else if (gb->parsed()) {
      rep.command = "gb-check";
      rep.params = {{"n", n_param}};
      rep.value = kacrice::gauss_bonnet_check(n_param);
      rep.set_target(2.0, "Euler characteristic of S^2");
    } else if (vp->parsed()) {
      rep.command = "varpi";
      rep.params = {{"d1", d1}, {"d2", d2}, {"r", r_exp}};
      rep.value = kacrice::varpi(d1, d2, r_exp);
    } else if (ia->parsed()) {
      rep.command = "iab";
      rep.params = {{"a", a_val}, {"b", b_val}};
      if (use_mc) {
        rep.params["samples"] = samples;
        rep.set_mc(kacrice::iab_mc(a_val, b_val, samples, seed));
      } else {
        rep.params["tol"] = tol;
        rep.value = kacrice::iab(a_val, b_val, tol);
        rep.has_abs_err = true;
        rep.abs_err_est = tol;
      }
    } else if (de->parsed()) {
      rep.command = "detexp";
      rep.params = {{"l", l_dim}, {"a", a_val}, {"b", b_val}, {"samples", samples}};
      rep.set_mc(kacrice::det_abs_expectation(
          kacrice::block_covariance(l_dim, a_val, b_val), samples, seed));
    }
  } catch (const std::invalid_argument& e) {
    std::cerr << "invalid arguments: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "numeric failure: " << e.what() << "\n";
    return 3;
  }
  const auto t1 = std::chrono::steady_clock::now();
  rep.emit(csv_path,
           std::chrono::duration_cast<std::chrono::milliseconds>(t1 - t0).count());
  return 0;
}
