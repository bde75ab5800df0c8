// Command-line front end. Talks to the library only through the C API.
#include <CLI11.hpp>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include "specprice/specprice.h"

namespace {

enum Exit { kOk = 0, kValidation = 1, kVerification = 2, kIo = 3 };

struct Options {
  std::optional<double> v, c, q, q1, q2, s, s1, s2, qs;
  int n = 2, m = 1;
  std::optional<unsigned long long> rounds, seed;
  std::optional<int> grid;
  std::string sweep, out;
  bool verify_each = false;
  std::optional<double> eps;
};

spm_params build_params(const Options& o) {
  spm_params p;
  spm_params_default(&p);
  if (o.v) p.v = *o.v;
  if (o.c) p.c = *o.c;
  if (o.q) p.q1 = p.q2 = *o.q;
  if (o.q1) p.q1 = *o.q1;
  if (o.q2) p.q2 = *o.q2;
  if (o.s) p.s1 = p.s2 = *o.s;
  if (o.s1) p.s1 = *o.s1;
  if (o.s2) p.s2 = *o.s2;
  if (o.qs) p.qs = *o.qs;
  p.n = o.n;
  p.m = o.m;
  return p;
}

int report(int status, const char* what) {
  std::cerr << "error: " << what << ": " << spm_last_error() << "\n";
  return status == SPM_ERR_IO ? kIo : kValidation;
}

// Writes to `path`, or stdout when empty.
int emit(const std::string& path, const std::string& text) {
  if (path.empty()) {
    std::fwrite(text.data(), 1, text.size(), stdout);
    return kOk;
  }
  std::ofstream f(path, std::ios::binary);
  if (!f) {
    std::cerr << "error: cannot open " << path << " for writing\n";
    return kIo;
  }
  f << text;
  f.close();
  if (!f) {
    std::cerr << "error: failed writing " << path << "\n";
    return kIo;
  }
  return kOk;
}

struct Profile {
  spm_profile* h = nullptr;
  ~Profile() { spm_profile_free(h); }
};

int cmd_solve(const Options& o) {
  spm_params p = build_params(o);
  Profile prof;
  if (int st = spm_solve(&p, &prof.h)) return report(st, "solve");
  const char* json = nullptr;
  if (int st = spm_profile_json(prof.h, &json)) return report(st, "solve");
  std::string js = json;
  if (o.out.empty()) return emit("", js);
  std::error_code ec;
  std::filesystem::create_directories(o.out, ec);
  if (ec) {
    std::cerr << "error: cannot create directory " << o.out << ": " << ec.message() << "\n";
    return kIo;
  }
  if (int rc = emit((std::filesystem::path(o.out) / "equilibrium.json").string(), js)) return rc;
  const char* csv = nullptr;
  if (int st = spm_profile_cdf_csv(prof.h, o.grid.value_or(201), &csv)) return report(st, "solve");
  return emit((std::filesystem::path(o.out) / "cdf.csv").string(), csv);
}

int cmd_dist(const Options& o) {
  spm_params p = build_params(o);
  Profile prof;
  if (int st = spm_solve(&p, &prof.h)) return report(st, "dist");
  const char* csv = nullptr;
  if (int st = spm_profile_cdf_csv(prof.h, o.grid.value_or(201), &csv)) return report(st, "dist");
  return emit(o.out, csv);
}

int cmd_simulate(const Options& o) {
  if (!o.seed) {
    std::cerr << "error: simulate needs --seed\n";
    return kValidation;
  }
  spm_params p = build_params(o);
  Profile prof;
  if (int st = spm_solve(&p, &prof.h)) return report(st, "simulate");
  spm_sim* sim = nullptr;
  if (int st = spm_simulate(prof.h, o.rounds.value_or(1000000), *o.seed, &sim))
    return report(st, "simulate");
  const char* csv = nullptr;
  int st = spm_sim_csv(sim, &csv);
  std::string text = st ? "" : csv;
  spm_sim_free(sim);
  if (st) return report(st, "simulate");
  return emit(o.out, text);
}

int cmd_verify(const Options& o) {
  spm_params p = build_params(o);
  Profile prof;
  if (int st = spm_solve(&p, &prof.h)) return report(st, "verify");
  spm_report* rep = nullptr;
  if (int st = spm_certify(prof.h, o.grid.value_or(10000), &rep)) return report(st, "verify");
  double gain = 0;
  spm_report_max_gain(rep, &gain);
  const char* csv = nullptr;
  int st = spm_report_csv(rep, &csv);
  std::string text = st ? "" : csv;
  spm_report_free(rep);
  if (st) return report(st, "verify");
  if (int rc = emit(o.out, text)) return rc;
  double bound = o.eps.value_or(1e-6 * (p.v - p.c));
  std::cerr << "max deviation gain " << gain << " (bound " << bound << "): "
            << (gain <= bound ? "pass" : "FAIL") << "\n";
  return gain <= bound ? kOk : kVerification;
}

int cmd_sweep(const Options& o) {
  std::string axis;
  double lo = 0, hi = 0;
  int steps = 0;
  {
    std::istringstream is(o.sweep);
    std::string lo_s, hi_s, steps_s;
    if (!std::getline(is, axis, ':') || !std::getline(is, lo_s, ':') ||
        !std::getline(is, hi_s, ':') || !std::getline(is, steps_s)) {
      std::cerr << "error: --sweep expects var:lo:hi:steps\n";
      return kValidation;
    }
    try {
      size_t pos = 0;
      lo = std::stod(lo_s, &pos);
      if (pos != lo_s.size()) throw std::invalid_argument(lo_s);
      hi = std::stod(hi_s, &pos);
      if (pos != hi_s.size()) throw std::invalid_argument(hi_s);
      steps = std::stoi(steps_s, &pos);
      if (pos != steps_s.size()) throw std::invalid_argument(steps_s);
    } catch (const std::exception&) {
      std::cerr << "error: cannot parse --sweep " << o.sweep << "\n";
      return kValidation;
    }
  }
  spm_params p = build_params(o);
  spm_sweep_options so;
  spm_sweep_options_default(&so);
  so.verify_each = o.verify_each ? 1 : 0;
  if (o.grid) so.grid = *o.grid;
  if (o.eps) so.eps = *o.eps;
  if (o.rounds) so.rounds = *o.rounds;
  if (o.seed) {
    so.seed = *o.seed;
    so.has_seed = 1;
  }
  spm_sweep* sw = nullptr;
  if (int st = spm_sweep_run(&p, axis.c_str(), lo, hi, steps, &so, &sw)) return report(st, "sweep");
  const char* csv = nullptr;
  int ok = 1;
  spm_sweep_all_verified(sw, &ok);
  int st = spm_sweep_csv(sw, &csv);
  std::string text = st ? "" : csv;
  spm_sweep_free(sw);
  if (st) return report(st, "sweep");
  if (int rc = emit(o.out, text)) return rc;
  if (!ok) {
    std::cerr << "error: at least one sweep point failed verification\n";
    return kVerification;
  }
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Equilibrium pricing for secondary spectrum markets with costly rival-state information"};
  app.set_config("--config", "", "key = value file; keys mirror the long flag names");
  app.fallthrough();
  app.require_subcommand(1);
  Options o;
  app.add_option("--v", o.v, "highest price the secondary pays");
  app.add_option("--c", o.c, "transaction cost per sale");
  app.add_option("--q", o.q, "availability of both channels");
  app.add_option("--q1", o.q1, "availability of primary 1");
  app.add_option("--q2", o.q2, "availability of primary 2");
  app.add_option("--s", o.s, "acquisition cost for both primaries");
  app.add_option("--s1", o.s1, "acquisition cost of primary 1");
  app.add_option("--s2", o.s2, "acquisition cost of primary 2");
  app.add_option("--qs", o.qs, "estimate accuracy in (1/2, 1]");
  app.add_option("--n", o.n, "number of primaries (extensions)");
  app.add_option("--m", o.m, "number of secondaries (extensions)");
  app.add_option("--rounds", o.rounds, "simulation rounds");
  app.add_option("--seed", o.seed, "simulation seed");
  app.add_option("--grid", o.grid, "grid size (verifier or CDF table)");
  app.add_option("--sweep", o.sweep, "var:lo:hi:steps with var in s, q, qs, q2, s2");
  app.add_option("--out", o.out, "output file (directory for solve)");
  app.add_flag("--verify-each", o.verify_each, "certify every sweep point");
  app.add_option("--eps", o.eps, "verification bound");

  auto* solve = app.add_subcommand("solve", "equilibrium summary and CDF tables");
  auto* simulate = app.add_subcommand("simulate", "Monte Carlo market replay");
  auto* verify = app.add_subcommand("verify", "best-response certification");
  auto* sweep = app.add_subcommand("sweep", "parameter sweep to CSV");
  auto* dist = app.add_subcommand("dist", "(x, F(x)) tables");

  try {
    app.parse(argc, argv);
  } catch (const CLI::FileError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kIo;
  } catch (const CLI::ParseError& e) {
    int rc = app.exit(e);
    return rc == 0 ? kOk : kValidation;
  }
  if (solve->parsed()) return cmd_solve(o);
  if (simulate->parsed()) return cmd_simulate(o);
  if (verify->parsed()) return cmd_verify(o);
  if (sweep->parsed()) {
    if (o.sweep.empty()) {
      std::cerr << "error: sweep needs --sweep var:lo:hi:steps\n";
      return kValidation;
    }
    return cmd_sweep(o);
  }
  if (dist->parsed()) return cmd_dist(o);
  return kValidation;
}
