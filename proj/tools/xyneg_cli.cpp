// command line driver: mu-sweep, lambda-scan, fit, compare, oracle-check
//
// exit codes: 0 success, 1 partial/runtime failure, 2 invalid configuration

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "xyneg/analysis.hpp"
#include "xyneg/blocks.hpp"
#include "xyneg/entanglement.hpp"
#include "xyneg/exact.hpp"

using nlohmann::json;

namespace {

struct CommonOpts {
  double gamma = 1.0;
  double lambda = 1.0;
  std::vector<int> sizes;
  int kept_states = 40;
  int sweeps = 4;
  std::string window = "0.1:3";
  std::string format = "csv";
  std::string out;
  int jobs = 1;
};

xyneg::FitWindow parse_window(const std::string& s) {
  const auto sep = s.find(':');
  if (sep == std::string::npos)
    throw CLI::ValidationError("--window", "expected min:max");
  xyneg::FitWindow w;
  w.mu_min = std::stod(s.substr(0, sep));
  w.mu_max = std::stod(s.substr(sep + 1));
  if (!(w.mu_min >= 0.0) || !(w.mu_max > w.mu_min))
    throw CLI::ValidationError("--window", "expected 0 <= min < max");
  return w;
}

std::pair<int, int> parse_ratio(const std::string& s) {
  const auto sep = s.find('/');
  if (sep == std::string::npos) {
    // plain decimal: interpret with denominator 720 to keep common grids exact
    const double v = std::stod(s);
    const int den = 720;
    const int num = static_cast<int>(std::lround(v * den));
    if (num <= 0) throw CLI::ValidationError("--mu", "ratio must be positive");
    return {num, den};
  }
  const int num = std::stoi(s.substr(0, sep));
  const int den = std::stoi(s.substr(sep + 1));
  if (num <= 0 || den <= 0)
    throw CLI::ValidationError("--mu", "ratio must be positive");
  return {num, den};
}

xyneg::DmrgConfig make_config(const CommonOpts& o) {
  xyneg::DmrgConfig c;
  c.max_kept_states = o.kept_states;
  c.n_sweeps = o.sweeps;
  if (o.gamma == 0.0) {
    c.conserve_sz = true;
    c.target_epsilon = 1e-8;
  }
  return c;
}

json provenance(const CommonOpts& o, const std::string& command) {
  json j = json::parse(xyneg::provenance_versions_json());
  j["command"] = command;
  j["config"] = {{"gamma", o.gamma},       {"lambda", o.lambda},
                 {"sizes", o.sizes},       {"kept_states", o.kept_states},
                 {"sweeps", o.sweeps},     {"window", o.window},
                 {"format", o.format},     {"jobs", o.jobs}};
  return j;
}

void add_common(CLI::App* cmd, CommonOpts& o, bool with_lambda = true) {
  cmd->add_option("--gamma", o.gamma, "anisotropy in [0,1]");
  if (with_lambda) cmd->add_option("--lambda", o.lambda, "transverse field");
  cmd->add_option("--sizes", o.sizes, "chain lengths (even)")->delimiter(',');
  cmd->add_option("--kept-states", o.kept_states, "kept basis states per block (M)");
  cmd->add_option("--sweeps", o.sweeps, "finite-system sweep budget");
  cmd->add_option("--window", o.window, "fit window min:max");
  cmd->add_option("--format", o.format, "csv or json")
      ->check(CLI::IsMember({"csv", "json"}));
  cmd->add_option("--out", o.out, "output file");
  cmd->add_option("--jobs", o.jobs, "concurrent runs");
}

void write_records(const std::vector<xyneg::ScalingRecord>& records,
                   const CommonOpts& o, const json& prov) {
  if (o.out.empty()) {
    std::printf("%-8s %-6s %-6s %-4s %-5s %-4s %-12s %-14s %-14s\n", "n_sites",
                "gamma", "lambda", "M", "delta", "x", "mu", "negativity",
                "log_neg");
    for (const auto& r : records)
      std::printf("%-8d %-6g %-6g %-4d %-5d %-4d %-12.8g %-14.8g %-14.8g\n",
                  r.n_sites, r.gamma, r.lambda, r.kept_states, r.block_len,
                  r.separation, r.mu, r.negativity, r.log_negativity);
    return;
  }
  if (o.format == "json")
    xyneg::export_json(records, o.out, prov.dump());
  else
    xyneg::export_csv(records, o.out);
  std::printf("wrote %zu records to %s\n", records.size(), o.out.c_str());
}

int report_errors(const std::vector<std::string>& errors) {
  for (const auto& e : errors) std::fprintf(stderr, "warning: %s\n", e.c_str());
  return errors.empty() ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"block-block entanglement negativity in critical XY chains"};
  app.set_config("--config", "", "key=value configuration file");
  app.require_subcommand(1);

  // ----- mu-sweep
  CommonOpts sw;
  std::string sweep_ckpt_dir;
  auto* sweep = app.add_subcommand(
      "mu-sweep", "negativity along the full (block, separation) series");
  add_common(sweep, sw);
  sweep->add_flag("--all", "keep records outside the window");
  sweep->add_option("--checkpoint-dir", sweep_ckpt_dir,
                    "write one dmrg checkpoint per run");

  // ----- lambda-scan
  CommonOpts sc;
  std::string scan_mu = "2/3";
  std::vector<double> scan_lambdas;
  auto* scan = app.add_subcommand(
      "lambda-scan", "negativity at fixed mu across a field grid");
  add_common(scan, sc, false);
  scan->add_option("--mu", scan_mu, "target ratio x/delta, e.g. 2/3");
  scan->add_option("--lambdas", scan_lambdas, "field values")->delimiter(',');

  // ----- fit
  CommonOpts ft;
  std::string fit_in;
  bool fit_logneg = false;
  auto* fit = app.add_subcommand("fit", "fit A * mu^-h * exp(-alpha mu)");
  fit->add_option("--in", fit_in, "records file (csv or json)")->required();
  fit->add_option("--window", ft.window, "fit window min:max");
  fit->add_flag("--log-negativity", fit_logneg, "fit E_LN instead of N");
  fit->add_option("--out", ft.out, "write the fit as json");

  // ----- compare
  std::string cmp_a, cmp_b, cmp_out;
  double cmp_cut = 2.5;
  auto* cmp = app.add_subcommand(
      "compare", "max relative deviation between two record sets");
  cmp->add_option("--in-a", cmp_a, "first records file")->required();
  cmp->add_option("--in-b", cmp_b, "second records file")->required();
  cmp->add_option("--mu-cut", cmp_cut, "compare only mu <= cut");
  cmp->add_option("--out", cmp_out, "write the deviation as json");

  // ----- oracle-check
  CommonOpts oc;
  oc.kept_states = 32;
  oc.sizes = {8, 12};
  double oc_tol = 1e-6;
  auto* oracle = app.add_subcommand(
      "oracle-check", "dmrg pipeline against exact diagonalization");
  add_common(oracle, oc);
  oracle->add_option("--tol", oc_tol, "acceptance tolerance on |dN|");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    if (*sweep) {
      if (sw.sizes.empty()) throw std::invalid_argument("--sizes is required");
      xyneg::ModelParams{2, sw.gamma, sw.lambda}.validate();
      xyneg::SweepOptions opt;
      opt.dmrg = make_config(sw);
      opt.window = parse_window(sw.window);
      opt.keep_all = sweep->count("--all") > 0;
      opt.jobs = sw.jobs;
      xyneg::MuSweepResult res;
      if (sweep_ckpt_dir.empty()) {
        xyneg::ModelParams base{0, sw.gamma, sw.lambda};
        res = xyneg::mu_sweep(base, sw.sizes, opt);
      } else {
        std::filesystem::create_directories(sweep_ckpt_dir);
        for (int n : sw.sizes) {
          xyneg::ModelParams p{n, sw.gamma, sw.lambda};
          try {
            const xyneg::DmrgRun run = xyneg::run_dmrg(p, opt.dmrg);
            xyneg::save_checkpoint(
                run, sweep_ckpt_dir + "/run_N" + std::to_string(n) + ".ckpt");
            auto recs = xyneg::records_for_run(run, opt.window, opt.keep_all);
            res.records.insert(res.records.end(), recs.begin(), recs.end());
          } catch (const std::exception& e) {
            res.errors.push_back("N=" + std::to_string(n) + ": " + e.what());
          }
        }
      }
      write_records(res.records, sw, provenance(sw, "mu-sweep"));
      return report_errors(res.errors);
    }

    if (*scan) {
      if (sc.sizes.empty()) throw std::invalid_argument("--sizes is required");
      if (scan_lambdas.empty())
        throw std::invalid_argument("--lambdas is required");
      for (double lam : scan_lambdas) xyneg::ModelParams{2, sc.gamma, lam}.validate();
      const auto [num, den] = parse_ratio(scan_mu);
      const auto res = xyneg::lambda_scan(sc.gamma, num, den, sc.sizes,
                                          scan_lambdas, make_config(sc),
                                          sc.jobs);
      json doc;
      doc["provenance"] = provenance(sc, "lambda-scan");
      doc["provenance"]["mu"] = scan_mu;
      doc["scan"] = json::array();
      std::printf("%-8s %-10s %-14s\n", "n_sites", "lambda", "negativity");
      for (const auto& row : res.rows) {
        std::printf("%-8d %-10g %-14.8g\n", row.n_sites, row.lambda,
                    row.negativity);
        doc["scan"].push_back({{"n_sites", row.n_sites},
                               {"lambda", row.lambda},
                               {"negativity", row.negativity}});
      }
      if (!sc.out.empty()) {
        std::ofstream os(sc.out);
        os << doc.dump(2) << "\n";
        std::printf("wrote %s\n", sc.out.c_str());
      }
      return report_errors(res.errors);
    }

    if (*fit) {
      const auto records = xyneg::import_records(fit_in);
      const auto w = parse_window(ft.window);
      const auto f = xyneg::fit_ansatz(records, w, fit_logneg);
      std::printf("h         = %.6f\n", f.h);
      std::printf("alpha     = %.6f\n", f.alpha);
      std::printf("amplitude = %.6f\n", f.amplitude);
      std::printf("window    = [%g, %g], points = %d, residual = %.3g\n",
                  f.mu_min, f.mu_max, f.n_points, f.residual_norm);
      if (!ft.out.empty()) {
        json doc;
        doc["provenance"] = json::parse(xyneg::provenance_versions_json());
        doc["provenance"]["command"] = "fit";
        doc["provenance"]["in"] = fit_in;
        doc["provenance"]["log_negativity"] = fit_logneg;
        doc["fit"] = {{"h", f.h},
                      {"alpha", f.alpha},
                      {"amplitude", f.amplitude},
                      {"mu_min", f.mu_min},
                      {"mu_max", f.mu_max},
                      {"residual_norm", f.residual_norm},
                      {"n_points", f.n_points}};
        for (int i = 0; i < 3; ++i)
          for (int j = 0; j < 3; ++j)
            doc["fit"]["covariance"][static_cast<size_t>(i)][static_cast<size_t>(j)] =
                f.covariance(i, j);
        std::ofstream os(ft.out);
        os << doc.dump(2) << "\n";
        std::printf("wrote %s\n", ft.out.c_str());
      }
      return 0;
    }

    if (*cmp) {
      const auto a = xyneg::import_records(cmp_a);
      const auto b = xyneg::import_records(cmp_b);
      const double dev = xyneg::universality_compare(a, b, cmp_cut);
      std::printf("max relative deviation (mu <= %g): %.6f\n", cmp_cut, dev);
      if (!cmp_out.empty()) {
        json doc;
        doc["provenance"] = json::parse(xyneg::provenance_versions_json());
        doc["provenance"]["command"] = "compare";
        doc["deviation"] = dev;
        doc["mu_cut"] = cmp_cut;
        std::ofstream os(cmp_out);
        os << doc.dump(2) << "\n";
      }
      return 0;
    }

    if (*oracle) {
      if (oc.sizes.empty()) throw std::invalid_argument("--sizes is required");
      const xyneg::DmrgConfig cfg = make_config(oc);
      double worst = 0.0;
      for (int n : oc.sizes) {
        xyneg::ModelParams p{n, oc.gamma, oc.lambda};
        p.validate();
        const xyneg::DmrgRun run = xyneg::run_dmrg(p, cfg);
        const auto exact = xyneg::exact_ground_state(p);
        double max_dn = 0.0;
        xyneg::mu_series(run.state, run.chains, [&](const xyneg::MuStep& step) {
          const double dmrg_n = xyneg::negativity(step.rho).negativity;
          const double oracle_n = xyneg::negativity(
              xyneg::exact_rho_se(exact.state, step.block_len, step.separation))
              .negativity;
          max_dn = std::max(max_dn, std::abs(dmrg_n - oracle_n));
          return true;
        });
        worst = std::max(worst, max_dn);
        std::printf("N=%-4d dE=%.3e  max|dN|=%.3e\n", n,
                    std::abs(run.state.energy - exact.energy), max_dn);
      }
      std::printf("worst |dN| = %.3e (tol %g)\n", worst, oc_tol);
      return worst <= oc_tol ? 0 : 1;
    }
  } catch (const std::invalid_argument& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 2;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  }
  return 0;
}
