#include "xyneg/analysis.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <mutex>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <thread>

#include <json.hpp>

#include "xyneg/blocks.hpp"
#include "xyneg/entanglement.hpp"

namespace xyneg {

namespace {

// records with equal mu compare equal through exact integer cross products
bool mu_less(const ScalingRecord& a, const ScalingRecord& b) {
  return static_cast<long>(a.separation) * b.block_len <
         static_cast<long>(b.separation) * a.block_len;
}

bool mu_equal(const ScalingRecord& a, const ScalingRecord& b) {
  return static_cast<long>(a.separation) * b.block_len ==
         static_cast<long>(b.separation) * a.block_len;
}

void run_tasks(int jobs, std::vector<std::function<void()>>& tasks) {
  if (jobs <= 1) {
    for (auto& t : tasks) t();
    return;
  }
  std::atomic<size_t> next{0};
  auto worker = [&]() {
    for (size_t i = next.fetch_add(1); i < tasks.size(); i = next.fetch_add(1))
      tasks[i]();
  };
  std::vector<std::thread> pool;
  const int n = std::min<int>(jobs, static_cast<int>(tasks.size()));
  pool.reserve(static_cast<size_t>(n));
  for (int i = 0; i < n; ++i) pool.emplace_back(worker);
  for (auto& t : pool) t.join();
}

std::string run_label(const ModelParams& p, int m) {
  std::ostringstream os;
  os << "N=" << p.n_sites << " gamma=" << p.gamma << " lambda=" << p.lambda
     << " M=" << m;
  return os.str();
}

// collapse duplicate mu values (geometric mean) and sort ascending
std::vector<ScalingRecord> collapse_by_mu(std::vector<ScalingRecord> recs) {
  std::erase_if(recs, [](const ScalingRecord& r) { return r.negativity <= 0.0; });
  std::sort(recs.begin(), recs.end(), mu_less);
  std::vector<ScalingRecord> out;
  for (size_t i = 0; i < recs.size();) {
    size_t j = i;
    double logsum = 0.0;
    while (j < recs.size() && mu_equal(recs[i], recs[j])) {
      logsum += std::log(recs[j].negativity);
      ++j;
    }
    ScalingRecord r = recs[i];
    r.negativity = std::exp(logsum / static_cast<double>(j - i));
    r.log_negativity = std::log2(r.negativity + 1.0);
    out.push_back(r);
    i = j;
  }
  return out;
}

const char* kCsvHeader =
    "n_sites,gamma,lambda,kept_states,block_len,separation,mu,negativity,"
    "log_negativity,truncated_weight";

std::string fmt17(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

}  // namespace

std::vector<ScalingRecord> records_for_run(const DmrgRun& run,
                                           const FitWindow& window,
                                           bool keep_all) {
  std::vector<ScalingRecord> recs;
  mu_series(run.state, run.chains, [&](const MuStep& step) {
    if (keep_all ||
        (step.mu >= window.mu_min && step.mu <= window.mu_max)) {
      const NegativityResult nr = negativity(step.rho);
      ScalingRecord r;
      r.n_sites = run.params.n_sites;
      r.gamma = run.params.gamma;
      r.lambda = run.params.lambda;
      r.kept_states = run.config.max_kept_states;
      r.block_len = step.block_len;
      r.separation = step.separation;
      r.mu = step.mu;
      r.negativity = nr.negativity;
      r.log_negativity = nr.log_negativity;
      r.truncated_weight = run.stats.max_truncated_weight;
      recs.push_back(r);
    }
    // stop once mu has left the window for good
    return keep_all || step.mu <= window.mu_max;
  });
  return recs;
}

MuSweepResult mu_sweep(const ModelParams& base, const std::vector<int>& sizes,
                       const SweepOptions& opt) {
  MuSweepResult result;
  std::mutex mtx;
  std::vector<std::function<void()>> tasks;
  for (int n : sizes) {
    tasks.push_back([&, n]() {
      ModelParams p = base;
      p.n_sites = n;
      try {
        const DmrgRun run = run_dmrg(p, opt.dmrg);
        auto recs = records_for_run(run, opt.window, opt.keep_all);
        std::lock_guard<std::mutex> lock(mtx);
        result.records.insert(result.records.end(), recs.begin(), recs.end());
      } catch (const std::exception& e) {
        std::lock_guard<std::mutex> lock(mtx);
        result.errors.push_back(run_label(p, opt.dmrg.max_kept_states) + ": " +
                                e.what());
      }
    });
  }
  run_tasks(opt.jobs, tasks);
  std::sort(result.records.begin(), result.records.end(),
            [](const ScalingRecord& a, const ScalingRecord& b) {
              if (a.n_sites != b.n_sites) return a.n_sites < b.n_sites;
              return mu_less(a, b);
            });
  return result;
}

LambdaScanResult lambda_scan(double gamma, int mu_num, int mu_den,
                             const std::vector<int>& sizes,
                             const std::vector<double>& lambdas,
                             const DmrgConfig& config, int jobs) {
  if (mu_num <= 0 || mu_den <= 0)
    throw std::invalid_argument("target ratio must be positive");

  LambdaScanResult result;
  std::mutex mtx;
  std::vector<std::function<void()>> tasks;
  for (int n : sizes) {
    // x/delta = num/den and 2*delta + x = n
    const long numer = static_cast<long>(n) * mu_den;
    const long denom = 2L * mu_den + mu_num;
    if (numer % denom != 0) {
      result.errors.push_back("N=" + std::to_string(n) + ": ratio " +
                              std::to_string(mu_num) + "/" +
                              std::to_string(mu_den) +
                              " has no integer block size, skipped");
      continue;
    }
    const int delta = static_cast<int>(numer / denom);
    for (double lam : lambdas) {
      tasks.push_back([&, n, delta, lam]() {
        ModelParams p{n, gamma, lam};
        try {
          const DmrgRun run = run_dmrg(p, config);
          double neg = 0.0;
          bool found = false;
          mu_series(run.state, run.chains, [&](const MuStep& step) {
            if (step.block_len == delta) {
              neg = negativity(step.rho).negativity;
              found = true;
              return false;
            }
            return step.block_len > delta;
          });
          if (!found) throw std::runtime_error("target block size not reached");
          std::lock_guard<std::mutex> lock(mtx);
          result.rows.push_back({n, lam, neg});
        } catch (const std::exception& e) {
          std::lock_guard<std::mutex> lock(mtx);
          result.errors.push_back(run_label(p, config.max_kept_states) + ": " +
                                  e.what());
        }
      });
    }
  }
  run_tasks(jobs, tasks);
  std::sort(result.rows.begin(), result.rows.end(),
            [](const LambdaScanRow& a, const LambdaScanRow& b) {
              if (a.n_sites != b.n_sites) return a.n_sites < b.n_sites;
              return a.lambda < b.lambda;
            });
  return result;
}

FitResult fit_ansatz(const std::vector<ScalingRecord>& records,
                     const FitWindow& window, bool use_log_negativity) {
  std::vector<double> mu, val;
  for (const auto& r : records) {
    if (r.mu < window.mu_min || r.mu > window.mu_max) continue;
    const double v = use_log_negativity ? r.log_negativity : r.negativity;
    if (v <= 0.0)
      throw std::invalid_argument("nonpositive value inside the fit window");
    mu.push_back(r.mu);
    val.push_back(v);
  }
  const int n = static_cast<int>(mu.size());
  if (n < 6) throw std::invalid_argument("need at least 6 records in the window");

  Eigen::MatrixXd x(n, 3);
  Eigen::VectorXd y(n);
  for (int i = 0; i < n; ++i) {
    x(i, 0) = 1.0;
    x(i, 1) = -std::log(mu[static_cast<size_t>(i)]);
    x(i, 2) = -mu[static_cast<size_t>(i)];
    y(i) = std::log(val[static_cast<size_t>(i)]);
  }

  const Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(x);
  if (qr.rank() < 3)
    throw std::invalid_argument("design matrix is rank deficient (collinear mu)");
  const Eigen::Vector3d theta = qr.solve(y);
  const Eigen::VectorXd resid = y - x * theta;

  FitResult f;
  f.amplitude = std::exp(theta(0));
  f.h = theta(1);
  f.alpha = theta(2);
  f.mu_min = window.mu_min;
  f.mu_max = window.mu_max;
  f.residual_norm = resid.norm();
  f.n_points = n;
  const double sigma2 =
      n > 3 ? resid.squaredNorm() / static_cast<double>(n - 3) : 0.0;
  f.covariance = sigma2 * (x.transpose() * x).inverse();
  return f;
}

double universality_compare(const std::vector<ScalingRecord>& a,
                            const std::vector<ScalingRecord>& b,
                            double mu_cut) {
  const auto ca = collapse_by_mu(a);
  const auto cb = collapse_by_mu(b);
  if (ca.size() < 2 || cb.size() < 2)
    throw std::invalid_argument("need at least two records per data set");

  auto interp = [](const std::vector<ScalingRecord>& s,
                   double m) -> std::optional<double> {
    if (m < s.front().mu || m > s.back().mu) return std::nullopt;
    for (size_t i = 0; i + 1 < s.size(); ++i) {
      if (m >= s[i].mu && m <= s[i + 1].mu) {
        const double t =
            s[i + 1].mu > s[i].mu ? (m - s[i].mu) / (s[i + 1].mu - s[i].mu) : 0.0;
        const double lg = (1.0 - t) * std::log(s[i].negativity) +
                          t * std::log(s[i + 1].negativity);
        return std::exp(lg);
      }
    }
    return std::nullopt;
  };

  double dev = -1.0;
  auto scan = [&](const std::vector<ScalingRecord>& from,
                  const std::vector<ScalingRecord>& to) {
    for (const auto& r : from) {
      if (r.mu > mu_cut) continue;
      const auto v = interp(to, r.mu);
      if (!v) continue;
      dev = std::max(dev, std::abs(r.negativity - *v) /
                              std::max(r.negativity, *v));
    }
  };
  scan(ca, cb);
  scan(cb, ca);
  if (dev < 0.0)
    throw std::invalid_argument("data sets have no overlapping mu range");
  return dev;
}

// ---------------------------------------------------------------------------

void export_csv(const std::vector<ScalingRecord>& records,
                const std::string& path) {
  std::ofstream os(path);
  if (!os) throw std::runtime_error("cannot open " + path + " for writing");
  os << kCsvHeader << "\n";
  for (const auto& r : records) {
    os << r.n_sites << ',' << fmt17(r.gamma) << ',' << fmt17(r.lambda) << ','
       << r.kept_states << ',' << r.block_len << ',' << r.separation << ','
       << fmt17(r.mu) << ',' << fmt17(r.negativity) << ','
       << fmt17(r.log_negativity) << ',' << fmt17(r.truncated_weight) << "\n";
  }
  if (!os) throw std::runtime_error("write failure on " + path);
}

std::string provenance_versions_json() {
  nlohmann::json j;
  j["tool"] = "xyneg";
  j["version"] = "0.1.0";
  j["eigen"] = std::to_string(EIGEN_WORLD_VERSION) + "." +
               std::to_string(EIGEN_MAJOR_VERSION) + "." +
               std::to_string(EIGEN_MINOR_VERSION);
  j["compiler"] = __VERSION__;
  return j.dump();
}

namespace {

nlohmann::json record_to_json(const ScalingRecord& r) {
  return nlohmann::json{{"n_sites", r.n_sites},
                        {"gamma", r.gamma},
                        {"lambda", r.lambda},
                        {"kept_states", r.kept_states},
                        {"block_len", r.block_len},
                        {"separation", r.separation},
                        {"mu", r.mu},
                        {"negativity", r.negativity},
                        {"log_negativity", r.log_negativity},
                        {"truncated_weight", r.truncated_weight}};
}

ScalingRecord record_from_json(const nlohmann::json& j) {
  ScalingRecord r;
  r.n_sites = j.at("n_sites").get<int>();
  r.gamma = j.at("gamma").get<double>();
  r.lambda = j.at("lambda").get<double>();
  r.kept_states = j.at("kept_states").get<int>();
  r.block_len = j.at("block_len").get<int>();
  r.separation = j.at("separation").get<int>();
  r.mu = j.at("mu").get<double>();
  r.negativity = j.at("negativity").get<double>();
  r.log_negativity = j.at("log_negativity").get<double>();
  r.truncated_weight = j.at("truncated_weight").get<double>();
  return r;
}

}  // namespace

void export_json(const std::vector<ScalingRecord>& records,
                 const std::string& path,
                 const std::string& provenance_extra) {
  nlohmann::json prov = nlohmann::json::parse(provenance_versions_json());
  if (!provenance_extra.empty()) {
    nlohmann::json extra = nlohmann::json::parse(provenance_extra);
    prov.update(extra);
  }
  nlohmann::json doc;
  doc["provenance"] = prov;
  doc["records"] = nlohmann::json::array();
  for (const auto& r : records) doc["records"].push_back(record_to_json(r));

  std::ofstream os(path);
  if (!os) throw std::runtime_error("cannot open " + path + " for writing");
  os << doc.dump(2) << "\n";
  if (!os) throw std::runtime_error("write failure on " + path);
}

std::vector<ScalingRecord> import_records(const std::string& path) {
  std::ifstream is(path);
  if (!is) throw std::runtime_error("cannot open " + path);

  std::vector<ScalingRecord> out;
  if (path.size() >= 5 && path.substr(path.size() - 5) == ".json") {
    nlohmann::json doc = nlohmann::json::parse(is);
    for (const auto& j : doc.at("records")) out.push_back(record_from_json(j));
    return out;
  }

  std::string line;
  if (!std::getline(is, line)) throw std::runtime_error("empty file " + path);
  if (line != kCsvHeader)
    throw std::runtime_error(path + " does not carry the expected header");
  while (std::getline(is, line)) {
    if (line.empty()) continue;
    std::stringstream ss(line);
    std::string tok;
    std::vector<std::string> cols;
    while (std::getline(ss, tok, ',')) cols.push_back(tok);
    if (cols.size() != 10)
      throw std::runtime_error("malformed csv row: " + line);
    ScalingRecord r;
    r.n_sites = std::stoi(cols[0]);
    r.gamma = std::stod(cols[1]);
    r.lambda = std::stod(cols[2]);
    r.kept_states = std::stoi(cols[3]);
    r.block_len = std::stoi(cols[4]);
    r.separation = std::stoi(cols[5]);
    r.mu = std::stod(cols[6]);
    r.negativity = std::stod(cols[7]);
    r.log_negativity = std::stod(cols[8]);
    r.truncated_weight = std::stod(cols[9]);
    out.push_back(r);
  }
  return out;
}

}  // namespace xyneg
