#pragma once

#include <string>
#include <vector>

#include <Eigen/Dense>

#include "xyneg/dmrg.hpp"
#include "xyneg/model.hpp"

namespace xyneg {

// one (N, block, separation) data point of a scaling study
struct ScalingRecord {
  int n_sites = 0;
  double gamma = 0.0;
  double lambda = 0.0;
  int kept_states = 0;
  int block_len = 0;
  int separation = 0;
  double mu = 0.0;  // separation / block_len
  double negativity = 0.0;
  double log_negativity = 0.0;
  double truncated_weight = 0.0;  // max truncation of the producing run
};

struct FitWindow {
  double mu_min = 0.1;
  double mu_max = 3.0;
};

// fitted parameters of  N(mu) = A * mu^(-h) * exp(-alpha*mu)
struct FitResult {
  double h = 0.0;
  double alpha = 0.0;
  double amplitude = 0.0;
  double mu_min = 0.0, mu_max = 0.0;
  double residual_norm = 0.0;  // 2-norm of log-space residuals
  Eigen::Matrix3d covariance = Eigen::Matrix3d::Zero();  // (log A, h, alpha)
  int n_points = 0;
};

struct SweepOptions {
  DmrgConfig dmrg;
  FitWindow window;      // records outside are dropped
  bool keep_all = false; // ignore the window, evaluate the whole series
  int jobs = 1;
};

struct MuSweepResult {
  std::vector<ScalingRecord> records;  // sorted by (n_sites, mu)
  std::vector<std::string> errors;     // one entry per failed run
};

/// One DMRG run per chain length; every mu-series point inside the window
/// becomes a record. Failed runs are reported, not fatal.
MuSweepResult mu_sweep(const ModelParams& base, const std::vector<int>& sizes,
                       const SweepOptions& opt);

/// Records for a finished run (used by callers that manage runs themselves).
std::vector<ScalingRecord> records_for_run(const DmrgRun& run,
                                           const FitWindow& window,
                                           bool keep_all = false);

struct LambdaScanRow {
  int n_sites = 0;
  double lambda = 0.0;
  double negativity = 0.0;
};

struct LambdaScanResult {
  std::vector<LambdaScanRow> rows;  // sorted by (n_sites, lambda)
  std::vector<std::string> errors;
};

/// Negativity at the fixed ratio mu = mu_num/mu_den for every (N, lambda)
/// combination. Sizes where the ratio has no integer block solution are
/// skipped with a warning entry.
LambdaScanResult lambda_scan(double gamma, int mu_num, int mu_den,
                             const std::vector<int>& sizes,
                             const std::vector<double>& lambdas,
                             const DmrgConfig& config, int jobs = 1);

/// Linear least squares on log N = log A - h log mu - alpha mu over the
/// window. With use_log_negativity the same form is fitted to E_LN.
/// Requires >= 6 in-window records, all values positive.
FitResult fit_ansatz(const std::vector<ScalingRecord>& records,
                     const FitWindow& window, bool use_log_negativity = false);

/// Max relative deviation |Na - Nb| / max(Na, Nb) over the common mu range
/// up to mu_cut, interpolating linearly in (mu, log N). Both directions of
/// the comparison are scanned. Records sharing a mu are geometric-averaged.
double universality_compare(const std::vector<ScalingRecord>& a,
                            const std::vector<ScalingRecord>& b, double mu_cut);

// ---------------------------------------------------------------------------
// persistence

/// CSV with the fixed header
/// n_sites,gamma,lambda,kept_states,block_len,separation,mu,negativity,log_negativity,truncated_weight
/// and 17-significant-digit values ('.' decimal, no locale).
void export_csv(const std::vector<ScalingRecord>& records,
                const std::string& path);

/// JSON document {"provenance": ..., "records": [...]}; provenance_extra
/// (serialized JSON object, may be empty) is merged into the provenance.
void export_json(const std::vector<ScalingRecord>& records,
                 const std::string& path,
                 const std::string& provenance_extra = "");

/// Reads either format back (by file extension).
std::vector<ScalingRecord> import_records(const std::string& path);

/// Provenance block shared by all JSON outputs: tool version, library and
/// compiler versions.
std::string provenance_versions_json();

}  // namespace xyneg
