#pragma once

#include <optional>
#include <span>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "thdsim/homodyne.hpp"
#include "thdsim/phase_space.hpp"
#include "thdsim/quantum_state.hpp"
#include "thdsim/temporal_mode.hpp"

namespace thdsim {

// One recovered quadrature sample with its nominal LO phase.
struct QuadratureRecord {
  double q = 0.0;
  double theta = 0.0;
};

// q_m = (1/gain) sum_k f(t_k) i_m(t_k), the overlap-integral inversion of the
// synthesis sum. For a mode-matched, error-free ensemble this returns the
// generator's sampled x_0 exactly.
std::vector<QuadratureRecord> recover_quadratures(const TraceEnsemble& ensemble,
                                                  const TemporalMode& analysis_mode);

// Normalized histogram of quadrature records. Out-of-range samples land in
// the overflow tally and are excluded from the pdf.
struct EmpiricalMarginal {
  Eigen::VectorXd bin_edges;       // K+1
  Eigen::VectorXi counts;          // K
  Eigen::VectorXd normalized_pdf;  // K, sums * bin_width to 1
  long long overflow = 0;

  int bins() const { return static_cast<int>(counts.size()); }
  double bin_width() const { return bin_edges[1] - bin_edges[0]; }
  Eigen::VectorXd centers() const;
  double mean() const;
  double variance() const;
};

EmpiricalMarginal histogram_marginal(std::span<const QuadratureRecord> records,
                                     std::optional<std::pair<double, double>> theta_filter,
                                     int bins, std::pair<double, double> range);

// Bhattacharyya coefficient B = integral sqrt(P1 P2) in [0, 1]; symmetric,
// B = 1 iff the densities agree almost everywhere. Mixed-grid pairs are
// resampled by linear interpolation onto the finer grid; empirical inputs
// are compared at their bin centers.
double bhattacharyya(const MarginalDistribution& p, const MarginalDistribution& q);
double bhattacharyya(const EmpiricalMarginal& p, const MarginalDistribution& q);
double bhattacharyya(const MarginalDistribution& p, const EmpiricalMarginal& q);
double bhattacharyya(const EmpiricalMarginal& p, const EmpiricalMarginal& q);

// Unbiased per-bin sample variance across traces.
Eigen::VectorXd pointwise_variance(const TraceEnsemble& ensemble);

struct PrincipalModeResult {
  TemporalMode mode;            // dominant autocorrelation eigenvector
  Eigen::VectorXd eigenvalues;  // descending, after background subtraction
  std::vector<std::string> warnings;
};

// Principal-mode estimate from the photocurrent autocorrelation matrix
// <i(t_i) i(t_j)>, with the known background contribution subtracted.
// An ensemble whose spectrum is indistinguishable from the finite-sample
// noise floor raises NoSignalError.
PrincipalModeResult estimate_principal_mode(const TraceEnsemble& ensemble);

struct MleOptions {
  int dim = 15;
  int max_iter = 2000;
  double tol = 1e-8;        // max-abs change of rho per iteration
  int bins_per_phase = 200;
};

struct MleResult {
  QuantumState state;
  int iterations = 0;
  bool converged = false;
  std::vector<double> log_likelihood;  // per iteration, nondecreasing
  double min_eigenvalue = 0.0;         // most negative eigenvalue seen across iterates
};

// Iterative maximum-likelihood reconstruction, rho <- N[R rho R] with
// R = sum_b f_b Pi_b / Tr(rho Pi_b) over per-phase quadrature bins.
// Projectors are built from quadrature eigenstates <n|q,theta> =
// psi_n(q) e^{-i n theta}. Falls back to a diluted step whenever a full step
// would lower the likelihood, so the reported log-likelihood never decreases.
MleResult mle_reconstruct(std::span<const QuadratureRecord> records, const MleOptions& options);

// Phase-jitter-averaged marginal: integral of Pr_{theta+d}(q) against a
// zero-mean Gaussian in d with std sigma (numerical quadrature). This is the
// distribution the Monte-Carlo phase-jitter model converges to.
MarginalDistribution phase_averaged_marginal(const QuantumState& state, double theta,
                                             double sigma, const QuadratureGrid& grid = {});

}  // namespace thdsim
