#pragma once

#include <complex>
#include <map>
#include <memory>
#include <mutex>
#include <vector>

#include <Eigen/Dense>

#include "thdsim/quantum_state.hpp"
#include "thdsim/rng.hpp"

namespace thdsim {

// Symmetric square phase-space grid [-extent, extent]^2.
struct GridSpec {
  double extent = 6.0;
  int n_points = 201;
};

// Symmetric 1D quadrature grid [-extent, extent].
struct QuadratureGrid {
  double extent = 8.0;
  int n_points = 1601;

  double dq() const { return 2.0 * extent / (n_points - 1); }
  Eigen::VectorXd points() const;
};

struct PhaseSpaceGrid {
  Eigen::VectorXd x;     // n_points
  Eigen::VectorXd p;     // n_points
  Eigen::MatrixXd w;     // w(i, j) = W(x_i, p_j)
  double mass = 0.0;     // sum W dx dp
  std::vector<std::string> warnings;

  double dx() const { return x[1] - x[0]; }
  double dp() const { return p[1] - p[0]; }
};

// Tabulated Pr(q_theta) on a uniform grid, with its CDF once built.
struct MarginalDistribution {
  Eigen::VectorXd q;
  Eigen::VectorXd pdf;
  Eigen::VectorXd cdf;  // empty until build_cdf
  double theta = 0.0;

  bool has_cdf() const { return cdf.size() == q.size(); }
  double dq() const { return q[1] - q[0]; }
  double mean() const;
  double variance() const;
};

// Pointwise Wigner evaluation via the closed-form Fock-basis kernel
// (Laguerre form). Convention: W_vac(x,p) = exp(-(x^2+p^2))/pi.
class WignerEvaluator {
 public:
  explicit WignerEvaluator(const QuantumState& state);
  double operator()(double x, double p) const;

 private:
  struct DiagonalBand {
    int d = 0;                                            // n - m
    std::vector<std::pair<int, std::complex<double>>> terms;  // (m, weight)
    int max_m = -1;
  };
  std::vector<DiagonalBand> bands_;
  int dim_;
};

// W on a grid. Mass deficit beyond 1e-3 produces a support-clipping warning.
PhaseSpaceGrid wigner(const QuantumState& state, const GridSpec& spec);

// Marginal Pr(q_theta) for the quadrature q_theta = (b e^{i theta} +
// b^dag e^{-i theta})/sqrt(2). Two independent computation routes:
//
//  marginal             Fock-basis form sum_mn rho_mn e^{i(m-n)theta}
//                       psi_m(q) psi_n(q) (Hermite functions)
//  marginal_from_wigner rotate phase space and integrate the Laguerre-kernel
//                       Wigner function along p (trapezoid, p_points nodes)
//
// Each is the cross-check oracle for the other; they agree pointwise to 1e-4.
MarginalDistribution marginal(const QuantumState& state, double theta,
                              const QuadratureGrid& grid = {});
MarginalDistribution marginal_from_wigner(const QuantumState& state, double theta,
                                          const QuadratureGrid& grid = {},
                                          int p_points = 3201);

// Cumulative trapezoid of the pdf, renormalized so cdf[last] = 1.
MarginalDistribution build_cdf(MarginalDistribution m);

// Piecewise-linear inverse CDF; flat plateaus resolve to their left edge.
double invert_cdf(const MarginalDistribution& m, double u);

// Inverse transform sampling: count independent draws.
Eigen::VectorXd sample_quadrature(const MarginalDistribution& m, SplitStream& rng, int count);

// Precomputes per-state tables so marginals at many theta are cheap:
// Pr_theta(q) = G_0(q) + 2 sum_d Re(e^{i d theta} G_d(q)) with
// G_d(q) = sum_n rho_{n+d,n} psi_{n+d}(q) psi_n(q).
class MarginalEvaluator {
 public:
  explicit MarginalEvaluator(const QuantumState& state, QuadratureGrid grid = {});

  // Full marginal with CDF built.
  MarginalDistribution at(double theta) const;
  // Same, memoized on theta rounded to 1e-9 rad (bounded cache).
  std::shared_ptr<const MarginalDistribution> cached_at(double theta) const;
  // Pointwise pdf at arbitrary q (not restricted to the grid).
  double pdf_at(double theta, double q) const;

  const QuadratureGrid& grid() const { return grid_; }

 private:
  QuadratureGrid grid_;
  Eigen::VectorXd q_;
  int dim_;
  Eigen::MatrixXcd rho_;
  std::vector<Eigen::VectorXcd> g_tables_;  // G_d on the grid, d = 0..dim-1
  std::vector<int> band_present_;           // d with any nonzero rho entry

  static constexpr size_t kCacheCap = 64;
  mutable std::mutex cache_mutex_;
  mutable std::map<int64_t, std::shared_ptr<const MarginalDistribution>> cache_;
};

// Analytic vacuum marginal exp(-q^2)/sqrt(pi) tabulated on the grid.
MarginalDistribution vacuum_marginal(const QuadratureGrid& grid = {}, double theta = 0.0);

}  // namespace thdsim
