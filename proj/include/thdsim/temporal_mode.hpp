#pragma once

#include <optional>
#include <string>
#include <vector>

#include <Eigen/Dense>

namespace thdsim {

// Analytic description a mode may carry; used for exact resampling under
// temporal shifts instead of compounding interpolation error.
struct AnalyticShape {
  enum class Kind { gaussian, double_exponential };
  Kind kind = Kind::gaussian;
  double center = 0.0;
  double width = 1.0;  // gaussian sigma, or 1/rate for the double exponential
};

// Discretized temporal amplitude f(t_k) on a uniform grid, unit discrete norm
// sum_k f_k^2 = 1. Immutable after construction.
class TemporalMode {
 public:
  TemporalMode(Eigen::VectorXd t, Eigen::VectorXd amplitude,
               std::optional<AnalyticShape> shape = std::nullopt,
               std::vector<std::string> warnings = {});

  const Eigen::VectorXd& t() const { return t_; }
  const Eigen::VectorXd& amplitude() const { return amp_; }
  int bins() const { return static_cast<int>(t_.size()); }
  double dt() const { return t_[1] - t_[0]; }
  const std::optional<AnalyticShape>& shape() const { return shape_; }
  const std::vector<std::string>& warnings() const { return warnings_; }

 private:
  Eigen::VectorXd t_;
  Eigen::VectorXd amp_;
  std::optional<AnalyticShape> shape_;
  std::vector<std::string> warnings_;
};

// Uniform grid of n bins spaced dt, centered on `center`.
Eigen::VectorXd uniform_time_grid(int n, double dt, double center = 0.0);

TemporalMode make_gaussian_mode(double center, double width, const Eigen::VectorXd& t);
TemporalMode make_double_exponential_mode(double center, double rate, const Eigen::VectorXd& t);
TemporalMode make_custom_mode(const Eigen::VectorXd& samples, const Eigen::VectorXd& t);

// Orthonormal N x N completion sharing the seed's time grid; column 0 equals
// the seed up to sign (sign fixed to positive overlap).
struct ModeBasis {
  Eigen::MatrixXd modes;  // column j = mode f_j
  Eigen::VectorXd t;

  int bins() const { return static_cast<int>(t.size()); }
  TemporalMode column(int j) const;
};

// Deterministic completion: QR of [seed | fixed-seed Gaussian fill columns].
ModeBasis complete_basis(const TemporalMode& seed);

// Orthonormal completion whose first column is `first`, obtained from a
// Householder rotation of an existing basis. Used for per-trace shifted
// modes: statistically equivalent to complete_basis(first) at a fraction of
// the cost (rank-one update instead of a fresh QR).
ModeBasis complete_basis_with_first(const ModeBasis& nominal, const TemporalMode& first);

// Discrete inner product sum_k f_k g_k; requires a shared grid.
double overlap(const TemporalMode& f, const TemporalMode& g);

// f(t) -> f(t - tau), renormalized. Analytic shapes are re-evaluated exactly;
// sampled modes are linearly interpolated. Mass shifted off-grid beyond 1e-6
// is recorded as a warning; an (almost) empty result is an error.
TemporalMode shift_mode(const TemporalMode& f, double tau);

}  // namespace thdsim
