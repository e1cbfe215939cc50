#include "thdsim/temporal_mode.hpp"

#include <algorithm>
#include <cmath>

#include <Eigen/QR>

#include "thdsim/errors.hpp"
#include "thdsim/rng.hpp"

namespace thdsim {

namespace {

// Fixed seed for the deterministic Gaussian fill columns of complete_basis;
// independent of any experiment seed so the basis depends only on the mode.
constexpr uint64_t kBasisFillSeed = 0x7D5C0DEBA515F111ULL;

void check_uniform_grid(const Eigen::VectorXd& t) {
  if (t.size() < 2) throw ConfigError("TemporalMode: need at least 2 bins");
  const double dt = t[1] - t[0];
  if (dt <= 0.0) throw ConfigError("TemporalMode: time grid must be increasing");
  for (int k = 1; k < t.size(); ++k) {
    if (std::abs((t[k] - t[k - 1]) - dt) > 1e-9 * dt) {
      throw ConfigError("TemporalMode: time grid must be uniform");
    }
  }
}

double shape_value(const AnalyticShape& s, double t) {
  switch (s.kind) {
    case AnalyticShape::Kind::gaussian: {
      const double z = (t - s.center) / s.width;
      return std::exp(-0.5 * z * z);
    }
    case AnalyticShape::Kind::double_exponential:
      return std::exp(-std::abs(t - s.center) / s.width);
  }
  return 0.0;
}

std::vector<std::string> shape_warnings(const Eigen::VectorXd& amp) {
  std::vector<std::string> warnings;
  const double peak = amp.cwiseAbs().maxCoeff();
  const int n = static_cast<int>(amp.size());
  if (std::max(std::abs(amp[0]), std::abs(amp[n - 1])) >= 1e-6 * peak) {
    warnings.push_back("mode support reaches the grid edge");
  }
  double max_step = 0.0;
  for (int k = 1; k < n; ++k) max_step = std::max(max_step, std::abs(amp[k] - amp[k - 1]));
  if (max_step > 0.2 * peak) {
    warnings.push_back("mode varies by more than 20% of peak between adjacent bins; "
                       "time resolution may be too coarse");
  }
  return warnings;
}

}  // namespace

TemporalMode::TemporalMode(Eigen::VectorXd t, Eigen::VectorXd amplitude,
                           std::optional<AnalyticShape> shape,
                           std::vector<std::string> warnings)
    : t_(std::move(t)), amp_(std::move(amplitude)), shape_(shape), warnings_(std::move(warnings)) {
  check_uniform_grid(t_);
  if (amp_.size() != t_.size()) {
    throw ConfigError("TemporalMode: amplitude and time grid lengths differ");
  }
  const double norm = amp_.norm();
  if (norm <= 0.0 || !std::isfinite(norm)) {
    throw DegenerateDistributionError("TemporalMode: amplitude has zero norm");
  }
  amp_ /= norm;
}

Eigen::VectorXd uniform_time_grid(int n, double dt, double center) {
  if (n < 2) throw ConfigError("uniform_time_grid: need at least 2 bins");
  if (dt <= 0.0) throw ConfigError("uniform_time_grid: dt must be positive");
  Eigen::VectorXd t(n);
  for (int k = 0; k < n; ++k) t[k] = center + (k - 0.5 * (n - 1)) * dt;
  return t;
}

TemporalMode make_gaussian_mode(double center, double width, const Eigen::VectorXd& t) {
  if (width <= 0.0) throw ConfigError("make_gaussian_mode: width must be positive");
  AnalyticShape shape{AnalyticShape::Kind::gaussian, center, width};
  Eigen::VectorXd amp(t.size());
  for (int k = 0; k < t.size(); ++k) amp[k] = shape_value(shape, t[k]);
  return TemporalMode(t, amp, shape, shape_warnings(amp));
}

TemporalMode make_double_exponential_mode(double center, double rate, const Eigen::VectorXd& t) {
  if (rate <= 0.0) throw ConfigError("make_double_exponential_mode: rate must be positive");
  AnalyticShape shape{AnalyticShape::Kind::double_exponential, center, 1.0 / rate};
  Eigen::VectorXd amp(t.size());
  for (int k = 0; k < t.size(); ++k) amp[k] = shape_value(shape, t[k]);
  return TemporalMode(t, amp, shape, shape_warnings(amp));
}

TemporalMode make_custom_mode(const Eigen::VectorXd& samples, const Eigen::VectorXd& t) {
  if (samples.size() != t.size()) {
    throw ConfigError("make_custom_mode: samples and grid lengths differ");
  }
  if (samples.norm() <= 0.0) {
    throw DegenerateDistributionError("make_custom_mode: all-zero samples");
  }
  return TemporalMode(t, samples, std::nullopt, shape_warnings(samples / samples.norm()));
}

TemporalMode ModeBasis::column(int j) const {
  if (j < 0 || j >= modes.cols()) throw ConfigError("ModeBasis::column: index out of range");
  return TemporalMode(t, modes.col(j));
}

ModeBasis complete_basis(const TemporalMode& seed) {
  const int n = seed.bins();
  Eigen::MatrixXd a(n, n);
  a.col(0) = seed.amplitude();
  SplitStream fill = SplitStream::from_seed(kBasisFillSeed);
  for (int j = 1; j < n; ++j) {
    SplitStream col = fill.child(j);
    for (int k = 0; k < n; ++k) a(k, j) = col.normal();
  }
  Eigen::HouseholderQR<Eigen::MatrixXd> qr(a);
  Eigen::MatrixXd q = qr.householderQ();
  if (q.col(0).dot(seed.amplitude()) < 0.0) q.col(0) = -q.col(0);
  return ModeBasis{std::move(q), seed.t()};
}

ModeBasis complete_basis_with_first(const ModeBasis& nominal, const TemporalMode& first) {
  const int n = nominal.bins();
  if (first.bins() != n || std::abs(first.t()[0] - nominal.t[0]) > 1e-9 * std::abs(first.dt())) {
    throw GridMismatchError("complete_basis_with_first: modes on different grids");
  }
  // Coordinates of the new first mode in the nominal frame (unit vector since
  // the nominal basis spans the full space).
  Eigen::VectorXd a = nominal.modes.transpose() * first.amplitude();
  // Householder reflection mapping e0 -> -a is well conditioned when a ~ e0
  // (the common small-shift case); a first-column sign flip restores +a.
  Eigen::VectorXd v = a;
  v[0] += 1.0;
  double vtv = v.squaredNorm();
  bool flipped = true;
  if (vtv < 1e-6) {  // a ~ -e0: use the direct reflection instead
    v = a;
    v[0] -= 1.0;
    vtv = v.squaredNorm();
    flipped = false;
  }
  Eigen::MatrixXd modes = nominal.modes - (nominal.modes * v) * (2.0 / vtv) * v.transpose();
  if (flipped) modes.col(0) = -modes.col(0);
  return ModeBasis{std::move(modes), nominal.t};
}

double overlap(const TemporalMode& f, const TemporalMode& g) {
  if (f.bins() != g.bins()) throw GridMismatchError("overlap: modes on different grids");
  const double dt = f.dt();
  if ((f.t() - g.t()).cwiseAbs().maxCoeff() > 1e-6 * dt) {
    throw GridMismatchError("overlap: modes on different grids");
  }
  return f.amplitude().dot(g.amplitude());
}

TemporalMode shift_mode(const TemporalMode& f, double tau) {
  const int n = f.bins();
  const double span = f.t()[n - 1] - f.t()[0];
  if (std::abs(tau) >= span) {
    throw DegenerateDistributionError("shift_mode: shift moves the mode off the grid");
  }
  Eigen::VectorXd shifted(n);
  std::optional<AnalyticShape> new_shape;
  double deficit = 0.0;
  if (f.shape()) {
    AnalyticShape s = *f.shape();
    s.center += tau;
    double ref = 0.0;
    for (int k = 0; k < n; ++k) {
      shifted[k] = shape_value(s, f.t()[k]);
      ref += shape_value(*f.shape(), f.t()[k]) * shape_value(*f.shape(), f.t()[k]);
    }
    deficit = std::max(0.0, 1.0 - shifted.squaredNorm() / ref);
    new_shape = s;
  } else {
    // Linear interpolation of the samples at t - tau, zero outside the grid.
    const double dt = f.dt();
    for (int k = 0; k < n; ++k) {
      const double pos = (f.t()[k] - tau - f.t()[0]) / dt;
      const int i = static_cast<int>(std::floor(pos));
      if (i < 0 || i >= n - 1) {
        shifted[k] = (i == n - 1 && pos == static_cast<double>(n - 1)) ? f.amplitude()[n - 1] : 0.0;
      } else {
        const double w = pos - i;
        shifted[k] = (1.0 - w) * f.amplitude()[i] + w * f.amplitude()[i + 1];
      }
    }
    deficit = std::max(0.0, 1.0 - shifted.squaredNorm());
  }
  if (shifted.norm() <= 1e-12) {
    throw DegenerateDistributionError("shift_mode: shifted mode has no support on the grid");
  }
  std::vector<std::string> warnings;
  if (deficit > 1e-6) {
    warnings.push_back("shift moved " + std::to_string(deficit) + " of the mode mass off-grid");
  }
  return TemporalMode(f.t(), shifted, new_shape, std::move(warnings));
}

}  // namespace thdsim
