#include "thdsim/phase_space.hpp"

#include <algorithm>
#include <cmath>
#include <complex>

#include "thdsim/errors.hpp"
#include "thdsim/hermite.hpp"

namespace thdsim {

namespace {

constexpr double kNegligibleRho = 1e-17;
constexpr double kClampBudget = 1e-6;  // tolerated clamped-mass fraction

// Clamp tiny negative densities, normalize to unit Riemann mass, attach CDF.
MarginalDistribution finalize_marginal(Eigen::VectorXd q, Eigen::VectorXd pdf, double theta) {
  double clamped = 0.0;
  for (int i = 0; i < pdf.size(); ++i) {
    if (pdf[i] < 0.0) {
      clamped -= pdf[i];
      pdf[i] = 0.0;
    }
  }
  const double dq = q[1] - q[0];
  const double total = pdf.sum() * dq;
  if (total <= 0.0) throw DegenerateDistributionError("marginal: all-zero pdf");
  if (clamped * dq / (total + clamped * dq) > kClampBudget) {
    throw NumericalError("marginal: clamped negative mass fraction " +
                         std::to_string(clamped * dq / (total + clamped * dq)) +
                         " exceeds 1e-6");
  }
  MarginalDistribution m;
  m.q = std::move(q);
  m.pdf = pdf / total;
  m.theta = theta;
  return build_cdf(std::move(m));
}

}  // namespace

Eigen::VectorXd QuadratureGrid::points() const {
  if (n_points < 2) throw ConfigError("QuadratureGrid: need at least 2 points");
  if (extent <= 0.0) throw ConfigError("QuadratureGrid: extent must be positive");
  return Eigen::VectorXd::LinSpaced(n_points, -extent, extent);
}

double MarginalDistribution::mean() const {
  return q.dot(pdf) * dq();
}

double MarginalDistribution::variance() const {
  const double mu = mean();
  return (q.array() - mu).square().matrix().dot(pdf) * dq();
}

// ---- Wigner kernel ----------------------------------------------------------

WignerEvaluator::WignerEvaluator(const QuantumState& state) : dim_(state.dim()) {
  const auto& rho = state.rho();
  for (int d = 0; d < dim_; ++d) {
    DiagonalBand band;
    band.d = d;
    for (int m = 0; m + d < dim_; ++m) {
      const std::complex<double> r = rho(m, m + d);
      if (std::abs(r) < kNegligibleRho) continue;
      // weight = rho_{m,m+d} (-1)^m sqrt(m!/(m+d)!)
      const double scale = std::exp(0.5 * (std::lgamma(m + 1.0) - std::lgamma(m + d + 1.0)));
      const double sign = (m % 2 == 0) ? 1.0 : -1.0;
      band.terms.emplace_back(m, r * sign * scale);
      band.max_m = m;
    }
    if (!band.terms.empty()) bands_.push_back(std::move(band));
  }
}

double WignerEvaluator::operator()(double x, double p) const {
  const double r2 = x * x + p * p;
  const double envelope = std::exp(-r2);
  if (envelope == 0.0) return 0.0;
  const double lag_arg = 2.0 * r2;
  const std::complex<double> beta = std::sqrt(2.0) * std::complex<double>(x, p);

  double sum = 0.0;
  std::vector<double> lag;  // L_m^{(d)}(lag_arg) by upward recurrence in m
  for (const auto& band : bands_) {
    const int d = band.d;
    lag.assign(band.max_m + 1, 0.0);
    lag[0] = 1.0;
    if (band.max_m >= 1) lag[1] = 1.0 + d - lag_arg;
    for (int m = 1; m < band.max_m; ++m) {
      lag[m + 1] = ((2.0 * m + d + 1.0 - lag_arg) * lag[m] - (m + d) * lag[m - 1]) / (m + 1.0);
    }
    std::complex<double> band_sum = 0.0;
    for (const auto& [m, w] : band.terms) band_sum += w * lag[m];
    if (d == 0) {
      sum += band_sum.real();
    } else {
      sum += 2.0 * (std::pow(beta, d) * band_sum).real();
    }
  }
  return envelope * sum / M_PI;
}

PhaseSpaceGrid wigner(const QuantumState& state, const GridSpec& spec) {
  if (spec.n_points < 2) throw ConfigError("wigner: grid needs at least 2 points per axis");
  if (spec.extent <= 0.0) throw ConfigError("wigner: grid extent must be positive");
  PhaseSpaceGrid grid;
  grid.x = Eigen::VectorXd::LinSpaced(spec.n_points, -spec.extent, spec.extent);
  grid.p = grid.x;
  grid.w.resize(spec.n_points, spec.n_points);
  WignerEvaluator w_eval(state);
  for (int i = 0; i < spec.n_points; ++i) {
    for (int j = 0; j < spec.n_points; ++j) {
      grid.w(i, j) = w_eval(grid.x[i], grid.p[j]);
    }
  }
  grid.mass = grid.w.sum() * grid.dx() * grid.dp();
  if (std::abs(grid.mass - 1.0) > 1e-3) {
    grid.warnings.push_back("grid clips state support: integrated mass " +
                            std::to_string(grid.mass));
  }
  return grid;
}

// ---- Marginals ----------------------------------------------------------------

MarginalEvaluator::MarginalEvaluator(const QuantumState& state, QuadratureGrid grid)
    : grid_(grid), q_(grid.points()), dim_(state.dim()), rho_(state.rho()) {
  const Eigen::MatrixXd psi = hermite_psi_table(dim_ - 1, q_);
  g_tables_.resize(dim_);
  for (int d = 0; d < dim_; ++d) {
    bool present = false;
    Eigen::VectorXcd g = Eigen::VectorXcd::Zero(q_.size());
    for (int n = 0; n + d < dim_; ++n) {
      const std::complex<double> r = rho_(n + d, n);
      if (std::abs(r) < kNegligibleRho) continue;
      present = true;
      g += r * psi.row(n + d).cwiseProduct(psi.row(n)).transpose();
    }
    if (present) {
      g_tables_[d] = std::move(g);
      band_present_.push_back(d);
    }
  }
  if (band_present_.empty()) {
    throw DegenerateDistributionError("MarginalEvaluator: state has no populated entries");
  }
}

MarginalDistribution MarginalEvaluator::at(double theta) const {
  Eigen::VectorXd pdf = Eigen::VectorXd::Zero(q_.size());
  const std::complex<double> rot = std::exp(std::complex<double>(0.0, theta));
  for (int d : band_present_) {
    if (d == 0) {
      pdf += g_tables_[0].real();
    } else {
      const std::complex<double> ph = std::pow(rot, d);
      pdf += 2.0 * (ph.real() * g_tables_[d].real() - ph.imag() * g_tables_[d].imag());
    }
  }
  return finalize_marginal(q_, std::move(pdf), theta);
}

std::shared_ptr<const MarginalDistribution> MarginalEvaluator::cached_at(double theta) const {
  const int64_t key = llround(theta / 1e-9);
  {
    std::lock_guard<std::mutex> lock(cache_mutex_);
    auto it = cache_.find(key);
    if (it != cache_.end()) return it->second;
  }
  auto computed = std::make_shared<const MarginalDistribution>(at(theta));
  std::lock_guard<std::mutex> lock(cache_mutex_);
  auto it = cache_.find(key);
  if (it != cache_.end()) return it->second;
  if (cache_.size() < kCacheCap) cache_.emplace(key, computed);
  return computed;
}

double MarginalEvaluator::pdf_at(double theta, double q) const {
  const Eigen::VectorXd psi = hermite_psi(dim_ - 1, q);
  const std::complex<double> rot = std::exp(std::complex<double>(0.0, theta));
  double val = 0.0;
  for (int d : band_present_) {
    std::complex<double> s = 0.0;
    for (int n = 0; n + d < dim_; ++n) {
      const std::complex<double> r = rho_(n + d, n);
      if (std::abs(r) < kNegligibleRho) continue;
      s += r * (psi[n + d] * psi[n]);
    }
    if (d == 0) {
      val += s.real();
    } else {
      val += 2.0 * (std::pow(rot, d) * s).real();
    }
  }
  return std::max(0.0, val);
}

MarginalDistribution marginal(const QuantumState& state, double theta,
                              const QuadratureGrid& grid) {
  return MarginalEvaluator(state, grid).at(theta);
}

MarginalDistribution marginal_from_wigner(const QuantumState& state, double theta,
                                          const QuadratureGrid& grid, int p_points) {
  if (p_points < 3) throw ConfigError("marginal_from_wigner: p_points must be >= 3");
  const Eigen::VectorXd q = grid.points();
  const Eigen::VectorXd p = Eigen::VectorXd::LinSpaced(p_points, -grid.extent, grid.extent);
  const double dp = p[1] - p[0];
  const double c = std::cos(theta), s = std::sin(theta);
  WignerEvaluator w_eval(state);
  Eigen::VectorXd pdf(q.size());
  // Integration direction matches the q_theta = X cos(theta) - P sin(theta)
  // convention shared by the Fock-basis form.
  for (int i = 0; i < q.size(); ++i) {
    double acc = 0.0;
    for (int j = 0; j < p_points; ++j) {
      const double w = w_eval(q[i] * c + p[j] * s, -q[i] * s + p[j] * c);
      acc += (j == 0 || j == p_points - 1) ? 0.5 * w : w;
    }
    pdf[i] = acc * dp;
  }
  return finalize_marginal(q, std::move(pdf), theta);
}

MarginalDistribution vacuum_marginal(const QuadratureGrid& grid, double theta) {
  const Eigen::VectorXd q = grid.points();
  Eigen::VectorXd pdf = (-q.array().square()).exp() / std::sqrt(M_PI);
  return finalize_marginal(q, std::move(pdf), theta);
}

// ---- CDF and sampling ---------------------------------------------------------

MarginalDistribution build_cdf(MarginalDistribution m) {
  if (m.pdf.size() != m.q.size() || m.q.size() < 2) {
    throw ConfigError("build_cdf: pdf must be populated on the grid");
  }
  const double dq = m.dq();
  Eigen::VectorXd cdf(m.q.size());
  cdf[0] = 0.0;
  for (int i = 1; i < m.q.size(); ++i) {
    cdf[i] = cdf[i - 1] + 0.5 * (m.pdf[i] + m.pdf[i - 1]) * dq;
  }
  const double total = cdf[cdf.size() - 1];
  if (total <= 0.0) throw DegenerateDistributionError("build_cdf: all-zero pdf");
  cdf /= total;
  cdf[cdf.size() - 1] = 1.0;
  m.cdf = std::move(cdf);
  return m;
}

double invert_cdf(const MarginalDistribution& m, double u) {
  if (!m.has_cdf()) throw ConfigError("invert_cdf: cdf not built");
  u = std::clamp(u, 0.0, 1.0);
  const auto begin = m.cdf.data();
  const auto end = begin + m.cdf.size();
  // First index with cdf >= u; exact hits on a plateau value resolve to its
  // left edge, which fixes the tie-breaking deterministically.
  const auto it = std::lower_bound(begin, end, u);
  const int i = static_cast<int>(it - begin);
  if (i <= 0) return m.q[0];
  const double c0 = m.cdf[i - 1], c1 = m.cdf[i];
  if (c1 <= c0) return m.q[i];
  const double t = (u - c0) / (c1 - c0);
  return m.q[i - 1] + t * (m.q[i] - m.q[i - 1]);
}

Eigen::VectorXd sample_quadrature(const MarginalDistribution& m, SplitStream& rng, int count) {
  if (count < 0) throw ConfigError("sample_quadrature: count must be >= 0");
  Eigen::VectorXd out(count);
  for (int k = 0; k < count; ++k) out[k] = invert_cdf(m, rng.uniform01());
  return out;
}

}  // namespace thdsim
