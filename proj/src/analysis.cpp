#include "thdsim/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <map>

#include "thdsim/errors.hpp"
#include "thdsim/hermite.hpp"

namespace thdsim {

std::vector<QuadratureRecord> recover_quadratures(const TraceEnsemble& ensemble,
                                                  const TemporalMode& analysis_mode) {
  if (analysis_mode.bins() != ensemble.bins() ||
      (analysis_mode.t() - ensemble.t).cwiseAbs().maxCoeff() > 1e-6 * analysis_mode.dt()) {
    throw GridMismatchError("recover_quadratures: analysis mode grid differs from ensemble");
  }
  const Eigen::VectorXd q = (ensemble.traces * analysis_mode.amplitude()) / ensemble.gain;
  std::vector<QuadratureRecord> records(ensemble.trace_count());
  for (int m = 0; m < ensemble.trace_count(); ++m) {
    records[m] = {q[m], ensemble.theta[m]};
  }
  return records;
}

Eigen::VectorXd EmpiricalMarginal::centers() const {
  const int k = bins();
  Eigen::VectorXd c(k);
  for (int i = 0; i < k; ++i) c[i] = 0.5 * (bin_edges[i] + bin_edges[i + 1]);
  return c;
}

double EmpiricalMarginal::mean() const {
  return centers().dot(normalized_pdf) * bin_width();
}

double EmpiricalMarginal::variance() const {
  const double mu = mean();
  return (centers().array() - mu).square().matrix().dot(normalized_pdf) * bin_width();
}

EmpiricalMarginal histogram_marginal(std::span<const QuadratureRecord> records,
                                     std::optional<std::pair<double, double>> theta_filter,
                                     int bins, std::pair<double, double> range) {
  if (bins < 1) throw ConfigError("histogram_marginal: bins must be >= 1");
  const auto [lo, hi] = range;
  if (!(lo < hi)) throw ConfigError("histogram_marginal: empty range");

  EmpiricalMarginal h;
  h.bin_edges = Eigen::VectorXd::LinSpaced(bins + 1, lo, hi);
  h.counts = Eigen::VectorXi::Zero(bins);
  const double width = (hi - lo) / bins;
  long long total = 0;
  for (const auto& r : records) {
    if (theta_filter && (r.theta < theta_filter->first || r.theta > theta_filter->second)) {
      continue;
    }
    if (r.q < lo || r.q > hi) {
      ++h.overflow;
      continue;
    }
    int i = std::min(bins - 1, static_cast<int>((r.q - lo) / width));
    ++h.counts[i];
    ++total;
  }
  if (total == 0) throw ConfigError("histogram_marginal: no records selected");
  h.normalized_pdf = h.counts.cast<double>() / (static_cast<double>(total) * width);
  return h;
}

namespace {

struct Tabulated {
  const Eigen::VectorXd* q;
  const Eigen::VectorXd* pdf;
  double dq;
};

double interp_pdf(const Tabulated& t, double x) {
  const auto& q = *t.q;
  const int n = static_cast<int>(q.size());
  if (x < q[0] || x > q[n - 1]) return 0.0;
  const double pos = (x - q[0]) / t.dq;
  const int i = std::min(n - 2, static_cast<int>(pos));
  const double w = pos - i;
  return (1.0 - w) * (*t.pdf)[i] + w * (*t.pdf)[i + 1];
}

// B over the target grid, with the other density linearly interpolated.
// Identical grids take the direct product path, which is exactly symmetric.
double bhattacharyya_on(const Tabulated& target, const Tabulated& other) {
  const bool same_grid = target.q->size() == other.q->size() && target.dq == other.dq &&
                         (*target.q)[0] == (*other.q)[0];
  double b = 0.0;
  for (int i = 0; i < target.q->size(); ++i) {
    const double p1 = std::max(0.0, (*target.pdf)[i]);
    const double p2 = same_grid ? std::max(0.0, (*other.pdf)[i])
                                : std::max(0.0, interp_pdf(other, (*target.q)[i]));
    b += std::sqrt(p1 * p2);
  }
  return std::min(1.0, b * target.dq);
}

// Argument-order-independent choice of the evaluation grid.
bool prefer_first(const Tabulated& a, const Tabulated& b) {
  if (a.dq != b.dq) return a.dq < b.dq;
  if (a.q->size() != b.q->size()) return a.q->size() > b.q->size();
  return (*a.q)[0] <= (*b.q)[0];
}

}  // namespace

double bhattacharyya(const MarginalDistribution& p, const MarginalDistribution& q) {
  Tabulated a{&p.q, &p.pdf, p.dq()};
  Tabulated b{&q.q, &q.pdf, q.dq()};
  return prefer_first(a, b) ? bhattacharyya_on(a, b) : bhattacharyya_on(b, a);
}

double bhattacharyya(const EmpiricalMarginal& p, const MarginalDistribution& q) {
  // Empirical data stays untouched; the analytic pdf is resampled onto the
  // histogram's bin centers.
  const Eigen::VectorXd centers = p.centers();
  Tabulated emp{&centers, &p.normalized_pdf, p.bin_width()};
  Tabulated ana{&q.q, &q.pdf, q.dq()};
  return bhattacharyya_on(emp, ana);
}

double bhattacharyya(const MarginalDistribution& p, const EmpiricalMarginal& q) {
  return bhattacharyya(q, p);
}

double bhattacharyya(const EmpiricalMarginal& p, const EmpiricalMarginal& q) {
  if (p.bins() != q.bins() ||
      (p.bin_edges - q.bin_edges).cwiseAbs().maxCoeff() > 1e-9 * p.bin_width()) {
    throw GridMismatchError("bhattacharyya: histograms must share binning");
  }
  double b = 0.0;
  for (int i = 0; i < p.bins(); ++i) {
    b += std::sqrt(std::max(0.0, p.normalized_pdf[i]) * std::max(0.0, q.normalized_pdf[i]));
  }
  return std::min(1.0, b * p.bin_width());
}

Eigen::VectorXd pointwise_variance(const TraceEnsemble& ensemble) {
  const int m = ensemble.trace_count();
  if (m < 2) throw ConfigError("pointwise_variance: need at least 2 traces");
  const Eigen::RowVectorXd mean = ensemble.traces.colwise().mean();
  return (ensemble.traces.rowwise() - mean).array().square().colwise().sum().transpose() /
         (m - 1.0);
}

PrincipalModeResult estimate_principal_mode(const TraceEnsemble& ensemble) {
  const int m = ensemble.trace_count();
  const int n = ensemble.bins();
  if (m < 2) throw ConfigError("estimate_principal_mode: need at least 2 traces");
  PrincipalModeResult result{TemporalMode(ensemble.t, Eigen::VectorXd::Ones(n)), {}, {}};
  if (m < 10 * n) {
    result.warnings.push_back("trace count below 10x bins; principal mode estimate is noisy");
  }

  const Eigen::MatrixXd corr = (ensemble.traces.transpose() * ensemble.traces) / m;
  const double bg = ensemble.gain * ensemble.gain * ensemble.background_variance;
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(corr);
  Eigen::VectorXd lam = es.eigenvalues().reverse();  // descending
  lam.array() -= bg;

  // With M traces of an N-bin Gaussian background the top noise eigenvalue of
  // the subtracted autocorrelation sits at the Marchenko-Pastur edge
  // bg*((1+sqrt(N/M))^2 - 1); anything below 1.25x that is indistinguishable
  // from no signal.
  const double edge = bg * (std::pow(1.0 + std::sqrt(static_cast<double>(n) / m), 2.0) - 1.0);
  if (lam[0] <= 1.25 * edge) {
    throw NoSignalError("estimate_principal_mode: dominant eigenvalue " +
                        std::to_string(lam[0]) + " is within the noise floor " +
                        std::to_string(1.25 * edge));
  }

  Eigen::VectorXd v = es.eigenvectors().col(n - 1);
  int peak = 0;
  v.cwiseAbs().maxCoeff(&peak);
  if (v[peak] < 0.0) v = -v;
  result.mode = TemporalMode(ensemble.t, v);
  result.eigenvalues = lam;
  return result;
}

// ---- Maximum likelihood reconstruction --------------------------------------

namespace {

struct BinnedData {
  Eigen::MatrixXcd projectors;  // dim x B, column b = |q_b, theta_b> components
  Eigen::VectorXd frequency;    // relative frequency per bin
  Eigen::VectorXd counts;
};

BinnedData bin_records(std::span<const QuadratureRecord> records, int dim, int bins_per_phase,
                       std::vector<std::string>* warnings) {
  std::map<double, std::vector<double>> by_phase;
  for (const auto& r : records) by_phase[r.theta].push_back(r.q);

  // Informational completeness needs phases spread over [0, pi).
  std::vector<double> mod;
  for (const auto& [theta, qs] : by_phase) {
    double t = std::fmod(theta, M_PI);
    if (t < 0) t += M_PI;
    bool dup = false;
    for (double x : mod) dup = dup || std::abs(x - t) < 1e-9;
    if (!dup) mod.push_back(t);
  }
  if (mod.size() < 8) {
    warnings->push_back("only " + std::to_string(mod.size()) +
                        " distinct phases in [0, pi); reconstruction may be underdetermined");
  }

  std::vector<std::pair<double, double>> centers;  // (theta, q)
  std::vector<double> counts;
  for (const auto& [theta, qs] : by_phase) {
    const auto [lo_it, hi_it] = std::minmax_element(qs.begin(), qs.end());
    const double lo = *lo_it, hi = *hi_it;
    const double width = std::max((hi - lo) / bins_per_phase, 1e-12);
    std::vector<double> c(bins_per_phase, 0.0);
    for (double q : qs) {
      int i = std::min(bins_per_phase - 1, static_cast<int>((q - lo) / width));
      c[i] += 1.0;
    }
    for (int i = 0; i < bins_per_phase; ++i) {
      if (c[i] == 0.0) continue;
      centers.emplace_back(theta, lo + (i + 0.5) * width);
      counts.push_back(c[i]);
    }
  }

  BinnedData data;
  const int b = static_cast<int>(centers.size());
  data.projectors.resize(dim, b);
  data.counts = Eigen::Map<Eigen::VectorXd>(counts.data(), b);
  data.frequency = data.counts / data.counts.sum();
  for (int j = 0; j < b; ++j) {
    const auto [theta, q] = centers[j];
    const Eigen::VectorXd psi = hermite_psi(dim - 1, q);
    for (int a = 0; a < dim; ++a) {
      // |q, theta> components <a|q,theta> = psi_a(q) e^{-i a theta}
      data.projectors(a, j) = psi[a] * std::exp(std::complex<double>(0.0, -a * theta));
    }
  }
  return data;
}

double log_likelihood(const BinnedData& d, const Eigen::MatrixXcd& rho, Eigen::VectorXd* probs) {
  const Eigen::MatrixXcd t = rho * d.projectors;
  Eigen::VectorXd p =
      d.projectors.conjugate().cwiseProduct(t).colwise().sum().real().transpose();
  double ll = 0.0;
  for (int j = 0; j < p.size(); ++j) {
    if (p[j] < 1e-300) {
      throw DegenerateLikelihoodError(
          "mle_reconstruct: vanishing bin probability; increase dim or trim outliers");
    }
    ll += d.counts[j] * std::log(p[j]);
  }
  *probs = std::move(p);
  return ll;
}

Eigen::MatrixXcd iteration_operator(const BinnedData& d, const Eigen::VectorXd& probs) {
  const Eigen::VectorXd w = d.frequency.cwiseQuotient(probs);
  return (d.projectors * w.asDiagonal()) * d.projectors.adjoint();
}

Eigen::MatrixXcd normalize_state(Eigen::MatrixXcd rho) {
  rho = ((rho + rho.adjoint()) / 2.0).eval();
  return rho / rho.trace().real();
}

}  // namespace

MleResult mle_reconstruct(std::span<const QuadratureRecord> records, const MleOptions& options) {
  if (records.empty()) throw ConfigError("mle_reconstruct: no records");
  if (options.dim < 2) throw ConfigError("mle_reconstruct: dim must be >= 2");
  if (options.max_iter < 1) throw ConfigError("mle_reconstruct: max_iter must be >= 1");
  if (options.tol <= 0.0) throw ConfigError("mle_reconstruct: tol must be positive");
  if (options.bins_per_phase < 2) throw ConfigError("mle_reconstruct: bins_per_phase must be >= 2");

  std::vector<std::string> warnings;
  const BinnedData data = bin_records(records, options.dim, options.bins_per_phase, &warnings);

  Eigen::MatrixXcd rho =
      Eigen::MatrixXcd::Identity(options.dim, options.dim) / static_cast<double>(options.dim);
  Eigen::VectorXd probs;
  double ll = log_likelihood(data, rho, &probs);

  MleResult result{make_vacuum(options.dim), 0, false, {ll}, 0.0};
  double min_eig = 0.0;

  for (int iter = 0; iter < options.max_iter; ++iter) {
    const Eigen::MatrixXcd r_op = iteration_operator(data, probs);
    Eigen::MatrixXcd candidate = normalize_state(r_op * rho * r_op);
    Eigen::VectorXd cand_probs;
    double cand_ll = log_likelihood(data, candidate, &cand_probs);

    if (cand_ll < ll) {
      // Full R rho R step overshot: retreat along the diluted iteration
      // (I + eps(R - I)) rho (I + eps(R - I)) until the likelihood ascends.
      const Eigen::MatrixXcd eye = Eigen::MatrixXcd::Identity(options.dim, options.dim);
      double eps = 0.5;
      bool recovered = false;
      while (eps > 1e-10) {
        const Eigen::MatrixXcd step = eye + eps * (r_op - eye);
        candidate = normalize_state(step * rho * step);
        cand_ll = log_likelihood(data, candidate, &cand_probs);
        if (cand_ll >= ll) {
          recovered = true;
          break;
        }
        eps /= 2.0;
      }
      if (!recovered) {
        result.converged = true;  // stationary point within fp resolution
        break;
      }
    }

    const double delta = (candidate - rho).cwiseAbs().maxCoeff();
    rho = std::move(candidate);
    probs = std::move(cand_probs);
    ll = cand_ll;
    result.log_likelihood.push_back(ll);
    result.iterations = iter + 1;

    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(rho, Eigen::EigenvaluesOnly);
    min_eig = std::min(min_eig, es.eigenvalues().minCoeff());

    if (delta < options.tol) {
      result.converged = true;
      break;
    }
  }

  StateMetadata meta;
  meta.description = "mle(dim=" + std::to_string(options.dim) + ")";
  meta.warnings = warnings;
  result.state = QuantumState(rho, std::move(meta));
  result.min_eigenvalue = min_eig;
  return result;
}

MarginalDistribution phase_averaged_marginal(const QuantumState& state, double theta,
                                             double sigma, const QuadratureGrid& grid) {
  if (sigma < 0.0) throw ConfigError("phase_averaged_marginal: sigma must be >= 0");
  if (sigma == 0.0) return marginal(state, theta, grid);
  const MarginalEvaluator eval(state, grid);
  const int nodes = 121;
  const Eigen::VectorXd d = Eigen::VectorXd::LinSpaced(nodes, -6.0 * sigma, 6.0 * sigma);
  Eigen::VectorXd pdf = Eigen::VectorXd::Zero(grid.n_points);
  double weight_sum = 0.0;
  for (int i = 0; i < nodes; ++i) {
    double w = std::exp(-0.5 * (d[i] / sigma) * (d[i] / sigma));
    if (i == 0 || i == nodes - 1) w *= 0.5;
    pdf += w * eval.at(theta + d[i]).pdf;
    weight_sum += w;
  }
  pdf /= weight_sum;
  MarginalDistribution m;
  m.q = grid.points();
  m.pdf = pdf / (pdf.sum() * grid.dq());
  m.theta = theta;
  return build_cdf(std::move(m));
}

}  // namespace thdsim
