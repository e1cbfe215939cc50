#include "thdsim/homodyne.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <sstream>
#include <thread>

#include "thdsim/errors.hpp"

namespace thdsim {

void ErrorModel::validate() const {
  if (timing_jitter_sigma < 0.0) throw ConfigError("error_model.timing_jitter_sigma must be >= 0");
  if (phase_jitter_sigma < 0.0) throw ConfigError("error_model.phase_jitter_sigma must be >= 0");
}

std::string ErrorModel::describe() const {
  std::ostringstream os;
  os << "timing_jitter_sigma=" << timing_jitter_sigma
     << ",phase_jitter_sigma=" << phase_jitter_sigma
     << ",measurement_mode_offset=" << measurement_mode_offset;
  return os.str();
}

ThetaSchedule ThetaSchedule::fixed(double theta) {
  ThetaSchedule s;
  s.kind = Kind::fixed;
  s.value = theta;
  return s;
}

ThetaSchedule ThetaSchedule::uniform_scan(int count) {
  if (count < 1) throw ConfigError("theta schedule: uniform_scan count must be >= 1");
  ThetaSchedule s;
  s.kind = Kind::uniform_scan;
  s.count = count;
  return s;
}

ThetaSchedule ThetaSchedule::list(std::vector<double> values) {
  if (values.empty()) throw ConfigError("theta schedule: list must be non-empty");
  ThetaSchedule s;
  s.kind = Kind::list;
  s.values = std::move(values);
  return s;
}

double ThetaSchedule::at(int trace_index) const {
  switch (kind) {
    case Kind::fixed:
      return value;
    case Kind::uniform_scan:
      return M_PI * (trace_index % count) / count;
    case Kind::list:
      return values[trace_index % values.size()];
  }
  return value;
}

std::vector<double> ThetaSchedule::distinct() const {
  switch (kind) {
    case Kind::fixed:
      return {value};
    case Kind::uniform_scan: {
      std::vector<double> out(count);
      for (int i = 0; i < count; ++i) out[i] = M_PI * i / count;
      return out;
    }
    case Kind::list: {
      std::vector<double> out;
      for (double v : values) {
        if (std::find(out.begin(), out.end(), v) == out.end()) out.push_back(v);
      }
      return out;
    }
  }
  return {};
}

Eigen::VectorXd simulate_trace(const QuantumState& state, const TemporalMode& mode,
                               double theta, const QuantumState& background, double gain,
                               const SplitStream& trace_rng) {
  if (gain <= 0.0) throw ConfigError("simulate_trace: gain must be positive");
  const ModeBasis basis = complete_basis(mode);
  const MarginalDistribution ms = marginal(state, theta);
  const MarginalDistribution mb = marginal(background, theta);
  const int n = mode.bins();
  const SplitStream quad = trace_rng.child(rng_channel::quadrature);
  Eigen::VectorXd x(n);
  for (int j = 0; j < n; ++j) {
    SplitStream s = quad.child(j);
    x[j] = invert_cdf(j == 0 ? ms : mb, s.uniform01());
  }
  return gain * (basis.modes * x);
}

TraceEnsemble simulate_ensemble(const QuantumState& state, const TemporalMode& mode,
                                const ThetaSchedule& schedule, const QuantumState& background,
                                double gain, const ErrorModel& error_model, int traces,
                                uint64_t seed, int threads) {
  if (traces < 1) throw ConfigError("simulate_ensemble: traces must be >= 1");
  if (gain <= 0.0) throw ConfigError("simulate_ensemble: gain must be positive");
  if (threads < 1) threads = 1;
  error_model.validate();

  const int n = mode.bins();
  const ModeBasis basis = complete_basis(mode);
  const MarginalEvaluator state_eval(state);
  const MarginalEvaluator background_eval(background);

  TraceEnsemble e;
  e.traces.resize(traces, n);
  e.t = mode.t();
  e.theta.resize(traces);
  e.sampled_x0.resize(traces);
  e.gain = gain;
  e.seed = seed;
  e.provenance.state = state.metadata().description;
  e.provenance.background = background.metadata().description;
  e.provenance.error_model = error_model.describe();
  {
    std::ostringstream os;
    if (mode.shape()) {
      os << (mode.shape()->kind == AnalyticShape::Kind::gaussian ? "gaussian" : "double_exponential")
         << "(center=" << mode.shape()->center << ",width=" << mode.shape()->width << ")";
    } else {
      os << "custom";
    }
    os << ",bins=" << n << ",dt=" << mode.dt();
    e.provenance.mode = os.str();
  }
  e.background_variance = background_eval.cached_at(schedule.at(0))->variance();

  const SplitStream master = SplitStream::from_seed(seed);
  std::atomic<int> off_window{0};

  auto worker = [&](int m_begin, int m_end) {
    Eigen::VectorXd u(n), x(n);
    for (int m = m_begin; m < m_end; ++m) {
      const SplitStream root = master.child(static_cast<uint64_t>(m));
      const double theta_nominal = schedule.at(m);
      double tau = 0.0, dtheta = 0.0;
      if (error_model.timing_jitter_sigma > 0.0) {
        SplitStream s = root.child(rng_channel::timing);
        tau = s.normal() * error_model.timing_jitter_sigma;
      }
      if (error_model.phase_jitter_sigma > 0.0) {
        SplitStream s = root.child(rng_channel::phase);
        dtheta = s.normal() * error_model.phase_jitter_sigma;
      }

      // Uniform draws are fixed per (trace, basis index) before any path
      // decisions, so the stream layout never depends on the error model.
      const SplitStream quad = root.child(rng_channel::quadrature);
      for (int j = 0; j < n; ++j) {
        SplitStream s = quad.child(j);
        u[j] = s.uniform01();
      }

      const auto mb = background_eval.cached_at(theta_nominal);
      std::shared_ptr<const MarginalDistribution> ms;
      if (dtheta == 0.0) {
        ms = state_eval.cached_at(theta_nominal);
      } else {
        ms = std::make_shared<const MarginalDistribution>(state_eval.at(theta_nominal + dtheta));
      }

      x[0] = invert_cdf(*ms, u[0]);
      for (int j = 1; j < n; ++j) x[j] = invert_cdf(*mb, u[j]);
      e.sampled_x0[m] = x[0];
      e.theta[m] = theta_nominal;

      if (tau == 0.0) {
        e.traces.row(m) = (gain * (basis.modes * x)).transpose();
        continue;
      }

      // Shifted-mode completion applied directly to the coefficient vector:
      // same rotation as complete_basis_with_first without forming the basis.
      bool shifted_ok = true;
      Eigen::VectorXd w;
      try {
        const TemporalMode shifted = shift_mode(mode, tau);
        Eigen::VectorXd a = basis.modes.transpose() * shifted.amplitude();
        Eigen::VectorXd v = a;
        v[0] += 1.0;
        double vtv = v.squaredNorm();
        bool flip = true;
        if (vtv < 1e-6) {
          v = a;
          v[0] -= 1.0;
          vtv = v.squaredNorm();
          flip = false;
        }
        w = x;
        if (flip) w[0] = -w[0];
        w -= v * (2.0 * v.dot(w) / vtv);
      } catch (const DegenerateDistributionError&) {
        shifted_ok = false;
      }
      if (!shifted_ok) {
        // Mode fully off-window: every in-window basis mode sees background.
        x[0] = invert_cdf(*mb, u[0]);
        off_window.fetch_add(1, std::memory_order_relaxed);
        w = x;
      }
      e.traces.row(m) = (gain * (basis.modes * w)).transpose();
    }
  };

  if (threads == 1) {
    worker(0, traces);
  } else {
    std::vector<std::thread> pool;
    const int chunk = (traces + threads - 1) / threads;
    for (int w = 0; w < threads; ++w) {
      const int b = w * chunk;
      const int end = std::min(traces, b + chunk);
      if (b >= end) break;
      pool.emplace_back(worker, b, end);
    }
    for (auto& th : pool) th.join();
  }
  e.provenance.off_window_traces = off_window.load();
  return e;
}

MarginalDistribution mode_mismatch_marginal(const QuantumState& state, double eta,
                                            double theta, const QuadratureGrid& grid) {
  if (eta < 0.0 || eta > 1.0) throw ConfigError("mode_mismatch_marginal: eta must be in [0, 1]");
  if (eta == 1.0) return marginal(state, theta, grid);
  if (eta == 0.0) return vacuum_marginal(grid, theta);

  const Eigen::VectorXd q = grid.points();
  const int n = static_cast<int>(q.size());
  const double dq = grid.dq();
  const MarginalEvaluator eval(state);

  // Scaled state marginal mass per bin: (1/eta) Pr_state(q/eta) dq.
  Eigen::VectorXd source(n);
  for (int j = 0; j < n; ++j) source[j] = eval.pdf_at(theta, q[j] / eta) / eta * dq;

  // Vacuum factor has variance (1 - eta^2)/2; its mass across each target bin
  // is taken exactly via erf so narrow kernels stay well resolved.
  const double sv = std::sqrt(0.5 * (1.0 - eta * eta));
  const double inv = 1.0 / (sv * std::sqrt(2.0));
  Eigen::VectorXd kernel(n);  // bin mass at center offset k*dq, divided by dq
  for (int k = 0; k < n; ++k) {
    const double lo = (k * dq - 0.5 * dq) * inv;
    const double hi = (k * dq + 0.5 * dq) * inv;
    kernel[k] = 0.5 * (std::erf(hi) - std::erf(lo)) / dq;
  }

  Eigen::VectorXd pdf = Eigen::VectorXd::Zero(n);
  for (int j = 0; j < n; ++j) {
    if (source[j] == 0.0) continue;
    for (int i = 0; i < n; ++i) {
      pdf[i] += source[j] * kernel[std::abs(i - j)];
    }
  }
  MarginalDistribution m;
  m.q = q;
  m.pdf = pdf;
  m.theta = theta;
  const double total = pdf.sum() * dq;
  if (total <= 0.0) throw DegenerateDistributionError("mode_mismatch_marginal: empty mixture");
  m.pdf /= total;
  return build_cdf(std::move(m));
}

}  // namespace thdsim
