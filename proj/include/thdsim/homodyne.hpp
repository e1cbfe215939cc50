#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "thdsim/phase_space.hpp"
#include "thdsim/quantum_state.hpp"
#include "thdsim/rng.hpp"
#include "thdsim/temporal_mode.hpp"

namespace thdsim {

// Experimentally motivated error channels injected during trace synthesis.
struct ErrorModel {
  double timing_jitter_sigma = 0.0;      // seconds, std dev of per-trace shift tau
  double phase_jitter_sigma = 0.0;       // radians, std dev of per-trace d(theta)
  double measurement_mode_offset = 0.0;  // seconds, deterministic analysis-mode shift

  bool is_zero() const {
    return timing_jitter_sigma == 0.0 && phase_jitter_sigma == 0.0 &&
           measurement_mode_offset == 0.0;
  }
  void validate() const;
  std::string describe() const;
};

// Local-oscillator phase per trace.
struct ThetaSchedule {
  enum class Kind { fixed, uniform_scan, list };

  static ThetaSchedule fixed(double theta);
  static ThetaSchedule uniform_scan(int count);  // count phases uniform in [0, pi)
  static ThetaSchedule list(std::vector<double> values);

  double at(int trace_index) const;
  std::vector<double> distinct() const;

  Kind kind = Kind::fixed;
  double value = 0.0;
  int count = 0;
  std::vector<double> values;
};

struct Provenance {
  std::string state;
  std::string mode;
  std::string background;
  std::string error_model;
  int off_window_traces = 0;  // traces whose jittered mode left the grid
};

// Synthesized photocurrent traces with generation metadata. Regenerating with
// the same seed and configuration reproduces the matrix bit-exactly.
struct TraceEnsemble {
  Eigen::MatrixXd traces;      // M x N, i_m(t_k)
  Eigen::VectorXd t;           // N
  Eigen::VectorXd theta;       // M, nominal LO phase per trace
  Eigen::VectorXd sampled_x0;  // M, the signal quadrature each trace realized
  double gain = 1.0;
  uint64_t seed = 0;
  double background_variance = 0.5;  // unit-gain quadrature variance of the background
  Provenance provenance;

  int trace_count() const { return static_cast<int>(traces.rows()); }
  int bins() const { return static_cast<int>(traces.cols()); }
};

// One synthesized trace: x_0 drawn from the state marginal at theta, x_{j>=1}
// from the background marginal, i(t_k) = gain * sum_j x_j f_j(t_k) over the
// orthonormal completion of `mode`. The stream should be the per-trace child
// of a master seed (see simulate_ensemble).
Eigen::VectorXd simulate_trace(const QuantumState& state, const TemporalMode& mode,
                               double theta, const QuantumState& background, double gain,
                               const SplitStream& trace_rng);

// M traces under the given schedule and error model.
//
// Seeding contract: master seed -> per-trace stream child(m); within a trace,
// quadrature draw j comes from child(rng_channel::quadrature).child(j), and
// jitter draws from their own channels. Results are therefore independent of
// execution order and worker count.
//
// Timing jitter shifts the signal mode per trace (basis completed around the
// shifted mode); phase jitter samples the state marginal at theta + d(theta)
// while recording the nominal theta. The measurement_mode_offset field is
// analysis-side and ignored here.
TraceEnsemble simulate_ensemble(const QuantumState& state, const TemporalMode& mode,
                                const ThetaSchedule& schedule, const QuantumState& background,
                                double gain, const ErrorModel& error_model, int traces,
                                uint64_t seed, int threads = 1);

// Analytic marginal of eta * q_state + sqrt(1-eta^2) * q_vac (independent
// variables): the scaled state marginal convolved with the scaled vacuum
// Gaussian. Endpoints eta = 0, 1 are returned exactly.
MarginalDistribution mode_mismatch_marginal(const QuantumState& state, double eta,
                                            double theta, const QuadratureGrid& grid = {});

}  // namespace thdsim
