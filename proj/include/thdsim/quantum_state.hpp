#pragma once

#include <complex>
#include <string>
#include <vector>

#include <Eigen/Dense>

namespace thdsim {

// Construction diagnostics carried with a state.
struct StateMetadata {
  double truncation_deficit = 0.0;  // norm lost to Fock truncation, pre-renormalization
  std::vector<std::string> warnings;
  std::string description;
};

// Quantum state as a truncated Fock-basis density matrix.
//
// Valid states are Hermitian, unit-trace and positive semidefinite; the
// constructor enforces all three. Instances are immutable after construction
// and safe to share across threads.
class QuantumState {
 public:
  explicit QuantumState(Eigen::MatrixXcd rho, StateMetadata metadata = {});

  int dim() const { return static_cast<int>(rho_.rows()); }
  const Eigen::MatrixXcd& rho() const { return rho_; }
  const StateMetadata& metadata() const { return metadata_; }

  double purity() const;              // Tr(rho^2)
  double mean_photon_number() const;  // Tr(rho n)

  static constexpr double kHermitianTol = 1e-12;
  static constexpr double kTraceTol = 1e-10;
  static constexpr double kMinEigenvalueTol = -1e-10;

 private:
  Eigen::MatrixXcd rho_;
  StateMetadata metadata_;
};

// Canonical constructors. All outputs satisfy the QuantumState invariants;
// truncation losses are renormalized away and recorded in the metadata
// (with a warning when the deficit exceeds 1e-6).
QuantumState make_vacuum(int dim);
QuantumState make_fock(int n, int dim);
QuantumState make_coherent(std::complex<double> alpha, int dim);
QuantumState make_squeezed(std::complex<double> xi, int dim);
// parity +1: |alpha> + |-alpha>, parity -1: |alpha> - |-alpha| (normalized).
QuantumState make_cat(std::complex<double> alpha, int parity, int dim);

// Pure state rho = c c^dagger from truncated Fock coefficients; shared by the
// constructors above. Renormalizes and records the truncation deficit.
QuantumState pure_state_from_coefficients(const Eigen::VectorXcd& coeffs,
                                          double truncation_deficit,
                                          std::string description);

// Uhlmann fidelity in [0, 1]; for pure b this equals <psi_b|rho_a|psi_b>.
double fidelity(const QuantumState& a, const QuantumState& b);

// JSON document {dim, rho_real, rho_imag, metadata}; row-major arrays.
std::string state_to_json(const QuantumState& state);
QuantumState state_from_json(const std::string& text);

}  // namespace thdsim
