#include "thdsim/quantum_state.hpp"

#include <cmath>
#include <sstream>

#include <nlohmann/json.hpp>

#include "thdsim/errors.hpp"

namespace thdsim {

namespace {

constexpr double kDeficitWarnThreshold = 1e-6;

std::string format_complex(std::complex<double> z) {
  std::ostringstream os;
  os << z.real();
  if (z.imag() != 0.0) os << (z.imag() < 0 ? "" : "+") << z.imag() << "i";
  return os.str();
}

}  // namespace

QuantumState::QuantumState(Eigen::MatrixXcd rho, StateMetadata metadata)
    : rho_(std::move(rho)), metadata_(std::move(metadata)) {
  if (rho_.rows() < 1 || rho_.rows() != rho_.cols()) {
    throw ConfigError("QuantumState: density matrix must be square with dim >= 1");
  }
  const double herm = (rho_ - rho_.adjoint()).cwiseAbs().maxCoeff();
  if (herm > kHermitianTol) {
    throw NumericalError("QuantumState: not Hermitian (residual " + std::to_string(herm) + ")");
  }
  const double trace_err = std::abs(rho_.trace().real() - 1.0) + std::abs(rho_.trace().imag());
  if (trace_err > kTraceTol) {
    throw NumericalError("QuantumState: trace deviates from 1 by " + std::to_string(trace_err));
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(rho_, Eigen::EigenvaluesOnly);
  if (es.eigenvalues().minCoeff() < kMinEigenvalueTol) {
    throw NumericalError("QuantumState: not positive semidefinite (min eigenvalue " +
                         std::to_string(es.eigenvalues().minCoeff()) + ")");
  }
}

double QuantumState::purity() const { return (rho_ * rho_).trace().real(); }

double QuantumState::mean_photon_number() const {
  double n = 0.0;
  for (int k = 0; k < dim(); ++k) n += k * rho_(k, k).real();
  return n;
}

QuantumState pure_state_from_coefficients(const Eigen::VectorXcd& coeffs,
                                          double truncation_deficit, std::string description) {
  const double norm2 = coeffs.squaredNorm();
  if (norm2 <= 0.0) {
    throw DegenerateDistributionError("pure state has zero norm: " + description);
  }
  Eigen::VectorXcd c = coeffs / std::sqrt(norm2);
  StateMetadata meta;
  meta.truncation_deficit = truncation_deficit;
  meta.description = std::move(description);
  if (truncation_deficit > kDeficitWarnThreshold) {
    meta.warnings.push_back("truncation deficit " + std::to_string(truncation_deficit) +
                            " exceeds 1e-6; consider a larger dim");
  }
  return QuantumState((c * c.adjoint()).eval(), std::move(meta));
}

QuantumState make_vacuum(int dim) {
  if (dim < 1) throw ConfigError("make_vacuum: dim must be >= 1");
  Eigen::MatrixXcd rho = Eigen::MatrixXcd::Zero(dim, dim);
  rho(0, 0) = 1.0;
  StateMetadata meta;
  meta.description = "vacuum(dim=" + std::to_string(dim) + ")";
  return QuantumState(std::move(rho), std::move(meta));
}

QuantumState make_fock(int n, int dim) {
  if (dim < 1) throw ConfigError("make_fock: dim must be >= 1");
  if (n < 0) throw ConfigError("make_fock: n must be >= 0");
  if (n >= dim) {
    throw ConfigError("make_fock: n=" + std::to_string(n) + " does not fit in dim=" +
                      std::to_string(dim));
  }
  Eigen::MatrixXcd rho = Eigen::MatrixXcd::Zero(dim, dim);
  rho(n, n) = 1.0;
  StateMetadata meta;
  meta.description = "fock(n=" + std::to_string(n) + ",dim=" + std::to_string(dim) + ")";
  return QuantumState(std::move(rho), std::move(meta));
}

namespace {

// c_n = exp(-|a|^2/2) a^n / sqrt(n!), built by the ratio recurrence.
Eigen::VectorXcd coherent_coefficients(std::complex<double> alpha, int dim) {
  Eigen::VectorXcd c(dim);
  c[0] = std::exp(-0.5 * std::norm(alpha));
  for (int n = 1; n < dim; ++n) c[n] = c[n - 1] * alpha / std::sqrt(static_cast<double>(n));
  return c;
}

}  // namespace

QuantumState make_coherent(std::complex<double> alpha, int dim) {
  if (dim < 1) throw ConfigError("make_coherent: dim must be >= 1");
  Eigen::VectorXcd c = coherent_coefficients(alpha, dim);
  const double deficit = std::max(0.0, 1.0 - c.squaredNorm());
  auto state = pure_state_from_coefficients(
      c, deficit, "coherent(alpha=" + format_complex(alpha) + ",dim=" + std::to_string(dim) + ")");
  if (std::norm(alpha) > dim / 4.0) {
    StateMetadata meta = state.metadata();
    meta.warnings.push_back("|alpha|^2 exceeds dim/4; truncation may be significant");
    return QuantumState(state.rho(), std::move(meta));
  }
  return state;
}

QuantumState make_squeezed(std::complex<double> xi, int dim) {
  if (std::abs(xi) > 1.0) throw ConfigError("make_squeezed: require |xi| <= 1.0");
  if (xi != std::complex<double>(0.0, 0.0) && dim < 20) {
    throw ConfigError("make_squeezed: require dim >= 20 for adequate even-photon support");
  }
  if (dim < 1) throw ConfigError("make_squeezed: dim must be >= 1");
  const double r = std::abs(xi);
  Eigen::VectorXcd c = Eigen::VectorXcd::Zero(dim);
  if (r == 0.0) {
    c[0] = 1.0;
  } else {
    const std::complex<double> phase = xi / r;
    const std::complex<double> factor = -phase * std::tanh(r);
    // c_{2m} = cosh(r)^{-1/2} (-e^{i phi} tanh r)^m sqrt((2m)!)/(2^m m!);
    // ratio recurrence avoids the factorials.
    std::complex<double> cm = 1.0 / std::sqrt(std::cosh(r));
    c[0] = cm;
    for (int m = 1; 2 * m < dim; ++m) {
      cm *= factor * std::sqrt((2.0 * m - 1.0) * (2.0 * m)) / (2.0 * m);
      c[2 * m] = cm;
    }
  }
  const double deficit = std::max(0.0, 1.0 - c.squaredNorm());
  return pure_state_from_coefficients(
      c, deficit, "squeezed(xi=" + format_complex(xi) + ",dim=" + std::to_string(dim) + ")");
}

QuantumState make_cat(std::complex<double> alpha, int parity, int dim) {
  if (dim < 1) throw ConfigError("make_cat: dim must be >= 1");
  if (parity != 1 && parity != -1) throw ConfigError("make_cat: parity must be +1 or -1");
  if (alpha == std::complex<double>(0.0, 0.0) && parity == -1) {
    throw DegenerateDistributionError("make_cat: alpha=0 with odd parity has zero norm");
  }
  Eigen::VectorXcd cp = coherent_coefficients(alpha, dim);
  Eigen::VectorXcd cm = coherent_coefficients(-alpha, dim);
  Eigen::VectorXcd c = cp + static_cast<double>(parity) * cm;
  // Untruncated norm^2 of |a> +/- |-a> is 2(1 +/- e^{-2|a|^2}).
  const double full_norm2 = 2.0 * (1.0 + parity * std::exp(-2.0 * std::norm(alpha)));
  const double deficit = std::max(0.0, 1.0 - c.squaredNorm() / full_norm2);
  auto state = pure_state_from_coefficients(
      c, deficit,
      "cat(alpha=" + format_complex(alpha) + ",parity=" + (parity > 0 ? std::string("+1") : std::string("-1")) +
          ",dim=" + std::to_string(dim) + ")");
  if (std::norm(alpha) > dim / 4.0) {
    StateMetadata meta = state.metadata();
    meta.warnings.push_back("|alpha|^2 exceeds dim/4; truncation may be significant");
    return QuantumState(state.rho(), std::move(meta));
  }
  return state;
}

double fidelity(const QuantumState& a, const QuantumState& b) {
  if (a.dim() != b.dim()) {
    throw ConfigError("fidelity: dimension mismatch (" + std::to_string(a.dim()) + " vs " +
                      std::to_string(b.dim()) + ")");
  }
  // Uhlmann: (Tr sqrt(sqrt(a) b sqrt(a)))^2 via two self-adjoint eigensolves.
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> ea(a.rho());
  Eigen::VectorXd lam = ea.eigenvalues().cwiseMax(0.0);
  Eigen::MatrixXcd sqrt_a =
      ea.eigenvectors() * lam.cwiseSqrt().asDiagonal() * ea.eigenvectors().adjoint();
  Eigen::MatrixXcd m = sqrt_a * b.rho() * sqrt_a;
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> em((m + m.adjoint()) / 2.0);
  double s = em.eigenvalues().cwiseMax(0.0).cwiseSqrt().sum();
  return std::min(1.0, s * s);
}

std::string state_to_json(const QuantumState& state) {
  nlohmann::json j;
  const int d = state.dim();
  j["dim"] = d;
  std::vector<double> re, im;
  re.reserve(d * d);
  im.reserve(d * d);
  for (int r = 0; r < d; ++r) {
    for (int c = 0; c < d; ++c) {
      re.push_back(state.rho()(r, c).real());
      im.push_back(state.rho()(r, c).imag());
    }
  }
  j["rho_real"] = re;
  j["rho_imag"] = im;
  j["metadata"] = {{"truncation_deficit", state.metadata().truncation_deficit},
                   {"warnings", state.metadata().warnings},
                   {"description", state.metadata().description}};
  return j.dump(2);
}

QuantumState state_from_json(const std::string& text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(std::string("state_from_json: ") + e.what());
  }
  if (!j.contains("dim") || !j.contains("rho_real") || !j.contains("rho_imag")) {
    throw ConfigError("state_from_json: missing dim/rho_real/rho_imag");
  }
  const int d = j["dim"].get<int>();
  const auto re = j["rho_real"].get<std::vector<double>>();
  const auto im = j["rho_imag"].get<std::vector<double>>();
  if (d < 1 || re.size() != static_cast<size_t>(d) * d || im.size() != re.size()) {
    throw ConfigError("state_from_json: rho arrays do not match dim*dim");
  }
  Eigen::MatrixXcd rho(d, d);
  for (int r = 0; r < d; ++r) {
    for (int c = 0; c < d; ++c) {
      rho(r, c) = {re[r * d + c], im[r * d + c]};
    }
  }
  StateMetadata meta;
  if (j.contains("metadata")) {
    const auto& m = j["metadata"];
    meta.truncation_deficit = m.value("truncation_deficit", 0.0);
    if (m.contains("warnings")) meta.warnings = m["warnings"].get<std::vector<std::string>>();
    meta.description = m.value("description", std::string{});
  }
  return QuantumState(std::move(rho), std::move(meta));
}

}  // namespace thdsim
