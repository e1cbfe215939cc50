#include "thdsim/hermite.hpp"

#include <cmath>

#include "thdsim/errors.hpp"

namespace thdsim {

namespace {
const double kPiQuarterInv = std::pow(M_PI, -0.25);
}

Eigen::VectorXd hermite_psi(int n_max, double q) {
  if (n_max < 0) throw ConfigError("hermite_psi: n_max must be >= 0");
  Eigen::VectorXd psi(n_max + 1);
  psi[0] = kPiQuarterInv * std::exp(-0.5 * q * q);
  if (n_max >= 1) psi[1] = std::sqrt(2.0) * q * psi[0];
  for (int n = 1; n < n_max; ++n) {
    psi[n + 1] = std::sqrt(2.0 / (n + 1.0)) * q * psi[n] - std::sqrt(n / (n + 1.0)) * psi[n - 1];
  }
  return psi;
}

Eigen::MatrixXd hermite_psi_table(int n_max, const Eigen::VectorXd& q) {
  if (n_max < 0) throw ConfigError("hermite_psi_table: n_max must be >= 0");
  const int nq = static_cast<int>(q.size());
  Eigen::MatrixXd psi(n_max + 1, nq);
  for (int i = 0; i < nq; ++i) {
    psi(0, i) = kPiQuarterInv * std::exp(-0.5 * q[i] * q[i]);
  }
  if (n_max >= 1) psi.row(1) = std::sqrt(2.0) * q.transpose().cwiseProduct(psi.row(0));
  for (int n = 1; n < n_max; ++n) {
    psi.row(n + 1) = std::sqrt(2.0 / (n + 1.0)) * q.transpose().cwiseProduct(psi.row(n)) -
                     std::sqrt(n / (n + 1.0)) * psi.row(n - 1);
  }
  return psi;
}

}  // namespace thdsim
