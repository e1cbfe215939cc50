#pragma once

#include <Eigen/Dense>

namespace thdsim {

// Harmonic-oscillator eigenfunctions psi_n(q) in the vacuum-variance-1/2
// convention: psi_0 = pi^{-1/4} exp(-q^2/2), <q^2>_0 = 1/2.
//
// Evaluated by upward recurrence on the normalized functions
//   psi_{n+1} = sqrt(2/(n+1)) q psi_n - sqrt(n/(n+1)) psi_{n-1},
// which stays bounded for n up to several hundred (no factorials, no raw
// Hermite polynomials).

// psi_0..psi_n_max at a single point.
Eigen::VectorXd hermite_psi(int n_max, double q);

// Table (n_max+1) x q.size(); row n holds psi_n on the grid.
Eigen::MatrixXd hermite_psi_table(int n_max, const Eigen::VectorXd& q);

}  // namespace thdsim
