#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "oracle.hpp"
#include "thdsim/analysis.hpp"
#include "thdsim/errors.hpp"
#include "thdsim/homodyne.hpp"
#include "thdsim/phase_space.hpp"
#include "thdsim/quantum_state.hpp"
#include "thdsim/temporal_mode.hpp"

using namespace thdsim;

namespace {

const Eigen::VectorXd kGrid = uniform_time_grid(256, 1e-9);
constexpr double kSigma = 12e-9;

std::vector<QuadratureRecord> sample_records(const QuantumState& state, int phases, int total,
                                             uint64_t seed) {
  std::vector<QuadratureRecord> records;
  records.reserve(total);
  SplitStream master = SplitStream::from_seed(seed);
  const int per_phase = total / phases;
  for (int j = 0; j < phases; ++j) {
    const double theta = M_PI * j / phases;
    const auto m = marginal(state, theta);
    SplitStream rng = master.child(j);
    const Eigen::VectorXd qs = sample_quadrature(m, rng, per_phase);
    for (int i = 0; i < qs.size(); ++i) records.push_back({qs[i], theta});
  }
  return records;
}

double record_variance(const std::vector<QuadratureRecord>& records) {
  double mean = 0.0;
  for (const auto& r : records) mean += r.q;
  mean /= records.size();
  double var = 0.0;
  for (const auto& r : records) var += (r.q - mean) * (r.q - mean);
  return var / (records.size() - 1);
}

}  // namespace

TEST_CASE("recover_quadratures") {
  const auto mode = make_gaussian_mode(0.0, kSigma, kGrid);
  const auto f1 = make_fock(1, 12);
  const auto vac = make_vacuum(10);
  const auto e =
      simulate_ensemble(f1, mode, ThetaSchedule::fixed(0.0), vac, 1.0, {}, 50000, 201, 4);

  SUBCASE("matched mode returns the generator draw exactly") {
    const auto records = recover_quadratures(e, mode);
    double worst = 0.0;
    for (int m = 0; m < e.trace_count(); ++m) {
      worst = std::max(worst, std::abs(records[m].q - e.sampled_x0[m]));
    }
    CHECK(worst <= 1e-12);
  }
  SUBCASE("orthogonal analysis mode sees pure vacuum") {
    const auto basis = complete_basis(mode);
    const auto records = recover_quadratures(e, basis.column(7));
    CHECK(record_variance(records) == doctest::Approx(0.5).epsilon(0.02));
  }
  SUBCASE("shifted analysis mode follows the mismatch variance") {
    const double t0 = 9e-9;
    const auto records = recover_quadratures(e, shift_mode(mode, t0));
    const double eta = testing::gaussian_mode_overlap(t0, kSigma);
    const double expected = eta * eta * 1.5 + (1.0 - eta * eta) * 0.5;
    CHECK(record_variance(records) == doctest::Approx(expected).epsilon(0.03));
  }
  SUBCASE("linearity in the ensemble") {
    TraceEnsemble scaled = e;
    scaled.traces *= 2.0;
    const auto base = recover_quadratures(e, mode);
    const auto twice = recover_quadratures(scaled, mode);
    for (size_t i = 0; i < base.size(); i += 997) {
      CHECK(twice[i].q == doctest::Approx(2.0 * base[i].q).epsilon(1e-14));
    }
  }
  SUBCASE("grid mismatch") {
    const auto other = make_gaussian_mode(0.0, 6e-9, uniform_time_grid(128, 1e-9));
    CHECK_THROWS_AS(recover_quadratures(e, other), GridMismatchError);
  }
}

TEST_CASE("histogram_marginal") {
  SUBCASE("single record occupies one bin") {
    const std::vector<QuadratureRecord> one = {{0.31, 0.0}};
    const auto h = histogram_marginal(one, std::nullopt, 10, {-1.0, 1.0});
    CHECK(h.counts.sum() == 1);
    CHECK(h.counts.maxCoeff() == 1);
    CHECK(h.normalized_pdf.sum() * h.bin_width() == doctest::Approx(1.0).epsilon(1e-12));
  }
  SUBCASE("overflow tally excludes out-of-range samples") {
    const std::vector<QuadratureRecord> r = {{0.0, 0.0}, {5.0, 0.0}, {-7.0, 0.0}};
    const auto h = histogram_marginal(r, std::nullopt, 4, {-1.0, 1.0});
    CHECK(h.overflow == 2);
    CHECK(h.counts.sum() == 1);
  }
  SUBCASE("theta filter") {
    const std::vector<QuadratureRecord> r = {{0.0, 0.0}, {0.5, 1.0}, {0.9, 1.0}};
    const auto h = histogram_marginal(r, std::pair{0.9, 1.1}, 4, {-1.0, 1.0});
    CHECK(h.counts.sum() == 2);
    CHECK_THROWS_AS(histogram_marginal(r, std::pair{2.0, 3.0}, 4, {-1.0, 1.0}), ConfigError);
  }
  SUBCASE("fock(1) histogram matches the analytic marginal") {
    const auto f1 = make_fock(1, 12);
    const auto records = sample_records(f1, 1, 50000, 303);
    const auto h = histogram_marginal(records, std::nullopt, 80, {-5.0, 5.0});
    CHECK(bhattacharyya(h, marginal(f1, 0.0)) >= 0.995);
  }
  SUBCASE("vacuum histogram at 1e5 samples") {
    const auto vac = make_vacuum(10);
    const auto records = sample_records(vac, 1, 100000, 304);
    const auto h = histogram_marginal(records, std::nullopt, 80, {-6.0, 6.0});
    CHECK(bhattacharyya(h, marginal(vac, 0.0)) >= 0.998);
  }
}

TEST_CASE("bhattacharyya coefficient") {
  const auto vac = make_vacuum(12);
  const auto f1 = make_fock(1, 12);
  const auto mv = marginal(vac, 0.0);
  const auto mf = marginal(f1, 0.0);

  SUBCASE("identity and symmetry") {
    CHECK(std::abs(bhattacharyya(mv, mv) - 1.0) <= 1e-12);
    const double ab = bhattacharyya(mv, mf);
    const double ba = bhattacharyya(mf, mv);
    CHECK(std::abs(ab - ba) <= 1e-15);
  }
  SUBCASE("vacuum vs fock(1) equals sqrt(2/pi)") {
    CHECK(bhattacharyya(mv, mf) == doctest::Approx(std::sqrt(2.0 / M_PI)).epsilon(1e-3));
    CHECK(bhattacharyya(mv, mf) ==
          doctest::Approx(testing::bhattacharyya_direct(mv.q, mv.pdf, mf.pdf)).epsilon(1e-12));
  }
  SUBCASE("vacuum vs coherent: two displaced unit-variance-1/2 gaussians") {
    // direct oracle integral of sqrt(P1 P2) for the stated gaussians
    const double alpha = 1.0;
    const Eigen::VectorXd q = mv.q;
    Eigen::VectorXd pv(q.size()), pc(q.size());
    for (int i = 0; i < q.size(); ++i) {
      pv[i] = std::exp(-q[i] * q[i]) / std::sqrt(M_PI);
      const double d = q[i] - std::sqrt(2.0) * alpha;
      pc[i] = std::exp(-d * d) / std::sqrt(M_PI);
    }
    const double oracle = testing::bhattacharyya_direct(q, pv, pc);
    const auto mc = marginal(make_coherent({alpha, 0.0}, 25), 0.0);
    CHECK(bhattacharyya(mv, mc) == doctest::Approx(oracle).epsilon(1e-3));
    CHECK(oracle == doctest::Approx(std::exp(-alpha * alpha / 2.0)).epsilon(1e-6));
  }
  SUBCASE("disjoint supports give zero") {
    MarginalDistribution a, b;
    a.q = Eigen::VectorXd::LinSpaced(51, -1.0, 0.0);
    a.pdf = Eigen::VectorXd::Constant(51, 1.0);
    b.q = Eigen::VectorXd::LinSpaced(51, 2.0, 3.0);
    b.pdf = Eigen::VectorXd::Constant(51, 1.0);
    CHECK(bhattacharyya(a, b) == 0.0);
  }
  SUBCASE("mixed grids resample onto the finer one") {
    const auto coarse = marginal(vac, 0.0, QuadratureGrid{8.0, 401});
    const double b1 = bhattacharyya(coarse, mv);
    const double b2 = bhattacharyya(mv, coarse);
    CHECK(b1 == doctest::Approx(1.0).epsilon(1e-5));
    CHECK(std::abs(b1 - b2) <= 1e-15);
  }
  SUBCASE("histogram binning mismatch") {
    const std::vector<QuadratureRecord> r = {{0.0, 0.0}, {0.5, 0.0}};
    const auto h1 = histogram_marginal(r, std::nullopt, 10, {-1.0, 1.0});
    const auto h2 = histogram_marginal(r, std::nullopt, 20, {-1.0, 1.0});
    CHECK_THROWS_AS(bhattacharyya(h1, h2), GridMismatchError);
    CHECK(bhattacharyya(h1, h1) == doctest::Approx(1.0).epsilon(1e-12));
  }
}

TEST_CASE("pointwise_variance") {
  const auto grid = uniform_time_grid(64, 1e-9);
  const auto mode = make_gaussian_mode(0.0, 6e-9, grid);
  const auto vac = make_vacuum(10);
  const auto e1 =
      simulate_ensemble(vac, mode, ThetaSchedule::fixed(0.0), vac, 1.0, {}, 5000, 205, 2);
  const auto e2 =
      simulate_ensemble(vac, mode, ThetaSchedule::fixed(0.0), vac, 2.0, {}, 5000, 205, 2);
  const Eigen::VectorXd v1 = pointwise_variance(e1);
  const Eigen::VectorXd v2 = pointwise_variance(e2);
  CHECK((v2 - 4.0 * v1).cwiseAbs().maxCoeff() <= 1e-12);

  TraceEnsemble tiny = e1;
  tiny.traces = e1.traces.topRows(1);
  CHECK_THROWS_AS(pointwise_variance(tiny), ConfigError);
}

TEST_CASE("estimate_principal_mode") {
  const auto grid = uniform_time_grid(64, 1e-9);
  const auto mode = make_gaussian_mode(0.0, 6e-9, grid);
  const auto vac = make_vacuum(10);
  const auto e = simulate_ensemble(make_fock(1, 12), mode, ThetaSchedule::fixed(0.0), vac, 1.0,
                                   {}, 50000, 206, 4);

  SUBCASE("recovers the gaussian mode with tight overlap and spectrum gap") {
    const auto pm = estimate_principal_mode(e);
    CHECK(std::abs(overlap(pm.mode, mode)) >= 0.99);
    CHECK(pm.eigenvalues[0] > 0.0);
    CHECK(pm.eigenvalues[1] / pm.eigenvalues[0] <= 0.05);
  }
  SUBCASE("estimate improves with trace count") {
    double prev_err = 1.0;
    for (int m : {1000, 10000, 50000}) {
      TraceEnsemble sub = e;
      sub.traces = e.traces.topRows(m);
      sub.theta = e.theta.head(m);
      sub.sampled_x0 = e.sampled_x0.head(m);
      const auto pm = estimate_principal_mode(sub);
      const double err = 1.0 - std::abs(overlap(pm.mode, mode));
      CHECK(err <= prev_err + 0.005);
      prev_err = err;
    }
  }
  SUBCASE("vacuum ensemble has no signal") {
    const auto ev =
        simulate_ensemble(vac, mode, ThetaSchedule::fixed(0.0), vac, 1.0, {}, 20000, 207, 4);
    CHECK_THROWS_AS(estimate_principal_mode(ev), NoSignalError);
  }
  SUBCASE("small ensembles warn") {
    TraceEnsemble sub = e;
    sub.traces = e.traces.topRows(500);
    const auto pm = estimate_principal_mode(sub);
    CHECK(!pm.warnings.empty());
  }
}

TEST_CASE("mle_reconstruct") {
  MleOptions opt;
  opt.dim = 15;
  opt.max_iter = 800;
  opt.tol = 1e-7;

  SUBCASE("coherent(1) from 12 phases") {
    const auto c1 = make_coherent({1.0, 0.0}, 15);
    const auto records = sample_records(c1, 12, 100000, 500);
    const auto r = mle_reconstruct(records, opt);
    CHECK(fidelity(r.state, c1) >= 0.99);
    for (size_t i = 1; i < r.log_likelihood.size(); ++i) {
      CHECK(r.log_likelihood[i] >= r.log_likelihood[i - 1]);
    }
    CHECK(r.min_eigenvalue >= -1e-10);
  }
  SUBCASE("phase convention: an imaginary-axis coherent state comes back on axis") {
    const auto ci = make_coherent({0.0, 1.0}, 15);
    const auto records = sample_records(ci, 12, 60000, 501);
    const auto r = mle_reconstruct(records, opt);
    CHECK(fidelity(r.state, ci) >= 0.98);
  }
  SUBCASE("vacuum data reconstructs vacuum") {
    const auto vac = make_vacuum(15);
    const auto records = sample_records(vac, 12, 50000, 502);
    const auto r = mle_reconstruct(records, opt);
    CHECK(fidelity(r.state, vac) >= 0.995);
  }
  SUBCASE("few phases warn") {
    const auto records = sample_records(make_vacuum(15), 2, 2000, 503);
    const auto r = mle_reconstruct(records, opt);
    CHECK(!r.state.metadata().warnings.empty());
  }
  SUBCASE("far-tail records degenerate") {
    std::vector<QuadratureRecord> bad;
    for (int j = 0; j < 12; ++j) bad.push_back({30.0, M_PI * j / 12});
    MleOptions small = opt;
    small.dim = 4;
    CHECK_THROWS_AS(mle_reconstruct(bad, small), DegenerateLikelihoodError);
  }
  SUBCASE("argument validation") {
    const std::vector<QuadratureRecord> none;
    CHECK_THROWS_AS(mle_reconstruct(none, opt), ConfigError);
  }
}

TEST_CASE("phase_averaged_marginal") {
  const auto f1 = make_fock(1, 12);
  SUBCASE("sigma zero is the plain marginal") {
    const auto a = phase_averaged_marginal(f1, 0.4, 0.0);
    const auto b = marginal(f1, 0.4);
    CHECK((a.pdf - b.pdf).cwiseAbs().maxCoeff() == 0.0);
  }
  SUBCASE("phase-invariant states are unchanged") {
    const auto a = phase_averaged_marginal(f1, 0.4, 0.5);
    const auto b = marginal(f1, 0.4);
    CHECK((a.pdf - b.pdf).cwiseAbs().maxCoeff() < 1e-9);
  }
  SUBCASE("cat fringes wash out monotonically") {
    const auto cat = make_cat({2.0, 0.0}, +1, 40);
    const auto ideal = marginal(cat, M_PI / 2);
    double prev = 1.0;
    for (double sigma : {0.1, 0.3, 0.5}) {
      const double b = bhattacharyya(phase_averaged_marginal(cat, M_PI / 2, sigma), ideal);
      CHECK(b < prev);
      prev = b;
    }
  }
}
