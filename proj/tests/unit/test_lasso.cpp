#include "oradmm/diagnostics.hpp"
#include "oradmm/engine.hpp"
#include "oradmm/lasso.hpp"

#include "oracles.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <thread>
#include <vector>

using namespace oradmm;

TEST(SoftThreshold, DefinitionCases) {
  EXPECT_EQ(soft_threshold(2.0, 1.0), 1.0);
  EXPECT_EQ(soft_threshold(0.5, 1.0), 0.0);
  EXPECT_EQ(soft_threshold(-3.0, 1.0), -2.0);
  EXPECT_EQ(soft_threshold(-0.7, 0.0), -0.7);
  Vector a(3);
  a << 2.0, 0.5, -3.0;
  Vector expect(3);
  expect << 1.0, 0.0, -2.0;
  EXPECT_EQ(soft_threshold(a, 1.0), expect);
  EXPECT_THROW(soft_threshold(a, -1.0), std::invalid_argument);
}

TEST(SoftThreshold, MatchesGridSearchProx) {
  for (int i = 0; i < 40; ++i) {
    const double a = -9.0 + 0.4537 * i;
    for (double kappa : {0.0, 0.05, 0.8, 3.3}) {
      EXPECT_NEAR(soft_threshold(a, kappa), oracle::grid_prox_l1(a, kappa), 1e-3)
          << "a=" << a << " kappa=" << kappa;
    }
  }
}

TEST(RhoMax, Examples) {
  Vector b(2);
  b << 1.0, 2.0;
  EXPECT_EQ(rho_max(Matrix::Identity(2, 2), b), 2.0);
  EXPECT_EQ(rho_max(oracle::gaussian(4, 3, 1), Vector::Zero(4)), 0.0);
}

TEST(LassoInstance, RejectsBadParameters) {
  EXPECT_THROW(LassoInstance(Matrix::Identity(2, 2), Vector::Ones(2), 0.0), std::invalid_argument);
  EXPECT_THROW(LassoInstance(Matrix::Identity(2, 2), Vector::Ones(3), 1.0), DimensionError);
  const LassoInstance L(Matrix::Identity(2, 2), Vector::Ones(2), 1.0);
  EXPECT_THROW(L.x_update(Vector::Zero(2), Vector::Zero(2), 0.0), std::invalid_argument);
}

TEST(LassoXUpdate, WoodburyMatchesDirect) {
  for (std::uint64_t t = 0; t < 20; ++t) {
    const Matrix A = oracle::gaussian(20, 50, t);
    const Vector b = oracle::gaussian(20, 1, 100 + t).col(0);
    const LassoInstance L(A, b, 0.3);
    const Vector y = oracle::gaussian(50, 1, 200 + t).col(0);
    const Vector z = oracle::gaussian(50, 1, 300 + t).col(0);
    const double beta = 0.5 + 0.1 * static_cast<double>(t);
    const Vector direct = L.x_update_direct(y, z, beta);
    const Vector wood = L.x_update_woodbury(y, z, beta);
    EXPECT_LT((wood - direct).norm(), 1e-10 * direct.norm());
    EXPECT_LT(oracle::rel_diff(direct, oracle::lasso_x_dense(A, b, y, z, beta)), 1e-10);
  }
}

TEST(LassoXUpdate, SatisfiesNormalEquations) {
  for (auto [m, n] : {std::pair{30, 80}, std::pair{80, 30}}) {
    const Matrix A = oracle::gaussian(m, n, 5);
    const Vector b = oracle::gaussian(m, 1, 6).col(0);
    const LassoInstance L(A, b, 0.1);
    const Vector y = oracle::gaussian(n, 1, 7).col(0);
    const Vector z = oracle::gaussian(n, 1, 8).col(0);
    const double beta = 1.7;
    const Vector x = L.x_update(y, z, beta);
    const Vector rhs = A.transpose() * b + beta * y + z;
    const Vector res = A.transpose() * (A * x) + beta * x - rhs;
    EXPECT_LT(res.norm(), 1e-10 * rhs.norm());
  }
}

TEST(LassoXUpdate, ZeroDesign) {
  const LassoInstance L(Matrix::Zero(3, 5), Vector::Zero(3), 0.2);
  const Vector y = oracle::gaussian(5, 1, 1).col(0);
  const Vector z = oracle::gaussian(5, 1, 2).col(0);
  EXPECT_LT((L.x_update(y, z, 2.0) - (y + z / 2.0)).norm(), 1e-14);
}

TEST(LassoXUpdate, CacheFollowsBeta) {
  const Matrix A = oracle::gaussian(10, 25, 3);
  const Vector b = oracle::gaussian(10, 1, 4).col(0);
  const LassoInstance L(A, b, 0.1);
  const Vector y = Vector::Ones(25), z = Vector::Zero(25);
  for (double beta : {1.0, 3.0, 1.0, 0.25}) {
    EXPECT_LT(oracle::rel_diff(L.x_update(y, z, beta), oracle::lasso_x_dense(A, b, y, z, beta)),
              1e-10);
  }
}

TEST(LassoXUpdate, ConcurrentCallsAgree) {
  const Matrix A = oracle::gaussian(40, 90, 9);
  const Vector b = oracle::gaussian(40, 1, 10).col(0);
  const LassoInstance L(A, b, 0.1);
  const Vector y = oracle::gaussian(90, 1, 11).col(0), z = oracle::gaussian(90, 1, 12).col(0);
  std::vector<Vector> out(8);
  {
    std::vector<std::jthread> pool;
    for (std::size_t i = 0; i < out.size(); ++i) {
      pool.emplace_back([&, i] { out[i] = L.x_update(y, z, 1.0 + static_cast<double>(i % 2)); });
    }
  }
  for (std::size_t i = 0; i < out.size(); ++i) {
    const double beta = 1.0 + static_cast<double>(i % 2);
    EXPECT_LT(oracle::rel_diff(out[i], oracle::lasso_x_dense(A, b, y, z, beta)), 1e-10);
  }
}

TEST(LassoYUpdate, ScalarArithmeticAndZeroing) {
  const LassoInstance L(Matrix::Identity(1, 1), Vector::Ones(1), 0.1);
  EXPECT_NEAR(L.y_update(Vector::Constant(1, 0.5), Vector::Constant(1, 0.2), 1.0)[0], 0.2, 1e-15);
  const LassoInstance big(Matrix::Identity(3, 3), Vector::Ones(3), 10.0);
  EXPECT_EQ(big.y_update(Vector::Constant(3, 0.4), Vector::Zero(3), 2.0), Vector::Zero(3));
}

TEST(LassoYUpdate, SubdifferentialMembership) {
  const GeneratedLasso g = generate_lasso(30, 60, 8);
  const LassoInstance& L = g.instance;
  const Vector x = oracle::gaussian(60, 1, 1).col(0) * 0.1;
  const Vector z = oracle::gaussian(60, 1, 2).col(0) * 0.1;
  const double beta = 1.3;
  const Vector y = L.y_update(x, z, beta);
  // 0 in rho d|y| + z - beta (x - y)
  for (Index i = 0; i < y.size(); ++i) {
    const double g_i = beta * (x[i] - y[i]) - z[i];
    if (y[i] != 0.0) EXPECT_NEAR(g_i, L.rho() * (y[i] > 0 ? 1.0 : -1.0), 1e-12);
    else EXPECT_LE(std::abs(g_i), L.rho() + 1e-12);
  }
}

TEST(LassoGenerate, ColumnsHaveUnitNorm) {
  const GeneratedLasso g = generate_lasso(50, 120, 3);
  for (Index j = 0; j < g.instance.cols(); ++j) {
    EXPECT_NEAR(g.instance.A().col(j).norm(), 1.0, 1e-12);
  }
}

TEST(LassoGenerate, SparsityAndRho) {
  const GeneratedLasso g = generate_lasso(40, 300, 7);
  EXPECT_EQ((g.x_true.array() != 0.0).count(), 30);
  EXPECT_EQ(lasso_nonzero_count(1500), 100);
  EXPECT_EQ(lasso_nonzero_count(5), 1);
  EXPECT_DOUBLE_EQ(g.instance.rho(), 0.1 * rho_max(g.instance.A(), g.instance.b()));
  EXPECT_LT((g.instance.b() - g.instance.A() * g.x_true - g.noise).norm(), 1e-12);
}

TEST(LassoGenerate, DeterministicInSeed) {
  const GeneratedLasso a = generate_lasso(20, 40, 99);
  const GeneratedLasso b = generate_lasso(20, 40, 99);
  const GeneratedLasso c = generate_lasso(20, 40, 100);
  EXPECT_EQ(a.instance.A(), b.instance.A());
  EXPECT_EQ(a.instance.b(), b.instance.b());
  EXPECT_EQ(a.x_true, b.x_true);
  EXPECT_NE(a.instance.A(), c.instance.A());
}

TEST(LassoGenerate, SignalToNoiseNearTwoHundred) {
  for (std::uint64_t seed = 0; seed < 3; ++seed) {
    const GeneratedLasso g = generate_lasso(1000, 1500, seed);
    const double snr = (g.instance.A() * g.x_true).squaredNorm() / g.noise.squaredNorm();
    EXPECT_GT(snr, 200.0 / 3.0) << "seed " << seed;
    EXPECT_LT(snr, 200.0 * 3.0) << "seed " << seed;
  }
}

TEST(LassoSolve, RhoAboveCriticalGivesZero) {
  const GeneratedLasso g = generate_lasso(40, 100, 12);
  const LassoInstance L(g.instance.A(), g.instance.b(),
                        1.01 * rho_max(g.instance.A(), g.instance.b()));
  SolverConfig c;
  c.eps_abs = 1e-7;
  c.eps_rel = 1e-5;
  c.max_iter = 10000;
  const SolveResult r = run(L, c);
  ASSERT_TRUE(r.converged);
  EXPECT_LE(r.final.x.lpNorm<Eigen::Infinity>(), 1e-6);
}

TEST(LassoSolve, ObjectiveAgreesWithLongReference) {
  const GeneratedLasso g = generate_lasso(60, 150, 21);
  SolverConfig c;
  const SolveResult r = run(g.instance, c);
  ASSERT_TRUE(r.converged);
  SolverConfig ref = c;
  ref.variant = Variant::classical;
  ref.eps_abs = 1e-300;
  ref.eps_rel = 1e-300;
  ref.max_iter = 10000;
  const SolveResult rr = run(g.instance, ref);
  const double f = g.instance.lasso_objective(r.final.y);
  const double f_ref = g.instance.lasso_objective(rr.final.y);
  EXPECT_LT(std::abs(f - f_ref), 1e-4 * std::abs(f_ref));
}

TEST(LassoSolve, AugmentedLagrangianMatchesRawRecomputation) {
  const GeneratedLasso g = generate_lasso(50, 100, 6);
  const LassoInstance& L = g.instance;
  const SolveResult r = run(L, SolverConfig{});
  const Iterate& w = r.final;
  const double beta = 1.0;
  const Vector res = w.x - w.y;
  const double raw = 0.5 * (L.A() * w.x - L.b()).squaredNorm() + L.rho() * w.y.lpNorm<1>() -
                     w.lambda.dot(res) + 0.5 * beta * res.squaredNorm();
  EXPECT_NEAR(augmented_lagrangian(L, w, beta), raw, 1e-6 * std::abs(raw));
}

TEST(LassoSolve, KktPointIsFixed) {
  const GeneratedLasso g = generate_lasso(40, 90, 14);
  SolverConfig c;
  c.variant = Variant::classical;
  c.eps_abs = 1e-300;
  c.eps_rel = 1e-300;
  c.max_iter = 20000;
  const SolveResult r = run(g.instance, c);
  ASSERT_LT(kkt_residual(g.instance, r.final), 1e-12);
  const EssentialState v{r.final.y, r.final.lambda};
  SolverConfig over;
  const StepOutcome out = step(g.instance, v, over);
  EXPECT_LT((out.next.y - v.y).norm(), 1e-12 * std::max(1.0, v.y.norm()));
  EXPECT_LT((out.next.lambda - v.lambda).norm(), 1e-12 * std::max(1.0, v.lambda.norm()));
}
