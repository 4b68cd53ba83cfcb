#include <gtest/gtest.h>

#include <random>

#include "toep/corpus.hpp"
#include "toep/krylov.hpp"

using namespace toep;

namespace {

ToeplitzMatrix random_toeplitz(std::mt19937& rng, std::size_t n, double shift) {
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  Vec d(2 * n - 1);
  for (std::size_t i = 0; i < d.size(); ++i) d[i] = u(rng) / (1.0 + std::abs(static_cast<double>(i) - (n - 1.0)));
  d[n - 1] += shift;
  return ToeplitzMatrix(d);
}

SolveConfig cfg_for(Method m, ResidualMode mode, double tol = 1e-8) {
  SolveConfig c;
  c.method = m;
  c.residual = mode;
  c.tol = tol;
  return c;
}

}  // namespace

TEST(Krylov, IdentityConvergesInOneStep) {
  const std::size_t n = 16;
  const ToeplitzMatrix I([&] {
    Vec d(2 * n - 1, 0.0);
    d[n - 1] = 1.0;
    return d;
  }());
  const IdentityPreconditioner M(n);
  for (Method m : {Method::gmres, Method::cgn}) {
    const SolveReport r = experiment(I, M, cfg_for(m, ResidualMode::true_residual));
    EXPECT_TRUE(r.converged);
    EXPECT_EQ(r.iterations, 1u);
    EXPECT_LE(*r.error_inf, 1e-14);
  }
}

TEST(Krylov, ExactPreconditionerConvergesInOneStep) {
  // T is itself circulant, so M = T
  const std::size_t n = 32;
  Vec col(n, 0.0);
  col[0] = 3.0;
  col[1] = -1.0;
  col[n - 1] = 0.5;
  const auto C = std::make_shared<CirculantPreconditioner>(col);
  Vec d(2 * n - 1, 0.0);
  for (std::size_t k = 0; k < n; ++k) {
    d[n - 1 + k] = col[k];
    if (k > 0) d[n - 1 - k] = col[n - k];
  }
  const ToeplitzMatrix T(d);
  const SolveReport r = experiment(T, *C, cfg_for(Method::gmres, ResidualMode::true_residual));
  EXPECT_TRUE(r.converged);
  EXPECT_EQ(r.iterations, 1u);
}

TEST(Krylov, SolutionMatchesDenseSolve) {
  std::mt19937 rng(21);
  for (int c = 0; c < 10; ++c) {
    const ToeplitzMatrix T = random_toeplitz(rng, 60, 4.0);
    const IdentityPreconditioner M(60);
    for (Method m : {Method::gmres, Method::cgn}) {
      const SolveReport r = experiment(T, M, cfg_for(m, ResidualMode::true_residual, 1e-12));
      ASSERT_TRUE(r.converged);
      EXPECT_LE(*r.error_inf, 1e-9);
    }
  }
}

TEST(Krylov, GmresPreconditionedResidualIsMonotone) {
  const auto e = corpus_entry("f2");
  const ToeplitzMatrix T = ToeplitzMatrix::from_symbol(e.symbol, 256);
  const auto M = circulant_strang(T);
  SolveConfig c = cfg_for(Method::gmres, ResidualMode::preconditioned, 1e-10);
  const SolveReport r = experiment(T, *M, c);
  ASSERT_EQ(r.preconditioned_history.size(), r.iterations + 1);
  ASSERT_EQ(r.residual_history.size(), r.iterations + 1);
  for (std::size_t k = 1; k < r.preconditioned_history.size(); ++k)
    EXPECT_LE(r.preconditioned_history[k], r.preconditioned_history[k - 1] * (1 + 1e-10)) << k;
}

TEST(Krylov, CgnNormalResidualStopsAndReportsTrueResidual) {
  const auto e = corpus_entry("f3");
  const ToeplitzMatrix T = ToeplitzMatrix::from_symbol(e.symbol, 128);
  const auto M = circulant_strang(T);
  const SolveReport r = experiment(T, *M, cfg_for(Method::cgn, ResidualMode::preconditioned, 1e-6));
  ASSERT_TRUE(r.converged);
  EXPECT_LE(r.preconditioned_history.back(), 1e-6);
  // the true residual is recomputed from the iterate, not from the recursion
  const Vec b = T.multiply(Vec(128, 1.0));
  const Vec Ax = T.multiply(r.solution);
  double num = 0, den = 0;
  for (std::size_t i = 0; i < 128; ++i) {
    num += (b[i] - Ax[i]) * (b[i] - Ax[i]);
    den += b[i] * b[i];
  }
  EXPECT_NEAR(r.residual_history.back(), std::sqrt(num / den), 1e-12);
}

TEST(Krylov, RunsAreDeterministic) {
  const auto e = corpus_entry("f7");
  const ToeplitzMatrix T = ToeplitzMatrix::from_symbol(e.symbol, 200);
  const auto M = circulant_optimal(T);
  for (Method m : {Method::gmres, Method::cgn}) {
    const SolveReport a = experiment(T, *M, cfg_for(m, ResidualMode::preconditioned, 1e-7));
    const SolveReport b = experiment(T, *M, cfg_for(m, ResidualMode::preconditioned, 1e-7));
    EXPECT_EQ(a.iterations, b.iterations);
    EXPECT_EQ(a.solution, b.solution);
    EXPECT_EQ(a.residual_history, b.residual_history);
  }
}

TEST(Krylov, IterationCapIsHonored) {
  const auto e = corpus_entry("f2");
  const ToeplitzMatrix T = ToeplitzMatrix::from_symbol(e.symbol, 256);
  const IdentityPreconditioner M(256);
  SolveConfig c = cfg_for(Method::gmres, ResidualMode::true_residual, 1e-12);
  c.max_iters = 5;
  const SolveReport r = experiment(T, M, c);
  EXPECT_FALSE(r.converged);
  EXPECT_EQ(r.iterations, 5u);
  EXPECT_EQ(r.residual_history.size(), 6u);
}

TEST(Krylov, OnesRightHandSideHasNoKnownError) {
  const auto e = corpus_entry("gcar");
  const ToeplitzMatrix T = ToeplitzMatrix::from_symbol(e.symbol, 64);
  const auto M = circulant_strang(T);
  SolveConfig c = cfg_for(Method::gmres, ResidualMode::true_residual, 1e-7);
  c.rhs = RhsKind::ones;
  const SolveReport r = experiment(T, *M, c);
  EXPECT_TRUE(r.converged);
  EXPECT_FALSE(r.error_inf.has_value());
}

TEST(Krylov, RejectsBadTolerance) {
  const ToeplitzMatrix T(Vec{1.0});
  const IdentityPreconditioner M(1);
  for (double tol : {0.0, 1.0, -1e-3}) {
    SolveConfig c;
    c.tol = tol;
    try {
      experiment(T, M, c);
      FAIL();
    } catch (const error& err) {
      EXPECT_EQ(err.code(), errc::usage);
    }
  }
}

TEST(Krylov, ZeroRightHandSideIsImmediate) {
  const ToeplitzMatrix T(Vec{0.0, 2.0, 0.0});
  LinearOperator A = [&](const Vec& v) { return T.multiply(v); };
  LinearOperator I = [](const Vec& v) { return v; };
  const SolveReport r = pgmres(A, I, Vec(2, 0.0), Vec(2, 0.0), SolveConfig{});
  EXPECT_TRUE(r.converged);
  EXPECT_EQ(r.iterations, 0u);
}

TEST(Krylov, DimensionMismatch) {
  const ToeplitzMatrix T = ToeplitzMatrix(Vec(7, 0.5));
  const IdentityPreconditioner M(3);
  EXPECT_THROW(experiment(T, M, SolveConfig{}), error);
}
