#include "sepcheck/decomposition.hpp"

#include <gtest/gtest.h>

#include "sepcheck/criteria.hpp"

using namespace sepcheck;

namespace {

ErrorKind kind_of(const std::function<void()>& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.kind();
  }
  ADD_FAILURE() << "no exception thrown";
  return ErrorKind::ParseError;
}

Eigen::Vector3d bloch_of(const CVec& v) {
  const CMat q = v * v.adjoint();
  return {(q * pauli::x()).trace().real(), (q * pauli::y()).trace().real(), (q * pauli::z()).trace().real()};
}

/// Candidate read directly off an explicit separable sample.
LiQiaoCandidate from_sample(const SeparableSample& sample) {
  LiQiaoCandidate c;
  c.weights = sample.weights;
  for (std::size_t i = 0; i < sample.weights.size(); ++i) {
    c.bloch_a.push_back(bloch_of(sample.localA[i]));
    c.bloch_b.push_back(bloch_of(sample.localB[i]));
  }
  return c;
}

double max_entry(const CMat& m) { return m.cwiseAbs().maxCoeff(); }

}  // namespace

TEST(liqiao_verify, maximally_mixed_single_term) {
  const LiQiaoCandidate c{{1.0}, {Eigen::Vector3d::Zero()}, {Eigen::Vector3d::Zero()}};
  const Residuals r = liqiao_verify(c, maximally_mixed());
  EXPECT_EQ(r.dr, 0.0);
  EXPECT_EQ(r.ds, 0.0);
  EXPECT_EQ(r.dtau, 0.0);
  EXPECT_TRUE(certifies(r));
}

TEST(liqiao_verify, explicit_mixture) {
  for (Seed s = 0; s < 100; ++s) {
    const SeparableSample sample = random_separable_sample({2, 2}, 1 + static_cast<int>(s % 8), s);
    const DensityMatrix rho = mixture(sample.terms());
    const Residuals r = liqiao_verify(from_sample(sample), rho);
    EXPECT_LE(r.max(), 1e-12);
  }
}

TEST(liqiao_verify, zero_bloch_against_werner_third) {
  const LiQiaoCandidate c{{1.0}, {Eigen::Vector3d::Zero()}, {Eigen::Vector3d::Zero()}};
  const Residuals r = liqiao_verify(c, werner(1.0 / 3.0));
  EXPECT_NEAR(r.dtau, std::sqrt(3.0) / 3.0, 1e-12);
  EXPECT_NEAR(r.dr, 0.0, 1e-15);
  EXPECT_FALSE(certifies(r));
}

TEST(liqiao_verify, invalid_candidates) {
  const Eigen::Vector3d z = Eigen::Vector3d::Zero(), out(1.1, 0, 0);
  const DensityMatrix rho = maximally_mixed();
  EXPECT_EQ(kind_of([&] { liqiao_verify({{}, {}, {}}, rho); }), ErrorKind::InvalidCandidate);
  EXPECT_EQ(kind_of([&] { liqiao_verify({{0.5, 0.5}, {z}, {z, z}}, rho); }), ErrorKind::InvalidCandidate);
  EXPECT_EQ(kind_of([&] { liqiao_verify({{1.0, 0.0}, {z, z}, {z, z}}, rho); }), ErrorKind::InvalidCandidate);
  EXPECT_EQ(kind_of([&] { liqiao_verify({{0.5, 0.6}, {z, z}, {z, z}}, rho); }), ErrorKind::InvalidCandidate);
  EXPECT_EQ(kind_of([&] { liqiao_verify({{1.0}, {out}, {z}}, rho); }), ErrorKind::InvalidCandidate);
  EXPECT_EQ(kind_of([&] { liqiao_verify({{1.0}, {z}, {out}}, rho); }), ErrorKind::InvalidCandidate);
  EXPECT_EQ(kind_of([&] { liqiao_verify({{1.0}, {z}, {z}}, maximally_mixed({2, 3})); }), ErrorKind::UnsupportedDims);
  try {
    liqiao_verify({{1.0}, {z}, {out}}, rho);
  } catch (const Error& e) {
    EXPECT_NE(std::string(e.what()).find("bloch_b"), std::string::npos);
  }
}

TEST(recompose, reproduces_mixture) {
  for (Seed s = 0; s < 50; ++s) {
    const SeparableSample sample = random_separable_sample({2, 2}, 4, s);
    EXPECT_LE(max_entry(recompose(from_sample(sample)) - mixture(sample.terms()).mat()), 1e-12);
  }
}

TEST(simplex_projection, lands_on_simplex) {
  Eigen::VectorXd p(4);
  p << 0.9, -0.3, 0.7, 0.1;
  detail::project_simplex(p);
  EXPECT_NEAR(p.sum(), 1.0, 1e-15);
  EXPECT_GE(p.minCoeff(), 0.0);
  Eigen::VectorXd q(3);
  q << 0.2, 0.3, 0.5;
  Eigen::VectorXd q0 = q;
  detail::project_simplex(q);
  EXPECT_TRUE(q.isApprox(q0, 1e-15));
}

TEST(liqiao_search, maximally_mixed_one_term) {
  const SearchResult r = liqiao_search(maximally_mixed(), {1, 5000, 8, 0});
  ASSERT_TRUE(r.certificate.has_value());
  EXPECT_LE(liqiao_verify(*r.certificate, maximally_mixed()).max(), 1e-9);
}

TEST(liqiao_search, werner_point_two_is_certified) {
  const DensityMatrix rho = werner(0.2);
  const SearchResult r = liqiao_search(rho, {16, 5000, 8, 1});
  ASSERT_TRUE(r.certificate.has_value());
  const Residuals res = liqiao_verify(*r.certificate, rho);
  EXPECT_LE(res.max(), kCertificateTol);
  EXPECT_LE(max_entry(recompose(*r.certificate) - rho.mat()), 2e-6);
}

TEST(liqiao_search, werner_point_nine_fails) {
  const SearchResult r = liqiao_search(werner(0.9), {16, 5000, 8, 1});
  EXPECT_FALSE(r.certificate.has_value());
  EXPECT_EQ(r.restarts_run, 8);
  EXPECT_GT(r.best_residuals.dtau, 1e-2);
}

TEST(liqiao_search, deterministic_given_seed) {
  const DensityMatrix rho = random_separable({2, 2}, 6, 99);
  const SearchResult a = liqiao_search(rho, {8, 2000, 2, 7});
  const SearchResult b = liqiao_search(rho, {8, 2000, 2, 7});
  EXPECT_EQ(a.best.weights, b.best.weights);
  EXPECT_EQ(a.best_residuals.max(), b.best_residuals.max());
}

TEST(liqiao_search, errors) {
  EXPECT_EQ(kind_of([] { liqiao_search(maximally_mixed({2, 3})); }), ErrorKind::UnsupportedDims);
  EXPECT_EQ(kind_of([] { liqiao_search(maximally_mixed(), {0, 10, 1, 0}); }), ErrorKind::OutOfRange);
  EXPECT_EQ(kind_of([] { liqiao_search(maximally_mixed(), {4, 0, 1, 0}); }), ErrorKind::OutOfRange);
}

TEST(liqiao_search, never_certifies_ppt_entangled_werner) {
  for (int i = 0; i <= 20; ++i) {
    const double p = 0.35 + 0.65 * i / 20.0;
    const DensityMatrix rho = werner(p);
    ASSERT_EQ(ppt(rho).verdict, Verdict::Entangled);
    EXPECT_FALSE(liqiao_search(rho, {16, 1000, 2, static_cast<Seed>(i)}).certificate.has_value()) << p;
  }
}
