#include "sepcheck/criteria.hpp"

#include <gtest/gtest.h>

#include <cmath>

#include "oracles.hpp"
#include "sepcheck/bell.hpp"
#include "sepcheck/random_states.hpp"
#include "sepcheck/sic.hpp"

using namespace sepcheck;

namespace {

const double kRoot2 = std::sqrt(2.0);

ErrorKind kind_of(const std::function<void()>& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.kind();
  }
  ADD_FAILURE() << "no exception thrown";
  return ErrorKind::ParseError;
}

PureState plus_plus() { return product_state(basis::plus(), basis::plus()); }
PureState ket00() { return two_qubit_state(1, 0, 0, 0); }
PureState weighted_90_10() { return two_qubit_state(std::sqrt(0.9), 0, 0, std::sqrt(0.1)); }

struct StandardObservables {
  Dichotomic a{(pauli::x() + pauli::z()) / std::sqrt(2.0)};
  Dichotomic a2{(pauli::x() - pauli::z()) / std::sqrt(2.0)};
  Dichotomic b{pauli::x()};
  Dichotomic b2{pauli::z()};
};

}  // namespace

// --- CHSH -------------------------------------------------------------------

TEST(chsh_value, bell_state_reaches_tsirelson) {
  const StandardObservables o;
  const CriterionVerdict v = chsh_value(pure_to_density(phi_plus()), o.a, o.a2, o.b, o.b2);
  EXPECT_NEAR(v.statistic, 2 * kRoot2, 1e-9);
  EXPECT_EQ(v.verdict, Verdict::Entangled);
}

TEST(chsh_value, maximally_mixed_is_zero) {
  const StandardObservables o;
  const CriterionVerdict v = chsh_value(maximally_mixed(), o.a, o.a2, o.b, o.b2);
  EXPECT_NEAR(v.statistic, 0.0, 1e-15);
  EXPECT_EQ(v.verdict, Verdict::Inconclusive);
}

TEST(chsh_value, werner_is_linear_in_p) {
  // The value on Werner(p) equals p times the value on its pure component plus
  // (1 - p) times the value on I/4.
  const StandardObservables o;
  const double pure = chsh_expectation(werner(1.0), o.a, o.a2, o.b, o.b2);
  const double mixed = chsh_expectation(maximally_mixed(), o.a, o.a2, o.b, o.b2);
  for (double p : {0.0, 0.1, 0.4, 0.7, 1.0}) {
    EXPECT_NEAR(chsh_expectation(werner(p), o.a, o.a2, o.b, o.b2), p * pure + (1 - p) * mixed, 1e-14);
  }
  // With settings suited to psi+ the value is 2 sqrt 2 p.
  const Dichotomic a = Dichotomic::along({1, 0, 1}), a2 = Dichotomic::along({1, 0, -1});
  const Dichotomic b(pauli::x()), b2(-pauli::z());
  for (double p : {0.0, 0.25, 0.5, 1.0}) {
    EXPECT_NEAR(chsh_expectation(werner(p), a, a2, b, b2), 2 * kRoot2 * p, 1e-12);
  }
}

TEST(chsh_value, errors) {
  const StandardObservables o;
  EXPECT_EQ(kind_of([&] { chsh_value(maximally_mixed({2, 3}), o.a, o.a2, o.b, o.b2); }), ErrorKind::UnsupportedDims);
  EXPECT_EQ(kind_of([] { Dichotomic d(pauli::x() * 2.0); }), ErrorKind::NotDichotomic);
  EXPECT_EQ(kind_of([] { Dichotomic d(CMat::Identity(3, 3)); }), ErrorKind::NotDichotomic);
  CMat skew = pauli::x();
  skew(0, 1) = Complex(0, 1);
  EXPECT_EQ(kind_of([&] { Dichotomic d(skew); }), ErrorKind::NotDichotomic);
  EXPECT_NO_THROW(Dichotomic d(CMat::Identity(2, 2)));
}

TEST(chsh_optimize, bell_and_product) {
  EXPECT_NEAR(chsh_optimize(pure_to_density(phi_plus())).verdict.statistic, 2 * kRoot2, 1e-6);
  EXPECT_NEAR(chsh_optimize(pure_to_density(psi_minus())).verdict.statistic, 2 * kRoot2, 1e-6);
  const CriterionVerdict product = chsh_optimize(pure_to_density(plus_plus())).verdict;
  EXPECT_LE(product.statistic, 2.0 + 1e-6);
  EXPECT_EQ(product.verdict, Verdict::Inconclusive);
}

TEST(chsh_optimize, werner_matches_horodecki_value) {
  // Max CHSH for a state with correlation matrix T is 2 sqrt(s1^2 + s2^2),
  // s1 >= s2 the two largest singular values of T.
  for (double p : {0.2, 0.5, 0.7, 0.72, 1.0}) {
    EXPECT_NEAR(chsh_optimize(werner(p)).verdict.statistic, 2 * kRoot2 * p, 1e-9) << p;
  }
  for (Seed s = 0; s < 50; ++s) {
    const DensityMatrix rho = random_mixed({2, 2}, 1 + static_cast<int>(s % 4), s);
    const std::vector<double> sv = oracle::singular_values(fano_decompose(rho).tau.cast<Complex>());
    EXPECT_NEAR(chsh_optimize(rho).verdict.statistic, 2 * std::sqrt(sv[0] * sv[0] + sv[1] * sv[1]), 1e-7);
  }
}

TEST(chsh_optimize, deterministic_and_validated) {
  const DensityMatrix rho = random_mixed({2, 2}, 2, 17);
  EXPECT_EQ(chsh_optimize(rho, 8, 3).verdict.statistic, chsh_optimize(rho, 8, 3).verdict.statistic);
  EXPECT_EQ(kind_of([] { chsh_optimize(maximally_mixed({2, 3})); }), ErrorKind::UnsupportedDims);
  EXPECT_EQ(kind_of([] { chsh_optimize(maximally_mixed(), 0); }), ErrorKind::OutOfRange);
}

// --- Pure-state criteria ----------------------------------------------------

TEST(schmidt_rank_criterion, examples) {
  EXPECT_EQ(schmidt_rank_criterion(psi_plus()).statistic, 2.0);
  EXPECT_EQ(schmidt_rank_criterion(psi_plus()).verdict, Verdict::Entangled);
  EXPECT_EQ(schmidt_rank_criterion(plus_plus()).statistic, 1.0);
  EXPECT_EQ(schmidt_rank_criterion(plus_plus()).verdict, Verdict::Separable);
  EXPECT_EQ(schmidt_rank_criterion(ket00()).verdict, Verdict::Separable);
}

TEST(entanglement_entropy, examples) {
  const CriterionVerdict bell = entanglement_entropy(phi_plus());
  EXPECT_NEAR(bell.statistic, std::log(2.0), 1e-12);
  EXPECT_EQ(bell.verdict, Verdict::Entangled);
  EXPECT_NE(bell.details.find("bits=1"), std::string::npos);
  EXPECT_NEAR(entanglement_entropy(plus_plus()).statistic, 0.0, 1e-12);
  EXPECT_EQ(entanglement_entropy(plus_plus()).verdict, Verdict::Separable);
  const CriterionVerdict w = entanglement_entropy(weighted_90_10());
  EXPECT_NEAR(w.statistic, -0.9 * std::log(0.9) - 0.1 * std::log(0.1), 1e-12);
  EXPECT_EQ(w.verdict, Verdict::Entangled);
}

TEST(concurrence_pure, examples) {
  EXPECT_NEAR(concurrence_pure(phi_plus()).statistic, 1.0, 1e-12);
  EXPECT_EQ(concurrence_pure(phi_plus()).verdict, Verdict::Entangled);
  EXPECT_NEAR(concurrence_pure(ket00()).statistic, 0.0, 1e-15);
  EXPECT_EQ(concurrence_pure(ket00()).verdict, Verdict::Separable);
  EXPECT_NEAR(concurrence_pure(weighted_90_10()).statistic, 0.6, 1e-12);
  EXPECT_EQ(kind_of([] { concurrence_pure(random_pure({2, 3}, 1)); }), ErrorKind::UnsupportedDims);
}

// --- PPT and reduction -------------------------------------------------------

TEST(ppt, werner_examples) {
  const CriterionVerdict v = ppt(werner(2.0 / 3.0));
  EXPECT_NEAR(v.statistic, -0.25, 1e-9);
  EXPECT_EQ(v.verdict, Verdict::Entangled);
  for (double p : {0.0, 0.1, 0.2, 0.3, 1.0 / 3.0}) EXPECT_EQ(ppt(werner(p)).verdict, Verdict::Separable) << p;
  for (double p = 0.0; p <= 1.0; p += 0.05) {
    EXPECT_NEAR(ppt(werner(p)).statistic, oracle::min_eigenvalue(partial_transpose(werner(p).mat(), {2, 2}, Side::A)),
                1e-9);
  }
}

TEST(ppt, inconclusive_beyond_low_dimensions) {
  EXPECT_EQ(ppt(maximally_mixed({3, 3})).verdict, Verdict::Inconclusive);
  EXPECT_EQ(ppt(maximally_mixed({2, 3})).verdict, Verdict::Separable);
  EXPECT_EQ(ppt(maximally_mixed({3, 2})).verdict, Verdict::Separable);
  EXPECT_EQ(ppt(maximally_mixed({2, 4})).verdict, Verdict::Inconclusive);
}

TEST(reduction, examples) {
  const CriterionVerdict pp = reduction(pure_to_density(plus_plus()));
  EXPECT_GE(pp.statistic, -1e-12);
  EXPECT_EQ(pp.verdict, Verdict::Separable);
  const CriterionVerdict bell = reduction(pure_to_density(phi_plus()));
  EXPECT_NEAR(bell.statistic, -0.5, 1e-9);
  EXPECT_EQ(bell.verdict, Verdict::Entangled);
  const CriterionVerdict mixed = reduction(maximally_mixed());
  EXPECT_NEAR(mixed.statistic, 0.25, 1e-12);
  EXPECT_EQ(mixed.verdict, Verdict::Separable);
}

// --- Concurrence (mixed) ----------------------------------------------------

TEST(concurrence_mixed, examples) {
  EXPECT_NEAR(concurrence_mixed(pure_to_density(phi_plus())).statistic, 1.0, 1e-9);
  EXPECT_EQ(concurrence_mixed(maximally_mixed()).statistic, 0.0);
  EXPECT_EQ(concurrence_mixed(maximally_mixed()).verdict, Verdict::Separable);
  for (double p = 0.0; p <= 1.0 + 1e-12; p += 0.05) {
    const double q = std::min(p, 1.0);
    EXPECT_NEAR(concurrence_mixed(werner(q)).statistic, std::max(0.0, (3 * q - 1) / 2), 1e-9) << q;
  }
}

TEST(concurrence_mixed, matches_pure_formula) {
  for (Seed s = 0; s < 200; ++s) {
    const PureState psi = random_pure({2, 2}, s);
    EXPECT_NEAR(concurrence_value(pure_to_density(psi)), concurrence_pure_value(psi), 1e-7) << s;
  }
}

TEST(concurrence_mixed, rejects_other_dims) {
  EXPECT_EQ(kind_of([] { concurrence_mixed(maximally_mixed({2, 3})); }), ErrorKind::UnsupportedDims);
}

// --- Majorization ------------------------------------------------------------

TEST(majorization, werner_partial_sums) {
  for (double p : {0.0, 0.1, 0.3, 1.0 / 3.0}) {
    const CriterionVerdict v = majorization(werner(p));
    EXPECT_EQ(v.verdict, Verdict::Inconclusive) << p;
    EXPECT_NEAR(v.statistic, std::max((3 * p + 1) / 4 - 0.5, 0.0), 1e-9);
  }
  for (double p : {0.34, 0.5, 1.0}) {
    const CriterionVerdict v = majorization(werner(p));
    EXPECT_EQ(v.verdict, Verdict::Entangled) << p;
    EXPECT_NEAR(v.statistic, (3 * p + 1) / 4 - 0.5, 1e-9);
  }
}

TEST(majorization, product_state_holds_with_equality) {
  const CriterionVerdict v = majorization(pure_to_density(plus_plus()));
  EXPECT_EQ(v.verdict, Verdict::Inconclusive);
  EXPECT_NEAR(v.statistic, 0.0, 1e-12);
}

TEST(majorization, helper) {
  RVec x(3), y(2);
  x << 0.5, 0.3, 0.2;
  y << 0.6, 0.4;
  double gap = 0.0;
  EXPECT_TRUE(majorized_by(x, y, 1e-12, &gap));
  EXPECT_LE(gap, 1e-12);
  EXPECT_FALSE(majorized_by(y, RVec(RVec::Constant(2, 0.5)), 1e-12, &gap));
  EXPECT_NEAR(gap, 0.1, 1e-15);
  EXPECT_EQ(descending(x)(0), 0.5);
}

// --- CCNR and de Vicente -----------------------------------------------------

TEST(ccnr, rho_p_family) {
  const CriterionVerdict one = ccnr(rho_p_family(1.0));
  EXPECT_NEAR(one.statistic, 1.0, 1e-9);
  EXPECT_EQ(one.verdict, Verdict::Inconclusive);
  for (double p : {0.0, 0.25, 0.5, 0.75}) {
    const CriterionVerdict v = ccnr(rho_p_family(p));
    EXPECT_NEAR(v.statistic, oracle::rho_p_ccnr_closed_form(p), 1e-9) << p;
    EXPECT_EQ(v.verdict, Verdict::Entangled) << p;
  }
}

TEST(ccnr, werner_line) {
  for (double p = 0.0; p <= 1.0 + 1e-12; p += 0.05) {
    const double q = std::min(p, 1.0);
    EXPECT_NEAR(ccnr(werner(q)).statistic, (1 + 3 * q) / 2, 1e-9);
    EXPECT_NEAR(ccnr(werner(q)).statistic, oracle::trace_norm(oracle::realigned(werner(q).mat(), 2, 2)), 1e-8);
  }
  EXPECT_EQ(ccnr(werner(0.3)).verdict, Verdict::Inconclusive);
  EXPECT_EQ(ccnr(werner(0.34)).verdict, Verdict::Entangled);
}

TEST(correlation_matrix, examples) {
  EXPECT_NEAR(correlation_matrix(maximally_mixed()).statistic, 0.0, 1e-15);
  EXPECT_EQ(correlation_matrix(maximally_mixed()).verdict, Verdict::Inconclusive);
  EXPECT_NEAR(correlation_matrix(maximally_mixed()).threshold, 1.0, 1e-15);
  for (double p : {0.1, 0.3, 0.5, 0.9}) EXPECT_NEAR(correlation_matrix(werner(p)).statistic, 3 * p, 1e-12);
  EXPECT_NEAR(correlation_matrix(werner(1.0)).statistic, 3.0, 1e-12);
  EXPECT_EQ(correlation_matrix(werner(1.0)).verdict, Verdict::Entangled);
  EXPECT_EQ(kind_of([] { correlation_matrix(maximally_mixed({2, 3})); }), ErrorKind::UnsupportedDims);
}

// --- SIC and ESIC ------------------------------------------------------------

TEST(sic_povm, qubit_construction) {
  const SicPovm sic = sic_povm(2);
  ASSERT_EQ(sic.projectors.size(), 4u);
  CMat total = CMat::Zero(2, 2);
  for (const CMat& p : sic.projectors) total += p;
  EXPECT_LE((total - CMat::Identity(2, 2)).cwiseAbs().maxCoeff(), 1e-12);
  for (std::size_t k = 0; k < 4; ++k) {
    for (std::size_t l = 0; l < 4; ++l) {
      // |<psi_k|psi_l>|^2 = d^2 Tr(Pi_k Pi_l) with Pi = |psi><psi| / d.
      const double fidelity = 4.0 * (sic.projectors[k] * sic.projectors[l]).trace().real();
      EXPECT_NEAR(fidelity, k == l ? 1.0 : 1.0 / 3.0, 1e-12);
    }
  }
  EXPECT_EQ(kind_of([] { sic_povm(3); }), ErrorKind::UnsupportedDims);
}

TEST(esic, examples) {
  for (Seed s = 0; s < 50; ++s) {
    EXPECT_NEAR(esic(pure_to_density(random_product_pure({2, 2}, s))).statistic, 1.0, 1e-9);
  }
  // The fixed normalization gives |p_A| |p_B| = (sqrt 3 / 2)^2 on I/4.
  const CriterionVerdict mixed = esic(maximally_mixed());
  EXPECT_NEAR(mixed.statistic, 0.75, 1e-12);
  EXPECT_EQ(mixed.verdict, Verdict::Inconclusive);
  for (double p : {0.0, 0.3, 0.5, 1.0}) EXPECT_NEAR(esic(werner(p)).statistic, 0.75 * (1 + p), 1e-12);
  EXPECT_EQ(esic(werner(0.33)).verdict, Verdict::Inconclusive);
  EXPECT_EQ(esic(werner(0.34)).verdict, Verdict::Entangled);
}

TEST(esic, dimension_mismatch) {
  const SicPovm sic = sic_povm(2);
  EXPECT_EQ(kind_of([&] { esic(maximally_mixed({2, 3}), sic, sic); }), ErrorKind::DimensionMismatch);
}

TEST(esic, calibration_on_pure_qubits) {
  const SicPovm sic = sic_povm(2);
  const double scale = sic_normalization(2);
  for (Seed s = 0; s < 1000; ++s) {
    const CVec v = random_pure({2, 2}, s).vec().head(2).normalized();
    const CMat rho = v * v.adjoint();
    double total = 0.0;
    for (const CMat& p : sic.projectors) total += std::pow(scale * (p * rho).trace().real(), 2);
    EXPECT_NEAR(total, 1.0, 1e-12);
  }
}
