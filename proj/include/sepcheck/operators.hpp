#pragma once

// Operator-based tests: entanglement witnesses, positive maps applied through
// their Choi matrices, and local uncertainty relations.

#include <sstream>
#include <vector>

#include "sepcheck/bell.hpp"
#include "sepcheck/criteria.hpp"

namespace sepcheck {

// --- Witnesses -------------------------------------------------------------

inline CriterionVerdict witness_eval(const DensityMatrix& rho, const CMat& w, double tol = kTol) {
  if (w.rows() != rho.mat().rows() || w.cols() != rho.mat().cols()) {
    throw Error(ErrorKind::DimensionMismatch, "witness and state sizes differ");
  }
  require_hermitian(w, tol);
  const double value = (w * rho.mat()).trace().real();
  return {"witness", value, 0.0, value < -tol ? Verdict::Entangled : Verdict::Inconclusive, ""};
}

/// Tr(V rho) with the swap operator; requires dA == dB.
inline CriterionVerdict swap_witness(const DensityMatrix& rho, double tol = kTol) {
  if (rho.dims().dA != rho.dims().dB) {
    throw Error(ErrorKind::DimensionMismatch, "swap witness needs equal subsystem dimensions");
  }
  return witness_eval(rho, swap_operator(rho.dims().dA), tol);
}

// --- Positive maps ---------------------------------------------------------

namespace choi {

/// J = sum_ij |i><j| (x) Lambda(|i><j|) for Lambda = id.
inline CMat identity_map(int d) {
  CMat j = CMat::Zero(d * d, d * d);
  for (int a = 0; a < d; ++a)
    for (int b = 0; b < d; ++b) j(a * d + a, b * d + b) = 1.0;
  return j;
}

inline CMat transpose_map(int d) { return swap_operator(d); }

/// Lambda(sigma) = I Tr(sigma) - sigma
inline CMat reduction_map(int d) { return CMat::Identity(d * d, d * d) - identity_map(d); }

}  // namespace choi

/// Applies the map with Choi matrix `choi` to the chosen subsystem of rho.
inline CMat apply_map(const DensityMatrix& rho, const CMat& choi, Side side) {
  const auto [dA, dB] = rho.dims();
  const int din = side == Side::A ? dA : dB;
  if (choi.rows() != choi.cols() || choi.rows() % din != 0) {
    throw Error(ErrorKind::DimensionMismatch, "Choi matrix size " + std::to_string(choi.rows()) +
                                                  " is not a multiple of the input dimension " +
                                                  std::to_string(din));
  }
  const int dout = static_cast<int>(choi.rows()) / din;
  const CMat& m = rho.mat();
  if (side == Side::B) {
    CMat out = CMat::Zero(dA * dout, dA * dout);
    for (int a = 0; a < dA; ++a)
      for (int b = 0; b < dA; ++b)
        for (int mu = 0; mu < dB; ++mu)
          for (int nu = 0; nu < dB; ++nu) {
            const Complex coeff = m(a * dB + mu, b * dB + nu);
            if (coeff == Complex(0.0)) continue;
            for (int p = 0; p < dout; ++p)
              for (int q = 0; q < dout; ++q) out(a * dout + p, b * dout + q) += coeff * choi(mu * dout + p, nu * dout + q);
          }
    return out;
  }
  CMat out = CMat::Zero(dout * dB, dout * dB);
  for (int mu = 0; mu < dA; ++mu)
    for (int nu = 0; nu < dA; ++nu)
      for (int a = 0; a < dB; ++a)
        for (int b = 0; b < dB; ++b) {
          const Complex coeff = m(mu * dB + a, nu * dB + b);
          if (coeff == Complex(0.0)) continue;
          for (int p = 0; p < dout; ++p)
            for (int q = 0; q < dout; ++q) out(p * dB + a, q * dB + b) += coeff * choi(mu * dout + p, nu * dout + q);
        }
  return out;
}

inline CriterionVerdict map_criterion(const DensityMatrix& rho, const CMat& choi, Side side, double tol = kTol) {
  const CMat image = apply_map(rho, choi, side);
  const RVec spectrum = eigenvalues_hermitian(image, tol);
  const double lowest = spectrum.minCoeff();
  return {"map", lowest, 0.0, lowest < -tol ? Verdict::Entangled : Verdict::Inconclusive,
          detail::format_values("image_spectrum", spectrum)};
}

// --- Local uncertainty relations -------------------------------------------

/// Delta^2(O) = <O^2> - <O>^2
inline double variance(const DensityMatrix& rho, const CMat& op) {
  const double mean = (rho.mat() * op).trace().real();
  const double second = (rho.mat() * op * op).trace().real();
  return second - mean * mean;
}

inline double lur_statistic(const DensityMatrix& rho, const std::vector<Dichotomic>& obsA,
                            const std::vector<Dichotomic>& obsB) {
  const CMat id = pauli::identity();
  double total = 0.0;
  for (std::size_t k = 0; k < obsA.size(); ++k) {
    total += variance(rho, kron(obsA[k].matrix(), id) + kron(id, obsB[k].matrix()));
  }
  return total;
}

inline CriterionVerdict lur(const DensityMatrix& rho, const std::vector<Dichotomic>& obsA,
                            const std::vector<Dichotomic>& obsB, double cA, double cB, double tol = kTol) {
  require_two_qubits(rho.dims(), "lur");
  if (obsA.size() != obsB.size() || obsA.empty()) {
    throw Error(ErrorKind::LengthMismatch, "observable lists have lengths " + std::to_string(obsA.size()) +
                                               " and " + std::to_string(obsB.size()));
  }
  if (!(cA > 0.0) || !(cB > 0.0)) throw Error(ErrorKind::OutOfRange, "uncertainty bounds must be positive");
  const double s = lur_statistic(rho, obsA, obsB);
  const double bound = cA + cB;
  return {"lur", s, bound, s < bound - tol ? Verdict::Entangled : Verdict::Inconclusive, ""};
}

/// (sigma_x, sigma_y, sigma_z); sum of their variances is 3 - |r|^2 >= 2.
inline std::vector<Dichotomic> pauli_observables() {
  return {Dichotomic(pauli::x()), Dichotomic(pauli::y()), Dichotomic(pauli::z())};
}

inline constexpr double kPauliUncertaintyBound = 2.0;

/// Flips the sign of each B_k when that lowers its term. Terms are
/// independent, so per-axis choice is the exact minimum over sign patterns.
inline std::vector<Dichotomic> flip_signs_to_minimize(const DensityMatrix& rho, const std::vector<Dichotomic>& obsA,
                                                      const std::vector<Dichotomic>& obsB) {
  const CMat id = pauli::identity();
  std::vector<Dichotomic> out;
  for (std::size_t k = 0; k < obsB.size(); ++k) {
    const CMat a = kron(obsA[k].matrix(), id);
    const CMat b = kron(id, obsB[k].matrix());
    const bool flip = variance(rho, a - b) < variance(rho, a + b);
    out.push_back(flip ? Dichotomic(-obsB[k].matrix()) : obsB[k]);
  }
  return out;
}

/// Pauli triples on both sides, C_A = C_B = 2, signs on B chosen per axis.
inline CriterionVerdict lur_default(const DensityMatrix& rho, double tol = kTol) {
  require_two_qubits(rho.dims(), "lur");
  const auto obs = pauli_observables();
  return lur(rho, obs, flip_signs_to_minimize(rho, obs, obs), kPauliUncertaintyBound, kPauliUncertaintyBound, tol);
}

}  // namespace sepcheck
