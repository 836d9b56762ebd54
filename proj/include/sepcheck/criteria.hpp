#pragma once

// Spectral and pure-state separability criteria.
//
// Verdict policy: a criterion reports Separable only where it is necessary and
// sufficient for the given dimensions. Everywhere else a non-violation is
// Inconclusive.

#include <algorithm>
#include <cmath>
#include <functional>
#include <sstream>
#include <vector>

#include "sepcheck/states.hpp"
#include "sepcheck/verdict.hpp"

namespace sepcheck {

namespace detail {

inline std::string format_values(const char* label, const RVec& values) {
  std::ostringstream os;
  os.precision(12);
  os << label << "=[";
  for (Eigen::Index i = 0; i < values.size(); ++i) os << (i ? " " : "") << values(i);
  os << "]";
  return os.str();
}

/// PPT and reduction are exact for qubit-qubit and qubit-qutrit systems.
inline bool low_dimensional(const BipartiteDims& dims) {
  const int lo = std::min(dims.dA, dims.dB), hi = std::max(dims.dA, dims.dB);
  return lo == 2 && hi <= 3;
}

inline Verdict below_zero_verdict(double statistic, double tol, bool exact) {
  if (statistic < -tol) return Verdict::Entangled;
  return exact ? Verdict::Separable : Verdict::Inconclusive;
}

}  // namespace detail

// --- Pure-state criteria ---------------------------------------------------

inline CriterionVerdict schmidt_rank_criterion(const PureState& psi) {
  const SchmidtData data = schmidt(psi);
  CriterionVerdict v{"schmidt", static_cast<double>(data.rank), 1.0,
                     data.rank > 1 ? Verdict::Entangled : Verdict::Separable,
                     detail::format_values("coefficients", data.coefficients)};
  return v;
}

/// Natural-log entropy of the reduced state, -sum l^2 ln l^2 over Schmidt
/// coefficients l.
inline double entanglement_entropy_value(const PureState& psi) {
  const SchmidtData data = schmidt(psi);
  double s = 0.0;
  for (Eigen::Index i = 0; i < data.coefficients.size(); ++i) {
    const double p = data.coefficients(i) * data.coefficients(i);
    if (p > 0.0) s -= p * std::log(p);
  }
  return std::max(s, 0.0);
}

inline CriterionVerdict entanglement_entropy(const PureState& psi, double tol = kTol) {
  const double s = entanglement_entropy_value(psi);
  std::ostringstream os;
  os.precision(12);
  os << "bits=" << s / std::log(2.0);
  return {"entropy", s, 0.0, s > tol ? Verdict::Entangled : Verdict::Separable, os.str()};
}

/// 2|alpha eta - beta gamma| for amplitudes on |00>, |01>, |10>, |11>.
inline double concurrence_pure_value(const PureState& psi) {
  require_two_qubits(psi.dims(), "concurrence_pure");
  const CVec& v = psi.vec();
  return 2.0 * std::abs(v(0) * v(3) - v(1) * v(2));
}

inline CriterionVerdict concurrence_pure(const PureState& psi, double tol = kTol) {
  const double c = concurrence_pure_value(psi);
  return {"concurrence_pure", c, 0.0, c > tol ? Verdict::Entangled : Verdict::Separable, ""};
}

/// sigma_y (x) sigma_y
inline CMat spin_flip_operator() { return kron(pauli::y(), pauli::y()); }

// --- Mixed-state criteria --------------------------------------------------

inline CriterionVerdict ppt(const DensityMatrix& rho, double tol = kTol) {
  const CMat pt = partial_transpose(rho.mat(), rho.dims(), Side::A);
  const RVec spectrum = eigenvalues_hermitian(pt, tol);
  const double lowest = spectrum.minCoeff();
  return {"ppt", lowest, 0.0, detail::below_zero_verdict(lowest, tol, detail::low_dimensional(rho.dims())),
          detail::format_values("pt_spectrum", spectrum)};
}

inline CMat reduction_operator(const DensityMatrix& rho, Side keep) {
  const auto& dims = rho.dims();
  const CMat reduced = partial_trace(rho.mat(), dims, keep);
  const CMat extended = keep == Side::A ? kron(reduced, CMat::Identity(dims.dB, dims.dB))
                                        : kron(CMat::Identity(dims.dA, dims.dA), reduced);
  return extended - rho.mat();
}

inline CriterionVerdict reduction(const DensityMatrix& rho, double tol = kTol) {
  const double minA = min_eigenvalue(reduction_operator(rho, Side::A), tol);
  const double minB = min_eigenvalue(reduction_operator(rho, Side::B), tol);
  const double lowest = std::min(minA, minB);
  std::ostringstream os;
  os.precision(12);
  os << "min_eig_rhoA_x_I=" << minA << " min_eig_I_x_rhoB=" << minB;
  return {"reduction", lowest, 0.0, detail::below_zero_verdict(lowest, tol, detail::low_dimensional(rho.dims())),
          os.str()};
}

/// Wootters concurrence. The decreasing eigenvalues of
/// R = sqrt(sqrt(rho) rho~ sqrt(rho)) equal the singular values of
/// sqrt(rho) Y sqrt(rho)^*, Y = sigma_y (x) sigma_y, which avoids a second
/// square root.
inline double concurrence_value(const DensityMatrix& rho, double tol = kTol) {
  require_two_qubits(rho.dims(), "concurrence_mixed");
  const CMat root = sqrt_psd(rho.mat(), tol, tol);
  const CMat x = root * spin_flip_operator() * root.conjugate();
  const RVec lambda = singular_values(x);
  return std::max(0.0, lambda(0) - lambda(1) - lambda(2) - lambda(3));
}

inline CriterionVerdict concurrence_mixed(const DensityMatrix& rho, double tol = kTol) {
  const double c = concurrence_value(rho, tol);
  return {"concurrence", c, 0.0, c > tol ? Verdict::Entangled : Verdict::Separable, ""};
}

/// True when x (descending) is majorized by y (descending, zero padded):
/// every prefix sum of x stays within tol of the prefix sum of y.
inline bool majorized_by(const RVec& x, const RVec& y, double tol, double* worst_gap = nullptr) {
  double sx = 0.0, sy = 0.0, worst = -std::numeric_limits<double>::infinity();
  for (Eigen::Index k = 0; k < x.size(); ++k) {
    sx += x(k);
    sy += k < y.size() ? y(k) : 0.0;
    worst = std::max(worst, sx - sy);
  }
  if (worst_gap) *worst_gap = worst;
  return worst <= tol;
}

inline RVec descending(RVec v) {
  std::sort(v.data(), v.data() + v.size(), std::greater<>());
  return v;
}

inline CriterionVerdict majorization(const DensityMatrix& rho, double tol = kTol) {
  const auto& dims = rho.dims();
  const RVec global = descending(eigenvalues_hermitian(rho.mat(), tol));
  const RVec specA = descending(eigenvalues_hermitian(partial_trace(rho.mat(), dims, Side::A), tol));
  const RVec specB = descending(eigenvalues_hermitian(partial_trace(rho.mat(), dims, Side::B), tol));
  double gapA = 0.0, gapB = 0.0;
  const bool okA = majorized_by(global, specA, tol, &gapA);
  const bool okB = majorized_by(global, specB, tol, &gapB);
  std::ostringstream os;
  os.precision(12);
  os << detail::format_values("spectrum", global) << " " << detail::format_values("spectrum_A", specA) << " "
     << detail::format_values("spectrum_B", specB);
  // Statistic: largest prefix-sum excess; positive beyond tol means failure.
  return {"majorization", std::max(gapA, gapB), 0.0, okA && okB ? Verdict::Inconclusive : Verdict::Entangled,
          os.str()};
}

inline CriterionVerdict ccnr(const DensityMatrix& rho, double tol = kTol) {
  const RVec sv = singular_values(realign(rho.mat(), rho.dims()));
  const double norm = sv.sum();
  return {"ccnr", norm, 1.0, norm > 1.0 + tol ? Verdict::Entangled : Verdict::Inconclusive,
          detail::format_values("singular_values", sv)};
}

inline CriterionVerdict correlation_matrix(const DensityMatrix& rho, double tol = kTol) {
  const FanoForm f = fano_decompose(rho);
  const double norm = trace_norm(RMat(f.tau));
  const auto [dA, dB] = rho.dims();
  const double bound = std::sqrt(4.0 * (dA - 1) * (dB - 1) / static_cast<double>(dA * dB));
  return {"correlation_matrix", norm, bound, norm > bound + tol ? Verdict::Entangled : Verdict::Inconclusive,
          ""};
}

}  // namespace sepcheck
