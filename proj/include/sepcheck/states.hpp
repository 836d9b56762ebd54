#pragma once

// Validated bipartite state types, Bloch-Fano form and builtin families.

#include <cmath>
#include <sstream>
#include <utility>
#include <vector>

#include "sepcheck/linalg.hpp"

namespace sepcheck {

/// Hermitian, unit-trace, positive-semidefinite operator with known subsystem
/// dimensions. Only obtainable through validate_density (or helpers that call
/// it), so every instance satisfies the invariants.
class DensityMatrix {
 public:
  const BipartiteDims& dims() const { return dims_; }
  const CMat& mat() const { return mat_; }

  friend DensityMatrix validate_density(const CMat& m, const BipartiteDims& dims, double tol);

 private:
  DensityMatrix(BipartiteDims dims, CMat mat) : dims_(dims), mat_(std::move(mat)) {}

  BipartiteDims dims_;
  CMat mat_;
};

inline DensityMatrix validate_density(const CMat& m, const BipartiteDims& dims, double tol = kTol) {
  check_square_bipartite(m, dims);
  if (!all_finite(m)) throw Error(ErrorKind::NotHermitian, "matrix has non-finite entries");
  require_hermitian(m, tol);
  const Complex tr = m.trace();
  if (std::abs(tr - Complex(1.0, 0.0)) > tol) {
    std::ostringstream os;
    os << "trace is " << tr.real() << (tr.imag() >= 0 ? "+" : "") << tr.imag() << "i, expected 1";
    throw Error(ErrorKind::BadTrace, os.str());
  }
  const double lowest = min_eigenvalue(m, tol);
  if (lowest < -tol) {
    std::ostringstream os;
    os << "min eigenvalue is " << lowest << " (tolerance " << tol << ")";
    throw Error(ErrorKind::NotPSD, os.str());
  }
  return DensityMatrix(dims, m);
}

/// Unit vector on the bipartite space.
class PureState {
 public:
  const BipartiteDims& dims() const { return dims_; }
  const CVec& vec() const { return vec_; }

  friend PureState make_pure_state(const CVec& v, const BipartiteDims& dims, double tol);

 private:
  PureState(BipartiteDims dims, CVec vec) : dims_(dims), vec_(std::move(vec)) {}

  BipartiteDims dims_;
  CVec vec_;
};

inline PureState make_pure_state(const CVec& v, const BipartiteDims& dims, double tol = kTol) {
  check_dims(dims);
  if (v.size() != dims.total()) {
    throw Error(ErrorKind::DimensionMismatch, "state vector length " + std::to_string(v.size()) +
                                                  " does not match dims product " + std::to_string(dims.total()));
  }
  const double norm = v.norm();
  if (!std::isfinite(norm) || std::abs(norm - 1.0) > tol) {
    std::ostringstream os;
    os << "state vector norm is " << norm << ", expected 1";
    throw Error(ErrorKind::OutOfRange, os.str());
  }
  return PureState(dims, v);
}

/// Normalizes first; for building states from unnormalized amplitudes.
inline PureState normalized_pure_state(const CVec& v, const BipartiteDims& dims) {
  const double norm = v.norm();
  if (!(norm > 0.0)) throw Error(ErrorKind::OutOfRange, "zero state vector");
  return make_pure_state(v / norm, dims);
}

inline DensityMatrix pure_to_density(const PureState& psi) {
  const CMat rho = psi.vec() * psi.vec().adjoint();
  return validate_density(rho, psi.dims());
}

// --- Schmidt decomposition -------------------------------------------------

inline constexpr double kSchmidtRankTol = 1e-9;

struct SchmidtData {
  RVec coefficients;  // descending, min(dA, dB) entries
  CMat vectorsA;      // columns u_i
  CMat vectorsB;      // columns v_i
  int rank = 0;
};

inline SchmidtData schmidt(const PureState& psi) {
  const auto [dA, dB] = psi.dims();
  // psi = sum_{i,mu} C(i,mu) |i>|mu>
  CMat coeff(dA, dB);
  for (int i = 0; i < dA; ++i)
    for (int mu = 0; mu < dB; ++mu) coeff(i, mu) = psi.vec()(i * dB + mu);
  Eigen::JacobiSVD<CMat> svd(coeff, Eigen::ComputeThinU | Eigen::ComputeThinV);
  SchmidtData out;
  out.coefficients = svd.singularValues();
  out.vectorsA = svd.matrixU();
  out.vectorsB = svd.matrixV().conjugate();
  out.rank = static_cast<int>((out.coefficients.array() > kSchmidtRankTol).count());
  return out;
}

// --- Bloch-Fano form (two qubits) ------------------------------------------

struct FanoForm {
  Eigen::Vector3d r = Eigen::Vector3d::Zero();
  Eigen::Vector3d s = Eigen::Vector3d::Zero();
  Eigen::Matrix3d tau = Eigen::Matrix3d::Zero();
};

inline void require_two_qubits(const BipartiteDims& dims, const char* what) {
  if (dims.dA != 2 || dims.dB != 2) {
    throw Error(ErrorKind::UnsupportedDims, std::string(what) + " requires dims (2,2), got (" +
                                                std::to_string(dims.dA) + "," + std::to_string(dims.dB) + ")");
  }
}

inline FanoForm fano_decompose(const DensityMatrix& rho) {
  require_two_qubits(rho.dims(), "fano_decompose");
  const auto sigma = pauli::all();
  const CMat id = pauli::identity();
  const CMat& m = rho.mat();
  FanoForm f;
  for (int i = 0; i < 3; ++i) {
    f.r(i) = (m * kron(sigma[i], id)).trace().real();
    f.s(i) = (m * kron(id, sigma[i])).trace().real();
    for (int j = 0; j < 3; ++j) f.tau(i, j) = (m * kron(sigma[i], sigma[j])).trace().real();
  }
  return f;
}

/// rho = (I(x)I + r.sigma(x)I + I(x)s.sigma + sum tau_ij sigma_i(x)sigma_j) / 4
inline CMat fano_matrix(const FanoForm& f) {
  const auto sigma = pauli::all();
  const CMat id = pauli::identity();
  CMat m = kron(id, id);
  for (int i = 0; i < 3; ++i) {
    m += f.r(i) * kron(sigma[i], id);
    m += f.s(i) * kron(id, sigma[i]);
    for (int j = 0; j < 3; ++j) m += f.tau(i, j) * kron(sigma[i], sigma[j]);
  }
  return 0.25 * m;
}

inline DensityMatrix fano_compose(const FanoForm& f) { return validate_density(fano_matrix(f), {2, 2}); }

// --- Named states and families ---------------------------------------------

namespace basis {

inline CVec ket(int dim, int index) {
  CVec v = CVec::Zero(dim);
  v(index) = 1.0;
  return v;
}

inline CVec plus() { return CVec::Constant(2, 1.0 / std::sqrt(2.0)); }

inline CVec minus() {
  CVec v(2);
  v << 1.0 / std::sqrt(2.0), -1.0 / std::sqrt(2.0);
  return v;
}

}  // namespace basis

/// Two-qubit vector from amplitudes on |00>, |01>, |10>, |11>.
inline PureState two_qubit_state(Complex a00, Complex a01, Complex a10, Complex a11) {
  CVec v(4);
  v << a00, a01, a10, a11;
  return normalized_pure_state(v, {2, 2});
}

/// (|00> + |11>)/sqrt 2
inline PureState phi_plus() { return two_qubit_state(1, 0, 0, 1); }
/// (|01> + |10>)/sqrt 2, the state mixed into the Werner and rho_p families.
inline PureState psi_plus() { return two_qubit_state(0, 1, 1, 0); }
/// Singlet (|01> - |10>)/sqrt 2
inline PureState psi_minus() { return two_qubit_state(0, 1, -1, 0); }

inline PureState product_state(const CVec& a, const CVec& b) {
  return normalized_pure_state(kron(a, b), {static_cast<int>(a.size()), static_cast<int>(b.size())});
}

inline DensityMatrix maximally_mixed(const BipartiteDims& dims = {2, 2}) {
  return validate_density(CMat::Identity(dims.total(), dims.total()) / dims.total(), dims);
}

inline void require_unit_interval(double p, const char* what) {
  if (!(p >= 0.0 && p <= 1.0)) {
    std::ostringstream os;
    os << what << " parameter " << p << " outside [0, 1]";
    throw Error(ErrorKind::OutOfRange, os.str());
  }
}

/// p |psi+><psi+| + (1 - p) I / 4, accepted on the closed interval [0, 1].
inline DensityMatrix werner(double p) {
  require_unit_interval(p, "werner");
  const CVec phi = psi_plus().vec();
  const CMat m = p * phi * phi.adjoint() + (1.0 - p) / 4.0 * CMat::Identity(4, 4);
  return validate_density(m, {2, 2});
}

/// p |00><00| + (1 - p) |psi+><psi+|
inline DensityMatrix rho_p_family(double p) {
  require_unit_interval(p, "rho_p");
  const CVec phi = psi_plus().vec();
  CMat m = (1.0 - p) * phi * phi.adjoint();
  m(0, 0) += p;
  return validate_density(m, {2, 2});
}

/// Bell-diagonal state with zero Bloch vectors and correlation diag(t).
inline DensityMatrix bell_diagonal(const Eigen::Vector3d& t) {
  FanoForm f;
  f.tau = t.asDiagonal();
  return fano_compose(f);
}

/// cos(theta)|00> + sin(theta)|11>
inline PureState pure_schmidt_angle(double theta) {
  return two_qubit_state(std::cos(theta), 0, 0, std::sin(theta));
}

struct MixtureTerm {
  double weight = 0.0;
  CMat rhoA;
  CMat rhoB;
};

/// sum_i w_i rhoA_i (x) rhoB_i; each local operator must itself be a state.
inline DensityMatrix mixture(const std::vector<MixtureTerm>& terms, double tol = kTol) {
  if (terms.empty()) throw Error(ErrorKind::BadWeights, "mixture needs at least one term");
  const auto dA = static_cast<int>(terms.front().rhoA.rows());
  const auto dB = static_cast<int>(terms.front().rhoB.rows());
  double total = 0.0;
  CMat m = CMat::Zero(dA * dB, dA * dB);
  for (std::size_t t = 0; t < terms.size(); ++t) {
    const MixtureTerm& term = terms[t];
    if (!(term.weight > 0.0)) {
      throw Error(ErrorKind::BadWeights, "weight " + std::to_string(t) + " is not positive");
    }
    if (term.rhoA.rows() != dA || term.rhoB.rows() != dB) {
      throw Error(ErrorKind::DimensionMismatch, "term " + std::to_string(t) + " has inconsistent local dimensions");
    }
    const auto local_ok = [tol](const CMat& loc) {
      if (loc.rows() != loc.cols()) return false;
      if (hermitian_deviation(loc) > tol) return false;
      if (std::abs(loc.trace() - Complex(1.0, 0.0)) > tol) return false;
      return min_eigenvalue(loc, tol) >= -tol;
    };
    if (!local_ok(term.rhoA) || !local_ok(term.rhoB)) {
      throw Error(ErrorKind::DimensionMismatch, "term " + std::to_string(t) + " local operator is not a state");
    }
    total += term.weight;
    m += term.weight * kron(term.rhoA, term.rhoB);
  }
  if (std::abs(total - 1.0) > tol) {
    std::ostringstream os;
    os << "weights sum to " << total << ", expected 1";
    throw Error(ErrorKind::BadWeights, os.str());
  }
  return validate_density(m, {dA, dB}, tol);
}

/// Qubit state (I + a.sigma) / 2.
inline CMat bloch_state(const Eigen::Vector3d& a) { return 0.5 * (pauli::identity() + pauli::dot(a)); }

}  // namespace sepcheck
