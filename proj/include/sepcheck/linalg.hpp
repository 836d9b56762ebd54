#pragma once

// Dense complex matrix primitives for small bipartite operators.
//
// Index convention: a bipartite basis state |i>|mu> (i on A, mu on B) maps to
// the flat index i * dB + mu. All operations return new matrices.

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <complex>
#include <limits>
#include <sstream>
#include <vector>

#include "sepcheck/error.hpp"

namespace sepcheck {

using Complex = std::complex<double>;
using CMat = Eigen::MatrixXcd;
using CVec = Eigen::VectorXcd;
using RVec = Eigen::VectorXd;
using RMat = Eigen::MatrixXd;

/// Shared numeric tolerance for Hermiticity, positivity and verdicts.
inline constexpr double kTol = 1e-9;

enum class Side { A, B };

struct BipartiteDims {
  int dA = 2;
  int dB = 2;

  int total() const { return dA * dB; }
  bool operator==(const BipartiteDims&) const = default;
};

inline void check_dims(const BipartiteDims& dims) {
  if (dims.dA < 2 || dims.dB < 2) {
    throw Error(ErrorKind::OutOfRange, "subsystem dimensions must be >= 2, got (" +
                                           std::to_string(dims.dA) + "," + std::to_string(dims.dB) + ")");
  }
}

inline void check_square_bipartite(const CMat& m, const BipartiteDims& dims) {
  check_dims(dims);
  if (m.rows() != m.cols() || m.rows() != dims.total()) {
    std::ostringstream os;
    os << "expected " << dims.total() << "x" << dims.total() << " matrix for dims (" << dims.dA << ","
       << dims.dB << "), got " << m.rows() << "x" << m.cols();
    throw Error(ErrorKind::DimensionMismatch, os.str());
  }
}

namespace pauli {

inline CMat identity() { return CMat::Identity(2, 2); }

inline CMat x() {
  CMat m(2, 2);
  m << 0, 1, 1, 0;
  return m;
}

inline CMat y() {
  CMat m(2, 2);
  m << 0, Complex(0, -1), Complex(0, 1), 0;
  return m;
}

inline CMat z() {
  CMat m(2, 2);
  m << 1, 0, 0, -1;
  return m;
}

/// (sigma_x, sigma_y, sigma_z), in that order.
inline std::vector<CMat> all() { return {x(), y(), z()}; }

/// n . sigma for a real 3-vector n.
inline CMat dot(const Eigen::Vector3d& n) { return n(0) * x() + n(1) * y() + n(2) * z(); }

}  // namespace pauli

inline CMat kron(const CMat& a, const CMat& b) {
  CMat out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i) {
    for (Eigen::Index j = 0; j < a.cols(); ++j) {
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
    }
  }
  return out;
}

inline CVec kron(const CVec& a, const CVec& b) {
  CVec out(a.size() * b.size());
  for (Eigen::Index i = 0; i < a.size(); ++i) out.segment(i * b.size(), b.size()) = a(i) * b;
  return out;
}

/// Largest entry-wise deviation |h - h^dagger|.
inline double hermitian_deviation(const CMat& h) {
  if (h.rows() != h.cols()) return std::numeric_limits<double>::infinity();
  return (h - h.adjoint()).cwiseAbs().maxCoeff();
}

inline bool all_finite(const CMat& m) {
  for (Eigen::Index i = 0; i < m.size(); ++i) {
    const Complex v = m.data()[i];
    if (!std::isfinite(v.real()) || !std::isfinite(v.imag())) return false;
  }
  return true;
}

inline void require_hermitian(const CMat& h, double tol_herm = kTol) {
  if (h.rows() != h.cols()) {
    throw Error(ErrorKind::DimensionMismatch, "matrix is not square");
  }
  const double dev = hermitian_deviation(h);
  if (!(dev <= tol_herm)) {
    std::ostringstream os;
    os << "max |h - h^dagger| entry is " << dev << " (tolerance " << tol_herm << ")";
    throw Error(ErrorKind::NotHermitian, os.str());
  }
}

struct EigenDecomposition {
  RVec values;   // ascending
  CMat vectors;  // columns are orthonormal eigenvectors
};

inline EigenDecomposition eig_hermitian(const CMat& h, double tol_herm = kTol) {
  require_hermitian(h, tol_herm);
  // Symmetrize so that round-off in the lower triangle cannot leak in.
  const CMat sym = 0.5 * (h + h.adjoint());
  Eigen::SelfAdjointEigenSolver<CMat> solver(sym);
  return {solver.eigenvalues(), solver.eigenvectors()};
}

inline RVec eigenvalues_hermitian(const CMat& h, double tol_herm = kTol) {
  require_hermitian(h, tol_herm);
  const CMat sym = 0.5 * (h + h.adjoint());
  return Eigen::SelfAdjointEigenSolver<CMat>(sym, Eigen::EigenvaluesOnly).eigenvalues();
}

inline double min_eigenvalue(const CMat& h, double tol_herm = kTol) {
  return eigenvalues_hermitian(h, tol_herm).minCoeff();
}

/// Singular values in descending order, min(rows, cols) of them.
inline RVec singular_values(const CMat& m) {
  if (m.size() == 0) return RVec();
  Eigen::JacobiSVD<CMat> svd(m);
  return svd.singularValues();
}

inline double trace_norm(const CMat& m) { return m.size() == 0 ? 0.0 : singular_values(m).sum(); }

inline double trace_norm(const RMat& m) {
  if (m.size() == 0) return 0.0;
  return Eigen::JacobiSVD<RMat>(m).singularValues().sum();
}

inline CMat sqrt_psd(const CMat& h, double tol_psd = kTol, double tol_herm = kTol) {
  const EigenDecomposition eig = eig_hermitian(h, tol_herm);
  const double lowest = eig.values.size() ? eig.values.minCoeff() : 0.0;
  if (lowest < -tol_psd) {
    std::ostringstream os;
    os << "min eigenvalue " << lowest << " below -" << tol_psd;
    throw Error(ErrorKind::NotPSD, os.str());
  }
  RVec roots = eig.values.unaryExpr([](double v) { return v > 0.0 ? std::sqrt(v) : 0.0; });
  return eig.vectors * roots.cast<Complex>().asDiagonal() * eig.vectors.adjoint();
}

inline CMat partial_transpose(const CMat& rho, const BipartiteDims& dims, Side side) {
  check_square_bipartite(rho, dims);
  const int dA = dims.dA, dB = dims.dB;
  CMat out(rho.rows(), rho.cols());
  for (int i = 0; i < dA; ++i)
    for (int mu = 0; mu < dB; ++mu)
      for (int j = 0; j < dA; ++j)
        for (int nu = 0; nu < dB; ++nu) {
          const Complex v = side == Side::A ? rho(j * dB + mu, i * dB + nu) : rho(i * dB + nu, j * dB + mu);
          out(i * dB + mu, j * dB + nu) = v;
        }
  return out;
}

/// Reduced operator on the kept subsystem.
inline CMat partial_trace(const CMat& rho, const BipartiteDims& dims, Side keep) {
  check_square_bipartite(rho, dims);
  const int dA = dims.dA, dB = dims.dB;
  if (keep == Side::A) {
    CMat out = CMat::Zero(dA, dA);
    for (int i = 0; i < dA; ++i)
      for (int j = 0; j < dA; ++j)
        for (int mu = 0; mu < dB; ++mu) out(i, j) += rho(i * dB + mu, j * dB + mu);
    return out;
  }
  CMat out = CMat::Zero(dB, dB);
  for (int mu = 0; mu < dB; ++mu)
    for (int nu = 0; nu < dB; ++nu)
      for (int i = 0; i < dA; ++i) out(mu, nu) += rho(i * dB + mu, i * dB + nu);
  return out;
}

/// Realigned (reshuffled) matrix of shape dA^2 x dB^2:
/// R[(i,j),(k,l)] = rho[(i,k),(j,l)].
inline CMat realign(const CMat& rho, const BipartiteDims& dims) {
  check_square_bipartite(rho, dims);
  const int dA = dims.dA, dB = dims.dB;
  CMat out(dA * dA, dB * dB);
  for (int i = 0; i < dA; ++i)
    for (int j = 0; j < dA; ++j)
      for (int k = 0; k < dB; ++k)
        for (int l = 0; l < dB; ++l) out(i * dA + j, k * dB + l) = rho(i * dB + k, j * dB + l);
  return out;
}

/// Swap operator V|a>|b> = |b>|a> on C^d (x) C^d.
inline CMat swap_operator(int d) {
  CMat v = CMat::Zero(d * d, d * d);
  for (int a = 0; a < d; ++a)
    for (int b = 0; b < d; ++b) v(b * d + a, a * d + b) = 1.0;
  return v;
}

}  // namespace sepcheck
