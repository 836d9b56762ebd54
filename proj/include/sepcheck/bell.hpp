#pragma once

// CHSH expectation values and their maximization over qubit observables.

#include <array>
#include <cmath>
#include <random>
#include <sstream>

#include "sepcheck/random_states.hpp"
#include "sepcheck/states.hpp"
#include "sepcheck/verdict.hpp"

namespace sepcheck {

/// Hermitian 2x2 observable with eigenvalues +-1.
class Dichotomic {
 public:
  explicit Dichotomic(const CMat& m, double tol = kTol) : matrix_(m) {
    if (m.rows() != 2 || m.cols() != 2) {
      throw Error(ErrorKind::NotDichotomic, "observable must be 2x2");
    }
    if (hermitian_deviation(m) > tol) throw Error(ErrorKind::NotDichotomic, "observable is not Hermitian");
    const RVec ev = eigenvalues_hermitian(m, tol);
    for (Eigen::Index i = 0; i < ev.size(); ++i) {
      if (std::abs(std::abs(ev(i)) - 1.0) > tol) {
        std::ostringstream os;
        os << "eigenvalue " << ev(i) << " is not +-1";
        throw Error(ErrorKind::NotDichotomic, os.str());
      }
    }
  }

  /// n . sigma for a unit Bloch direction n.
  static Dichotomic along(const Eigen::Vector3d& n) { return Dichotomic(pauli::dot(n.normalized())); }

  const CMat& matrix() const { return matrix_; }

 private:
  CMat matrix_;
};

inline const double kTsirelson = 2.0 * std::sqrt(2.0);

/// Tr(rho (A(x)B + A(x)B' + A'(x)B - A'(x)B'))
inline double chsh_expectation(const DensityMatrix& rho, const Dichotomic& a, const Dichotomic& a2,
                               const Dichotomic& b, const Dichotomic& b2) {
  require_two_qubits(rho.dims(), "chsh_value");
  const CMat op = kron(a.matrix(), b.matrix()) + kron(a.matrix(), b2.matrix()) + kron(a2.matrix(), b.matrix()) -
                  kron(a2.matrix(), b2.matrix());
  return (rho.mat() * op).trace().real();
}

inline CriterionVerdict chsh_value(const DensityMatrix& rho, const Dichotomic& a, const Dichotomic& a2,
                                   const Dichotomic& b, const Dichotomic& b2, double tol = kTol) {
  const double value = chsh_expectation(rho, a, a2, b, b2);
  return {"chsh", value, 2.0, std::abs(value) > 2.0 + tol ? Verdict::Entangled : Verdict::Inconclusive, ""};
}

struct ChshSettings {
  Eigen::Vector3d a, a2, b, b2;  // unit Bloch directions
};

struct ChshOptimum {
  CriterionVerdict verdict;
  ChshSettings settings;
};

inline constexpr int kDefaultChshRestarts = 32;

namespace detail {

inline Eigen::Vector3d random_unit3(std::mt19937_64& rng) {
  std::normal_distribution<double> normal(0.0, 1.0);
  Eigen::Vector3d v;
  do {
    v = Eigen::Vector3d(normal(rng), normal(rng), normal(rng));
  } while (v.norm() < 1e-8);
  return v.normalized();
}

inline void assign_direction(Eigen::Vector3d& target, const Eigen::Vector3d& gradient) {
  const double n = gradient.norm();
  if (n > 1e-300) target = gradient / n;
}

inline double chsh_bloch_value(const Eigen::Matrix3d& t, const ChshSettings& s) {
  return s.a.dot(t * (s.b + s.b2)) + s.a2.dot(t * (s.b - s.b2));
}

}  // namespace detail

/// Coordinate ascent over the four Bloch directions. With correlation matrix
/// T the CHSH value is a.T(b+b') + a'.T(b-b'), linear in each direction, so
/// every block update is the normalized gradient.
inline ChshOptimum chsh_optimize(const DensityMatrix& rho, int restarts = kDefaultChshRestarts, Seed seed = 0,
                                 double tol = kTol) {
  require_two_qubits(rho.dims(), "chsh_optimize");
  if (restarts < 1) throw Error(ErrorKind::OutOfRange, "restarts must be >= 1");
  const Eigen::Matrix3d t = fano_decompose(rho).tau;
  std::mt19937_64 rng(seed);

  ChshSettings best{};
  double best_value = -std::numeric_limits<double>::infinity();
  for (int r = 0; r < restarts; ++r) {
    ChshSettings s{detail::random_unit3(rng), detail::random_unit3(rng), detail::random_unit3(rng),
                   detail::random_unit3(rng)};
    double value = detail::chsh_bloch_value(t, s);
    for (int iter = 0; iter < 500; ++iter) {
      detail::assign_direction(s.a, t * (s.b + s.b2));
      detail::assign_direction(s.a2, t * (s.b - s.b2));
      detail::assign_direction(s.b, t.transpose() * (s.a + s.a2));
      detail::assign_direction(s.b2, t.transpose() * (s.a - s.a2));
      const double next = detail::chsh_bloch_value(t, s);
      const bool stalled = next - value <= 1e-15;
      value = next;
      if (stalled) break;
    }
    if (value > best_value) {
      best_value = value;
      best = s;
    }
  }

  const double value = chsh_expectation(rho, Dichotomic::along(best.a), Dichotomic::along(best.a2),
                                         Dichotomic::along(best.b), Dichotomic::along(best.b2));
  std::ostringstream os;
  os.precision(12);
  os << "a=(" << best.a.transpose() << ") a'=(" << best.a2.transpose() << ") b=(" << best.b.transpose()
     << ") b'=(" << best.b2.transpose() << ")";
  return {{"chsh", value, 2.0, std::abs(value) > 2.0 + tol ? Verdict::Entangled : Verdict::Inconclusive, os.str()},
          best};
}

}  // namespace sepcheck
