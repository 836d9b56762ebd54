#pragma once

// Qubit SIC-POVM and the correlation-matrix test built on it.

#include <cmath>
#include <vector>

#include "sepcheck/states.hpp"
#include "sepcheck/verdict.hpp"

namespace sepcheck {

/// d^2 subnormalized rank-one projectors Pi_k = |psi_k><psi_k| / d.
struct SicPovm {
  int d = 0;
  std::vector<CMat> projectors;
};

/// Bloch directions of the regular tetrahedron used for the qubit SIC.
inline std::vector<Eigen::Vector3d> tetrahedron_directions() {
  const double s = 1.0 / std::sqrt(3.0);
  return {Eigen::Vector3d(s, s, s), Eigen::Vector3d(s, -s, -s), Eigen::Vector3d(-s, s, -s),
          Eigen::Vector3d(-s, -s, s)};
}

inline SicPovm sic_povm(int d) {
  if (d != 2) throw Error(ErrorKind::UnsupportedDims, "SIC-POVM only built for d = 2, got " + std::to_string(d));
  SicPovm sic{2, {}};
  for (const Eigen::Vector3d& n : tetrahedron_directions()) {
    sic.projectors.push_back(0.25 * (pauli::identity() + pauli::dot(n)));
  }
  return sic;
}

/// Scale turning Pi_k into E_k = sqrt(d(d+1)/2) Pi_k; with it every pure
/// qubit state has sum_k Tr(E_k rho)^2 = 1.
inline double sic_normalization(int d) { return std::sqrt(d * (d + 1) / 2.0); }

/// [P]_kl = Tr(E_k^A (x) E_l^B rho)
inline RMat sic_correlations(const DensityMatrix& rho, const SicPovm& sicA, const SicPovm& sicB) {
  if (sicA.d != rho.dims().dA || sicB.d != rho.dims().dB) {
    throw Error(ErrorKind::DimensionMismatch, "SIC dimensions do not match the state");
  }
  const double scale = sic_normalization(sicA.d) * sic_normalization(sicB.d);
  RMat p(sicA.projectors.size(), sicB.projectors.size());
  for (std::size_t k = 0; k < sicA.projectors.size(); ++k)
    for (std::size_t l = 0; l < sicB.projectors.size(); ++l)
      p(k, l) = scale * (kron(sicA.projectors[k], sicB.projectors[l]) * rho.mat()).trace().real();
  return p;
}

inline CriterionVerdict esic(const DensityMatrix& rho, const SicPovm& sicA, const SicPovm& sicB,
                             double tol = kTol) {
  const double norm = trace_norm(sic_correlations(rho, sicA, sicB));
  return {"esic", norm, 1.0, norm > 1.0 + tol ? Verdict::Entangled : Verdict::Inconclusive, ""};
}

inline CriterionVerdict esic(const DensityMatrix& rho, double tol = kTol) {
  return esic(rho, sic_povm(rho.dims().dA), sic_povm(rho.dims().dB), tol);
}

}  // namespace sepcheck
