#pragma once

// Seeded random states. Each call owns its generator, so results depend only
// on the arguments.

#include <cstdint>
#include <random>
#include <vector>

#include "sepcheck/states.hpp"

namespace sepcheck {

using Seed = std::uint64_t;

/// splitmix64 finalizer; derives independent per-sample seeds from one seed.
constexpr Seed mix_seed(Seed seed, Seed stream) {
  Seed z = seed + 0x9E3779B97F4A7C15ULL * (stream + 1);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

namespace detail {

inline CVec gaussian_vector(int n, std::mt19937_64& rng) {
  std::normal_distribution<double> normal(0.0, 1.0);
  CVec v(n);
  for (int i = 0; i < n; ++i) {
    const double re = normal(rng);
    const double im = normal(rng);
    v(i) = Complex(re, im);
  }
  return v;
}

inline CVec haar_vector(int n, std::mt19937_64& rng) {
  CVec v = gaussian_vector(n, rng);
  return v / v.norm();
}

}  // namespace detail

inline PureState random_pure(const BipartiteDims& dims, Seed seed) {
  check_dims(dims);
  std::mt19937_64 rng(seed);
  return make_pure_state(detail::haar_vector(dims.total(), rng), dims);
}

/// Product of two independent Haar-random local vectors.
inline PureState random_product_pure(const BipartiteDims& dims, Seed seed) {
  check_dims(dims);
  std::mt19937_64 rng(seed);
  const CVec a = detail::haar_vector(dims.dA, rng);
  const CVec b = detail::haar_vector(dims.dB, rng);
  return make_pure_state(kron(a, b), dims);
}

/// rho = G G^dagger / Tr(G G^dagger) with G a complex Gaussian n x rank matrix.
inline DensityMatrix random_mixed(const BipartiteDims& dims, int rank, Seed seed) {
  check_dims(dims);
  if (rank < 1 || rank > dims.total()) {
    throw Error(ErrorKind::OutOfRange, "rank " + std::to_string(rank) + " outside [1, " +
                                           std::to_string(dims.total()) + "]");
  }
  std::mt19937_64 rng(seed);
  CMat g(dims.total(), rank);
  for (int c = 0; c < rank; ++c) g.col(c) = detail::gaussian_vector(dims.total(), rng);
  CMat m = g * g.adjoint();
  m /= m.trace().real();
  m = 0.5 * (m + m.adjoint());
  return validate_density(m, dims);
}

struct SeparableSample {
  std::vector<double> weights;
  std::vector<CVec> localA;  // unit vectors
  std::vector<CVec> localB;

  std::vector<MixtureTerm> terms() const {
    std::vector<MixtureTerm> out;
    for (std::size_t i = 0; i < weights.size(); ++i) {
      out.push_back({weights[i], localA[i] * localA[i].adjoint(), localB[i] * localB[i].adjoint()});
    }
    return out;
  }
};

/// Weights are flat-Dirichlet (normalized unit exponentials); each term is a
/// product of Haar-random local pure states.
inline SeparableSample random_separable_sample(const BipartiteDims& dims, int terms, Seed seed) {
  check_dims(dims);
  if (terms < 1) throw Error(ErrorKind::OutOfRange, "need at least one term");
  std::mt19937_64 rng(seed);
  std::exponential_distribution<double> expo(1.0);
  SeparableSample out;
  double total = 0.0;
  for (int t = 0; t < terms; ++t) {
    // Strictly positive so that every weight survives normalization.
    const double w = expo(rng) + 1e-12;
    out.weights.push_back(w);
    total += w;
    out.localA.push_back(detail::haar_vector(dims.dA, rng));
    out.localB.push_back(detail::haar_vector(dims.dB, rng));
  }
  for (double& w : out.weights) w /= total;
  return out;
}

inline DensityMatrix random_separable(const BipartiteDims& dims, int terms, Seed seed) {
  const SeparableSample sample = random_separable_sample(dims, terms, seed);
  CMat m = CMat::Zero(dims.total(), dims.total());
  for (std::size_t i = 0; i < sample.weights.size(); ++i) {
    const CVec v = kron(sample.localA[i], sample.localB[i]);
    m += sample.weights[i] * v * v.adjoint();
  }
  m = 0.5 * (m + m.adjoint());
  m /= m.trace().real();
  return validate_density(m, dims);
}

}  // namespace sepcheck
