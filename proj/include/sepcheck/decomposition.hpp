#pragma once

// Constructive separability certificates for two qubits: weights p_i and
// local Bloch vectors a_i, b_i with
//   sum p_i a_i = r,  sum p_i b_i = s,  sum p_i a_i b_i^T = tau.

#include <algorithm>
#include <cmath>
#include <numeric>
#include <optional>
#include <random>
#include <sstream>
#include <vector>

#include "sepcheck/random_states.hpp"
#include "sepcheck/states.hpp"

namespace sepcheck {

struct LiQiaoCandidate {
  std::vector<double> weights;
  std::vector<Eigen::Vector3d> bloch_a;
  std::vector<Eigen::Vector3d> bloch_b;

  std::size_t size() const { return weights.size(); }
};

struct Residuals {
  double dr = 0.0;    // |sum p a - r|
  double ds = 0.0;    // |sum p b - s|
  double dtau = 0.0;  // Frobenius norm of sum p a b^T - tau

  double max() const { return std::max({dr, ds, dtau}); }
};

inline constexpr double kCertificateTol = 1e-6;
inline constexpr int kDefaultTerms = 16;
inline constexpr int kDefaultSearchRestarts = 8;
inline constexpr int kDefaultSearchIterations = 5000;

inline void validate_candidate(const LiQiaoCandidate& cand, double tol = kTol) {
  const std::size_t n = cand.weights.size();
  if (n == 0) throw Error(ErrorKind::InvalidCandidate, "candidate has no terms");
  if (cand.bloch_a.size() != n || cand.bloch_b.size() != n) {
    throw Error(ErrorKind::InvalidCandidate, "weights, bloch_a and bloch_b lengths differ");
  }
  double total = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    if (!(cand.weights[i] > 0.0)) {
      throw Error(ErrorKind::InvalidCandidate, "weight " + std::to_string(i) + " is not positive");
    }
    total += cand.weights[i];
    if (!(cand.bloch_a[i].norm() <= 1.0 + tol)) {
      throw Error(ErrorKind::InvalidCandidate, "bloch_a " + std::to_string(i) + " lies outside the unit ball");
    }
    if (!(cand.bloch_b[i].norm() <= 1.0 + tol)) {
      throw Error(ErrorKind::InvalidCandidate, "bloch_b " + std::to_string(i) + " lies outside the unit ball");
    }
  }
  if (std::abs(total - 1.0) > tol) {
    std::ostringstream os;
    os << "weights sum to " << total << ", expected 1";
    throw Error(ErrorKind::InvalidCandidate, os.str());
  }
}

namespace detail {

struct Moments {
  Eigen::Vector3d r = Eigen::Vector3d::Zero();
  Eigen::Vector3d s = Eigen::Vector3d::Zero();
  Eigen::Matrix3d tau = Eigen::Matrix3d::Zero();
};

inline Moments candidate_moments(const LiQiaoCandidate& cand) {
  Moments m;
  for (std::size_t i = 0; i < cand.size(); ++i) {
    m.r += cand.weights[i] * cand.bloch_a[i];
    m.s += cand.weights[i] * cand.bloch_b[i];
    m.tau += cand.weights[i] * cand.bloch_a[i] * cand.bloch_b[i].transpose();
  }
  return m;
}

inline Residuals residuals_against(const LiQiaoCandidate& cand, const FanoForm& target) {
  const Moments m = candidate_moments(cand);
  return {(m.r - target.r).norm(), (m.s - target.s).norm(), (m.tau - target.tau).norm()};
}

}  // namespace detail

inline Residuals liqiao_verify(const LiQiaoCandidate& cand, const DensityMatrix& rho) {
  require_two_qubits(rho.dims(), "liqiao_verify");
  validate_candidate(cand);
  return detail::residuals_against(cand, fano_decompose(rho));
}

inline bool certifies(const Residuals& res, double tol = kCertificateTol) { return res.max() <= tol; }

/// sum_i p_i (I + a_i.sigma)/2 (x) (I + b_i.sigma)/2
inline CMat recompose(const LiQiaoCandidate& cand) {
  CMat m = CMat::Zero(4, 4);
  for (std::size_t i = 0; i < cand.size(); ++i) {
    m += cand.weights[i] * kron(bloch_state(cand.bloch_a[i]), bloch_state(cand.bloch_b[i]));
  }
  return m;
}

// --- Search ----------------------------------------------------------------

struct SearchResult {
  std::optional<LiQiaoCandidate> certificate;
  LiQiaoCandidate best;  // lowest-residual candidate found, certified or not
  Residuals best_residuals;
  int restarts_run = 0;
};

struct SearchOptions {
  int terms = kDefaultTerms;
  int max_iters = kDefaultSearchIterations;
  int restarts = kDefaultSearchRestarts;
  Seed seed = 0;
};

namespace detail {

/// Euclidean projection onto the probability simplex.
inline void project_simplex(Eigen::VectorXd& p) {
  Eigen::VectorXd sorted = p;
  std::sort(sorted.data(), sorted.data() + sorted.size(), std::greater<>());
  double cumulative = 0.0, shift = 0.0;
  for (Eigen::Index k = 0; k < sorted.size(); ++k) {
    cumulative += sorted(k);
    const double candidate = (cumulative - 1.0) / static_cast<double>(k + 1);
    if (sorted(k) - candidate > 0.0) shift = candidate;
  }
  p = (p.array() - shift).max(0.0);
}

inline void clip_to_ball(Eigen::Vector3d& v) {
  const double n = v.norm();
  if (n > 1.0) v /= n;
}

/// Flat optimizer state: weights plus 3x L matrices of Bloch columns.
struct Params {
  Eigen::VectorXd p;
  Eigen::Matrix3Xd a;
  Eigen::Matrix3Xd b;
};

struct Gradient {
  Eigen::VectorXd p;
  Eigen::Matrix3Xd a;
  Eigen::Matrix3Xd b;
};

struct Errors {
  Eigen::Vector3d er;
  Eigen::Vector3d es;
  Eigen::Matrix3d et;

  double objective() const { return er.squaredNorm() + es.squaredNorm() + et.squaredNorm(); }
};

inline Errors errors(const Params& x, const FanoForm& target) {
  Errors e;
  e.er = x.a * x.p - target.r;
  e.es = x.b * x.p - target.s;
  e.et = x.a * x.p.asDiagonal() * x.b.transpose() - target.tau;
  return e;
}

inline Gradient gradient(const Params& x, const Errors& e) {
  Gradient g;
  const Eigen::Index n = x.p.size();
  g.p.resize(n);
  g.a.resize(3, n);
  g.b.resize(3, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    const Eigen::Vector3d ai = x.a.col(i), bi = x.b.col(i);
    g.p(i) = 2.0 * (e.er.dot(ai) + e.es.dot(bi) + ai.dot(e.et * bi));
    g.a.col(i) = 2.0 * x.p(i) * (e.er + e.et * bi);
    g.b.col(i) = 2.0 * x.p(i) * (e.es + e.et.transpose() * ai);
  }
  return g;
}

/// Projected step. Bloch-vector gradients scale with p_i, so they are divided
/// by the weight (floored) to balance the blocks.
inline Params projected_step(const Params& x, const Gradient& g, double step) {
  Params y = x;
  y.p -= step * g.p;
  project_simplex(y.p);
  for (Eigen::Index i = 0; i < x.p.size(); ++i) {
    const double scale = step / std::max(x.p(i), 1e-3);
    Eigen::Vector3d ai = x.a.col(i) - scale * g.a.col(i);
    Eigen::Vector3d bi = x.b.col(i) - scale * g.b.col(i);
    clip_to_ball(ai);
    clip_to_ball(bi);
    y.a.col(i) = ai;
    y.b.col(i) = bi;
  }
  return y;
}

inline LiQiaoCandidate to_candidate(const Params& x) {
  LiQiaoCandidate cand;
  double total = 0.0;
  for (Eigen::Index i = 0; i < x.p.size(); ++i) total += x.p(i) > 0.0 ? x.p(i) : 0.0;
  for (Eigen::Index i = 0; i < x.p.size(); ++i) {
    if (!(x.p(i) > 0.0)) continue;  // zero-weight terms do not contribute
    cand.weights.push_back(x.p(i) / total);
    cand.bloch_a.push_back(x.a.col(i));
    cand.bloch_b.push_back(x.b.col(i));
  }
  return cand;
}

inline Eigen::Vector3d random_in_ball(std::mt19937_64& rng) {
  std::normal_distribution<double> normal(0.0, 1.0);
  std::uniform_real_distribution<double> uniform(0.0, 1.0);
  Eigen::Vector3d v(normal(rng), normal(rng), normal(rng));
  const double n = v.norm();
  if (n < 1e-12) return Eigen::Vector3d::Zero();
  return v / n * std::cbrt(uniform(rng));
}

/// One descent run; returns the final iterate.
inline Params descend(Params x, const FanoForm& target, int max_iters, double stop_at) {
  double step = 1.0;
  Errors e = errors(x, target);
  double f = e.objective();
  for (int iter = 0; iter < max_iters; ++iter) {
    if (std::sqrt(f) <= stop_at) break;
    const Gradient g = gradient(x, e);
    bool moved = false;
    for (int tries = 0; tries < 60; ++tries) {
      Params y = projected_step(x, g, step);
      const Errors ey = errors(y, target);
      const double fy = ey.objective();
      // Sufficient decrease measured along the realized (projected) move.
      const double linear = g.p.dot(y.p - x.p) + (g.a.cwiseProduct(y.a - x.a)).sum() +
                            (g.b.cwiseProduct(y.b - x.b)).sum();
      if (fy <= f + 0.5 * linear && fy < f) {
        x = std::move(y);
        e = ey;
        f = fy;
        moved = true;
        step = std::min(step * 2.0, 1e3);
        break;
      }
      step *= 0.5;
    }
    if (!moved) break;
  }
  return x;
}

}  // namespace detail

/// Projected-gradient search for a certificate. Restarts run in order and
/// stop at the first certificate; otherwise the lowest residual wins, ties
/// going to the earlier restart. Failure is never evidence of entanglement.
inline SearchResult liqiao_search(const DensityMatrix& rho, const SearchOptions& options = {}) {
  require_two_qubits(rho.dims(), "liqiao_search");
  if (options.terms < 1) throw Error(ErrorKind::OutOfRange, "number of terms must be >= 1");
  if (options.max_iters < 1 || options.restarts < 1) {
    throw Error(ErrorKind::OutOfRange, "iterations and restarts must be >= 1");
  }
  const FanoForm target = fano_decompose(rho);
  const int n = options.terms;

  SearchResult result;
  double best_score = std::numeric_limits<double>::infinity();
  for (int restart = 0; restart < options.restarts; ++restart) {
    std::mt19937_64 rng(mix_seed(options.seed, static_cast<Seed>(restart)));
    detail::Params x{Eigen::VectorXd::Constant(n, 1.0 / n), Eigen::Matrix3Xd(3, n), Eigen::Matrix3Xd(3, n)};
    for (int i = 0; i < n; ++i) {
      x.a.col(i) = detail::random_in_ball(rng);
      x.b.col(i) = detail::random_in_ball(rng);
    }
    // Polish well past the certificate tolerance so returned residuals are tiny.
    x = detail::descend(std::move(x), target, options.max_iters, 1e-10);
    ++result.restarts_run;

    LiQiaoCandidate cand = detail::to_candidate(x);
    const Residuals res = detail::residuals_against(cand, target);
    if (res.max() < best_score) {
      best_score = res.max();
      result.best = cand;
      result.best_residuals = res;
    }
    if (certifies(res)) {
      validate_candidate(cand);
      result.certificate = std::move(cand);
      break;
    }
  }
  return result;
}

}  // namespace sepcheck
