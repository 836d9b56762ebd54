#pragma once

// Family sweeps, threshold bisection and randomized audits against the PPT
// oracle.

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <map>
#include <numbers>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "sepcheck/bell.hpp"
#include "sepcheck/criteria.hpp"
#include "sepcheck/operators.hpp"
#include "sepcheck/random_states.hpp"
#include "sepcheck/sic.hpp"

namespace sepcheck {

// --- Criterion registry ----------------------------------------------------

enum class CriterionId {
  Ppt,
  Reduction,
  Concurrence,
  Majorization,
  Ccnr,
  CorrelationMatrix,
  Esic,
  Chsh,
  Lur,
  Witness,
  Schmidt,
  Entropy,
  ConcurrencePure,
};

inline const std::vector<CriterionId>& all_criteria() {
  static const std::vector<CriterionId> ids = {
      CriterionId::Ppt,     CriterionId::Reduction, CriterionId::Concurrence, CriterionId::Majorization,
      CriterionId::Ccnr,    CriterionId::CorrelationMatrix, CriterionId::Esic, CriterionId::Chsh,
      CriterionId::Lur,     CriterionId::Witness,   CriterionId::Schmidt,     CriterionId::Entropy,
      CriterionId::ConcurrencePure};
  return ids;
}

inline std::string criterion_name(CriterionId id) {
  switch (id) {
    case CriterionId::Ppt: return "ppt";
    case CriterionId::Reduction: return "reduction";
    case CriterionId::Concurrence: return "concurrence";
    case CriterionId::Majorization: return "majorization";
    case CriterionId::Ccnr: return "ccnr";
    case CriterionId::CorrelationMatrix: return "correlation_matrix";
    case CriterionId::Esic: return "esic";
    case CriterionId::Chsh: return "chsh";
    case CriterionId::Lur: return "lur";
    case CriterionId::Witness: return "witness";
    case CriterionId::Schmidt: return "schmidt";
    case CriterionId::Entropy: return "entropy";
    case CriterionId::ConcurrencePure: return "concurrence_pure";
  }
  return "";
}

inline CriterionId parse_criterion(const std::string& name) {
  for (CriterionId id : all_criteria()) {
    if (criterion_name(id) == name) return id;
  }
  throw Error(ErrorKind::OutOfRange, "unknown criterion \"" + name + "\"");
}

inline bool pure_only(CriterionId id) {
  return id == CriterionId::Schmidt || id == CriterionId::Entropy || id == CriterionId::ConcurrencePure;
}

/// Criteria whose non-violation certifies separability at these dims.
inline bool exact_for(CriterionId id, const BipartiteDims& dims) {
  switch (id) {
    case CriterionId::Ppt:
    case CriterionId::Reduction: return detail::low_dimensional(dims);
    case CriterionId::Concurrence:
    case CriterionId::ConcurrencePure: return dims == BipartiteDims{2, 2};
    case CriterionId::Schmidt:
    case CriterionId::Entropy: return true;
    default: return false;
  }
}

inline bool applicable(CriterionId id, const BipartiteDims& dims, bool have_pure) {
  if (pure_only(id) && !have_pure) return false;
  const bool qubits = dims == BipartiteDims{2, 2};
  switch (id) {
    case CriterionId::Concurrence:
    case CriterionId::ConcurrencePure:
    case CriterionId::CorrelationMatrix:
    case CriterionId::Esic:
    case CriterionId::Chsh:
    case CriterionId::Lur: return qubits;
    case CriterionId::Witness: return dims.dA == dims.dB;
    default: return true;
  }
}

struct EvalOptions {
  double tol = kTol;
  Seed seed = 0;
  int chsh_restarts = kDefaultChshRestarts;
};

inline CriterionVerdict evaluate(CriterionId id, const DensityMatrix& rho, const PureState* pure,
                                 const EvalOptions& options = {}) {
  const double tol = options.tol;
  if (pure_only(id) && pure == nullptr) {
    throw Error(ErrorKind::OutOfRange, criterion_name(id) + " needs a pure-state input");
  }
  switch (id) {
    case CriterionId::Ppt: return ppt(rho, tol);
    case CriterionId::Reduction: return reduction(rho, tol);
    case CriterionId::Concurrence: return concurrence_mixed(rho, tol);
    case CriterionId::Majorization: return majorization(rho, tol);
    case CriterionId::Ccnr: return ccnr(rho, tol);
    case CriterionId::CorrelationMatrix: return correlation_matrix(rho, tol);
    case CriterionId::Esic: return esic(rho, tol);
    case CriterionId::Chsh: return chsh_optimize(rho, options.chsh_restarts, options.seed, tol).verdict;
    case CriterionId::Lur: return lur_default(rho, tol);
    case CriterionId::Witness: return swap_witness(rho, tol);
    case CriterionId::Schmidt: return schmidt_rank_criterion(*pure);
    case CriterionId::Entropy: return entanglement_entropy(*pure, tol);
    case CriterionId::ConcurrencePure: return concurrence_pure(*pure, tol);
  }
  throw Error(ErrorKind::OutOfRange, "unhandled criterion");
}

// --- Families --------------------------------------------------------------

enum class Family { Werner, RhoP, BellDiagonal, PureSchmidtAngle };

inline std::string family_name(Family f) {
  switch (f) {
    case Family::Werner: return "werner";
    case Family::RhoP: return "rho_p";
    case Family::BellDiagonal: return "bell_diagonal";
    case Family::PureSchmidtAngle: return "pure_schmidt_angle";
  }
  return "";
}

inline Family parse_family(const std::string& name) {
  for (Family f : {Family::Werner, Family::RhoP, Family::BellDiagonal, Family::PureSchmidtAngle}) {
    if (family_name(f) == name) return f;
  }
  throw Error(ErrorKind::OutOfRange, "unknown family \"" + name + "\"");
}

/// Bell-diagonal points are t = parameter * direction; the default direction
/// runs from the maximally mixed state (0) to the singlet (1).
struct FamilySpec {
  Family family = Family::Werner;
  std::vector<double> grid;
  Eigen::Vector3d direction = Eigen::Vector3d(-1.0, -1.0, -1.0);
};

/// Parameter interval used for bisection.
inline std::pair<double, double> family_range(Family f) {
  if (f == Family::PureSchmidtAngle) return {0.0, std::numbers::pi / 4.0};
  return {0.0, 1.0};
}

inline std::vector<double> linear_grid(double start, double stop, int steps) {
  if (steps < 1) throw Error(ErrorKind::OutOfRange, "grid needs at least one step");
  if (steps == 1) return {start};
  std::vector<double> out;
  for (int i = 0; i < steps; ++i) out.push_back(start + (stop - start) * i / (steps - 1));
  return out;
}

struct FamilyPoint {
  DensityMatrix rho;
  std::optional<PureState> pure;
};

inline FamilyPoint family_state(const FamilySpec& spec, double parameter) {
  switch (spec.family) {
    case Family::Werner: return {werner(parameter), std::nullopt};
    case Family::RhoP: return {rho_p_family(parameter), std::nullopt};
    case Family::BellDiagonal: {
      if (!(parameter >= 0.0)) throw Error(ErrorKind::OutOfRange, "bell_diagonal parameter must be >= 0");
      try {
        return {bell_diagonal(parameter * spec.direction), std::nullopt};
      } catch (const Error& e) {
        if (e.kind() != ErrorKind::NotPSD) throw;
        std::ostringstream os;
        os << "t = " << (parameter * spec.direction).transpose() << " lies outside the Bell-diagonal tetrahedron";
        throw Error(ErrorKind::OutOfRange, os.str());
      }
    }
    case Family::PureSchmidtAngle: {
      if (!(parameter >= 0.0 && parameter <= std::numbers::pi / 4.0 + 1e-15)) {
        throw Error(ErrorKind::OutOfRange, "theta must lie in [0, pi/4]");
      }
      PureState psi = pure_schmidt_angle(parameter);
      return {pure_to_density(psi), psi};
    }
  }
  throw Error(ErrorKind::OutOfRange, "unhandled family");
}

inline std::vector<CriterionId> applicable_criteria(const BipartiteDims& dims, bool have_pure) {
  std::vector<CriterionId> out;
  for (CriterionId id : all_criteria()) {
    if (applicable(id, dims, have_pure)) out.push_back(id);
  }
  return out;
}

inline std::vector<CriterionId> family_criteria(Family f) {
  return applicable_criteria({2, 2}, f == Family::PureSchmidtAngle);
}

// --- Sweeps ----------------------------------------------------------------

struct SweepRow {
  std::string family;
  double parameter = 0.0;
  std::string criterion;
  double statistic = 0.0;
  double threshold = 0.0;
  Verdict verdict = Verdict::Inconclusive;
};

struct SweepReport {
  std::vector<SweepRow> rows;
  /// Grid estimate of the Entangled/not-Entangled boundary per criterion,
  /// present only when the verdict flips exactly once along the grid.
  std::map<std::string, double> crossings;
};

inline SweepReport sweep(const FamilySpec& spec, const std::vector<CriterionId>& criteria,
                         const EvalOptions& options = {}) {
  const bool pure_family = spec.family == Family::PureSchmidtAngle;
  for (CriterionId id : criteria) {
    if (!applicable(id, {2, 2}, pure_family)) {
      throw Error(ErrorKind::OutOfRange, criterion_name(id) + " does not apply to family " + family_name(spec.family));
    }
  }
  std::vector<double> grid = spec.grid;
  std::sort(grid.begin(), grid.end());

  SweepReport report;
  std::map<std::string, std::vector<std::pair<double, bool>>> flags;
  for (double parameter : grid) {
    const FamilyPoint point = family_state(spec, parameter);
    const PureState* pure = point.pure ? &*point.pure : nullptr;
    for (CriterionId id : criteria) {
      const CriterionVerdict v = evaluate(id, point.rho, pure, options);
      report.rows.push_back({family_name(spec.family), parameter, v.criterion, v.statistic, v.threshold, v.verdict});
      flags[v.criterion].emplace_back(parameter, v.verdict == Verdict::Entangled);
    }
  }
  for (const auto& [name, series] : flags) {
    int changes = 0;
    double at = 0.0;
    for (std::size_t i = 1; i < series.size(); ++i) {
      if (series[i].second != series[i - 1].second) {
        ++changes;
        at = 0.5 * (series[i].first + series[i - 1].first);
      }
    }
    if (changes == 1) report.crossings[name] = at;
  }
  return report;
}

inline constexpr double kBisectTol = 1e-6;

/// Bisects the Entangled/not-Entangled boundary over the family's parameter
/// range. The caller asserts the verdict is monotone in the parameter.
inline double threshold_bisect(const FamilySpec& spec, CriterionId criterion, double tol_p = kBisectTol,
                               const EvalOptions& options = {}) {
  auto [lo, hi] = family_range(spec.family);
  const auto entangled = [&](double x) {
    const FamilyPoint point = family_state(spec, x);
    return evaluate(criterion, point.rho, point.pure ? &*point.pure : nullptr, options).verdict ==
           Verdict::Entangled;
  };
  const bool at_lo = entangled(lo);
  const bool at_hi = entangled(hi);
  if (at_lo == at_hi) {
    throw Error(ErrorKind::NoCrossing, criterion_name(criterion) + " verdict is identical at both ends of " +
                                           family_name(spec.family));
  }
  while (hi - lo > tol_p) {
    const double mid = 0.5 * (lo + hi);
    if (entangled(mid) == at_lo) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi);
}

// --- Audits ----------------------------------------------------------------

enum class Generator { Separable, Mixed, Pure };

inline std::string generator_name(Generator g) {
  switch (g) {
    case Generator::Separable: return "separable";
    case Generator::Mixed: return "mixed";
    case Generator::Pure: return "pure";
  }
  return "";
}

inline Generator parse_generator(const std::string& name) {
  for (Generator g : {Generator::Separable, Generator::Mixed, Generator::Pure}) {
    if (generator_name(g) == name) return g;
  }
  throw Error(ErrorKind::OutOfRange, "unknown generator \"" + name + "\"");
}

/// Confusion counts with "Entangled" as the positive verdict.
struct AuditRow {
  std::string criterion;
  long evaluated = 0;
  long true_positive = 0;
  long false_positive = 0;
  long true_negative = 0;
  long false_negative = 0;
  long separable_verdicts = 0;  // explicit Separable claims
  long wrong_separable = 0;     // Separable claims on truly entangled states

  long entangled_verdicts() const { return true_positive + false_positive; }
  double agreement() const {
    return evaluated ? static_cast<double>(true_positive + true_negative) / static_cast<double>(evaluated) : 1.0;
  }
};

struct AuditSummary {
  Generator generator = Generator::Separable;
  BipartiteDims dims;
  long samples = 0;
  long truly_entangled = 0;
  std::vector<AuditRow> rows;  // ordered as all_criteria()

  const AuditRow* row(const std::string& name) const {
    for (const AuditRow& r : rows)
      if (r.criterion == name) return &r;
    return nullptr;
  }
};

inline constexpr int kAuditSeparableTerms = 8;

/// Separable samples are labeled by construction; mixed and pure samples by
/// the PPT oracle, which is exact only at 2x2 and 2x3. Pure samples alternate
/// between Haar-random and product states so both labels occur.
inline AuditSummary audit(long n, Seed seed, Generator generator, const BipartiteDims& dims = {2, 2},
                          const EvalOptions& options = {}) {
  if (n < 1) throw Error(ErrorKind::OutOfRange, "audit needs n >= 1");
  check_dims(dims);
  if (generator != Generator::Separable && !detail::low_dimensional(dims)) {
    throw Error(ErrorKind::UnsupportedDims, "PPT is not an exact oracle at these dimensions");
  }
  const bool have_pure = generator == Generator::Pure;
  const std::vector<CriterionId> criteria = applicable_criteria(dims, have_pure);

  AuditSummary summary{generator, dims, n, 0, {}};
  for (CriterionId id : criteria) summary.rows.push_back({criterion_name(id)});

  for (long i = 0; i < n; ++i) {
    const Seed sample_seed = mix_seed(seed, static_cast<Seed>(i));
    std::optional<PureState> pure;
    std::optional<DensityMatrix> rho;
    switch (generator) {
      case Generator::Separable: rho = random_separable(dims, kAuditSeparableTerms, sample_seed); break;
      case Generator::Mixed: rho = random_mixed(dims, dims.total(), sample_seed); break;
      case Generator::Pure:
        pure = i % 2 == 0 ? random_pure(dims, sample_seed) : random_product_pure(dims, sample_seed);
        rho = pure_to_density(*pure);
        break;
    }
    const bool truth = generator == Generator::Separable
                           ? false
                           : ppt(*rho, options.tol).verdict == Verdict::Entangled;
    summary.truly_entangled += truth ? 1 : 0;

    EvalOptions local = options;
    local.seed = mix_seed(options.seed, static_cast<Seed>(i));
    for (std::size_t c = 0; c < criteria.size(); ++c) {
      const CriterionVerdict v = evaluate(criteria[c], *rho, pure ? &*pure : nullptr, local);
      AuditRow& row = summary.rows[c];
      const bool positive = v.verdict == Verdict::Entangled;
      ++row.evaluated;
      if (positive && truth) ++row.true_positive;
      if (positive && !truth) ++row.false_positive;
      if (!positive && truth) ++row.false_negative;
      if (!positive && !truth) ++row.true_negative;
      if (v.verdict == Verdict::Separable) {
        ++row.separable_verdicts;
        if (truth) ++row.wrong_separable;
      }
    }
  }
  return summary;
}

// --- Report rendering ------------------------------------------------------

inline std::string format_number(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.12g", v);
  return buf;
}

inline constexpr const char* kReportHeader = "family,parameter,criterion,statistic,threshold,verdict";

inline std::string render_rows(const std::vector<SweepRow>& rows) {
  std::string out = std::string(kReportHeader) + "\n";
  for (const SweepRow& r : rows) {
    out += r.family + "," + format_number(r.parameter) + "," + r.criterion + "," + format_number(r.statistic) + "," +
           format_number(r.threshold) + "," + std::string(to_string(r.verdict)) + "\n";
  }
  return out;
}

inline std::string render_report(const SweepReport& report) { return render_rows(report.rows); }

inline constexpr const char* kAuditHeader =
    "generator,criterion,evaluated,true_positive,false_positive,true_negative,false_negative,agreement";

inline std::string render_audit(const AuditSummary& summary) {
  std::string out = std::string(kAuditHeader) + "\n";
  for (const AuditRow& r : summary.rows) {
    out += generator_name(summary.generator) + "," + r.criterion + "," + std::to_string(r.evaluated) + "," +
           std::to_string(r.true_positive) + "," + std::to_string(r.false_positive) + "," +
           std::to_string(r.true_negative) + "," + std::to_string(r.false_negative) + "," +
           format_number(r.agreement()) + "\n";
  }
  return out;
}

}  // namespace sepcheck
