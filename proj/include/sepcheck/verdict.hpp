#pragma once

#include <string>
#include <string_view>

namespace sepcheck {

enum class Verdict { Entangled, Separable, Inconclusive };

constexpr std::string_view to_string(Verdict v) {
  switch (v) {
    case Verdict::Entangled: return "Entangled";
    case Verdict::Separable: return "Separable";
    case Verdict::Inconclusive: return "Inconclusive";
  }
  return "Inconclusive";
}

/// Uniform result of one separability test. `statistic` is compared against
/// `threshold` in the direction fixed by the criterion; `details` carries
/// free-form diagnostics such as spectra.
struct CriterionVerdict {
  std::string criterion;
  double statistic = 0.0;
  double threshold = 0.0;
  Verdict verdict = Verdict::Inconclusive;
  std::string details;
};

}  // namespace sepcheck
