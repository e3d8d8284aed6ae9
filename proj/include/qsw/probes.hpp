#ifndef QSW_PROBES_HPP
#define QSW_PROBES_HPP

#include <cstdint>
#include <limits>
#include <vector>

#include "qsw/energy.hpp"
#include "qsw/spectrum.hpp"

namespace qsw {

struct LocalLinkingProbe {
  Verdict verdict = Verdict::Pass;
  double epsilon = 0.0;
  double minus_max = 0.0;  // max Phi on the X^- epsilon-sphere
  double plus_min = 0.0;   // min Phi on the X^+ epsilon-sphere
  std::size_t directions = 0;
  Field violating;         // offending direction, empty when passed
};

/// Phi <= pos_slack on the X^- epsilon-sphere and Phi > 0 on the X^+ one,
/// sampled along n_dirs random unit directions in each subspace.
LocalLinkingProbe local_linking_probe(const Problem& problem, const Grid& grid, const SpectralSplit& split,
                                      double epsilon, std::size_t n_dirs, std::uint64_t seed = 1,
                                      double pos_slack = 1e-12);

struct RayProfile {
  Field direction;            // X-unit
  std::vector<double> values; // Phi(s w) per radius
  bool decreasing_tail = true;
  bool negative_at_max = true;
};

struct AntiCoercivityProbe {
  Verdict verdict = Verdict::Pass;
  bool all_negative = true;  // Phi < 0 at every radius on every ray (stricter than the verdict)
  std::vector<double> radii;
  std::vector<RayProfile> rays;
};

/// Norm in which the sampled directions are unit: the X norm of the lemma, or
/// L2 (a unit coefficient vector when the basis is L2-orthonormal).
enum class DirectionNorm { X, L2 };

/// Phi(s w) along random unit w in span(basis): negative at the largest radius
/// and decreasing beyond the last sign change.
AntiCoercivityProbe anti_coercivity_probe(const Problem& problem, const Grid& grid,
                                          const std::vector<Field>& basis, const std::vector<double>& radii,
                                          std::size_t n_dirs, std::uint64_t seed = 2,
                                          DirectionNorm norm = DirectionNorm::X);

struct DescentProbe {
  Verdict verdict = Verdict::NotApplicable;
  double threshold = 0.0;  // A
  std::size_t tested = 0;
  std::size_t failures = 0;
  double worst_derivative = -std::numeric_limits<double>::infinity();
};

/// For every sampled point s w of the anti-coercivity sweep with Phi <= -A,
/// checks <Phi'(s w), s w> < 0. A defaults to the smallest |Phi| among the
/// negative samples, so that every negative sample is tested.
DescentProbe descent_probe(const Problem& problem, const Grid& grid, const AntiCoercivityProbe& sweep,
                           double threshold = -1.0);

}  // namespace qsw

#endif  // QSW_PROBES_HPP
