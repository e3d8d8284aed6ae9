#include "qsw/probes.hpp"

#include <algorithm>
#include <cmath>
#include <random>

#include "qsw/errors.hpp"

namespace qsw {

namespace {

Field random_active(const Grid& grid, std::mt19937_64& rng) {
  std::normal_distribution<double> normal;
  Field f = grid.zeros();
  for (Index i = 0; i < grid.active_size(); ++i) grid.active(f)[i] = normal(rng);
  return f;
}

}  // namespace

LocalLinkingProbe local_linking_probe(const Problem& problem, const Grid& grid, const SpectralSplit& split,
                                      double epsilon, std::size_t n_dirs, std::uint64_t seed, double pos_slack) {
  if (!(epsilon > 0.0)) throw ConfigError("local_linking_probe: epsilon must be positive");
  const Energy energy(problem, grid);
  const Index l = split.negative_count;
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal;

  LocalLinkingProbe out;
  out.epsilon = epsilon;
  out.directions = n_dirs;
  out.minus_max = -std::numeric_limits<double>::infinity();
  out.plus_min = std::numeric_limits<double>::infinity();
  for (std::size_t s = 0; s < n_dirs; ++s) {
    if (l > 0) {
      Field w = grid.zeros();
      for (Index i = 0; i < l; ++i) w += normal(rng) * split.modes.col(i);
      w *= epsilon / energy.x_norm(w);
      const double val = energy.value(w);
      if (val > out.minus_max) out.minus_max = val;
      if (val > pos_slack && out.verdict == Verdict::Pass) {
        out.verdict = Verdict::Fail;
        out.violating = w;
      }
    }
    // Mix of computed modes above the split and raw nodal noise projected on X^+.
    Field w = grid.zeros();
    for (Index i = l; i < split.count(); ++i) w += normal(rng) * split.modes.col(i);
    if (s % 4 == 3) {
      Field noise = project(split, grid, random_active(grid, rng), Subspace::Plus);
      w += (energy.x_norm(w) / energy.x_norm(noise)) * noise;
    }
    w *= epsilon / energy.x_norm(w);
    const double val = energy.value(w);
    out.plus_min = std::min(out.plus_min, val);
    if (!(val > 0.0) && out.verdict == Verdict::Pass) {
      out.verdict = Verdict::Fail;
      out.violating = w;
    }
  }
  return out;
}

AntiCoercivityProbe anti_coercivity_probe(const Problem& problem, const Grid& grid,
                                          const std::vector<Field>& basis, const std::vector<double>& radii,
                                          std::size_t n_dirs, std::uint64_t seed, DirectionNorm norm) {
  if (basis.empty()) throw ConfigError("anti_coercivity_probe: empty basis");
  const Energy energy(problem, grid);
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal;
  AntiCoercivityProbe out;
  out.radii = radii;
  std::vector<double> sorted = radii;
  std::sort(sorted.begin(), sorted.end());
  out.radii = sorted;
  for (std::size_t s = 0; s < n_dirs; ++s) {
    Field w = grid.zeros();
    double wn = 0.0;
    while (wn == 0.0) {
      for (const auto& b : basis) w += normal(rng) * b;
      wn = norm == DirectionNorm::X ? energy.x_norm(w) : std::sqrt(l2_inner(grid, w, w));
    }
    w /= wn;
    RayProfile ray;
    ray.direction = w;
    for (double r : sorted) {
      ray.values.push_back(energy.value(Field(r * w)));
      if (!(ray.values.back() < 0.0)) out.all_negative = false;
    }
    // Last index where the sign is nonnegative; beyond it the values must decrease.
    std::size_t start = 0;
    for (std::size_t i = 0; i < ray.values.size(); ++i)
      if (ray.values[i] >= 0.0) start = i + 1;
    for (std::size_t i = std::max<std::size_t>(start, 1); i < ray.values.size(); ++i)
      if (!(ray.values[i] < ray.values[i - 1])) ray.decreasing_tail = false;
    ray.negative_at_max = ray.values.back() < 0.0;
    if (!ray.decreasing_tail || !ray.negative_at_max) out.verdict = Verdict::Fail;
    out.rays.push_back(std::move(ray));
  }
  return out;
}

DescentProbe descent_probe(const Problem& problem, const Grid& grid, const AntiCoercivityProbe& sweep,
                           double threshold) {
  const Energy energy(problem, grid);
  DescentProbe out;
  if (threshold < 0.0) {
    threshold = std::numeric_limits<double>::infinity();
    for (const auto& ray : sweep.rays)
      for (double v : ray.values)
        if (v < 0.0) threshold = std::min(threshold, -v);
    if (!std::isfinite(threshold)) return out;
  }
  out.threshold = threshold;
  for (const auto& ray : sweep.rays) {
    for (std::size_t i = 0; i < sweep.radii.size(); ++i) {
      const L4Probe p = energy.lemma_l4_probe(Field(sweep.radii[i] * ray.direction), threshold);
      if (p.verdict == Verdict::NotApplicable) continue;
      ++out.tested;
      out.worst_derivative = std::max(out.worst_derivative, p.derivative);
      if (p.verdict == Verdict::Fail) ++out.failures;
    }
  }
  if (out.tested > 0) out.verdict = out.failures == 0 ? Verdict::Pass : Verdict::Fail;
  return out;
}

}  // namespace qsw
