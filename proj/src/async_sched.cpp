#include "agnn/async_sched.hpp"

#include <algorithm>
#include <numeric>
#include <random>
#include <string>

#include "agnn/errors.hpp"

namespace agnn {

std::vector<bool> to_mask(const ActiveSet& set, std::size_t m) {
  std::vector<bool> mask(m, false);
  for (std::size_t i : set) {
    if (i >= m) throw InvalidArgument("active set member " + std::to_string(i) + " out of range");
    mask[i] = true;
  }
  return mask;
}

ActiveSet all_nodes(std::size_t m) {
  ActiveSet s(m);
  std::iota(s.begin(), s.end(), std::size_t{0});
  return s;
}

std::string_view to_string(ActivationMode mode) {
  switch (mode) {
    case ActivationMode::kPatterns: return "patterns";
    case ActivationMode::kBernoulli: return "bernoulli";
  }
  return "unknown";
}

ActivationMode activation_mode_from_string(std::string_view name) {
  if (name == "patterns") return ActivationMode::kPatterns;
  if (name == "bernoulli") return ActivationMode::kBernoulli;
  throw InvalidArgument("unknown activation mode '" + std::string(name) + "'");
}

ActivationPatternSet build_pattern_sets(std::size_t m, std::size_t n_act, double size_mean, Rng& rng) {
  if (m == 0 || n_act == 0 || !(size_mean > 0.0))
    throw InvalidArgument("build_pattern_sets: need m >= 1, n_act >= 1, size_mean > 0");
  ActivationPatternSet out;
  out.m = m;
  out.patterns.reserve(n_act);
  std::poisson_distribution<long long> size_law(size_mean);
  for (std::size_t n = 0; n < n_act; ++n) {
    const auto size = static_cast<std::size_t>(std::min<long long>(size_law(rng), static_cast<long long>(m)));
    // Partial Fisher-Yates: the first `size` entries are a uniform subset.
    std::vector<std::size_t> nodes = all_nodes(m);
    for (std::size_t k = 0; k < size; ++k) {
      const std::size_t pick = k + static_cast<std::size_t>(uniform01(rng) * static_cast<double>(m - k));
      std::swap(nodes[k], nodes[std::min(pick, m - 1)]);
    }
    ActiveSet pattern(nodes.begin(), nodes.begin() + static_cast<std::ptrdiff_t>(size));
    std::sort(pattern.begin(), pattern.end());
    out.patterns.push_back(std::move(pattern));
  }
  return out;
}

const ActiveSet& sample_active_set(const ActivationPatternSet& patterns, Rng& rng) {
  if (patterns.patterns.empty()) throw InvalidState("sample_active_set: no activation patterns stored");
  const std::size_t n = patterns.patterns.size();
  const auto idx = std::min(static_cast<std::size_t>(uniform01(rng) * static_cast<double>(n)), n - 1);
  return patterns.patterns[idx];
}

ActiveSet sample_active_set(const ActivationModel& model, Rng& rng) {
  switch (model.mode) {
    case ActivationMode::kPatterns:
      return sample_active_set(model.patterns, rng);
    case ActivationMode::kBernoulli: {
      ActiveSet s;
      for (std::size_t i = 0; i < model.patterns.m; ++i)
        if (uniform01(rng) < model.bernoulli_prob) s.push_back(i);
      return s;
    }
  }
  throw InvalidState("unknown activation mode");
}

ActivationModel always_active(std::size_t m) {
  ActivationModel model;
  model.mode = ActivationMode::kPatterns;
  model.patterns.m = m;
  model.patterns.patterns = {all_nodes(m)};
  return model;
}

ActivationPatternSet relabel(const ActivationPatternSet& patterns, const std::vector<std::size_t>& perm) {
  if (perm.size() != patterns.m) throw InvalidArgument("relabel: permutation size mismatch");
  ActivationPatternSet out;
  out.m = patterns.m;
  for (const auto& p : patterns.patterns) {
    ActiveSet q;
    q.reserve(p.size());
    for (std::size_t i : p) q.push_back(perm[i]);
    std::sort(q.begin(), q.end());
    out.patterns.push_back(std::move(q));
  }
  return out;
}

}  // namespace agnn
