#pragma once

#include <cstddef>
#include <string_view>
#include <vector>

#include "agnn/rng.hpp"

namespace agnn {

/// Sorted, duplicate-free list of node indices.
using ActiveSet = std::vector<std::size_t>;

/// Membership mask of length m for an active set.
std::vector<bool> to_mask(const ActiveSet& set, std::size_t m);

ActiveSet all_nodes(std::size_t m);

struct ActivationPatternSet {
  std::size_t m = 0;
  std::vector<ActiveSet> patterns;
};

enum class ActivationMode {
  kPatterns,   // draw one of a fixed collection of subsets per slot
  kBernoulli,  // each node independently active with a fixed probability
};

std::string_view to_string(ActivationMode mode);
ActivationMode activation_mode_from_string(std::string_view name);

/// Source of the active set at each time index.
struct ActivationModel {
  ActivationMode mode = ActivationMode::kPatterns;
  ActivationPatternSet patterns;
  double bernoulli_prob = 0.5;

  std::size_t num_nodes() const { return patterns.m; }
};

/// N_act subsets; each size ~ Poisson(size_mean) clipped to [0, m], members uniform
/// without replacement.
ActivationPatternSet build_pattern_sets(std::size_t m, std::size_t n_act, double size_mean, Rng& rng);

/// One stored pattern, uniformly at random. Throws InvalidState if none are stored.
const ActiveSet& sample_active_set(const ActivationPatternSet& patterns, Rng& rng);

ActiveSet sample_active_set(const ActivationModel& model, Rng& rng);

/// Model where every node is active at every slot.
ActivationModel always_active(std::size_t m);

/// Pattern set relabelled by the permutation: node i becomes perm[i].
ActivationPatternSet relabel(const ActivationPatternSet& patterns, const std::vector<std::size_t>& perm);

}  // namespace agnn
