#pragma once

#include "ogl/model.hpp"

#include <cstdint>
#include <vector>

namespace ogl {

/// Consecutive blocks of `block` features, last one truncated.
std::vector<std::vector<int>> gen_nonoverlap_groups(int n_features,
                                                    int block = 20);

/// Blocks of `block` starting every block-overlap features. Consecutive
/// groups share exactly `overlap` indices except possibly the final pair,
/// which may be truncated to end at the last feature.
std::vector<std::vector<int>> gen_overlap_groups(int n_features,
                                                 int block = 20,
                                                 int overlap = 5);

/// One level of consecutive blocks per entry of level_sizes; each level
/// partitions the blocks of the level above, keeping remainders, so every
/// child is contained in its parent.
std::vector<std::vector<int>> gen_tree_groups(
    int n_features, const std::vector<int>& level_sizes = {20, 15, 10, 5});

struct SynthData {
  Matrix x;          // unit-norm columns
  Vector y;          // x * beta_true + noise * gaussian
  Vector beta_true;  // nonzeros placed in contiguous blocks of up to 10
};

/// sparsity is the fraction of nonzero coefficients. Deterministic for a
/// fixed seed.
SynthData synth_data(int n_samples, int n_features, double sparsity,
                     double noise, std::uint64_t seed);

}  // namespace ogl
