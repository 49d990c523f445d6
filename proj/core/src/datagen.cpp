#include "ogl/datagen.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>

namespace ogl {

namespace {

std::vector<int> range(int first, int last_exclusive) {
  std::vector<int> out(static_cast<size_t>(last_exclusive - first));
  std::iota(out.begin(), out.end(), first);
  return out;
}

}  // namespace

std::vector<std::vector<int>> gen_nonoverlap_groups(int n_features,
                                                    int block) {
  if (block < 1) {
    throw InputError("block size must be positive");
  }
  if (n_features < block) {
    throw InputError("n_features is smaller than the block size");
  }
  std::vector<std::vector<int>> groups;
  for (int s = 0; s < n_features; s += block) {
    groups.push_back(range(s, std::min(s + block, n_features)));
  }
  return groups;
}

std::vector<std::vector<int>> gen_overlap_groups(int n_features, int block,
                                                 int overlap) {
  if (block < 1) {
    throw InputError("block size must be positive");
  }
  if (overlap < 0 || overlap >= block) {
    throw InputError("overlap must lie in [0, block)");
  }
  if (n_features < block) {
    throw InputError("n_features is smaller than the block size");
  }
  std::vector<std::vector<int>> groups;
  int stride = block - overlap;
  for (int s = 0;; s += stride) {
    int end = std::min(s + block, n_features);
    groups.push_back(range(s, end));
    if (end == n_features) break;
  }
  return groups;
}

std::vector<std::vector<int>> gen_tree_groups(
    int n_features, const std::vector<int>& level_sizes) {
  if (level_sizes.empty()) {
    throw InputError("tree needs at least one level size");
  }
  for (size_t l = 0; l < level_sizes.size(); ++l) {
    if (level_sizes[l] < 1) {
      throw InputError("level sizes must be positive");
    }
    if (l > 0 && level_sizes[l] > level_sizes[l - 1]) {
      throw InputError("level sizes must be non-increasing");
    }
  }
  if (n_features < level_sizes.back()) {
    throw InputError("n_features is smaller than the smallest block size");
  }
  std::vector<std::vector<int>> groups;
  // Blocks of the previous level as [first, last_exclusive) spans.
  std::vector<std::pair<int, int>> spans = {{0, n_features}};
  for (int size : level_sizes) {
    std::vector<std::pair<int, int>> next;
    for (auto [a, b] : spans) {
      for (int s = a; s < b; s += size) {
        next.emplace_back(s, std::min(s + size, b));
      }
    }
    for (auto [a, b] : next) groups.push_back(range(a, b));
    spans = std::move(next);
  }
  return groups;
}

SynthData synth_data(int n_samples, int n_features, double sparsity,
                     double noise, std::uint64_t seed) {
  if (n_samples < 1 || n_features < 1) {
    throw InputError("dimensions must be positive");
  }
  if (sparsity < 0.0 || sparsity > 1.0) {
    throw InputError("sparsity must lie in [0, 1]");
  }
  if (noise < 0.0) {
    throw InputError("noise must be non-negative");
  }
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> gauss(0.0, 1.0);
  std::uniform_real_distribution<double> amp(0.5, 1.5);

  SynthData data;
  data.x.resize(n_samples, n_features);
  for (int j = 0; j < n_features; ++j) {
    for (int i = 0; i < n_samples; ++i) data.x(i, j) = gauss(rng);
    double n = data.x.col(j).norm();
    if (n > 0.0) data.x.col(j) /= n;
  }

  data.beta_true = Vector::Zero(n_features);
  int target = static_cast<int>(std::llround(sparsity * n_features));
  target = std::clamp(target, 0, n_features);
  // Activate whole 10-wide slots in shuffled order so the support is
  // contiguous runs rather than scattered coordinates.
  std::vector<int> slots(static_cast<size_t>((n_features + 9) / 10));
  std::iota(slots.begin(), slots.end(), 0);
  std::shuffle(slots.begin(), slots.end(), rng);
  int remaining = target;
  for (int slot : slots) {
    if (remaining == 0) break;
    int first = slot * 10;
    int last = std::min(first + 10, n_features);
    for (int j = first; j < last && remaining > 0; ++j, --remaining) {
      double sign = gauss(rng) < 0.0 ? -1.0 : 1.0;
      data.beta_true[j] = sign * amp(rng);
    }
  }

  data.y = data.x * data.beta_true;
  if (noise > 0.0) {
    for (int i = 0; i < n_samples; ++i) data.y[i] += noise * gauss(rng);
  }
  return data;
}

}  // namespace ogl
