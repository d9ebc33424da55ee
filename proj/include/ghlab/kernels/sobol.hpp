#pragma once

#include <cstdint>
#include <vector>

namespace ghlab::kernels {

/// Gray-code Sobol generator (Joe-Kuo direction numbers, up to 10 dimensions)
/// with an optional random digital shift for randomized QMC.
class Sobol {
 public:
  static constexpr int kMaxDim = 10;

  explicit Sobol(int dim, std::uint64_t shift_seed = 0);

  int dim() const { return dim_; }
  /// Writes the next point of [0,1)^dim.
  void next(double* x);

 private:
  int dim_;
  std::uint64_t index_ = 0;
  std::vector<std::uint32_t> state_, shift_;
  std::vector<std::vector<std::uint32_t>> v_;
};

}  // namespace ghlab::kernels
