#include "ghlab/kernels/sobol.hpp"

#include <random>
#include <stdexcept>

namespace ghlab::kernels {

namespace {

struct Primitive {
  int s;
  unsigned a;
  std::uint32_t m[5];
};

// Rows 2..10 of new-joe-kuo-6.21201.
constexpr Primitive kTable[Sobol::kMaxDim - 1] = {
    {1, 0, {1}},          {2, 1, {1, 3}},          {3, 1, {1, 3, 1}},
    {3, 2, {1, 1, 1}},    {4, 1, {1, 1, 3, 3}},    {4, 4, {1, 3, 5, 13}},
    {5, 2, {1, 1, 5, 5, 17}}, {5, 4, {1, 1, 5, 5, 5}}, {5, 7, {1, 1, 7, 11, 19}},
};

constexpr int kBits = 32;

}  // namespace

Sobol::Sobol(int dim, std::uint64_t shift_seed) : dim_(dim) {
  if (dim < 1 || dim > kMaxDim) throw std::invalid_argument("Sobol: dimension out of range");
  v_.assign(dim, std::vector<std::uint32_t>(kBits + 1));
  for (int k = 1; k <= kBits; ++k) v_[0][k] = std::uint32_t{1} << (kBits - k);
  for (int d = 1; d < dim; ++d) {
    const auto& p = kTable[d - 1];
    auto& v = v_[d];
    for (int k = 1; k <= p.s && k <= kBits; ++k) v[k] = p.m[k - 1] << (kBits - k);
    for (int k = p.s + 1; k <= kBits; ++k) {
      std::uint32_t x = v[k - p.s] ^ (v[k - p.s] >> p.s);
      for (int j = 1; j < p.s; ++j)
        if ((p.a >> (p.s - 1 - j)) & 1u) x ^= v[k - j];
      v[k] = x;
    }
  }
  state_.assign(dim, 0);
  shift_.assign(dim, 0);
  if (shift_seed != 0) {
    std::mt19937_64 rng(shift_seed);
    for (auto& s : shift_) s = static_cast<std::uint32_t>(rng() >> 32);
  }
}

void Sobol::next(double* x) {
  constexpr double scale = 1.0 / 4294967296.0;
  for (int d = 0; d < dim_; ++d) x[d] = (static_cast<double>(state_[d] ^ shift_[d]) + 0.5) * scale;
  int c = 1;
  for (std::uint64_t n = index_; n & 1u; n >>= 1) ++c;
  if (c > kBits) throw std::runtime_error("Sobol: sequence exhausted");
  for (int d = 0; d < dim_; ++d) state_[d] ^= v_[d][c];
  ++index_;
}

}  // namespace ghlab::kernels
