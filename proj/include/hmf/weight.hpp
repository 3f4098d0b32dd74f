#pragma once

#include <array>
#include <string>

namespace hmf {

// Weight vector (k1, k2) for the two real embeddings.
struct WeightVector {
  std::array<int, 2> k{0, 0};

  WeightVector() = default;
  WeightVector(int k1, int k2) : k{k1, k2} {}
  static WeightVector parallel(int l) { return {l, l}; }

  int k0() const { return k[0] > k[1] ? k[0] : k[1]; }
  bool is_parallel() const { return k[0] == k[1]; }
  bool is_paritious() const { return ((k[0] - k[1]) % 2) == 0; }

  WeightVector operator+(const WeightVector& o) const {
    return {k[0] + o.k[0], k[1] + o.k[1]};
  }
  WeightVector operator-() const { return {-k[0], -k[1]}; }
  bool operator==(const WeightVector& o) const { return k == o.k; }
  bool operator!=(const WeightVector& o) const { return !(*this == o); }

  std::string to_string() const {
    return "(" + std::to_string(k[0]) + "," + std::to_string(k[1]) + ")";
  }
};

}  // namespace hmf
