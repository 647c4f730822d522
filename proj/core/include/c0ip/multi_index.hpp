#pragma once

#include <array>
#include <cstdint>
#include <memory>
#include <vector>

namespace c0ip {

/// Maximum spatial dimension supported anywhere in the library.
inline constexpr int kMaxDim = 3;

using MultiIndex = std::array<int, kMaxDim>;

inline int total_degree(const MultiIndex& a) { return a[0] + a[1] + a[2]; }

double factorial(int n);

/// alpha! = prod_i alpha_i!
double multi_factorial(const MultiIndex& a);

/// Number of multi-indices of total degree <= degree in dim variables.
int multi_index_count(int dim, int degree);

/**
 * Enumeration of all multi-indices alpha in N^dim with |alpha| <= degree,
 * graded by total degree (all degree-0 entries first, then degree 1, ...).
 * Inside a degree block the order is lexicographically decreasing in
 * alpha_0, which for dim = 2 gives x^2, xy, y^2.
 *
 * Instances are immutable and shared through MultiIndexSet::get().
 */
class MultiIndexSet {
 public:
  MultiIndexSet(int dim, int degree);

  /// Shared cached instance.
  static std::shared_ptr<const MultiIndexSet> get(int dim, int degree);

  int dim() const { return dim_; }
  int degree() const { return degree_; }
  int size() const { return static_cast<int>(indices_.size()); }
  const MultiIndex& operator[](int i) const { return indices_[i]; }
  const std::vector<MultiIndex>& indices() const { return indices_; }

  /// Position of alpha, or -1 when |alpha| > degree.
  int find(const MultiIndex& alpha) const;

  /// First position holding total degree k (k <= degree + 1).
  int degree_begin(int k) const { return degree_offsets_[k]; }

  /// Position of alpha + e_k, or -1 when it exceeds the set.
  int shift_up(int i, int k) const { return up_[i * kMaxDim + k]; }

 private:
  int dim_;
  int degree_;
  std::vector<MultiIndex> indices_;
  std::vector<int> degree_offsets_;
  std::vector<int> lookup_;  // dense (degree+1)^dim table
  std::vector<int> up_;
};

/// Invoke fn(beta) for every beta in N^dim with |beta| == k.
template <typename Fn>
void for_each_multi_index(int dim, int k, Fn&& fn) {
  MultiIndex b{0, 0, 0};
  if (dim == 1) {
    b[0] = k;
    fn(b);
    return;
  }
  if (dim == 2) {
    for (int i = k; i >= 0; --i) {
      b[0] = i;
      b[1] = k - i;
      fn(b);
    }
    return;
  }
  for (int i = k; i >= 0; --i) {
    for (int j = k - i; j >= 0; --j) {
      b[0] = i;
      b[1] = j;
      b[2] = k - i - j;
      fn(b);
    }
  }
}

}  // namespace c0ip
