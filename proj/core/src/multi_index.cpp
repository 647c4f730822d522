#include "c0ip/multi_index.hpp"

#include <map>
#include <mutex>
#include <stdexcept>

namespace c0ip {

double factorial(int n) {
  double f = 1.0;
  for (int i = 2; i <= n; ++i) f *= i;
  return f;
}

double multi_factorial(const MultiIndex& a) {
  return factorial(a[0]) * factorial(a[1]) * factorial(a[2]);
}

int multi_index_count(int dim, int degree) {
  // binomial(degree + dim, dim)
  long long c = 1;
  for (int i = 1; i <= dim; ++i) c = c * (degree + i) / i;
  return static_cast<int>(c);
}

MultiIndexSet::MultiIndexSet(int dim, int degree) : dim_(dim), degree_(degree) {
  if (dim < 1 || dim > kMaxDim) throw std::invalid_argument("MultiIndexSet: dimension must be 1, 2 or 3");
  if (degree < 0) throw std::invalid_argument("MultiIndexSet: negative degree");
  degree_offsets_.reserve(degree + 2);
  for (int k = 0; k <= degree; ++k) {
    degree_offsets_.push_back(static_cast<int>(indices_.size()));
    for_each_multi_index(dim, k, [&](const MultiIndex& b) { indices_.push_back(b); });
  }
  degree_offsets_.push_back(static_cast<int>(indices_.size()));

  const int side = degree + 1;
  int table = 1;
  for (int i = 0; i < dim; ++i) table *= side;
  lookup_.assign(table, -1);
  for (int i = 0; i < size(); ++i) {
    const auto& a = indices_[i];
    int key = 0;
    for (int k = dim - 1; k >= 0; --k) key = key * side + a[k];
    lookup_[key] = i;
  }

  up_.assign(static_cast<size_t>(size()) * kMaxDim, -1);
  for (int i = 0; i < size(); ++i) {
    for (int k = 0; k < dim; ++k) {
      MultiIndex b = indices_[i];
      ++b[k];
      up_[i * kMaxDim + k] = find(b);
    }
  }
}

int MultiIndexSet::find(const MultiIndex& alpha) const {
  int key = 0;
  const int side = degree_ + 1;
  for (int k = dim_ - 1; k >= 0; --k) {
    if (alpha[k] < 0 || alpha[k] > degree_) return -1;
    key = key * side + alpha[k];
  }
  for (int k = dim_; k < kMaxDim; ++k)
    if (alpha[k] != 0) return -1;
  return lookup_[key];
}

std::shared_ptr<const MultiIndexSet> MultiIndexSet::get(int dim, int degree) {
  static std::mutex mutex;
  static std::map<std::pair<int, int>, std::shared_ptr<const MultiIndexSet>> cache;
  std::lock_guard<std::mutex> lock(mutex);
  auto& slot = cache[{dim, degree}];
  if (!slot) slot = std::make_shared<const MultiIndexSet>(dim, degree);
  return slot;
}

}  // namespace c0ip
