#pragma once

#include <functional>
#include <utility>
#include <vector>

#include "hyperkl/rational.hpp"

namespace hyperkl {

/// Finitely supported distribution returned by point convolutions.
/// Weights are exact, strictly positive, and sum to 1 for valid hosts.
template <class Key>
using SparseDist = std::vector<std::pair<Key, Rat>>;

/// Countable hypergroup given by its identity, involution and point
/// convolution. Keys must be totally ordered and cheap to copy.
template <class Key>
class DiscreteHypergroup {
 public:
  using key_type = Key;
  using ConvFn = std::function<SparseDist<Key>(const Key&, const Key&)>;
  using InvFn = std::function<Key(const Key&)>;

  DiscreteHypergroup(Key identity, ConvFn conv, InvFn inv)
      : identity_(std::move(identity)), conv_(std::move(conv)), inv_(std::move(inv)) {}

  const Key& identity() const { return identity_; }
  Key involve(const Key& x) const { return inv_(x); }
  SparseDist<Key> point_convolve(const Key& a, const Key& b) const { return conv_(a, b); }

 private:
  Key identity_;
  ConvFn conv_;
  InvFn inv_;
};

/// Hosts where the underlying space is compact (finite). Escape-to-zero of
/// mass is impossible there, which the limit diagnostics rely on.
template <class Host>
struct is_compact_host : std::false_type {};

}  // namespace hyperkl
