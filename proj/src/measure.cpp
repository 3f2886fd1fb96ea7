#include "hyperkl/measure.hpp"

#include <numeric>

namespace hyperkl {

Measure<FiniteHypergroup, Rat> random_probability(const FiniteHypergroup& h, std::mt19937_64& rng,
                                                  int support_size) {
  const int n = h.size();
  if (support_size <= 0 || support_size > n) {
    support_size = std::uniform_int_distribution<int>(1, n)(rng);
  }
  std::vector<int> idx(static_cast<std::size_t>(n));
  std::iota(idx.begin(), idx.end(), 0);
  std::shuffle(idx.begin(), idx.end(), rng);
  idx.resize(static_cast<std::size_t>(support_size));

  std::uniform_int_distribution<int> weight(1, 9);
  std::vector<int> w(static_cast<std::size_t>(support_size));
  long long total = 0;
  for (auto& v : w) {
    v = weight(rng);
    total += v;
  }
  Measure<FiniteHypergroup, Rat> out(h);
  for (int i = 0; i < support_size; ++i) {
    out.add(idx[static_cast<std::size_t>(i)], Rat(w[static_cast<std::size_t>(i)], total));
  }
  return out;
}

Measure<FiniteHypergroup, Rat> random_symmetric_probability(const FiniteHypergroup& h,
                                                            std::mt19937_64& rng,
                                                            int support_size) {
  const auto mu = random_probability(h, rng, support_size);
  const auto flipped = mu.involute();
  auto out = Measure<FiniteHypergroup, Rat>(h);
  for (const auto& [k, w] : mu.atoms()) out.add(k, w / 2);
  for (const auto& [k, w] : flipped.atoms()) out.add(k, w / 2);
  return out;
}

}  // namespace hyperkl
