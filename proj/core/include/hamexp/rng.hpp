#pragma once
#include <cstdint>
#include <vector>
#include <algorithm>

namespace hamexp {

// Counter-based splittable generator. Every consumer derives its own stream
// via child(label), keyed by task identity rather than draw order, so results
// do not depend on scheduling or on how work is chunked across threads.
class Rng {
 public:
  explicit Rng(uint64_t key = 0) : key_(mix(key ^ 0x6a09e667f3bcc909ull)), counter_(0) {}

  uint64_t next_u64() {
    counter_ += 1;
    return mix(key_ + 0x9e3779b97f4a7c15ull * counter_);
  }

  // Unbiased draw from [0, n), n >= 1.
  uint64_t uniform(uint64_t n) {
    uint64_t threshold = (0 - n) % n;
    for (;;) {
      uint64_t r = next_u64();
      if (r >= threshold) return r % n;
    }
  }

  int uniform_int(int n) { return static_cast<int>(uniform(static_cast<uint64_t>(n))); }

  // 53-bit mantissa double in [0, 1).
  double next_double() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

  bool bernoulli(double p) { return next_double() < p; }

  // Independent stream; deterministic function of (key, label).
  Rng child(uint64_t label) const {
    Rng r;
    r.key_ = mix(key_ ^ mix(label * 0xda942042e4dd58b5ull + 0x2545f4914f6cdd1dull));
    r.counter_ = 0;
    return r;
  }

  template <typename T>
  void shuffle(std::vector<T>& v) {
    for (size_t i = v.size(); i > 1; --i) {
      size_t j = uniform(i);
      std::swap(v[i - 1], v[j]);
    }
  }

  template <typename T>
  const T& pick(const std::vector<T>& v) {
    return v[uniform(v.size())];
  }

  // k distinct values from [0, n), sorted. Floyd's sampling.
  std::vector<int> sample_indices(int n, int k) {
    std::vector<int> out;
    out.reserve(k);
    for (int j = n - k; j < n; ++j) {
      int t = uniform_int(j + 1);
      bool seen = std::find(out.begin(), out.end(), t) != out.end();
      out.push_back(seen ? j : t);
    }
    std::sort(out.begin(), out.end());
    return out;
  }

 private:
  // splitmix64 finalizer
  static uint64_t mix(uint64_t z) {
    z ^= z >> 30;
    z *= 0xbf58476d1ce4e5b9ull;
    z ^= z >> 27;
    z *= 0x94d049bb133111ebull;
    z ^= z >> 31;
    return z;
  }

  uint64_t key_;
  uint64_t counter_;
};

}  // namespace hamexp
