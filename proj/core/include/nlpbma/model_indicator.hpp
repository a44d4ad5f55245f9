#pragma once

#include <cstdint>
#include <functional>
#include <stdexcept>
#include <string>
#include <vector>

namespace nlpbma {

/* Inclusion indicator over p covariates, packed into 64-bit words so it can
 * key a hash map for any p. Serializes to a fixed-width hex string (lowest
 * bit = first covariate). */
class ModelIndicator {
public:
  ModelIndicator() = default;
  explicit ModelIndicator(int p) : p_(p), words_((p + 63) / 64, 0) {
    if (p < 0) throw std::invalid_argument("ModelIndicator: negative dimension");
  }

  static ModelIndicator from_indices(int p, const std::vector<int>& idx) {
    ModelIndicator m(p);
    for (int i : idx) m.set(i, true);
    return m;
  }

  int dimension() const { return p_; }

  bool test(int i) const {
    check(i);
    return (words_[i >> 6] >> (i & 63)) & 1ULL;
  }

  void set(int i, bool on) {
    check(i);
    const std::uint64_t mask = 1ULL << (i & 63);
    if (on)
      words_[i >> 6] |= mask;
    else
      words_[i >> 6] &= ~mask;
  }

  int count() const {
    int c = 0;
    for (auto w : words_) c += __builtin_popcountll(w);
    return c;
  }

  std::vector<int> indices() const {
    std::vector<int> out;
    out.reserve(count());
    for (int i = 0; i < p_; ++i)
      if (test(i)) out.push_back(i);
    return out;
  }

  std::string to_hex() const {
    static const char digits[] = "0123456789abcdef";
    std::string s;
    s.reserve(words_.size() * 16);
    for (auto it = words_.rbegin(); it != words_.rend(); ++it)
      for (int shift = 60; shift >= 0; shift -= 4)
        s.push_back(digits[(*it >> shift) & 0xf]);
    /* trim leading zeros but keep at least one digit */
    const auto pos = s.find_first_not_of('0');
    return pos == std::string::npos ? "0" : s.substr(pos);
  }

  static ModelIndicator from_hex(int p, const std::string& hex) {
    ModelIndicator m(p);
    int bit = 0;
    for (auto it = hex.rbegin(); it != hex.rend(); ++it, bit += 4) {
      int v;
      if (*it >= '0' && *it <= '9')
        v = *it - '0';
      else if (*it >= 'a' && *it <= 'f')
        v = *it - 'a' + 10;
      else if (*it >= 'A' && *it <= 'F')
        v = *it - 'A' + 10;
      else
        throw std::invalid_argument("ModelIndicator: invalid hex digit");
      for (int k = 0; k < 4; ++k)
        if (v & (1 << k)) {
          if (bit + k >= p)
            throw std::invalid_argument("ModelIndicator: hex mask exceeds dimension");
          m.set(bit + k, true);
        }
    }
    return m;
  }

  bool operator==(const ModelIndicator& o) const {
    return p_ == o.p_ && words_ == o.words_;
  }
  bool operator!=(const ModelIndicator& o) const { return !(*this == o); }
  bool operator<(const ModelIndicator& o) const {
    if (p_ != o.p_) return p_ < o.p_;
    for (std::size_t i = words_.size(); i-- > 0;)
      if (words_[i] != o.words_[i]) return words_[i] < o.words_[i];
    return false;
  }

  const std::vector<std::uint64_t>& words() const { return words_; }

private:
  void check(int i) const {
    if (i < 0 || i >= p_)
      throw std::out_of_range("ModelIndicator: index " + std::to_string(i) +
                              " out of range for dimension " + std::to_string(p_));
  }
  int p_ = 0;
  std::vector<std::uint64_t> words_;
};

struct ModelIndicatorHash {
  std::size_t operator()(const ModelIndicator& m) const {
    std::uint64_t h = 0x9e3779b97f4a7c15ULL ^ (std::uint64_t)m.dimension();
    for (auto w : m.words()) {
      h ^= w + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2);
    }
    return static_cast<std::size_t>(h);
  }
};

}  // namespace nlpbma
