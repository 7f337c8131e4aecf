#pragma once

#include <algorithm>
#include <cstdint>
#include <numeric>
#include <string>
#include <vector>

#include "qgs/errors.hpp"

namespace qgs {

using WaveTuple = std::vector<double>;

// Signed permutation. Acting on a wave tuple, slot i of the result reads slot perm[i]
// of the input and multiplies it by sign[i]. Slots are 0-based here; generator labels
// (T_i, R_i) keep their 1-based names.
class WeylElement {
 public:
  WeylElement() = default;
  explicit WeylElement(int n) : perm_(n), sign_(n, 1) { std::iota(perm_.begin(), perm_.end(), 0); }
  WeylElement(std::vector<int> perm, std::vector<int> sign) : perm_(std::move(perm)), sign_(std::move(sign)) {
    if (perm_.size() != sign_.size()) throw ValidationError("weyl element: perm and sign sizes differ");
    std::vector<char> seen(perm_.size(), 0);
    for (int p : perm_) {
      if (p < 0 || p >= size() || seen[p]) throw ValidationError("weyl element: perm is not a bijection");
      seen[p] = 1;
    }
    for (int s : sign_)
      if (s != 1 && s != -1) throw ValidationError("weyl element: signs must be +1 or -1");
  }

  int size() const { return static_cast<int>(perm_.size()); }
  const std::vector<int>& perm() const { return perm_; }
  const std::vector<int>& sign() const { return sign_; }
  int perm(int i) const { return perm_[i]; }
  int sign(int i) const { return sign_[i]; }

  bool is_identity() const {
    for (int i = 0; i < size(); ++i)
      if (perm_[i] != i || sign_[i] != 1) return false;
    return true;
  }

  // Injective for n <= 12: 4 bits of perm and one sign bit per slot.
  std::uint64_t key() const {
    std::uint64_t k = 0;
    for (int i = 0; i < size(); ++i) k = (k << 5) | (static_cast<std::uint64_t>(perm_[i]) << 1) | (sign_[i] < 0);
    return k;
  }

  friend bool operator==(const WeylElement& a, const WeylElement& b) {
    return a.perm_ == b.perm_ && a.sign_ == b.sign_;
  }
  friend bool operator<(const WeylElement& a, const WeylElement& b) { return a.key() < b.key(); }

 private:
  std::vector<int> perm_;
  std::vector<int> sign_;
};

inline WeylElement identity_element(int n) { return WeylElement(n); }

// Map composition (a b)(i) = a(b(i)). The action on tuples is then a right action:
// act(a b, k) = act(b, act(a, k)).
inline WeylElement compose(const WeylElement& a, const WeylElement& b) {
  if (a.size() != b.size()) throw ValidationError("compose: elements of different rank");
  const int n = a.size();
  std::vector<int> perm(n), sign(n);
  for (int i = 0; i < n; ++i) {
    perm[i] = a.perm(b.perm(i));
    sign[i] = b.sign(i) * a.sign(b.perm(i));
  }
  return WeylElement(std::move(perm), std::move(sign));
}

inline WeylElement compose(std::initializer_list<WeylElement> chain) {
  auto it = chain.begin();
  WeylElement out = *it++;
  for (; it != chain.end(); ++it) out = compose(out, *it);
  return out;
}

inline WeylElement inverse(const WeylElement& a) {
  const int n = a.size();
  std::vector<int> perm(n), sign(n);
  for (int i = 0; i < n; ++i) perm[a.perm(i)] = i;
  for (int i = 0; i < n; ++i) sign[i] = a.sign(perm[i]);
  return WeylElement(std::move(perm), std::move(sign));
}

inline WaveTuple act(const WeylElement& p, const WaveTuple& k) {
  if (static_cast<int>(k.size()) != p.size()) throw ValidationError("act: tuple length does not match element rank");
  WaveTuple out(k.size());
  for (int i = 0; i < p.size(); ++i) out[i] = p.sign(i) * k[p.perm(i)];
  return out;
}

inline WeylElement power(const WeylElement& a, int e) {
  WeylElement out = identity_element(a.size());
  for (int i = 0; i < e; ++i) out = compose(out, a);
  return out;
}

// T_i, 1 <= i <= n-1: swaps slots i and i+1.
inline WeylElement generator_t(int i, int n) {
  if (i < 1 || i > n - 1) throw IndexError("generator_t: index " + std::to_string(i) + " out of range");
  WeylElement e(n);
  std::vector<int> perm = e.perm();
  std::swap(perm[i - 1], perm[i]);
  return WeylElement(std::move(perm), std::vector<int>(n, 1));
}

inline WeylElement generator_r1(int n) {
  if (n < 1) throw IndexError("generator_r1: n must be positive");
  std::vector<int> sign(n, 1);
  sign[0] = -1;
  return WeylElement(identity_element(n).perm(), std::move(sign));
}

// R_i = T_{i-1} ... T_1 R_1 T_1 ... T_{i-1}
inline WeylElement element_r(int i, int n) {
  if (i < 1 || i > n) throw IndexError("element_r: index " + std::to_string(i) + " out of range");
  WeylElement out = generator_r1(n);
  for (int j = 1; j < i; ++j) out = compose({generator_t(j, n), out, generator_t(j, n)});
  return out;
}

// C_n = T_{n-1} T_{n-2} ... T_1
inline WeylElement element_c(int n) {
  WeylElement out = identity_element(n);
  for (int j = n - 1; j >= 1; --j) out = compose(out, generator_t(j, n));
  return out;
}

inline double factorial(int n) {
  double f = 1;
  for (int i = 2; i <= n; ++i) f *= i;
  return f;
}

// All one-line permutations of {0..n-1} in lexicographic order.
inline std::vector<std::vector<int>> permutations_lex(int n) {
  std::vector<std::vector<int>> out;
  std::vector<int> p(n);
  std::iota(p.begin(), p.end(), 0);
  do out.push_back(p);
  while (std::next_permutation(p.begin(), p.end()));
  return out;
}

inline std::vector<WeylElement> enumerate(int n) {
  if (n < 1 || n > 6) throw IndexError("enumerate: n must be in 1..6");
  std::vector<WeylElement> out;
  for (const auto& p : permutations_lex(n))
    for (int mask = 0; mask < (1 << n); ++mask) {
      std::vector<int> sign(n);
      for (int i = 0; i < n; ++i) sign[i] = (mask >> i) & 1 ? -1 : 1;
      out.emplace_back(p, std::move(sign));
    }
  return out;
}

// W_{n-1} as the elements of W_n fixing the last slot with sign +.
inline WeylElement embed(const WeylElement& x, int n) {
  if (x.size() + 1 != n) throw ValidationError("embed: rank mismatch");
  std::vector<int> perm = x.perm(), sign = x.sign();
  perm.push_back(n - 1);
  sign.push_back(1);
  return WeylElement(std::move(perm), std::move(sign));
}

struct QuotientEntry {
  WeylElement element;
  int d = 0;
  int j = 0;
  WeylElement x;  // element of W_{n-1}
};

// W_n = { C_n^d R_n^j X : 0 <= d < n, j in {0,1}, X in W_{n-1} }.
inline std::vector<QuotientEntry> quotient_decomposition(int n) {
  if (n < 2) throw IndexError("quotient_decomposition: n must be at least 2");
  const WeylElement c = element_c(n);
  const WeylElement rn = element_r(n, n);
  std::vector<QuotientEntry> out;
  WeylElement cd = identity_element(n);
  for (int d = 0; d < n; ++d, cd = compose(cd, c))
    for (int j = 0; j < 2; ++j) {
      const WeylElement head = j ? compose(cd, rn) : cd;
      for (const auto& x : enumerate(n - 1)) out.push_back({compose(head, embed(x, n)), d, j, x});
    }
  return out;
}

}  // namespace qgs
