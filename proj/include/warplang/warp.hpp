#pragma once

#include <cassert>
#include <cstdint>
#include <string>
#include <vector>

namespace warplang {

// An element of ω+1: a natural number or the top element ω.
// Addition saturates at ω; the order is 0 < 1 < ... < ω.
class ExtNat {
 public:
  constexpr ExtNat() : v_(0) {}
  constexpr ExtNat(uint64_t n) : v_(n) { assert(n != kOmegaRep); }
  static constexpr ExtNat omega() { return ExtNat(kOmegaRep, Raw{}); }

  bool is_omega() const { return v_ == kOmegaRep; }
  bool is_zero() const { return v_ == 0; }
  uint64_t finite() const {
    assert(!is_omega());
    return v_;
  }

  friend ExtNat operator+(ExtNat a, ExtNat b) {
    if (a.is_omega() || b.is_omega()) return omega();
    assert(a.v_ <= kOmegaRep - 1 - b.v_);
    return ExtNat(a.v_ + b.v_);
  }
  ExtNat& operator+=(ExtNat o) { return *this = *this + o; }

  // a - b for a >= b; ω - x = ω, x - ω = 0.
  friend ExtNat monus(ExtNat a, ExtNat b) {
    if (a.is_omega()) return b.is_omega() ? ExtNat(0) : omega();
    if (b.is_omega()) return ExtNat(0);
    return ExtNat(a.v_ >= b.v_ ? a.v_ - b.v_ : 0);
  }

  friend ExtNat scale(ExtNat a, uint64_t k) {
    if (k == 0) return ExtNat(0);
    if (a.is_omega()) return omega();
    return ExtNat(a.v_ * k);
  }

  friend bool operator==(ExtNat a, ExtNat b) { return a.v_ == b.v_; }
  friend bool operator!=(ExtNat a, ExtNat b) { return a.v_ != b.v_; }
  friend bool operator<(ExtNat a, ExtNat b) { return a.v_ < b.v_; }
  friend bool operator<=(ExtNat a, ExtNat b) { return a.v_ <= b.v_; }
  friend bool operator>(ExtNat a, ExtNat b) { return a.v_ > b.v_; }
  friend bool operator>=(ExtNat a, ExtNat b) { return a.v_ >= b.v_; }

  friend ExtNat min(ExtNat a, ExtNat b) { return a <= b ? a : b; }
  friend ExtNat max(ExtNat a, ExtNat b) { return a >= b ? a : b; }

  std::string to_string() const;

 private:
  struct Raw {};
  constexpr ExtNat(uint64_t raw, Raw) : v_(raw) {}
  static constexpr uint64_t kOmegaRep = UINT64_MAX;
  uint64_t v_;
};

// A time warp presented as the running sums of an ultimately periodic
// sequence over ω+1. The representation is kept canonical:
//   - the period has minimal length and the prefix is folded into it as far
//     as possible;
//   - if ω occurs in the sequence, the prefix ends at the first ω and the
//     period is (0).
// Two Warps denote the same function ω+1 → ω+1 iff they compare equal.
class Warp {
 public:
  // Builds the canonical representative of {prefix}(period). The period
  // must be nonempty.
  static Warp canonical(std::vector<ExtNat> prefix, std::vector<ExtNat> period);

  static Warp identity();            // (1)
  static Warp zero();                // (0)
  static Warp later();               // {0}(1), written -1 in math
  static Warp omega();               // {w}(0)
  static Warp constant(uint64_t c);  // {c}(0)

  const std::vector<ExtNat>& prefix() const { return prefix_; }
  const std::vector<ExtNat>& period() const { return period_; }

  // The i-th element (0-based) of the underlying sequence.
  ExtNat element(uint64_t i) const {
    if (i < prefix_.size()) return prefix_[i];
    return period_[(i - prefix_.size()) % period_.size()];
  }

  // p(n): the sum of the first n sequence elements; p(0) = 0 and
  // p(ω) = sup of all p(n).
  ExtNat at(ExtNat n) const;

  bool has_omega_element() const {
    return !prefix_.empty() && prefix_.back().is_omega();
  }

  friend bool operator==(const Warp& a, const Warp& b) {
    return a.prefix_ == b.prefix_ && a.period_ == b.period_;
  }
  friend bool operator!=(const Warp& a, const Warp& b) { return !(a == b); }

  std::string to_string() const;

 private:
  Warp(std::vector<ExtNat> prefix, std::vector<ExtNat> period)
      : prefix_(std::move(prefix)), period_(std::move(period)) {}

  std::vector<ExtNat> prefix_;
  std::vector<ExtNat> period_;
};

// p ∗ q, i.e. q ∘ p: compose(p, q)(n) = q(p(n)).
Warp compose(const Warp& p, const Warp& q);

// q \ p: the largest r such that r ∘ p ≤ q. The left argument is the
// dividend, the right the divisor.
Warp residual(const Warp& q, const Warp& p);

// Pointwise order on running sums.
bool leq(const Warp& p, const Warp& q);

// Least upper bound / greatest lower bound for the pointwise order.
Warp sup(const Warp& p, const Warp& q);
Warp inf(const Warp& p, const Warp& q);

inline std::string to_string(const Warp& w) { return w.to_string(); }

}  // namespace warplang
