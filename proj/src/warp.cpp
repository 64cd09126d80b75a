#include "warplang/warp.hpp"

#include <algorithm>
#include <functional>
#include <numeric>

namespace warplang {

namespace {

ExtNat sum_of(const std::vector<ExtNat>& xs) {
  ExtNat s = 0;
  for (ExtNat x : xs) s += x;
  return s;
}

bool contains_omega(const std::vector<ExtNat>& xs) {
  return std::any_of(xs.begin(), xs.end(),
                     [](ExtNat x) { return x.is_omega(); });
}

}  // namespace

std::string ExtNat::to_string() const {
  return is_omega() ? "w" : std::to_string(v_);
}

Warp Warp::canonical(std::vector<ExtNat> prefix, std::vector<ExtNat> period) {
  assert(!period.empty());

  // Everything after the first ω is irrelevant: cut there, period (0).
  auto cut_at_omega = [&](uint64_t index) {
    std::vector<ExtNat> cut;
    cut.reserve(index + 1);
    for (uint64_t i = 0; i <= index; ++i)
      cut.push_back(i < prefix.size()
                        ? prefix[i]
                        : period[(i - prefix.size()) % period.size()]);
    prefix = std::move(cut);
    period = {ExtNat(0)};
  };
  for (uint64_t i = 0; i < prefix.size(); ++i) {
    if (prefix[i].is_omega()) {
      if (i + 1 != prefix.size() || period.size() != 1 ||
          !period[0].is_zero()) {
        cut_at_omega(i);
      }
      break;
    }
  }
  if (!contains_omega(prefix) && contains_omega(period)) {
    uint64_t i = 0;
    while (!period[i].is_omega()) ++i;
    cut_at_omega(prefix.size() + i);
  }

  // Minimal period length among divisors.
  for (size_t d = 1; d < period.size(); ++d) {
    if (period.size() % d != 0) continue;
    bool repeats = true;
    for (size_t i = d; i < period.size() && repeats; ++i)
      repeats = period[i] == period[i % d];
    if (repeats) {
      period.resize(d);
      break;
    }
  }

  // Fold the prefix into the period: while the last prefix element matches
  // the period's last element, absorb it by rotating the period right.
  while (!prefix.empty() && prefix.back() == period.back()) {
    prefix.pop_back();
    period.insert(period.begin(), period.back());
    period.pop_back();
  }

  return Warp(std::move(prefix), std::move(period));
}

Warp Warp::identity() { return canonical({}, {ExtNat(1)}); }
Warp Warp::zero() { return canonical({}, {ExtNat(0)}); }
Warp Warp::later() { return canonical({ExtNat(0)}, {ExtNat(1)}); }
Warp Warp::omega() { return canonical({}, {ExtNat::omega()}); }
Warp Warp::constant(uint64_t c) { return canonical({ExtNat(c)}, {ExtNat(0)}); }

ExtNat Warp::at(ExtNat n) const {
  if (n.is_omega()) {
    // sup of the running sums: ω when an ω occurs or the period has
    // positive weight, the finite total otherwise.
    if (has_omega_element()) return ExtNat::omega();
    if (!sum_of(period_).is_zero()) return ExtNat::omega();
    return sum_of(prefix_);
  }
  uint64_t k = n.finite();
  if (k <= prefix_.size()) {
    ExtNat s = 0;
    for (uint64_t i = 0; i < k; ++i) s += prefix_[i];
    return s;
  }
  ExtNat s = sum_of(prefix_);
  uint64_t rest = k - prefix_.size();
  s += scale(sum_of(period_), rest / period_.size());
  for (uint64_t i = 0; i < rest % period_.size(); ++i) s += period_[i];
  return s;
}

std::string Warp::to_string() const {
  std::string out;
  auto list = [&](const std::vector<ExtNat>& xs) {
    for (size_t i = 0; i < xs.size(); ++i) {
      if (i) out += ' ';
      out += xs[i].to_string();
    }
  };
  if (!prefix_.empty()) {
    out += '{';
    list(prefix_);
    out += '}';
  }
  out += '(';
  list(period_);
  out += ')';
  return out;
}

namespace {

// Builds a warp from its running sums f over the window [0, n0 + len],
// where the increments are (len)-periodic from index n0 + 1 on.
Warp from_running_sums(const std::function<ExtNat(uint64_t)>& f, uint64_t n0,
                       uint64_t len) {
  assert(len >= 1);
  auto inc = [&](uint64_t n) -> ExtNat {
    ExtNat cur = f(n), prev = f(n - 1);
    if (cur.is_omega()) return prev.is_omega() ? ExtNat(0) : ExtNat::omega();
    assert(!prev.is_omega() && prev <= cur);
    return monus(cur, prev);
  };
  std::vector<ExtNat> prefix, period;
  prefix.reserve(n0);
  for (uint64_t n = 1; n <= n0; ++n) prefix.push_back(inc(n));
  period.reserve(len);
  for (uint64_t n = n0 + 1; n <= n0 + len; ++n) period.push_back(inc(n));
  Warp w = Warp::canonical(std::move(prefix), std::move(period));
#ifndef NDEBUG
  for (uint64_t n = 0; n <= n0 + 3 * len + 2; ++n) assert(w.at(n) == f(n));
#endif
  return w;
}

ExtNat weight(const std::vector<ExtNat>& xs) { return sum_of(xs); }

}  // namespace

Warp compose(const Warp& p, const Warp& q) {
  // The canonical form confines ω to the last prefix slot, so only finitely
  // many elements of p can consume from q before an ω, if any.
  if (p.has_omega_element()) {
    std::vector<ExtNat> out;
    uint64_t cursor = 0;  // absolute index into q's sequence
    for (size_t i = 0; i + 1 < p.prefix().size(); ++i) {
      uint64_t k = p.prefix()[i].finite();
      ExtNat s = 0;
      for (uint64_t j = 0; j < k; ++j) s += q.element(cursor++);
      out.push_back(s);
    }
    // The ω element emits the sum of everything left in q.
    out.push_back(monus(q.at(ExtNat::omega()), q.at(cursor)));
    return Warp::canonical(std::move(out), {ExtNat(0)});
  }

  ExtNat period_weight = weight(p.period());
  if (period_weight.is_zero()) {
    // Only p's prefix consumes anything; the periodic part emits zeroes.
    std::vector<ExtNat> out;
    uint64_t cursor = 0;
    for (ExtNat e : p.prefix()) {
      ExtNat s = 0;
      for (uint64_t j = 0; j < e.finite(); ++j) s += q.element(cursor++);
      out.push_back(s);
    }
    return Warp::canonical(std::move(out), {ExtNat(0)});
  }

  // Align representations: unfold p's prefix until its weight reaches q's
  // prefix length, then unfold periods so p's period weight matches a whole
  // number of copies of q's period.
  std::vector<ExtNat> p_prefix = p.prefix();
  std::vector<ExtNat> p_period = p.period();
  uint64_t rotate = 0;
  while (weight(p_prefix).finite() < q.prefix().size()) {
    p_prefix.push_back(p_period[rotate % p_period.size()]);
    ++rotate;
  }
  if (rotate % p_period.size() != 0) {
    std::rotate(p_period.begin(), p_period.begin() + (rotate % p_period.size()),
                p_period.end());
  }

  uint64_t a = weight(p_period).finite();
  uint64_t b = q.period().size();
  uint64_t copies = std::lcm(a, b) / a;

  std::vector<ExtNat> out_prefix, out_period;
  uint64_t cursor = 0;
  auto emit = [&](ExtNat e, std::vector<ExtNat>& out) {
    ExtNat s = 0;
    for (uint64_t j = 0; j < e.finite(); ++j) s += q.element(cursor++);
    out.push_back(s);
  };
  for (ExtNat e : p_prefix) emit(e, out_prefix);
  for (uint64_t c = 0; c < copies; ++c)
    for (ExtNat e : p_period) emit(e, out_period);
  return Warp::canonical(std::move(out_prefix), std::move(out_period));
}

namespace {

// min { m | p(m) >= n } for finite n >= 1, assuming p(ω) >= n.
uint64_t min_preimage(const Warp& p, uint64_t n) {
  uint64_t hi = p.prefix().size();
  if (!p.has_omega_element()) {
    uint64_t step = std::max<uint64_t>(p.period().size(), 1);
    while (p.at(hi) < ExtNat(n)) hi += step;
  }
  uint64_t lo = 0;
  while (lo < hi) {
    uint64_t mid = lo + (hi - lo) / 2;
    if (p.at(mid) >= ExtNat(n))
      hi = mid;
    else
      lo = mid + 1;
  }
  return lo;
}

}  // namespace

Warp residual(const Warp& q, const Warp& p) {
  ExtNat p_total = p.at(ExtNat::omega());
  auto value = [&](uint64_t n) -> ExtNat {
    if (n == 0) return 0;
    if (p_total < ExtNat(n)) return ExtNat::omega();
    return q.at(min_preimage(p, n));
  };

  if (p.has_omega_element()) {
    // p saturates at some finite step; beyond the largest finite running
    // sum of p the result is the constant q(first ω step of p).
    uint64_t onset = p.prefix().size();  // p(onset) = ω
    uint64_t n0 = p.at(onset - 1).finite() + 1;
    return from_running_sums(value, n0, 1);
  }
  if (weight(p.period()).is_zero()) {
    // p never reaches past its finite total: the residual jumps to ω there.
    return from_running_sums(value, p_total.finite() + 1, 1);
  }
  if (q.has_omega_element()) {
    // q(m) = ω from m = |q.prefix| on, so the residual is eventually ω.
    uint64_t j = q.prefix().size();
    return from_running_sums(value, p.at(j == 0 ? 0 : j - 1).finite() + 1, 1);
  }

  // Both sides finite-valued and p keeps growing: the residual is
  // ultimately periodic with period weight(p.period()) * |q.period| / gcd.
  uint64_t lp = p.period().size(), lq = q.period().size();
  uint64_t copies = lq / std::gcd(lp, lq);
  uint64_t period_len = copies * weight(p.period()).finite();
  uint64_t k = std::max(p.prefix().size(), q.prefix().size());
  uint64_t n0 = p.at(k).finite() + 1;
  return from_running_sums(value, n0, period_len);
}

bool leq(const Warp& p, const Warp& q) {
  // Pointwise check over one aligned window plus a rate comparison; the
  // canonical form keeps ω out of the periods, so the rates are exact.
  uint64_t l = std::lcm(p.period().size(), q.period().size());
  uint64_t k = std::max(p.prefix().size(), q.prefix().size());
  for (uint64_t n = 1; n <= k + l; ++n)
    if (p.at(n) > q.at(n)) return false;
  // Once q saturates at ω it stays there, so rates no longer matter.
  if (q.has_omega_element()) return true;
  return scale(weight(p.period()), l / p.period().size()) <=
         scale(weight(q.period()), l / q.period().size());
}

namespace {

Warp bound(const Warp& p, const Warp& q, bool is_sup) {
  auto value = [&](uint64_t n) -> ExtNat {
    return is_sup ? max(p.at(n), q.at(n)) : min(p.at(n), q.at(n));
  };

  bool p_omega = p.has_omega_element(), q_omega = q.has_omega_element();
  uint64_t p_onset = p.prefix().size(), q_onset = q.prefix().size();
  if (p_omega && q_omega) {
    uint64_t n0 = is_sup ? std::min(p_onset, q_onset)
                         : std::max(p_onset, q_onset);
    return from_running_sums(value, n0, 1);
  }
  if (p_omega || q_omega) {
    const Warp& with = p_omega ? p : q;    // saturates at ω
    const Warp& other = p_omega ? q : p;   // stays finite
    uint64_t onset = with.prefix().size();
    if (is_sup) return from_running_sums(value, onset, 1);
    // The infimum eventually follows the finite side.
    uint64_t n0 = std::max<uint64_t>(onset, other.prefix().size());
    return from_running_sums(value, n0, other.period().size());
  }

  uint64_t l = std::lcm(p.period().size(), q.period().size());
  uint64_t k = std::max(p.prefix().size(), q.prefix().size());
  uint64_t wp = scale(weight(p.period()), l / p.period().size()).finite();
  uint64_t wq = scale(weight(q.period()), l / q.period().size()).finite();
  if (wp == wq) return from_running_sums(value, k, l);

  // Different rates: one side eventually dominates; find the last window
  // where the loser can still be ahead.
  bool p_wins = is_sup ? wp > wq : wp < wq;
  const Warp& winner = p_wins ? p : q;
  const Warp& loser = p_wins ? q : p;
  uint64_t d = p_wins == is_sup ? wp - wq : wq - wp;
  uint64_t steps = 0;
  for (uint64_t m = k + 1; m <= k + l; ++m) {
    ExtNat w = winner.at(m), lo = loser.at(m);
    ExtNat gap = is_sup ? monus(lo, w) : monus(w, lo);
    if (!gap.is_zero())
      steps = std::max(steps, (gap.finite() + d - 1) / d);
  }
  return from_running_sums(value, k + (steps + 1) * l, l);
}

}  // namespace

Warp sup(const Warp& p, const Warp& q) { return bound(p, q, true); }
Warp inf(const Warp& p, const Warp& q) { return bound(p, q, false); }

}  // namespace warplang
