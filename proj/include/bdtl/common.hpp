#pragma once

#include <boost/multiprecision/cpp_int.hpp>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace bdtl {

using Rat = boost::multiprecision::cpp_rational;

struct input_error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct internal_error : std::logic_error {
  using std::logic_error::logic_error;
};

inline Rat parse_rat(const std::string& s) {
  auto slash = s.find('/');
  try {
    if (slash == std::string::npos) {
      return Rat(boost::multiprecision::cpp_int(s));
    }
    boost::multiprecision::cpp_int num(s.substr(0, slash));
    boost::multiprecision::cpp_int den(s.substr(slash + 1));
    if (den == 0) throw input_error("zero denominator in rational: " + s);
    return Rat(num, den);
  } catch (const std::exception&) {
    throw input_error("malformed rational: " + s);
  }
}

inline std::string rat_str(const Rat& r) {
  if (denominator(r) == 1) return numerator(r).str();
  return numerator(r).str() + "/" + denominator(r).str();
}

inline bool in_unit(const Rat& r) { return r >= 0 && r <= 1; }

// Fixed-width bitset over an indexed world universe.
class BitSet {
 public:
  BitSet() : n_(0) {}
  explicit BitSet(int n) : n_(n), w_((n + 63) / 64, 0) {}
  BitSet(int n, uint64_t mask) : n_(n), w_((n + 63) / 64, 0) {
    if (!w_.empty()) w_[0] = mask;
    trim();
  }

  uint64_t low_mask() const { return w_.empty() ? 0 : w_[0]; }

  int size() const { return n_; }
  void set(int i) { w_[i >> 6] |= (uint64_t(1) << (i & 63)); }
  void reset(int i) { w_[i >> 6] &= ~(uint64_t(1) << (i & 63)); }
  bool test(int i) const { return (w_[i >> 6] >> (i & 63)) & 1; }

  bool none() const {
    for (auto x : w_)
      if (x) return false;
    return true;
  }
  bool any() const { return !none(); }
  int count() const {
    int c = 0;
    for (auto x : w_) c += __builtin_popcountll(x);
    return c;
  }
  bool subset_of(const BitSet& o) const {
    for (size_t i = 0; i < w_.size(); ++i)
      if (w_[i] & ~o.w_[i]) return false;
    return true;
  }
  bool intersects(const BitSet& o) const {
    for (size_t i = 0; i < w_.size(); ++i)
      if (w_[i] & o.w_[i]) return true;
    return false;
  }
  BitSet operator&(const BitSet& o) const {
    BitSet r(n_);
    for (size_t i = 0; i < w_.size(); ++i) r.w_[i] = w_[i] & o.w_[i];
    return r;
  }
  BitSet operator|(const BitSet& o) const {
    BitSet r(n_);
    for (size_t i = 0; i < w_.size(); ++i) r.w_[i] = w_[i] | o.w_[i];
    return r;
  }
  BitSet minus(const BitSet& o) const {
    BitSet r(n_);
    for (size_t i = 0; i < w_.size(); ++i) r.w_[i] = w_[i] & ~o.w_[i];
    return r;
  }
  BitSet complement() const {
    BitSet r(n_);
    for (size_t i = 0; i < w_.size(); ++i) r.w_[i] = ~w_[i];
    r.trim();
    return r;
  }
  bool operator==(const BitSet& o) const { return n_ == o.n_ && w_ == o.w_; }
  bool operator<(const BitSet& o) const {
    if (n_ != o.n_) return n_ < o.n_;
    return w_ < o.w_;
  }

  static BitSet full(int n) {
    BitSet r(n);
    for (auto& x : r.w_) x = ~uint64_t(0);
    r.trim();
    return r;
  }

  std::vector<int> members() const {
    std::vector<int> v;
    for (int i = 0; i < n_; ++i)
      if (test(i)) v.push_back(i);
    return v;
  }

 private:
  void trim() {
    if (n_ & 63) {
      if (!w_.empty()) w_.back() &= (uint64_t(1) << (n_ & 63)) - 1;
    }
  }
  int n_;
  std::vector<uint64_t> w_;
};

}  // namespace bdtl
