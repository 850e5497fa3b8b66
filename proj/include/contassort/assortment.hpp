#pragma once

#include <algorithm>
#include <cmath>
#include <initializer_list>
#include <stdexcept>
#include <vector>

namespace contassort {

struct Interval {
  double lo = 0.0;
  double hi = 0.0;
  double length() const { return hi - lo; }
  bool operator==(const Interval&) const = default;
};

/// A finite union of disjoint closed subintervals of [0,1], kept sorted and
/// merged. Zero-length pieces are dropped on construction.
class Assortment {
public:
  Assortment() = default;

  Assortment(std::initializer_list<Interval> ivs)
      : Assortment(std::vector<Interval>(ivs)) {}

  explicit Assortment(std::vector<Interval> ivs) {
    for (const auto& iv : ivs) {
      if (!(std::isfinite(iv.lo) && std::isfinite(iv.hi)))
        throw std::invalid_argument("assortment interval must be finite");
      if (iv.lo < 0.0 || iv.hi > 1.0 || iv.lo > iv.hi)
        throw std::invalid_argument("assortment interval must satisfy 0 <= lo <= hi <= 1");
    }
    std::sort(ivs.begin(), ivs.end(),
              [](const Interval& a, const Interval& b) { return a.lo < b.lo; });
    for (const auto& iv : ivs) {
      if (iv.hi <= iv.lo) continue;  // drop zero length
      if (!ivs_.empty() && iv.lo <= ivs_.back().hi) {
        ivs_.back().hi = std::max(ivs_.back().hi, iv.hi);
      } else {
        ivs_.push_back(iv);
      }
    }
  }

  static Assortment unit() { return Assortment{{0.0, 1.0}}; }

  const std::vector<Interval>& intervals() const { return ivs_; }
  bool is_empty() const { return ivs_.empty(); }
  std::size_t piece_count() const { return ivs_.size(); }

  double volume() const {
    double v = 0.0;
    for (const auto& iv : ivs_) v += iv.length();
    return v;
  }

  bool contains(double x) const {
    for (const auto& iv : ivs_)
      if (x >= iv.lo && x <= iv.hi) return true;
    return false;
  }

  Assortment intersect(const Assortment& other) const {
    std::vector<Interval> out;
    std::size_t i = 0, j = 0;
    while (i < ivs_.size() && j < other.ivs_.size()) {
      const double lo = std::max(ivs_[i].lo, other.ivs_[j].lo);
      const double hi = std::min(ivs_[i].hi, other.ivs_[j].hi);
      if (lo < hi) out.push_back({lo, hi});
      if (ivs_[i].hi < other.ivs_[j].hi)
        ++i;
      else
        ++j;
    }
    return Assortment(std::move(out));
  }

  Assortment unite(const Assortment& other) const {
    std::vector<Interval> out = ivs_;
    out.insert(out.end(), other.ivs_.begin(), other.ivs_.end());
    return Assortment(std::move(out));
  }

  /// The leftmost sub-union with the requested volume (clamped to the total).
  Assortment leftmost_slice(double vol) const {
    std::vector<Interval> out;
    double need = std::max(0.0, vol);
    for (const auto& iv : ivs_) {
      if (need <= 0.0) break;
      const double take = std::min(need, iv.length());
      out.push_back({iv.lo, iv.lo + take});
      need -= take;
    }
    return Assortment(std::move(out));
  }

  bool operator==(const Assortment& other) const = default;

private:
  std::vector<Interval> ivs_;
};

inline double volume(const Assortment& s) { return s.volume(); }

}  // namespace contassort
