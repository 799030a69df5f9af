#include "wildbloch/arcs.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace wildbloch {

namespace {

double wrap(double t) {
  double w = std::fmod(t, kTwoPi);
  if (w < 0.0) w += kTwoPi;
  if (w >= kTwoPi) w = 0.0;
  return w;
}

}  // namespace

ArcSet::ArcSet(const std::vector<Arc>& arcs) {
  std::vector<Arc> raw;
  for (const Arc& a : arcs) {
    if (!std::isfinite(a.start) || !std::isfinite(a.end))
      throw std::invalid_argument("arc endpoints must be finite");
    const double len = a.end - a.start;
    if (len < 0.0) throw std::invalid_argument("arc end precedes start");
    if (len >= kTwoPi) {
      raw = {{0.0, kTwoPi}};
      break;
    }
    const double s = wrap(a.start);
    const double e = s + len;
    if (e <= kTwoPi) {
      raw.push_back({s, e});
    } else {
      raw.push_back({s, kTwoPi});
      raw.push_back({0.0, e - kTwoPi});
    }
  }
  std::sort(raw.begin(), raw.end(),
            [](const Arc& x, const Arc& y) { return x.start < y.start || (x.start == y.start && x.end < y.end); });
  for (const Arc& a : raw) {
    if (!pieces_.empty() && a.start <= pieces_.back().end)
      pieces_.back().end = std::max(pieces_.back().end, a.end);
    else
      pieces_.push_back(a);
  }
}

ArcSet ArcSet::full() { return ArcSet({{0.0, kTwoPi}}); }

std::vector<Arc> ArcSet::logical_arcs() const {
  std::vector<Arc> out = pieces_;
  if (out.size() >= 2 && out.front().start == 0.0 && out.back().end == kTwoPi) {
    Arc merged{out.back().start, kTwoPi + out.front().end};
    out.pop_back();
    out.erase(out.begin());
    out.push_back(merged);
  }
  return out;
}

double ArcSet::measure() const {
  double s = 0.0;
  for (const Arc& a : pieces_) s += a.length();
  return std::min(1.0, s / kTwoPi);
}

bool ArcSet::is_full() const {
  return pieces_.size() == 1 && pieces_[0].start == 0.0 && pieces_[0].end == kTwoPi;
}

bool ArcSet::contains(double theta) const {
  const double t = wrap(theta);
  auto it = std::upper_bound(pieces_.begin(), pieces_.end(), t,
                             [](double v, const Arc& a) { return v < a.start; });
  if (it != pieces_.begin() && t <= std::prev(it)->end) return true;
  // 2pi and 0 are the same point
  return t == 0.0 && !pieces_.empty() && pieces_.back().end == kTwoPi;
}

ArcSet ArcSet::complement() const {
  std::vector<Arc> gaps;
  double cur = 0.0;
  for (const Arc& a : pieces_) {
    if (a.start > cur) gaps.push_back({cur, a.start});
    cur = std::max(cur, a.end);
  }
  if (cur < kTwoPi) gaps.push_back({cur, kTwoPi});
  ArcSet out;
  out.pieces_ = gaps;
  return out;
}

ArcSet ArcSet::intersect(const ArcSet& other) const {
  std::vector<Arc> out;
  for (const Arc& a : pieces_)
    for (const Arc& b : other.pieces_) {
      const double s = std::max(a.start, b.start), e = std::min(a.end, b.end);
      if (e > s) out.push_back({s, e});
    }
  ArcSet r;
  std::sort(out.begin(), out.end(), [](const Arc& x, const Arc& y) { return x.start < y.start; });
  r.pieces_ = out;
  return r;
}

double ArcSet::largest_gap() const {
  double g = 0.0;
  for (const Arc& a : complement().logical_arcs()) g = std::max(g, a.length());
  return g;
}

std::vector<double> ArcSet::sample_angles(std::size_t count, bool chebyshev) const {
  std::vector<double> out;
  const auto arcs = logical_arcs();
  if (arcs.empty() || count == 0) return out;
  double total = 0.0;
  for (const Arc& a : arcs) total += a.length();
  const bool periodic = is_full();
  for (const Arc& a : arcs) {
    const auto n = std::max<std::size_t>(
        2, static_cast<std::size_t>(std::ceil(static_cast<double>(count) * a.length() / total)));
    for (std::size_t j = 0; j < n; ++j) {
      double t;
      if (periodic)
        t = a.start + a.length() * static_cast<double>(j) / static_cast<double>(n);
      else if (chebyshev)
        t = a.start + 0.5 * a.length() *
                          (1.0 - std::cos(kPi * (static_cast<double>(j) + 0.5) / static_cast<double>(n)));
      else
        t = a.start + a.length() * static_cast<double>(j) / static_cast<double>(n - 1);
      out.push_back(wrap(t));
    }
  }
  return out;
}

std::vector<double> ArcSet::random_angles(std::size_t count, std::uint64_t seed) const {
  std::vector<double> out;
  const double total = measure() * kTwoPi;
  if (pieces_.empty() || total <= 0.0) return out;
  Rng rng(derive_seed(seed, 0xa5c));
  out.reserve(count);
  for (std::size_t i = 0; i < count; ++i) {
    double u = rng.uniform() * total;
    for (const Arc& a : pieces_) {
      if (u <= a.length()) {
        out.push_back(wrap(a.start + u));
        break;
      }
      u -= a.length();
    }
    if (out.size() < i + 1) out.push_back(wrap(pieces_.back().end));
  }
  return out;
}

}  // namespace wildbloch
