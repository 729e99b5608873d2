#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <string>
#include <vector>

#include "bikeshare/common.hpp"
#include "bikeshare/encoding.hpp"
#include "bikeshare/evaluator.hpp"

namespace bikeshare {

/// True iff a dominates b: no worse in every objective, strictly better in
/// at least one (all minimized).
inline bool dominates(const Objectives& a, const Objectives& b) {
  const bool no_worse = a.f1 <= b.f1 && a.f2 <= b.f2 && a.f3 <= b.f3;
  const bool better = a.f1 < b.f1 || a.f2 < b.f2 || a.f3 < b.f3;
  return no_worse && better;
}

struct FrontEntry {
  Objectives objectives;
  Genome genome;
  std::string provenance;  // operator / baseline / run id
};

/// Mutually non-dominated archive. Insertion drops dominated entries and
/// rejects dominated or duplicate candidates; equal objective vectors from
/// different genomes coexist.
class FrontArchive {
 public:
  bool insert(FrontEntry entry) {
    for (const FrontEntry& e : entries_) {
      if (dominates(e.objectives, entry.objectives)) return false;
      if (e.objectives == entry.objectives && e.genome == entry.genome) return false;
    }
    std::erase_if(entries_, [&](const FrontEntry& e) {
      return dominates(entry.objectives, e.objectives);
    });
    entries_.push_back(std::move(entry));
    return true;
  }

  const std::vector<FrontEntry>& entries() const { return entries_; }
  std::size_t size() const { return entries_.size(); }
  bool empty() const { return entries_.empty(); }

 private:
  std::vector<FrontEntry> entries_;
};

/// Union of archives filtered to the non-dominated subset, provenance kept.
inline FrontArchive pool_reference_front(const std::vector<FrontArchive>& archives) {
  if (archives.empty()) throw Error("pool_reference_front: no archives");
  FrontArchive pooled;
  for (const FrontArchive& a : archives)
    for (const FrontEntry& e : a.entries()) pooled.insert(e);
  return pooled;
}

inline std::size_t nds_count(const FrontArchive& archive) { return archive.size(); }

inline std::size_t nds_count(const FrontArchive& archive, const std::string& provenance) {
  std::size_t n = 0;
  for (const FrontEntry& e : archive.entries())
    if (e.provenance == provenance) ++n;
  return n;
}

using Point3 = std::array<double, 3>;

inline Point3 to_point(const Objectives& o) { return {o.f1, o.f2, o.f3}; }

inline std::vector<Point3> archive_points(const FrontArchive& a) {
  std::vector<Point3> pts;
  pts.reserve(a.size());
  for (const FrontEntry& e : a.entries()) pts.push_back(to_point(e.objectives));
  return pts;
}

/// Exact 2-D hypervolume (minimization). Points beyond the reference are
/// ignored by the caller's filtering.
inline double hypervolume2d(std::vector<std::array<double, 2>> pts,
                            const std::array<double, 2>& ref) {
  std::erase_if(pts, [&](const auto& p) { return p[0] > ref[0] || p[1] > ref[1]; });
  if (pts.empty()) return 0.0;
  std::sort(pts.begin(), pts.end());
  double volume = 0.0;
  double prev_y = ref[1];
  for (const auto& p : pts) {
    if (p[1] < prev_y) {
      volume += (ref[0] - p[0]) * (prev_y - p[1]);
      prev_y = p[1];
    }
  }
  return volume;
}

/// Exact 3-D hypervolume via dimension sweep: sort by f3 and accumulate 2-D
/// slice areas between consecutive levels. Points not dominating the
/// reference are excluded (and counted when `excluded` is given).
inline double hypervolume(const std::vector<Point3>& points, const Point3& ref,
                          std::size_t* excluded = nullptr) {
  std::vector<Point3> pts;
  std::size_t dropped = 0;
  for (const Point3& p : points) {
    if (p[0] <= ref[0] && p[1] <= ref[1] && p[2] <= ref[2])
      pts.push_back(p);
    else
      ++dropped;
  }
  if (excluded) *excluded = dropped;
  if (pts.empty()) return 0.0;
  std::sort(pts.begin(), pts.end(),
            [](const Point3& a, const Point3& b) { return a[2] < b[2]; });
  double volume = 0.0;
  std::vector<std::array<double, 2>> slice;
  for (std::size_t k = 0; k < pts.size(); ++k) {
    slice.push_back({pts[k][0], pts[k][1]});
    if (k + 1 < pts.size() && pts[k + 1][2] == pts[k][2]) continue;
    const double z_next = k + 1 < pts.size() ? pts[k + 1][2] : ref[2];
    if (z_next > pts[k][2])
      volume += hypervolume2d(slice, {ref[0], ref[1]}) * (z_next - pts[k][2]);
  }
  return volume;
}

/// Shared reference point: componentwise max over both fronts scaled by
/// 1.01, with a +1 absolute margin where the max is zero.
inline Point3 shared_reference_point(const std::vector<Point3>& front,
                                     const std::vector<Point3>& reference) {
  Point3 r{0.0, 0.0, 0.0};
  for (const auto* set : {&front, &reference})
    for (const Point3& p : *set)
      for (int k = 0; k < 3; ++k) r[k] = std::max(r[k], p[k]);
  for (int k = 0; k < 3; ++k) r[k] = r[k] > 0.0 ? r[k] * 1.01 : r[k] + 1.0;
  return r;
}

inline double relative_hypervolume(const std::vector<Point3>& front,
                                   const std::vector<Point3>& reference) {
  if (reference.empty()) throw Error("relative_hypervolume: empty reference front");
  const Point3 r = shared_reference_point(front, reference);
  const double ref_hv = hypervolume(reference, r);
  if (ref_hv <= 0.0) throw Error("relative_hypervolume: zero reference hypervolume");
  return hypervolume(front, r) / ref_hv;
}

using PointN = std::vector<double>;

namespace detail {

/// Dominance-compliant distance: only components where a is worse than z
/// contribute.
inline double d_plus(const PointN& a, const PointN& z) {
  double s = 0.0;
  for (std::size_t k = 0; k < a.size(); ++k) {
    const double diff = std::max(a[k] - z[k], 0.0);
    s += diff * diff;
  }
  return std::sqrt(s);
}

}  // namespace detail

inline double gd_plus(const std::vector<PointN>& front, const std::vector<PointN>& reference) {
  if (front.empty() || reference.empty()) throw Error("gd_plus: empty front");
  double total = 0.0;
  for (const PointN& a : front) {
    double best = detail::d_plus(a, reference[0]);
    for (std::size_t k = 1; k < reference.size(); ++k)
      best = std::min(best, detail::d_plus(a, reference[k]));
    total += best;
  }
  return total / static_cast<double>(front.size());
}

inline double igd_plus(const std::vector<PointN>& front, const std::vector<PointN>& reference) {
  if (front.empty() || reference.empty()) throw Error("igd_plus: empty front");
  double total = 0.0;
  for (const PointN& z : reference) {
    double best = detail::d_plus(front[0], z);
    for (std::size_t k = 1; k < front.size(); ++k)
      best = std::min(best, detail::d_plus(front[k], z));
    total += best;
  }
  return total / static_cast<double>(reference.size());
}

/// Mean distance to the centroid after per-objective range normalization
/// (zero-range objectives contribute nothing).
inline double spread(const std::vector<PointN>& front) {
  if (front.empty()) throw Error("spread: empty front");
  const std::size_t dims = front.front().size();
  std::vector<double> lo(dims, std::numeric_limits<double>::infinity());
  std::vector<double> hi(dims, -std::numeric_limits<double>::infinity());
  for (const PointN& p : front)
    for (std::size_t k = 0; k < dims; ++k) {
      lo[k] = std::min(lo[k], p[k]);
      hi[k] = std::max(hi[k], p[k]);
    }
  std::vector<PointN> norm(front.size(), PointN(dims, 0.0));
  for (std::size_t i = 0; i < front.size(); ++i)
    for (std::size_t k = 0; k < dims; ++k)
      if (hi[k] > lo[k]) norm[i][k] = (front[i][k] - lo[k]) / (hi[k] - lo[k]);
  PointN centroid(dims, 0.0);
  for (const PointN& p : norm)
    for (std::size_t k = 0; k < dims; ++k) centroid[k] += p[k];
  for (double& c : centroid) c /= static_cast<double>(front.size());
  double total = 0.0;
  for (const PointN& p : norm) {
    double s = 0.0;
    for (std::size_t k = 0; k < dims; ++k) s += (p[k] - centroid[k]) * (p[k] - centroid[k]);
    total += std::sqrt(s);
  }
  return total / static_cast<double>(front.size());
}

inline std::vector<PointN> to_pointn(const std::vector<Point3>& pts) {
  std::vector<PointN> out;
  out.reserve(pts.size());
  for (const Point3& p : pts) out.push_back({p[0], p[1], p[2]});
  return out;
}

}  // namespace bikeshare
