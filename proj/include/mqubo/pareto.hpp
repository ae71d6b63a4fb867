#pragma once

// Dominance filtering and hypervolume measures (minimization throughout).

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <numeric>
#include <span>
#include <string>
#include <vector>

#include "mqubo/error.hpp"
#include "mqubo/qubo.hpp"
#include "mqubo/random.hpp"

namespace mqubo {

using ObjectiveVector = std::vector<double>;

inline constexpr std::size_t kMaxExactHvDimension = 4;

struct SolutionRecord {
    BinaryVector bits;
    ObjectiveVector objectives;
};

// Mutually non-dominated records without duplicate objective vectors.
struct FrontSet {
    std::vector<SolutionRecord> records;

    std::size_t size() const noexcept { return records.size(); }
    bool empty() const noexcept { return records.empty(); }

    std::vector<ObjectiveVector> points() const {
        std::vector<ObjectiveVector> out;
        out.reserve(records.size());
        for (const auto& r : records) out.push_back(r.objectives);
        return out;
    }
};

// a <= b everywhere and a < b somewhere.
inline bool dominates(std::span<const double> a, std::span<const double> b) {
    if (a.size() != b.size()) throw DimensionError("objective vector length", a.size(), b.size());
    bool strict = false;
    for (std::size_t i = 0; i < a.size(); ++i) {
        if (a[i] > b[i]) return false;
        if (a[i] < b[i]) strict = true;
    }
    return strict;
}

// Keeps every record no other record dominates. Records with identical
// objective vectors collapse to the first one in input order.
inline FrontSet non_dominated_filter(std::span<const SolutionRecord> records) {
    FrontSet front;
    for (std::size_t i = 0; i < records.size(); ++i) {
        bool keep = true;
        for (std::size_t j = 0; j < records.size() && keep; ++j) {
            if (j == i) continue;
            if (dominates(records[j].objectives, records[i].objectives)) keep = false;
            if (j < i && records[j].objectives == records[i].objectives) keep = false;
        }
        if (keep) front.records.push_back(records[i]);
    }
    return front;
}

namespace detail {

// Hypervolume of points that are all strictly below ref, using the first
// `dim` coordinates. Sweeps the last coordinate and recurses on slices.
inline double hv_sweep(std::vector<const double*>& pts, const double* ref, std::size_t dim) {
    if (pts.empty()) return 0.0;
    if (dim == 1) {
        double lo = ref[0];
        for (const double* p : pts) lo = std::min(lo, p[0]);
        return ref[0] - lo;
    }
    const std::size_t last = dim - 1;
    std::sort(pts.begin(), pts.end(), [last](const double* a, const double* b) { return a[last] < b[last]; });
    if (dim == 2) {
        double area = 0.0;
        double best_x = ref[0];
        for (std::size_t k = 0; k < pts.size(); ++k) {
            best_x = std::min(best_x, pts[k][0]);
            const double next = (k + 1 < pts.size()) ? pts[k + 1][1] : ref[1];
            area += (ref[0] - best_x) * (next - pts[k][1]);
        }
        return area;
    }
    double volume = 0.0;
    std::vector<const double*> slice;
    slice.reserve(pts.size());
    for (std::size_t k = 0; k < pts.size(); ++k) {
        slice.push_back(pts[k]);
        const double next = (k + 1 < pts.size()) ? pts[k + 1][last] : ref[last];
        const double height = next - pts[k][last];
        if (height <= 0.0) continue;
        std::vector<const double*> work = slice;
        volume += hv_sweep(work, ref, last) * height;
    }
    return volume;
}

}  // namespace detail

// Number of points that are not strictly below ref in every coordinate; such
// points add no volume.
inline std::size_t points_outside(std::span<const ObjectiveVector> points, std::span<const double> ref) {
    std::size_t count = 0;
    for (const auto& p : points) {
        if (p.size() != ref.size()) throw DimensionError("objective vector length", ref.size(), p.size());
        for (std::size_t i = 0; i < p.size(); ++i) {
            if (!(p[i] < ref[i])) {
                ++count;
                break;
            }
        }
    }
    return count;
}

// Lebesgue measure of the union of boxes [p, ref] for m <= 4. Points touching
// or beyond ref in some coordinate contribute nothing.
inline double hypervolume_exact(std::span<const ObjectiveVector> points, std::span<const double> ref) {
    const std::size_t m = ref.size();
    if (m == 0 || m > kMaxExactHvDimension) {
        throw InvariantError("exact hypervolume supports 1 to " + std::to_string(kMaxExactHvDimension) +
                             " objectives, got " + std::to_string(m));
    }
    std::vector<const double*> inside;
    inside.reserve(points.size());
    for (const auto& p : points) {
        if (p.size() != m) throw DimensionError("objective vector length", m, p.size());
        bool below = true;
        for (std::size_t i = 0; i < m; ++i) below = below && p[i] < ref[i];
        if (below) inside.push_back(p.data());
    }
    return detail::hv_sweep(inside, ref.data(), m);
}

inline double hypervolume_exact(const FrontSet& front, std::span<const double> ref) {
    const auto pts = front.points();
    return hypervolume_exact(pts, ref);
}

// Reference-point sampling box for averaged hypervolume: reference points are
// uniform on [z_ref, 2 z_ref - z_desire].
struct HvProtocol {
    std::size_t ref_point_count = 10000;
    ObjectiveVector z_ref;
    ObjectiveVector z_desire;
    std::uint64_t seed = 0;

    ObjectiveVector z_anti() const {
        ObjectiveVector out(z_ref.size());
        for (std::size_t i = 0; i < out.size(); ++i) out[i] = 2.0 * z_ref[i] - z_desire[i];
        return out;
    }

    void validate() const {
        if (ref_point_count < 1) throw InvariantError("ref_point_count must be at least 1");
        if (z_ref.size() != z_desire.size()) {
            throw DimensionError("z_desire length", z_ref.size(), z_desire.size());
        }
        for (std::size_t i = 0; i < z_ref.size(); ++i) {
            if (!(z_desire[i] <= z_ref[i])) throw InvariantError("z_desire must not exceed z_ref");
        }
    }
};

struct HypervolumeResult {
    double mean = 0.0;
    double std = 0.0;  // population std-dev across reference points
    std::size_t count = 0;
    ObjectiveVector z_ref;
    ObjectiveVector z_anti;
};

// z_ref is the componentwise max and z_desire the componentwise min over every
// record of every front.
inline HvProtocol build_protocol(std::span<const FrontSet> fronts, std::size_t count, std::uint64_t seed) {
    HvProtocol proto;
    proto.ref_point_count = count;
    proto.seed = seed;
    bool any = false;
    for (const auto& f : fronts) {
        for (const auto& r : f.records) {
            if (!any) {
                proto.z_ref = r.objectives;
                proto.z_desire = r.objectives;
                any = true;
                continue;
            }
            if (r.objectives.size() != proto.z_ref.size()) {
                throw DimensionError("objective vector length", proto.z_ref.size(), r.objectives.size());
            }
            for (std::size_t i = 0; i < r.objectives.size(); ++i) {
                proto.z_ref[i] = std::max(proto.z_ref[i], r.objectives[i]);
                proto.z_desire[i] = std::min(proto.z_desire[i], r.objectives[i]);
            }
        }
    }
    if (!any) throw InvariantError("cannot build a hypervolume protocol from an empty set of solutions");
    return proto;
}

// Sample the i-th coordinate of a reference point.
inline double sample_coordinate(Xoshiro256& rng, double lo, double hi) {
    const double u = rng.uniform();
    return lo == hi ? lo : lo + u * (hi - lo);
}

namespace detail {

// For every subset S of coordinates (bitmask), the hypervolume of the points
// projected onto S with reference z. Entry 0 is 1.
//
// If every point is <= z, then for any ref >= z
//   HV(ref) = sum_T prod_{i in T} (ref_i - z_i) * proj[complement of T],
// because a point y with y_i > z_i exactly on T is dominated iff its
// projection onto the remaining coordinates is.
inline std::vector<double> projected_volumes(std::span<const ObjectiveVector> points, std::span<const double> z) {
    const std::size_t m = z.size();
    const std::size_t subsets = std::size_t{1} << m;
    std::vector<double> proj(subsets, 1.0);
    std::vector<ObjectiveVector> sub(points.size());
    ObjectiveVector sub_ref;
    for (std::size_t mask = 1; mask < subsets; ++mask) {
        sub_ref.clear();
        for (std::size_t i = 0; i < m; ++i) {
            if (mask >> i & 1U) sub_ref.push_back(z[i]);
        }
        for (std::size_t k = 0; k < points.size(); ++k) {
            sub[k].clear();
            for (std::size_t i = 0; i < m; ++i) {
                if (mask >> i & 1U) sub[k].push_back(points[k][i]);
            }
        }
        proj[mask] = hypervolume_exact(sub, sub_ref);
    }
    return proj;
}

inline bool all_within(std::span<const ObjectiveVector> points, std::span<const double> z) {
    for (const auto& p : points) {
        if (p.size() != z.size()) throw DimensionError("objective vector length", z.size(), p.size());
        for (std::size_t i = 0; i < z.size(); ++i) {
            if (p[i] > z[i]) return false;
        }
    }
    return true;
}

}  // namespace detail

// Mean and std-dev of the exact hypervolume over proto.ref_point_count
// reference points drawn from the protocol box. Deterministic in proto.seed.
inline HypervolumeResult averaged_hypervolume(std::span<const ObjectiveVector> points, const HvProtocol& proto) {
    proto.validate();
    HypervolumeResult res;
    res.count = proto.ref_point_count;
    res.z_ref = proto.z_ref;
    res.z_anti = proto.z_anti();

    const std::size_t m = proto.z_ref.size();
    if (m == 0 || m > kMaxExactHvDimension) {
        throw InvariantError("exact hypervolume supports 1 to " + std::to_string(kMaxExactHvDimension) +
                             " objectives, got " + std::to_string(m));
    }
    // Every sampled reference point is >= z_ref, so when the points are all
    // within z_ref the per-sample volume reduces to a 2^m-term sum.
    const bool decompose = !points.empty() && detail::all_within(points, res.z_ref);
    std::vector<double> proj;
    if (decompose) proj = detail::projected_volumes(points, res.z_ref);
    const std::size_t full = (std::size_t{1} << m) - 1;

    Xoshiro256 rng(derive_seed(proto.seed, "hv-reference-points"));
    std::vector<double> values(proto.ref_point_count);
    ObjectiveVector ref(m);
    ObjectiveVector d(m);
    for (std::size_t s = 0; s < proto.ref_point_count; ++s) {
        for (std::size_t i = 0; i < m; ++i) ref[i] = sample_coordinate(rng, res.z_ref[i], res.z_anti[i]);
        if (!decompose) {
            values[s] = hypervolume_exact(points, ref);
            continue;
        }
        for (std::size_t i = 0; i < m; ++i) d[i] = ref[i] - res.z_ref[i];
        double v = 0.0;
        for (std::size_t t = 0; t <= full; ++t) {
            double w = proj[full & ~t];
            for (std::size_t i = 0; i < m; ++i) {
                if (t >> i & 1U) w *= d[i];
            }
            v += w;
        }
        values[s] = v;
    }
    const double n = static_cast<double>(values.size());
    res.mean = std::accumulate(values.begin(), values.end(), 0.0) / n;
    double ss = 0.0;
    for (const double v : values) ss += (v - res.mean) * (v - res.mean);
    res.std = std::sqrt(ss / n);
    return res;
}

inline HypervolumeResult averaged_hypervolume(const FrontSet& front, const HvProtocol& proto) {
    const auto pts = front.points();
    return averaged_hypervolume(pts, proto);
}

}  // namespace mqubo
