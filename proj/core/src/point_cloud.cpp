#include "azlab/point_cloud.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "azlab/error.hpp"

namespace azlab {

Vec PointCloud::point(std::size_t i) const {
    Vec x(dim_);
    for (int k = 0; k < dim_; ++k) x(k) = data_[i * dim_ + k];
    return x;
}

void PointCloud::push_back(const Vec& x) {
    if (x.size() != dim_) throw_config("point dimension does not match cloud");
    data_.insert(data_.end(), x.data(), x.data() + dim_);
    if (!labels_.empty()) labels_.push_back(0);
}

void PointCloud::push_back(const Vec& x, int label) {
    if (labels_.empty() && label != 0) labels_.assign(size(), 0);
    push_back(x);
    if (!labels_.empty()) labels_.back() = label;
}

void PointCloud::append(const PointCloud& other) {
    if (other.dim_ != dim_) throw_config("cloud dimension mismatch");
    if (other.has_labels() && labels_.empty()) labels_.assign(size(), 0);
    data_.insert(data_.end(), other.data_.begin(), other.data_.end());
    if (!labels_.empty()) {
        for (std::size_t i = 0; i < other.size(); ++i) labels_.push_back(other.label(i));
    }
}

void PointCloud::append(const PointCloud& other, int label) {
    if (other.dim_ != dim_) throw_config("cloud dimension mismatch");
    if (labels_.empty()) labels_.assign(size(), 0);
    data_.insert(data_.end(), other.data_.begin(), other.data_.end());
    labels_.insert(labels_.end(), other.size(), label);
}

void PointCloud::bounds(Vec& lo, Vec& hi) const {
    if (empty()) throw_config("bounds of an empty cloud");
    lo = point(0);
    hi = lo;
    for (std::size_t i = 1; i < size(); ++i) {
        for (int k = 0; k < dim_; ++k) {
            const double v = coord(i, k);
            lo(k) = std::min(lo(k), v);
            hi(k) = std::max(hi(k), v);
        }
    }
}

bool PointCloud::all_finite() const {
    return std::all_of(data_.begin(), data_.end(), [](double v) { return std::isfinite(v); });
}

double PointCloud::max_norm() const {
    double best = 0.0;
    for (std::size_t i = 0; i < size(); ++i) best = std::max(best, point(i).norm());
    return best;
}

NearestIndex::NearestIndex(const PointCloud& cloud, double cell) : cloud_(cloud) {
    if (cloud.empty()) return;
    Vec hi;
    cloud.bounds(lo_, hi);
    const int m = cloud.dim();
    if (cell <= 0.0) {
        // Aim for roughly one point per cell along a curve-like cloud.
        const double extent = std::max((hi - lo_).maxCoeff(), 1e-12);
        cell = extent / std::max(1.0, std::pow(static_cast<double>(cloud.size()), 1.0 / m));
        cell = std::max(cell, 1e-12);
    }
    cell_ = cell;
    int idx[kMaxDim];
    for (std::size_t i = 0; i < cloud.size(); ++i) buckets_[key(cloud.point(i), idx)].push_back(i);
    max_ring_ = 0;
    for (int k = 0; k < m; ++k)
        max_ring_ = std::max(max_ring_, static_cast<int>((hi(k) - lo_(k)) / cell_) + 1);
}

long long NearestIndex::key(const Vec& x, int* cell_index) const {
    long long h = 0;
    for (int k = 0; k < x.size(); ++k) {
        cell_index[k] = static_cast<int>(std::floor((x(k) - lo_(k)) / cell_));
        h = h * 2097143LL + cell_index[k];
    }
    return h;
}

double NearestIndex::distance(const Vec& x) const {
    if (cloud_.empty()) return std::numeric_limits<double>::infinity();
    const int m = cloud_.dim();
    auto brute = [&] {
        double best = std::numeric_limits<double>::infinity();
        for (std::size_t i = 0; i < cloud_.size(); ++i) {
            double d2 = 0.0;
            for (int k = 0; k < m; ++k) {
                const double d = cloud_.coord(i, k) - x(k);
                d2 += d * d;
            }
            best = std::min(best, d2);
        }
        return std::sqrt(best);
    };
    int center[kMaxDim];
    key(x, center);
    // Cells lying between the query and the occupied grid.
    int gap = 0;
    for (int k = 0; k < m; ++k) gap = std::max({gap, -center[k], center[k] - max_ring_});
    if (gap > 32) return brute();

    double best = std::numeric_limits<double>::infinity();
    int offset[kMaxDim];
    for (int ring = 0; ring <= gap + max_ring_ + 1; ++ring) {
        // Cells on the surface of the (2 ring + 1)^m cube around the query cell.
        const int side = 2 * ring + 1;
        long long total = 1;
        for (int k = 0; k < m; ++k) total *= side;
        if (total > 4 * static_cast<long long>(cloud_.size()) + 64) return std::min(best, brute());
        for (long long c = 0; c < total; ++c) {
            long long rem = c;
            bool surface = false;
            for (int k = 0; k < m; ++k) {
                offset[k] = static_cast<int>(rem % side) - ring;
                rem /= side;
                if (std::abs(offset[k]) == ring) surface = true;
            }
            if (!surface) continue;
            long long h = 0;
            for (int k = 0; k < m; ++k) h = h * 2097143LL + (center[k] + offset[k]);
            auto it = buckets_.find(h);
            if (it == buckets_.end()) continue;
            for (std::size_t i : it->second) {
                double d2 = 0.0;
                for (int k = 0; k < m; ++k) {
                    const double d = cloud_.coord(i, k) - x(k);
                    d2 += d * d;
                }
                best = std::min(best, std::sqrt(d2));
            }
        }
        // Anything outside the cube is at least ring cells away.
        if (best <= ring * cell_) return best;
    }
    return best;
}

}  // namespace azlab
