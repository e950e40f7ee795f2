#pragma once

#include <cstddef>
#include <string>
#include <unordered_map>
#include <vector>

#include "azlab/maps.hpp"
#include "azlab/types.hpp"

namespace azlab {

/// Where a cloud came from. All fields are optional context.
struct CloudMeta {
    std::string map_name;
    MapSpec spec;
    Vec x0;
    long n_transient = 0;
    long n_keep = 0;
};

/// Finite set of m-vectors stored flat, with an optional integer label per
/// point (trellis components, manifold branches).
class PointCloud {
public:
    PointCloud() = default;
    explicit PointCloud(int dim, bool ordered = true) : dim_(dim), ordered_(ordered) {}

    int dim() const noexcept { return dim_; }
    std::size_t size() const noexcept { return dim_ ? data_.size() / dim_ : 0; }
    bool empty() const noexcept { return data_.empty(); }
    bool ordered() const noexcept { return ordered_; }
    void set_ordered(bool v) noexcept { ordered_ = v; }

    Vec point(std::size_t i) const;
    double coord(std::size_t i, int k) const { return data_[i * dim_ + k]; }
    int label(std::size_t i) const { return labels_.empty() ? 0 : labels_[i]; }
    bool has_labels() const noexcept { return !labels_.empty(); }

    void reserve(std::size_t n) { data_.reserve(n * dim_); }
    void push_back(const Vec& x);
    void push_back(const Vec& x, int label);
    void append(const PointCloud& other);
    void append(const PointCloud& other, int label);

    const std::vector<double>& raw() const noexcept { return data_; }

    /// Axis-aligned bounds; throws on an empty cloud.
    void bounds(Vec& lo, Vec& hi) const;
    bool all_finite() const;
    double max_norm() const;

    CloudMeta meta;

private:
    int dim_ = 0;
    bool ordered_ = true;
    std::vector<double> data_;
    std::vector<int> labels_;
};

/// Bucket grid for nearest-point distance queries against a fixed cloud.
class NearestIndex {
public:
    /// `cell` <= 0 picks a size giving a few points per occupied cell.
    explicit NearestIndex(const PointCloud& cloud, double cell = 0.0);

    /// Distance from x to the closest cloud point (infinity for an empty cloud).
    double distance(const Vec& x) const;

private:
    long long key(const Vec& x, int* cell_index) const;

    const PointCloud& cloud_;
    double cell_ = 1.0;
    Vec lo_;
    std::unordered_map<long long, std::vector<std::size_t>> buckets_;
    int max_ring_ = 0;
};

}  // namespace azlab
