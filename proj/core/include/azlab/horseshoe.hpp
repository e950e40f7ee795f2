#pragma once

#include <optional>
#include <string>
#include <vector>

#include "azlab/dynamics.hpp"
#include "azlab/hypothesis.hpp"
#include "azlab/maps.hpp"
#include "azlab/point_cloud.hpp"

namespace azlab {

/// Pieces of the model region. Z is the column -1 <= x2 <= 9 within distance 4
/// of x1 = -2; the caps sit below and above it.
enum class RegionPiece { c0, s0, s_half, s1, c1, outside };

std::string_view piece_name(RegionPiece p);

/// Planar region given by an affine frame x = A y + b over the model
/// stadium (points within distance 4 of the segment x1 = -2, -1 <= x2 <= 9).
class HorseshoeRegion {
public:
    HorseshoeRegion();
    HorseshoeRegion(const Mat& frame, const Vec& offset);

    /// Frame with the saddle at model (0, 0), model x1 along `stable` and model
    /// x2 along `unstable`, one model unit = `scale`.
    static HorseshoeRegion aligned(const Vec& saddle, const Vec& stable, const Vec& unstable, double scale);

    const Mat& frame() const noexcept { return frame_; }
    const Vec& offset() const noexcept { return offset_; }

    Vec to_model(const Vec& x) const;
    Vec from_model(const Vec& y) const;

    /// 4 minus the distance to the core segment, in model units (positive inside).
    static double model_margin(const Vec& y);
    static RegionPiece model_piece(const Vec& y);

    bool contains(const Vec& x) const { return model_margin(to_model(x)) >= 0.0; }

private:
    Mat frame_;
    Mat inverse_;
    Vec offset_;
};

struct AHReport {
    /// One check per condition: ah2_containment, ah3_transversal, ah4_cap_sink,
    /// ah5_middle_band, ah6_saddle, ah7_coefficients.
    HypothesisReport checks;
    double containment_margin = 0.0;
    double middle_band_margin = 0.0;
    double min_transversal_angle = 0.0;
    double cap_lipschitz = 0.0;
    double lambda_contr = 0.0;
    double mu_exp = 0.0;
    std::optional<Cycle> saddle;
    std::optional<Cycle> sink;

    bool pass() const { return checks.all_pass(); }
};

/// Samples `sampling` x `sampling` points of the model bounding box and tests
/// each condition in model coordinates.
AHReport verify_ah(const MapHandle& map, const HorseshoeRegion& region, int sampling = 96);

/// Multi-start Newton for k = 1..k_max over a seeds x seeds grid of the box;
/// returns distinct cycles of minimal period k with a point in the box.
std::vector<Cycle> find_saddles(const MapHandle& map, const Vec& box_lo, const Vec& box_hi, int k_max,
                                int seeds = 12);

struct ManifoldResult {
    /// Ordered polyline: the negative branch reversed, the cycle point, the positive branch.
    PointCloud cloud;
    double arc_length = 0.0;
    bool truncated = false;
    std::string diagnostic;
};

/// Traces the unstable manifold of the k-cycle point points[0] under f^k.
/// Throws Error(config) unless exactly one multiplier is expanding.
ManifoldResult unstable_manifold(const MapHandle& map, const Cycle& saddle, double arc_budget, double tol,
                                 std::size_t max_points = 10'000'000);

/// Unstable manifold of f^k at the first cycle point plus its k - 1 forward
/// images under f, labeled 0..k-1.
ManifoldResult trellis(const MapHandle& map, const Cycle& saddle_cycle, double arc_budget, double tol,
                       std::size_t max_points = 10'000'000);

/// Connected components of {x1 : (x1, leaf_x2) in f^n(H)} for the
/// affine_horseshoe family, by sampling x1 on [-6, 2].
int horseshoe_leaf_components(double contraction, double expansion, int depth, double leaf_x2, long samples);

}  // namespace azlab
