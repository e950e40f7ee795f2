#pragma once

#include <vector>

#include "azlab/maps.hpp"
#include "azlab/point_cloud.hpp"

namespace azlab {

enum class LyapunovMethod { norm_sum, qr_spectrum };

struct LyapunovEstimate {
    double max_exponent = 0.0;
    /// Descending. For norm_sum this holds the single estimate.
    std::vector<double> spectrum;
    long n_used = 0;
    LyapunovMethod method = LyapunovMethod::norm_sum;
    /// Partial averages after every 100 steps.
    std::vector<double> convergence_trace;
    /// True when a zero Jacobian (or rank loss) sent a log to -infinity.
    bool degenerate = false;
};

/// n^-1 sum log |f'(x_k)|_2 along the post-transient orbit (spectral norm).
LyapunovEstimate max_lyapunov_norm_sum(const MapHandle& map, const Vec& x0, long n, long n_transient);

/// Tangent-space QR accumulation with re-orthonormalization every step.
LyapunovEstimate lyapunov_spectrum_qr(const MapHandle& map, const Vec& x0, long n, long n_transient);

struct BoxCountResult {
    std::vector<double> scales;  // descending box sizes
    std::vector<long> counts;
    double dimension = 0.0;
    /// Slope before clamping into [0, m].
    double raw_slope = 0.0;
    double r2 = 1.0;
    /// First and one-past-last ladder index used in the fit.
    int window_begin = 0;
    int window_end = 0;
    bool degenerate = false;
};

/// Grid box counting over eps = diag/4, diag/8, ... (n_scales rungs), keeping
/// rungs with N(eps) <= points/10; slope of log N against log(1/eps).
BoxCountResult box_counting_dimension(const PointCloud& cloud, int n_scales = 8);

}  // namespace azlab
