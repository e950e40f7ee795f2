#include "azlab/chaos.hpp"

#include <Eigen/QR>
#include <Eigen/SVD>
#include <algorithm>
#include <cmath>
#include <limits>
#include <unordered_set>

#include "azlab/error.hpp"

namespace azlab {

namespace {

void check_lyapunov_args(const MapHandle& map, const Vec& x0, long n, long n_transient) {
    if (n < 100) throw_config("Lyapunov estimates need n >= 100");
    if (n_transient < 0) throw_config("n_transient must be nonnegative");
    if (x0.size() != map.dim() || !x0.allFinite()) throw_config("Lyapunov seed must be finite with matching dimension");
}

Vec settle(const MapHandle& map, Vec x, long n_transient) {
    for (long i = 0; i < n_transient; ++i) x = map(x);
    if (!x.allFinite()) throw_numeric("orbit left the finite range during the transient");
    return x;
}

double spectral_norm(const Mat& j) {
    if (j.rows() == 1) return std::abs(j(0, 0));
    if (j.rows() == 2) {
        // Closed form for 2x2: largest singular value.
        const double a = j(0, 0), b = j(0, 1), c = j(1, 0), d = j(1, 1);
        const double s1 = a * a + b * b + c * c + d * d;
        const double det = a * d - b * c;
        const double disc = std::sqrt(std::max(0.0, s1 * s1 - 4.0 * det * det));
        return std::sqrt(0.5 * (s1 + disc));
    }
    Eigen::JacobiSVD<Mat> svd(j);
    return svd.singularValues()(0);
}

}  // namespace

LyapunovEstimate max_lyapunov_norm_sum(const MapHandle& map, const Vec& x0, long n, long n_transient) {
    check_lyapunov_args(map, x0, n, n_transient);
    Vec x = settle(map, x0, n_transient);
    LyapunovEstimate est;
    est.method = LyapunovMethod::norm_sum;
    double sum = 0.0;
    for (long k = 1; k <= n; ++k) {
        const double norm = spectral_norm(map.jacobian_unchecked(x));
        if (norm == 0.0) {
            est.degenerate = true;
            sum = -std::numeric_limits<double>::infinity();
        } else {
            sum += std::log(norm);
        }
        x = map(x);
        if (!x.allFinite()) throw_numeric("orbit left the finite range in the Lyapunov sum");
        if (k % 100 == 0) est.convergence_trace.push_back(sum / k);
    }
    est.n_used = n;
    est.max_exponent = sum / n;
    est.spectrum = {est.max_exponent};
    return est;
}

LyapunovEstimate lyapunov_spectrum_qr(const MapHandle& map, const Vec& x0, long n, long n_transient) {
    check_lyapunov_args(map, x0, n, n_transient);
    const int m = map.dim();
    Vec x = settle(map, x0, n_transient);
    LyapunovEstimate est;
    est.method = LyapunovMethod::qr_spectrum;
    Mat q = Mat::Identity(m, m);
    std::vector<double> sums(m, 0.0);
    for (long k = 1; k <= n; ++k) {
        const Mat z = map.jacobian_unchecked(x) * q;
        Eigen::HouseholderQR<Mat> qr(z);
        const Mat r = qr.matrixQR().triangularView<Eigen::Upper>();
        Mat qn = qr.householderQ() * Mat::Identity(m, m);
        // Sign-fix so the diagonal of R is nonnegative.
        for (int i = 0; i < m; ++i) {
            const double d = r(i, i);
            if (d < 0.0) qn.col(i) = -qn.col(i);
            if (d == 0.0) {
                est.degenerate = true;
                sums[i] = -std::numeric_limits<double>::infinity();
            } else {
                sums[i] += std::log(std::abs(d));
            }
        }
        q = qn;
        x = map(x);
        if (!x.allFinite()) throw_numeric("orbit left the finite range in the QR accumulation");
        if (k % 100 == 0) est.convergence_trace.push_back(*std::max_element(sums.begin(), sums.end()) / k);
    }
    est.n_used = n;
    for (double& s : sums) s /= static_cast<double>(n);
    std::sort(sums.begin(), sums.end(), std::greater<>());
    est.spectrum = sums;
    est.max_exponent = sums.front();
    return est;
}

namespace {

long count_boxes(const PointCloud& cloud, const Vec& lo, const Vec& extent, double eps) {
    const int m = cloud.dim();
    std::unordered_set<std::uint64_t> boxes;
    boxes.reserve(cloud.size());
    long long per_axis[kMaxDim];
    for (int k = 0; k < m; ++k) per_axis[k] = static_cast<long long>(std::floor(extent(k) / eps)) + 1;
    for (std::size_t i = 0; i < cloud.size(); ++i) {
        std::uint64_t key = 0;
        for (int k = 0; k < m; ++k) {
            long long c = static_cast<long long>(std::floor((cloud.coord(i, k) - lo(k)) / eps));
            c = std::clamp(c, 0LL, per_axis[k] - 1);
            key = key * static_cast<std::uint64_t>(per_axis[k]) + static_cast<std::uint64_t>(c);
        }
        boxes.insert(key);
    }
    return static_cast<long>(boxes.size());
}

}  // namespace

BoxCountResult box_counting_dimension(const PointCloud& cloud, int n_scales) {
    if (n_scales < 5) throw_config("box counting needs at least 5 scales");
    if (cloud.size() < 1000) throw_config("box counting needs at least 1000 points");
    const int m = cloud.dim();
    Vec lo, hi;
    cloud.bounds(lo, hi);
    const Vec extent = hi - lo;
    const double diag = extent.norm();
    BoxCountResult res;
    if (diag == 0.0) {
        res.degenerate = true;
        res.dimension = 0.0;
        res.r2 = 1.0;
        return res;
    }
    const double limit = static_cast<double>(cloud.size()) / 10.0;
    double eps = diag / 4.0;
    for (int s = 0; s < n_scales; ++s, eps *= 0.5) {
        res.scales.push_back(eps);
        res.counts.push_back(count_boxes(cloud, lo, extent, eps));
    }
    int end = 0;
    while (end < n_scales && res.counts[end] <= limit) ++end;
    int begin = 0;
    // A fit needs at least three rungs; fall back to the coarsest three.
    if (end - begin < 3) end = std::min(n_scales, 3);
    res.window_begin = begin;
    res.window_end = end;

    const int n = end - begin;
    double sx = 0, sy = 0, sxx = 0, sxy = 0, syy = 0;
    for (int i = begin; i < end; ++i) {
        const double xv = std::log(1.0 / res.scales[i]);
        const double yv = std::log(static_cast<double>(res.counts[i]));
        sx += xv;
        sy += yv;
        sxx += xv * xv;
        sxy += xv * yv;
        syy += yv * yv;
    }
    const double vx = sxx - sx * sx / n;
    const double vy = syy - sy * sy / n;
    const double cxy = sxy - sx * sy / n;
    res.raw_slope = vx > 0 ? cxy / vx : 0.0;
    res.r2 = (vx > 0 && vy > 0) ? std::clamp(cxy * cxy / (vx * vy), 0.0, 1.0) : 1.0;
    res.dimension = std::clamp(res.raw_slope, 0.0, static_cast<double>(m));
    return res;
}

}  // namespace azlab
