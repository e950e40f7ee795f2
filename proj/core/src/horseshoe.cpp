#include "azlab/horseshoe.hpp"

#include <Eigen/LU>
#include <Eigen/SVD>
#include <algorithm>
#include <charconv>
#include <cmath>
#include <limits>
#include <sstream>

#include "azlab/error.hpp"

namespace azlab {

namespace {

std::string num(double v) {
    char buf[64];
    auto res = std::to_chars(buf, buf + sizeof buf, v, std::chars_format::general, 12);
    return std::string(buf, res.ptr);
}

std::string pt(const Vec& x) {
    std::string s = "(";
    for (int k = 0; k < x.size(); ++k) s += (k ? ", " : "") + num(x(k));
    return s + ")";
}

double spectral_norm(const Mat& j) {
    Eigen::JacobiSVD<Mat> svd(j);
    return svd.singularValues()(0);
}

}  // namespace

std::string_view piece_name(RegionPiece p) {
    switch (p) {
    case RegionPiece::c0: return "C0";
    case RegionPiece::s0: return "S0";
    case RegionPiece::s_half: return "S_half";
    case RegionPiece::s1: return "S1";
    case RegionPiece::c1: return "C1";
    case RegionPiece::outside: return "outside";
    }
    return "outside";
}

HorseshoeRegion::HorseshoeRegion() : HorseshoeRegion(Mat::Identity(2, 2), Vec::Zero(2)) {}

HorseshoeRegion::HorseshoeRegion(const Mat& frame, const Vec& offset) : frame_(frame), offset_(offset) {
    if (frame.rows() != 2 || frame.cols() != 2 || offset.size() != 2)
        throw_config("horseshoe regions are planar: need a 2x2 frame and a 2-vector offset");
    if (!frame.allFinite() || !offset.allFinite()) throw_config("horseshoe frame must be finite");
    if (!(std::abs(frame.determinant()) > 1e-9)) throw_config("horseshoe frame is singular (|det| <= 1e-9)");
    inverse_ = frame.inverse();
}

HorseshoeRegion HorseshoeRegion::aligned(const Vec& saddle, const Vec& stable, const Vec& unstable, double scale) {
    Mat a(2, 2);
    a.col(0) = stable.normalized() * scale;
    a.col(1) = unstable.normalized() * scale;
    return HorseshoeRegion(a, saddle);
}

Vec HorseshoeRegion::to_model(const Vec& x) const { return inverse_ * (x - offset_); }
Vec HorseshoeRegion::from_model(const Vec& y) const { return frame_ * y + offset_; }

double HorseshoeRegion::model_margin(const Vec& y) {
    const double x2 = std::clamp(y(1), -1.0, 9.0);
    return 4.0 - std::hypot(y(0) + 2.0, y(1) - x2);
}

RegionPiece HorseshoeRegion::model_piece(const Vec& y) {
    if (model_margin(y) < 0.0) return RegionPiece::outside;
    if (y(1) < -1.0) return RegionPiece::c0;
    if (y(1) <= 3.0) return RegionPiece::s0;
    if (y(1) < 5.0) return RegionPiece::s_half;
    if (y(1) <= 9.0) return RegionPiece::s1;
    return RegionPiece::c1;
}

namespace {

// Model samples: a cell-centered grid over the bounding box plus the outline.
std::vector<Vec> model_samples(int sampling) {
    std::vector<Vec> out;
    for (int i = 0; i < sampling; ++i) {
        for (int j = 0; j < sampling; ++j) {
            Vec y(2);
            y << -6.0 + 8.0 * (i + 0.5) / sampling, -5.0 + 18.0 * (j + 0.5) / sampling;
            if (HorseshoeRegion::model_margin(y) >= 0.0) out.push_back(y);
        }
    }
    const int edge = 4 * sampling;
    for (int i = 0; i <= edge; ++i) {
        const double t = static_cast<double>(i) / edge;
        Vec y(2);
        y << -6.0, -1.0 + 10.0 * t;
        out.push_back(y);
        y << 2.0, -1.0 + 10.0 * t;
        out.push_back(y);
        const double ang = kPi * t;
        y << -2.0 + 4.0 * std::cos(ang), 9.0 + 4.0 * std::sin(ang);
        out.push_back(y);
        y << -2.0 + 4.0 * std::cos(ang), -1.0 - 4.0 * std::sin(ang);
        out.push_back(y);
    }
    return out;
}

bool near_piece_boundary(const Vec& y, double d) {
    for (double b : {-1.0, 3.0, 5.0, 9.0})
        if (std::abs(y(1) - b) <= d) return true;
    return HorseshoeRegion::model_margin(y) <= d;
}

}  // namespace

AHReport verify_ah(const MapHandle& map, const HorseshoeRegion& region, int sampling) {
    if (map.dim() != 2) throw_config("horseshoe checks are implemented for planar maps");
    if (sampling < 8) throw_config("horseshoe sampling must be >= 8");
    AHReport rep;
    const auto samples = model_samples(sampling);
    auto G = [&](const Vec& y) { return region.to_model(map(region.from_model(y))); };
    Mat inv = region.frame().inverse();
    auto model_jac = [&](const Vec& y) { return Mat(inv * map.jacobian_unchecked(region.from_model(y)) * region.frame()); };

    // Containment of f(H) in the interior of H, and of f(C0 u C1) in the interior of C0.
    {
        double worst_h = std::numeric_limits<double>::infinity(), worst_c = worst_h;
        Vec wh = Vec::Zero(2), wc = Vec::Zero(2);
        for (const Vec& y : samples) {
            const Vec fy = G(y);
            double m = HorseshoeRegion::model_margin(fy);
            if (!std::isfinite(m)) m = -std::numeric_limits<double>::infinity();
            if (m < worst_h) {
                worst_h = m;
                wh = y;
            }
            const auto piece = HorseshoeRegion::model_piece(y);
            if (piece == RegionPiece::c0 || piece == RegionPiece::c1) {
                // Interior of C0: inside H and strictly below x2 = -1.
                double c = std::min(m, -1.0 - fy(1));
                if (!std::isfinite(c)) c = -std::numeric_limits<double>::infinity();
                if (c < worst_c) {
                    worst_c = c;
                    wc = y;
                }
            }
        }
        rep.containment_margin = std::min(worst_h, worst_c);
        const bool ok = worst_h > 1e-9 && worst_c > 1e-9;
        rep.checks.checks.push_back(
            {"ah2_containment", ok ? CheckStatus::pass : CheckStatus::fail,
             "f(H) margin " + num(worst_h) + " at model " + pt(wh) + " (world " + pt(region.from_model(wh)) +
                 ", boundary margin " + num(HorseshoeRegion::model_margin(wh)) + "); f(C0 u C1) margin in C0 " +
                 num(worst_c) + " at model " + pt(wc),
             1e-9, "f(H) lies in the interior of H and f(C0 u C1) in the interior of C0"});
    }
    // Middle band into the upper cap.
    {
        double worst = std::numeric_limits<double>::infinity();
        Vec wy = Vec::Zero(2);
        for (const Vec& y : samples) {
            if (HorseshoeRegion::model_piece(y) != RegionPiece::s_half) continue;
            const Vec fy = G(y);
            const double m = std::min(HorseshoeRegion::model_margin(fy), fy(1) - 9.0);
            if (!(m >= worst)) {
                worst = std::isfinite(m) ? m : -std::numeric_limits<double>::infinity();
                wy = y;
            }
        }
        rep.middle_band_margin = worst;
        const bool ok = worst > 1e-9;
        rep.checks.checks.push_back({"ah5_middle_band", ok ? CheckStatus::pass : CheckStatus::fail,
                                     "min margin " + num(worst) + " at model " + pt(wy), 1e-9,
                                     "f(S_half) lies in the interior of C1"});
    }
    // Transversality: images of vertical tangents against horizontal leaves.
    {
        double worst = kPi / 2;
        Vec wy = Vec::Zero(2);
        long used = 0;
        for (const Vec& y : samples) {
            const auto piece = HorseshoeRegion::model_piece(y);
            if (piece != RegionPiece::s0 && piece != RegionPiece::s_half && piece != RegionPiece::s1) continue;
            const Vec fy = G(y);
            if (fy(1) < -1.0 || fy(1) > 9.0 || HorseshoeRegion::model_margin(fy) < 0.0) continue;
            const Vec v = model_jac(y).col(1);
            const double ang = std::atan2(std::abs(v(1)), std::abs(v(0)));
            ++used;
            if (!(ang >= worst)) {
                worst = std::isfinite(ang) ? ang : 0.0;
                wy = y;
            }
        }
        rep.min_transversal_angle = worst;
        CheckStatus st = used == 0 ? CheckStatus::inconclusive : (worst > 1e-2 ? CheckStatus::pass : CheckStatus::fail);
        rep.checks.checks.push_back({"ah3_transversal", st,
                                     "min angle " + num(worst) + " rad at model " + pt(wy) + " over " +
                                         std::to_string(used) + " samples",
                                     1e-2, "images of vertical leaves cross horizontal leaves in Z transversally"});
    }
    // Lower cap: contraction plus an attracting fixed point.
    {
        double lip = 0.0;
        Vec wy = Vec::Zero(2);
        for (const Vec& y : samples) {
            if (HorseshoeRegion::model_piece(y) != RegionPiece::c0) continue;
            const double n = spectral_norm(model_jac(y));
            if (n > lip) {
                lip = n;
                wy = y;
            }
        }
        rep.cap_lipschitz = lip;
        std::string detail;
        bool sink_ok = false;
        try {
            Vec seed(2);
            seed << -2.0, -3.0;
            Cycle c = find_cycle(map, 1, region.from_model(seed));
            const Vec q = region.to_model(c.points[0]);
            detail = "fixed point " + pt(c.points[0]) + " (model " + pt(q) + ") is " +
                     std::string(stability_name(c.stability));
            sink_ok = c.stability == Stability::sink && HorseshoeRegion::model_piece(q) == RegionPiece::c0;
            rep.sink = c;
        } catch (const Error& e) {
            detail = std::string("fixed-point search failed: ") + e.what();
        }
        const bool ok = lip < 1.0 && sink_ok;
        rep.checks.checks.push_back({"ah4_cap_sink", ok ? CheckStatus::pass : CheckStatus::fail,
                                     "max local Lipschitz " + num(lip) + " at model " + pt(wy) + "; " + detail, 1.0,
                                     "f contracts C0 and has an attracting fixed point there"});
    }
    // Saddle in f(S0) n S0 with a one-dimensional unstable space.
    {
        std::string detail = "no saddle found from S0 seeds";
        bool ok = false;
        for (int i = 0; i < 5 && !ok; ++i) {
            for (int j = 0; j < 5 && !ok; ++j) {
                Vec seed(2);
                seed << -5.0 + 6.0 * i / 4.0, -0.5 + 3.0 * j / 4.0;
                try {
                    Cycle c = find_cycle(map, 1, region.from_model(seed));
                    const Vec p = region.to_model(c.points[0]);
                    if (HorseshoeRegion::model_piece(p) != RegionPiece::s0) continue;
                    int expanding = 0;
                    for (auto mu : c.multipliers) expanding += std::abs(mu) > 1.0 + kHyperbolicMargin;
                    detail = "fixed point " + pt(c.points[0]) + " (model " + pt(p) + ") is " +
                             std::string(stability_name(c.stability)) + " with multipliers";
                    for (auto mu : c.multipliers) detail += " " + num(mu.real()) + (mu.imag() ? "+" + num(mu.imag()) + "i" : "");
                    if (c.stability == Stability::saddle && expanding == 1) {
                        ok = true;
                        rep.saddle = c;
                    }
                } catch (const Error&) {
                }
            }
        }
        rep.checks.checks.push_back({"ah6_saddle", ok ? CheckStatus::pass : CheckStatus::fail, detail, kHyperbolicMargin,
                                     "a hyperbolic saddle with one expanding direction lies in f(S0) n S0"});
    }
    // Leafwise contraction and expansion by first differences (S0 u S1 only).
    {
        const double h = 1e-5;
        double lam = 0.0, mu = std::numeric_limits<double>::infinity();
        Vec wl = Vec::Zero(2), wm = Vec::Zero(2);
        long used = 0;
        for (const Vec& y : samples) {
            const auto piece = HorseshoeRegion::model_piece(y);
            if (piece != RegionPiece::s0 && piece != RegionPiece::s1) continue;
            if (near_piece_boundary(y, 2 * h)) continue;
            const Vec fy = G(y);
            Vec yh = y, yv = y;
            yh(0) += h;
            yv(1) += h;
            const double sh = (G(yh) - fy).norm() / h;
            const double sv = (G(yv) - fy).norm() / h;
            ++used;
            if (sh > lam) {
                lam = sh;
                wl = y;
            }
            if (sv < mu) {
                mu = sv;
                wm = y;
            }
        }
        if (!used) mu = 0.0;
        rep.lambda_contr = lam;
        rep.mu_exp = mu;
        const bool ok = used && lam > 0.0 && lam < 1.0 && mu > 1.0;
        rep.checks.checks.push_back({"ah7_coefficients", used ? (ok ? CheckStatus::pass : CheckStatus::fail) : CheckStatus::inconclusive,
                                     "contraction " + num(lam) + " at model " + pt(wl) + ", expansion " + num(mu) +
                                         " at model " + pt(wm),
                                     h, "horizontal leaves contract by lambda < 1, vertical leaves expand by mu > 1"});
    }
    return rep;
}

std::vector<Cycle> find_saddles(const MapHandle& map, const Vec& box_lo, const Vec& box_hi, int k_max, int seeds) {
    if (k_max < 1) throw_config("k_max must be >= 1");
    if (seeds < 1) throw_config("seed grid must be positive");
    const int m = map.dim();
    if (box_lo.size() != m || box_hi.size() != m) throw_config("search box dimension mismatch");
    const double slack = 1e-9 * std::max(1.0, (box_hi - box_lo).norm());
    auto in_box = [&](const Vec& x) {
        for (int k = 0; k < m; ++k)
            if (x(k) < box_lo(k) - slack || x(k) > box_hi(k) + slack) return false;
        if (map.domain() == Domain::nonnegative_orthant && x.minCoeff() < -1e-9) return false;
        return true;
    };
    long long total = 1;
    for (int k = 0; k < m; ++k) total *= seeds;
    std::vector<Cycle> found;
    for (int period = 1; period <= k_max; ++period) {
        for (long long c = 0; c < total; ++c) {
            Vec seed(m);
            long long rem = c;
            for (int k = 0; k < m; ++k) {
                const double t = seeds == 1 ? 0.5 : static_cast<double>(rem % seeds) / (seeds - 1);
                rem /= seeds;
                seed(k) = box_lo(k) + t * (box_hi(k) - box_lo(k));
            }
            Cycle cyc;
            try {
                cyc = find_cycle(map, period, seed);
            } catch (const Error&) {
                continue;
            }
            if (cyc.period != period) continue;
            if (!std::any_of(cyc.points.begin(), cyc.points.end(), in_box)) continue;
            bool dup = false;
            for (const auto& f : found) {
                if (f.period != cyc.period) continue;
                for (const auto& p : f.points)
                    if ((p - cyc.points[0]).norm() <= 1e-6 * std::max(1.0, p.norm())) dup = true;
            }
            if (!dup) found.push_back(std::move(cyc));
        }
    }
    return found;
}

namespace {

double polyline_length(const std::vector<Vec>& pts) {
    double s = 0.0;
    for (std::size_t i = 1; i < pts.size(); ++i) s += (pts[i] - pts[i - 1]).norm();
    return s;
}

}  // namespace

ManifoldResult unstable_manifold(const MapHandle& map, const Cycle& saddle, double arc_budget, double tol,
                                 std::size_t max_points) {
    if (!(arc_budget > 0.0) || !(tol > 0.0)) throw_config("arc budget and tolerance must be positive");
    if (saddle.points.empty() || saddle.multipliers.empty()) throw_config("saddle cycle has no points");
    int expanding = 0;
    std::complex<double> mu_u = 0.0;
    for (auto mu : saddle.multipliers) {
        if (std::abs(mu) > 1.0 + kHyperbolicMargin) {
            ++expanding;
            mu_u = mu;
        } else if (!(std::abs(mu) < 1.0 - kHyperbolicMargin)) {
            throw_config("cycle is not hyperbolic");
        }
    }
    if (expanding != 1 || std::abs(mu_u.imag()) > 1e-12 || saddle.unstable_dir.size() != map.dim())
        throw_config("unstable manifold needs exactly one real expanding multiplier");

    const int k = static_cast<int>(saddle.points.size());
    MapHandle g = k == 1 ? map : iterate_map(map, k);
    double M = mu_u.real();
    if (M < 0.0) {
        // Orientation flips each step; follow each branch under the second iterate.
        g = iterate_map(g, 2);
        M = M * M;
    }
    const Vec p = saddle.points[0];
    const Vec v = saddle.unstable_dir;
    const double delta = 1e-6;

    ManifoldResult res;
    res.cloud = PointCloud(map.dim(), true);
    res.cloud.meta.map_name = map.name();
    res.cloud.meta.spec = map.spec();
    std::vector<Vec> branches[2];
    std::size_t total = 1;
    for (int b = 0; b < 2; ++b) {
        const double s = b == 0 ? 1.0 : -1.0;
        std::vector<Vec> seg{p + s * delta * v, p + s * delta * M * v};
        double arc = 0.0;
        while (true) {
            // Refine so consecutive images are at most tol apart.
            std::vector<Vec> refined{seg[0]}, images{g(seg[0])};
            for (std::size_t i = 1; i < seg.size() && !res.truncated; ++i) {
                std::vector<std::pair<Vec, Vec>> stack{{seg[i], g(seg[i])}};
                while (!stack.empty()) {
                    const auto [b_pt, b_img] = stack.back();
                    const Vec& a_pt = refined.back();
                    const Vec& a_img = images.back();
                    if (!b_img.allFinite()) throw_numeric("unstable manifold left the finite range");
                    if ((b_img - a_img).norm() > tol && (b_pt - a_pt).norm() > 1e-14) {
                        const Vec mid = 0.5 * (a_pt + b_pt);
                        stack.emplace_back(mid, g(mid));
                    } else {
                        refined.push_back(b_pt);
                        images.push_back(b_img);
                        stack.pop_back();
                    }
                    if (total + refined.size() + images.size() > max_points) {
                        res.truncated = true;
                        break;
                    }
                }
            }
            double len = polyline_length(refined);
            if (arc + len > arc_budget) {
                // Keep the last generation only up to the remaining budget.
                double kept = 0.0;
                std::size_t n = 1;
                while (n < refined.size()) {
                    const double step = (refined[n] - refined[n - 1]).norm();
                    if (arc + kept + step > arc_budget) break;
                    kept += step;
                    ++n;
                }
                refined.resize(n);
                len = kept;
            }
            branches[b].insert(branches[b].end(), refined.begin() + (branches[b].empty() ? 0 : 1), refined.end());
            total += refined.size();
            arc += len;
            if (res.truncated) {
                res.diagnostic = "refinement exceeded " + std::to_string(max_points) + " points; partial result";
                break;
            }
            if (arc >= arc_budget - tol) break;
            // The branch falls into a sink: generations shrink to nothing.
            if (len <= 1e-12 * std::max(arc, 1.0)) break;
            seg = std::move(images);
        }
        res.arc_length += arc;
        if (res.truncated) break;
    }
    res.cloud.reserve(branches[0].size() + branches[1].size() + 1);
    for (auto it = branches[1].rbegin(); it != branches[1].rend(); ++it) res.cloud.push_back(*it);
    res.cloud.push_back(p);
    for (const auto& x : branches[0]) res.cloud.push_back(x);
    return res;
}

ManifoldResult trellis(const MapHandle& map, const Cycle& saddle_cycle, double arc_budget, double tol,
                       std::size_t max_points) {
    ManifoldResult base = unstable_manifold(map, saddle_cycle, arc_budget, tol, max_points);
    const int k = static_cast<int>(saddle_cycle.points.size());
    if (k == 1) return base;
    ManifoldResult out;
    out.arc_length = base.arc_length;
    out.truncated = base.truncated;
    out.diagnostic = base.diagnostic;
    out.cloud = PointCloud(map.dim(), false);
    out.cloud.meta = base.cloud.meta;
    out.cloud.append(base.cloud, 0);
    PointCloud cur = base.cloud;
    for (int j = 1; j < k; ++j) {
        PointCloud next(map.dim(), true);
        next.reserve(cur.size());
        for (std::size_t i = 0; i < cur.size(); ++i) next.push_back(map(cur.point(i)));
        out.cloud.append(next, j);
        cur = std::move(next);
    }
    return out;
}

int horseshoe_leaf_components(double contraction, double expansion, int depth, double leaf_x2, long samples) {
    if (depth < 0) throw_config("depth must be nonnegative");
    if (samples < 2) throw_config("need at least two samples");
    int components = 0;
    bool inside_prev = false;
    Vec y(2);
    for (long i = 0; i < samples; ++i) {
        y << -6.0 + 8.0 * (i + 0.5) / samples, leaf_x2;
        bool inside = HorseshoeRegion::model_margin(y) >= 0.0;
        Vec x = y;
        for (int n = 0; n < depth && inside; ++n) {
            x = affine_horseshoe_inverse(contraction, expansion, x);
            inside = HorseshoeRegion::model_margin(x) >= 0.0;
        }
        if (inside && !inside_prev) ++components;
        inside_prev = inside;
    }
    return components;
}

}  // namespace azlab
