#include "azlab/raster.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>

#include "azlab/error.hpp"

namespace azlab {

Bounds2 cloud_bounds(const PointCloud& cloud, double pad) {
    if (cloud.empty() || cloud.dim() < 2) return {};
    Vec lo, hi;
    cloud.bounds(lo, hi);
    double wx = hi(0) - lo(0), wy = hi(1) - lo(1);
    if (wx <= 0.0) wx = std::max(1e-9, std::abs(lo(0)) * 1e-6 + 1e-9);
    if (wy <= 0.0) wy = std::max(1e-9, std::abs(lo(1)) * 1e-6 + 1e-9);
    return {lo(0) - pad * wx, hi(0) + pad * wx, lo(1) - pad * wy, hi(1) + pad * wy};
}

Raster rasterize(const PointCloud& cloud, const Bounds2& b, int width, int height, double saturation) {
    if (width < 1 || height < 1 || width > 8192 || height > 8192)
        throw_config("raster resolution must be within 1..8192 per side");
    if (!(b.xmax > b.xmin) || !(b.ymax > b.ymin)) throw_config("raster bounds are empty");
    if (!(saturation > 0.0)) throw_config("raster saturation must be positive");
    Raster r;
    r.width = width;
    r.height = height;
    r.pixels.assign(static_cast<std::size_t>(width) * height, 0);
    r.empty_cloud = cloud.empty();
    if (cloud.empty()) return r;
    if (cloud.dim() < 2) throw_config("rasters need at least two coordinates");
    std::vector<std::uint32_t> counts(r.pixels.size(), 0);
    const double sx = width / (b.xmax - b.xmin);
    const double sy = height / (b.ymax - b.ymin);
    for (std::size_t i = 0; i < cloud.size(); ++i) {
        const double x = cloud.coord(i, 0), y = cloud.coord(i, 1);
        if (!(x >= b.xmin && x <= b.xmax && y >= b.ymin && y <= b.ymax)) continue;
        const int col = std::min(width - 1, static_cast<int>((x - b.xmin) * sx));
        const int row = std::min(height - 1, static_cast<int>((b.ymax - y) * sy));
        auto& c = counts[static_cast<std::size_t>(row) * width + col];
        if (c < 0xffffffffu) ++c;
    }
    const double scale = 255.0 / std::log1p(saturation);
    for (std::size_t i = 0; i < counts.size(); ++i) {
        if (!counts[i]) continue;
        const double v = std::min(255.0, std::round(scale * std::log1p(static_cast<double>(counts[i]))));
        r.pixels[i] = static_cast<std::uint8_t>(std::max(1.0, v));
    }
    return r;
}

void write_pgm(const Raster& raster, const std::string& path) {
    std::ofstream os(path, std::ios::binary);
    if (!os) throw_io("cannot open " + path + " for writing");
    os << "P5\n" << raster.width << ' ' << raster.height << "\n255\n";
    os.write(reinterpret_cast<const char*>(raster.pixels.data()), static_cast<std::streamsize>(raster.pixels.size()));
    if (!os) throw_io("failed writing " + path);
}

Raster render_raster(const PointCloud& cloud, const Bounds2& bounds, int width, int height, const std::string& path) {
    Raster r = rasterize(cloud, bounds, width, height);
    write_pgm(r, path);
    return r;
}

}  // namespace azlab
