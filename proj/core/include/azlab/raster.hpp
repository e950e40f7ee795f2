#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "azlab/point_cloud.hpp"

namespace azlab {

struct Bounds2 {
    double xmin = 0.0, xmax = 1.0, ymin = 0.0, ymax = 1.0;
};

/// Bounds of the first two coordinates, padded by `pad` of the extent on each side.
Bounds2 cloud_bounds(const PointCloud& cloud, double pad = 0.05);

struct Raster {
    int width = 0;
    int height = 0;
    /// Row-major, top row first.
    std::vector<std::uint8_t> pixels;
    bool empty_cloud = false;
};

/// Per-pixel point counts, tone-mapped as 255 log(1 + n) / log(1 + saturation)
/// and clipped at 255. The fixed saturation keeps every pixel nondecreasing as
/// points are added. Points outside the bounds are dropped.
Raster rasterize(const PointCloud& cloud, const Bounds2& bounds, int width, int height, double saturation = 64.0);

/// Binary graymap: "P5\n<w> <h>\n255\n" then w*h bytes.
void write_pgm(const Raster& raster, const std::string& path);

/// rasterize + write_pgm. Returns the raster; an empty cloud yields a black image.
Raster render_raster(const PointCloud& cloud, const Bounds2& bounds, int width, int height, const std::string& path);

}  // namespace azlab
