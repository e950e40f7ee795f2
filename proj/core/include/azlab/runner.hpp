#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "azlab/config.hpp"
#include "azlab/point_cloud.hpp"

namespace azlab {

struct RunResult {
    /// 0 ok, 1 config, 2 numeric (any per-value failure), 3 I/O.
    int exit_code = 0;
    std::vector<std::string> artifacts;
    std::vector<std::string> warnings;
};

/// Writes `i,x1,...,xm` (plus `label` when present), 17 significant digits.
void write_cloud_csv(const PointCloud& cloud, const std::string& path);

/// 17 significant digits, so every double reads back exactly.
std::string format_number(double v);

/// One summary row per schedule value, in schedule order:
/// param,period,lyap_normsum,lyap_qr_max,boxdim,boxdim_r2,status,seconds
RunResult run_sweep(const RunConfig& config);

/// param,value rows of the projected post-transient orbit for each schedule value.
RunResult bifurcation_scan(const RunConfig& config);

/// Dispatches on config.command. Errors of kind config/io propagate as exceptions.
RunResult run_command(const RunConfig& config);

}  // namespace azlab
