#pragma once

#include <string>
#include <vector>

#include "flatsteer/control.hpp"
#include "flatsteer/heat.hpp"

namespace flatsteer {

// Shortest round-trip decimal rendering (reproducible CSV without bloat).
std::string format_double(double v);

// Control CSV: t,value_real,value_imag (real controls carry a zero column).
void write_control_csv(const std::string& path, const ControlSignal& c, int samples);

// Field CSV: x,t,value.
void write_field_csv(const std::string& path, const HeatField& f, int stride_t = 1,
                     int stride_x = 1);

// Derivative-table CSV: n,t,value,scaled.
void write_derivative_csv(const std::string& path, const std::vector<double>& ts,
                          const std::vector<std::vector<double>>& scaled,
                          const std::vector<double>& log_unscale);

// Binary dump: 4 x int32 header (nx, nt, x0*1e6, x1*1e6 as fixed point),
// then row-major float64 little-endian.
void write_field_binary(const std::string& path, const HeatField& f);
HeatField read_field_binary(const std::string& path);

}  // namespace flatsteer
