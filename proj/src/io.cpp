#include "flatsteer/io.hpp"

#include <charconv>
#include <cmath>
#include <cstdint>
#include <cstring>
#include <fstream>

#include "flatsteer/errors.hpp"

namespace flatsteer {

std::string format_double(double v) {
    char buf[40];
    auto res = std::to_chars(buf, buf + sizeof(buf), v);
    return std::string(buf, res.ptr);
}

void write_control_csv(const std::string& path, const ControlSignal& c, int samples) {
    std::ofstream out(path);
    if (!out) fail("io-error", "cannot open " + path);
    out << "t,value_real,value_imag\n";
    const double T = c.T();
    for (int i = 0; i <= samples; ++i) {
        double t = T * i / samples;
        out << format_double(t) << "," << format_double(c.eval(t)) << ",0\n";
    }
}

void write_field_csv(const std::string& path, const HeatField& f, int stride_t, int stride_x) {
    std::ofstream out(path);
    if (!out) fail("io-error", "cannot open " + path);
    out << "x,t,value\n";
    for (int k = 0; k <= f.nt; k += stride_t)
        for (int i = 0; i <= f.nx; i += stride_x)
            out << format_double(f.x_of(i)) << "," << format_double(f.T * k / f.nt) << ","
                << format_double(f.at(k, i)) << "\n";
}

void write_derivative_csv(const std::string& path, const std::vector<double>& ts,
                          const std::vector<std::vector<double>>& scaled,
                          const std::vector<double>& log_unscale) {
    std::ofstream out(path);
    if (!out) fail("io-error", "cannot open " + path);
    out << "n,t,value,scaled\n";
    for (std::size_t n = 0; n < scaled.size(); ++n) {
        for (std::size_t j = 0; j < ts.size(); ++j) {
            double sc = scaled[n][j];
            double lu = log_unscale[n] + (sc != 0 ? std::log(std::fabs(sc)) : 0);
            double value = sc == 0 ? 0.0
                           : (lu > 700 ? std::copysign(INFINITY, sc)
                                       : sc * std::exp(log_unscale[n]));
            out << n << "," << format_double(ts[j]) << "," << format_double(value) << ","
                << format_double(sc) << "\n";
        }
    }
}

void write_field_binary(const std::string& path, const HeatField& f) {
    std::ofstream out(path, std::ios::binary);
    if (!out) fail("io-error", "cannot open " + path);
    int32_t header[4] = {f.nx, f.nt, static_cast<int32_t>(std::lround(f.x0 * 1e6)),
                         static_cast<int32_t>(std::lround(f.x1 * 1e6))};
    out.write(reinterpret_cast<const char*>(header), sizeof(header));
    out.write(reinterpret_cast<const char*>(f.values.data()),
              static_cast<std::streamsize>(f.values.size() * sizeof(double)));
}

HeatField read_field_binary(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) fail("io-error", "cannot open " + path);
    int32_t header[4];
    in.read(reinterpret_cast<char*>(header), sizeof(header));
    HeatField f;
    f.nx = header[0];
    f.nt = header[1];
    f.x0 = header[2] / 1e6;
    f.x1 = header[3] / 1e6;
    f.values.resize(static_cast<std::size_t>(f.nx + 1) * (f.nt + 1));
    in.read(reinterpret_cast<char*>(f.values.data()),
            static_cast<std::streamsize>(f.values.size() * sizeof(double)));
    if (!in) fail("io-error", "truncated field dump " + path);
    return f;
}

}  // namespace flatsteer
