#pragma once

#include <boost/multiprecision/mpfr.hpp>

namespace flatsteer {

// Extended-precision scalar. Precision is set process-wide in mantissa bits
// (default 256); double precision stays the workhorse everywhere the dynamic
// range allows it.
using Big = boost::multiprecision::number<boost::multiprecision::mpfr_float_backend<0>>;

inline unsigned bits_to_digits10(unsigned bits) {
    return static_cast<unsigned>(bits * 0.30103) + 1;
}

inline void set_precision_bits(unsigned bits) {
    if (bits < 64) bits = 64;
    Big::default_precision(bits_to_digits10(bits));
}

inline unsigned precision_bits() {
    return static_cast<unsigned>(Big::default_precision() / 0.30103);
}

// RAII bump of the working precision (used where cancellation depth is known,
// e.g. K-deep alternating sums in the bump evaluator).
class PrecisionGuard {
  public:
    explicit PrecisionGuard(unsigned bits)
        : saved_(Big::default_precision()) {
        if (bits_to_digits10(bits) > saved_)
            Big::default_precision(bits_to_digits10(bits));
    }
    ~PrecisionGuard() { Big::default_precision(saved_); }
    PrecisionGuard(const PrecisionGuard&) = delete;
    PrecisionGuard& operator=(const PrecisionGuard&) = delete;

  private:
    unsigned saved_;
};

inline double to_double(const Big& x) { return static_cast<double>(x); }

}  // namespace flatsteer
