#pragma once

#include <complex>
#include <cstddef>
#include <vector>

#include "flatsteer/bigfloat.hpp"

namespace flatsteer {

// Derivative-target sequence with a growth certificate. Three conventions:
//   DerivativeFactorial: |d_i| <= M * i!      / R^i        (Taylor data)
//   EvenGevrey2:         |d_q| <= M * (2q)!   / R^{2q}     (even-series data)
//   OddGevrey2:          |d_q| <= M * (2q+1)! / R^{2q+1}   (odd-series data)
struct CoeffSequence {
    enum class Convention { DerivativeFactorial, EvenGevrey2, OddGevrey2 };

    std::vector<Big> d;
    Convention conv = Convention::EvenGevrey2;
    double M = 0;
    double R = 0;

    std::size_t size() const { return d.size(); }

    // log of the modulus the certificate compares against at index q.
    double log_envelope(std::size_t q) const;

    // Verify the stored bound for every entry; returns the tightest M that
    // would make it hold (callers may adopt it).
    double measured_M() const;
    void verify_bound() const;  // fails with certificate-violated
};

// Build a sequence from values with a declared (M, R); M <= 0 adopts the
// measured constant.
CoeffSequence make_coeffs(std::vector<Big> values, CoeffSequence::Convention conv, double M,
                          double R);

}  // namespace flatsteer
