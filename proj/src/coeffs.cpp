#include "flatsteer/coeffs.hpp"

#include <cmath>

#include "flatsteer/errors.hpp"
#include "flatsteer/gevrey.hpp"

namespace flatsteer {

double CoeffSequence::log_envelope(std::size_t q) const {
    double n = static_cast<double>(q);
    switch (conv) {
        case Convention::DerivativeFactorial:
            return log_factorial(n) - n * std::log(R);
        case Convention::EvenGevrey2:
            return log_factorial(2 * n) - 2 * n * std::log(R);
        case Convention::OddGevrey2:
            return log_factorial(2 * n + 1) - (2 * n + 1) * std::log(R);
    }
    return 0;
}

double CoeffSequence::measured_M() const {
    double m = 0;
    for (std::size_t q = 0; q < d.size(); ++q) {
        if (d[q] == 0) continue;
        double lm = to_double(log(abs(d[q]))) - log_envelope(q);
        m = std::max(m, std::exp(lm));
    }
    return m;
}

void CoeffSequence::verify_bound() const {
    if (!(R > 0) || !(M > 0)) fail("invalid-weights", "coefficient certificate needs M,R > 0");
    double m = measured_M();
    if (m > M * (1 + 1e-9))
        fail("certificate-violated",
             "stored coefficient bound violated: measured M = " + std::to_string(m));
}

CoeffSequence make_coeffs(std::vector<Big> values, CoeffSequence::Convention conv, double M,
                          double R) {
    CoeffSequence c;
    c.d = std::move(values);
    c.conv = conv;
    c.R = R;
    c.M = M;
    if (M <= 0) c.M = std::max(c.measured_M(), 1e-300);
    c.verify_bound();
    return c;
}

}  // namespace flatsteer
