#pragma once

#include <complex>
#include <functional>
#include <string>
#include <utility>
#include <vector>

#include "flatsteer/coeffs.hpp"

namespace flatsteer {

// Terminal state: closed-form analytic handle or explicit coefficient list,
// plus singularity witnesses when known (rational targets declare poles).
struct AnalyticTarget {
    enum class Kind { closed_form, coefficients };
    Kind kind = Kind::closed_form;
    std::function<std::complex<double>(std::complex<double>)> f;
    CoeffSequence coeffs;  // derivative convention at `center`
    double center = 0.0;
    double claimed_radius = 0.0;
    std::vector<std::complex<double>> poles;
    std::string name;

    double sample_real(double x) const;
};

// Taylor derivatives c_i = f^{(i)}(z0) by trapezoidal contour quadrature on
// |z - z0| = r (node count doubled until relative change < 1e-12);
// certificate |c_i| <= M i!/r^i with M the max contour modulus.
CoeffSequence taylor_coeffs(const AnalyticTarget& f, double z0, int N, double r);

// Index-disjoint parity split; certificates inherited.
std::pair<CoeffSequence, CoeffSequence> parity_split(const CoeffSequence& c);

enum class Reachability { Reachable, Unreachable, Undetermined };

enum class ControlSetting { one_sided_dirichlet, one_sided_neumann, two_sided };

struct ReachabilityVerdict {
    Reachability verdict = Reachability::Undetermined;
    double R_found = 0;       // certified analyticity radius about the relevant center
    double R0 = 0;            // sufficiency threshold for the disc radius
    double rect_margin = 0;   // min over witnesses of (|x-c| + |y|) - r_rect (negative: inside)
    std::string reason;
};

// Classification per the disc-sufficient / square-necessary dichotomy.
// Unreachable is only emitted with a located singularity witness.
ReachabilityVerdict classify_reachability(const AnalyticTarget& t, ControlSetting setting);

struct DecayRadius {
    double radius = 0;
    bool entire = false;   // super-geometric coefficient decay
    double slope_r2 = 0;   // fit quality (R^2 of the log-linear fit)
};

// Analyticity-radius estimate (about the left endpoint of the sample
// interval) from the coefficient decay of a fitted polynomial.
DecayRadius decay_radius(const std::vector<double>& xs, const std::vector<double>& values);

}  // namespace flatsteer
