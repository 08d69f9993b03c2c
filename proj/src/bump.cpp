#include "flatsteer/bump.hpp"

#include <algorithm>
#include <cmath>

#include "flatsteer/errors.hpp"
#include "flatsteer/quadrature.hpp"

namespace flatsteer {

namespace {
constexpr std::size_t kTermCap = 300000;
}

BumpFunction::BumpFunction(std::vector<double> widths) : widths_(std::move(widths)) {
    if (widths_.size() < 2) fail("invalid-depth", "need at least 2 box kernels");
    support_end_ = 0;
    log_prod_widths_ = 0;
    for (double w : widths_) {
        if (!(w > 0)) fail("invalid-weights", "nonpositive box width");
        support_end_ += w;
        log_prod_widths_ += std::log(w);
    }
    // Group equal widths (bitwise equality; the flattening assigns identical
    // doubles to the head).
    std::vector<double> sorted = widths_;
    std::sort(sorted.begin(), sorted.end());
    terms_ = 1;
    for (std::size_t i = 0; i < sorted.size();) {
        std::size_t j = i;
        while (j < sorted.size() && sorted[j] == sorted[i]) ++j;
        Group g;
        g.width = sorted[i];
        g.count = static_cast<int>(j - i);
        g.binom.resize(g.count + 1);
        Big b = 1;
        for (int m = 0; m <= g.count; ++m) {
            g.binom[m] = b;
            b = b * (g.count - m) / (m + 1);
        }
        groups_.push_back(std::move(g));
        terms_ *= (j - i) + 1;
        if (terms_ > kTermCap)
            fail("invalid-weights", "bump term count exceeds cap (too many distinct widths)");
        i = j;
    }
    // Alternating-sum headroom: ~K bits of binomial plus the power spread.
    eval_bits_ = std::max<unsigned>(256, static_cast<unsigned>(3 * widths_.size()) + 96);
}

// Odometer over per-group counts i_g; accumulates
//   sum prod (-1)^{i_g} C(m_g,i_g) * (x - sum i_g w_g)_+^{power} / power!
Big BumpFunction::eval_power_sum(int power, const Big& x) const {
    PrecisionGuard guard(eval_bits_);
    const std::size_t G = groups_.size();
    std::vector<int> idx(G, 0);
    Big shift = 0;  // sum i_g * w_g
    Big total = 0;
    Big sign = 1;
    // Iterate all tuples; maintain shift incrementally.
    while (true) {
        Big base = x - shift;
        if (base > 0) {
            Big term = pow(base, power);
            Big coeff = sign;
            for (std::size_t g = 0; g < G; ++g) coeff *= groups_[g].binom[idx[g]];
            total += coeff * term;
        }
        // increment odometer
        std::size_t g = 0;
        for (; g < G; ++g) {
            if (idx[g] < groups_[g].count) {
                ++idx[g];
                shift += groups_[g].width;
                sign = -sign;
                break;
            }
            shift -= Big(idx[g]) * groups_[g].width;
            if (idx[g] % 2 == 1) sign = -sign;
            idx[g] = 0;
        }
        if (g == G) break;
    }
    // divide by power!
    Big fact = 1;
    for (int i = 2; i <= power; ++i) fact *= i;
    return total / fact;
}

Big BumpFunction::derivative(int l, const Big& x) const {
    const int K = static_cast<int>(widths_.size());
    if (l < 0 || l > K - 2) fail("invalid-depth", "derivative order beyond smoothness K-2");
    if (x <= 0 || x >= Big(support_end_)) return Big(0);
    PrecisionGuard guard(eval_bits_);
    Big s = eval_power_sum(K - 1 - l, x);
    return s * exp(Big(-log_prod_widths_));
}

Big BumpFunction::antiderivative(const Big& x) const {
    const int K = static_cast<int>(widths_.size());
    if (x <= 0) return Big(0);
    if (x >= Big(support_end_)) return Big(1);
    PrecisionGuard guard(eval_bits_);
    Big s = eval_power_sum(K, x);
    return s * exp(Big(-log_prod_widths_));
}

Big BumpFunction::derivative_by_differences(int l, const Big& x) const {
    const int K = static_cast<int>(widths_.size());
    if (l < 0 || l > K - 2) fail("invalid-depth", "difference order beyond smoothness");
    if (l == 0) return value(x);
    // remaining convolution over boxes l..K-1
    BumpFunction tail(std::vector<double>(widths_.begin() + l, widths_.end()));
    PrecisionGuard guard(eval_bits_);
    // apply normalized differences over the first l boxes: 2^l translates
    std::vector<Big> vals(1, Big(0));
    std::vector<Big> offsets(1, Big(0));
    // enumerate subsets of {0..l-1} by bitmask (l is small in tests)
    if (l > 24) fail("invalid-depth", "difference path limited to order 24");
    Big total = 0;
    for (unsigned mask = 0; mask < (1u << l); ++mask) {
        Big off = 0;
        int bits = 0;
        for (int j = 0; j < l; ++j)
            if (mask & (1u << j)) {
                off += widths_[j];
                ++bits;
            }
        Big v = tail.value(x - off);
        total += (bits % 2 == 0 ? v : -v);
    }
    Big denom = 1;
    for (int j = 0; j < l; ++j) denom *= widths_[j];
    return total / denom;
}

double BumpFunction::mass_quadrature(double abs_tol) const {
    auto f = [this](double t) { return to_double(value(Big(t))); };
    return integrate_gk(f, 0.0, support_end_, abs_tol);
}

BumpFunction make_bump(const WeightSequence& w, int K) {
    if (K < 2) fail("invalid-depth", "K must be >= 2");
    w.validate();
    std::vector<double> widths(K);
    for (int k = 0; k < K; ++k) widths[k] = w.a(k);
    return BumpFunction(std::move(widths));
}

SharpenResult sharpen_bump(const WeightSequence& w, double delta, int K) {
    if (!(delta > 0)) fail("invalid-weights", "delta must be positive");
    if (K < 2) fail("invalid-depth", "K must be >= 2");
    SharpenResult res;
    res.delta = delta;
    if (delta >= 2.0) {
        res.bump = make_bump(w, K);
        res.k0 = 0;
        res.kappa = 1.0;
    } else {
        const double total = w.sum_all();
        const double threshold = 2.0 / delta;
        std::size_t k0 = 0;
        double kappa = 0;
        for (;; ++k0) {
            kappa = total / ((k0 + 1) * w.a(k0) + w.tail_sum(k0 + 1));
            if (kappa > threshold) break;
        }
        res.k0 = k0;
        res.kappa = kappa;
        std::vector<double> widths(K);
        const double head = kappa * w.a(k0);
        for (int k = 0; k < K; ++k)
            widths[k] = (static_cast<std::size_t>(k) <= k0) ? head : kappa * w.a(k);
        res.bump = BumpFunction(std::move(widths));
    }
    // Measured constant against delta^k (a_0...a_k)^{-1} on a grid.
    const int kmax = K - 2;
    const double s_end = res.bump.support_end();
    double logM = -1e300;
    for (int k = 0; k <= kmax; ++k) {
        double log_env = k * std::log(delta) + w.log_modulus(k);
        for (int i = 1; i < 128; ++i) {
            Big x = Big(s_end) * i / 128;
            Big v = abs(res.bump.derivative(k, x));
            if (v > 0) {
                double lv = to_double(log(v));
                logM = std::max(logM, lv - log_env);
            }
        }
    }
    res.M_measured = std::exp(logM);
    return res;
}

}  // namespace flatsteer
