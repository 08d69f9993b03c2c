#include "flatsteer/weights.hpp"

#include <cmath>
#include <limits>

#include "flatsteer/errors.hpp"

namespace flatsteer {

namespace {
// Partial alternating-harmonic sum: sum_{k=1}^{K} 1/(2k(2k-1)) = H_{2K} - H_K.
// Tail beyond K is ln2 minus that; computed with the asymptotic expansion of
// H_n to keep it accurate for large K.
double harmonic(double n) {
    // H_n = ln n + gamma + 1/(2n) - 1/(12n^2) + 1/(120 n^4) ...
    const double gamma = 0.57721566490153286060651209;
    if (n < 40) {
        double h = 0;
        for (int k = 1; k <= static_cast<int>(n); ++k) h += 1.0 / k;
        return h;
    }
    double inv = 1.0 / n;
    return std::log(n) + gamma + 0.5 * inv - inv * inv / 12.0 + inv * inv * inv * inv / 120.0;
}
}  // namespace

WeightSequence WeightSequence::from_list(std::vector<double> a) {
    if (a.empty()) fail("invalid-weights", "empty weight list");
    WeightSequence w(Kind::ExplicitList, std::move(a), 0);
    w.cap_ = w.stored_.size();
    w.validate();
    return w;
}

WeightSequence WeightSequence::factorial_pair(std::size_t prefix) {
    WeightSequence w(Kind::FactorialPair, {}, 4'000'000);
    w.extend_to(prefix);
    return w;
}

WeightSequence WeightSequence::dyadic(std::size_t prefix) {
    WeightSequence w(Kind::Dyadic, {}, 4000);
    w.extend_to(prefix);
    return w;
}

void WeightSequence::extend_to(std::size_t n) const {
    if (stored_.size() >= n) return;
    if (n > cap_) fail("prefix-exhausted", "weight prefix beyond cap " + std::to_string(cap_));
    stored_.reserve(n);
    for (std::size_t k = stored_.size(); k < n; ++k) {
        double v;
        switch (kind_) {
            case Kind::FactorialPair:
                v = (k == 0) ? 1.0 : 1.0 / (2.0 * k * (2.0 * k - 1.0));
                break;
            case Kind::Dyadic:
                v = std::ldexp(1.0, -static_cast<int>(k) - 1);
                break;
            default:
                fail("prefix-exhausted", "explicit list of size " + std::to_string(stored_.size()));
        }
        stored_.push_back(v);
    }
    log_prefix_.reserve(n);
    for (std::size_t k = log_prefix_.size(); k < stored_.size(); ++k) {
        double prev = k == 0 ? 0.0 : log_prefix_[k - 1];
        log_prefix_.push_back(prev + std::log(stored_[k]));
    }
}

double WeightSequence::a(std::size_t k) const {
    extend_to(k + 1);
    return stored_[k];
}

double WeightSequence::tail_sum(std::size_t k) const {
    if (k < 1) k = 1;
    switch (kind_) {
        case Kind::FactorialPair: {
            // sum_{j>=k} 1/(2j(2j-1)) = ln2 - (H_{2(k-1)} - H_{k-1})
            double head = (k == 1) ? 0.0 : harmonic(2.0 * (k - 1)) - harmonic(k - 1.0);
            return std::log(2.0) - head;
        }
        case Kind::Dyadic:
            // sum_{j>=k} 2^{-(j+1)} = 2^{-k}
            return std::ldexp(1.0, -static_cast<int>(k));
        case Kind::ExplicitList: {
            double s = 0;
            for (std::size_t j = stored_.size(); j-- > k;) s += stored_[j];
            return s;
        }
    }
    return 0;
}

double WeightSequence::regularity_A() const {
    extend_to(std::min<std::size_t>(std::max<std::size_t>(stored_.size(), 64), cap_));
    double A = 1.0;
    for (std::size_t p = 1; p + 1 < stored_.size(); ++p) {
        double lhs = p * stored_[p] + tail_sum(p + 1);
        A = std::max(A, lhs / (p * stored_[p]));
    }
    // The factorial-pair supremum is approached from below as p grows; pad to
    // cover indices beyond the scanned prefix.
    if (kind_ == Kind::FactorialPair) A = std::max(A, 2.0);
    return A;
}

double WeightSequence::log_modulus(std::size_t q) const {
    extend_to(q + 1);
    return -log_prefix_[q];
}

void WeightSequence::validate() const {
    if (stored_.empty()) fail("invalid-weights", "empty");
    for (std::size_t k = 0; k < stored_.size(); ++k) {
        if (!(stored_[k] > 0)) fail("invalid-weights", "nonpositive a_" + std::to_string(k));
        if (k >= 2 && stored_[k] > stored_[k - 1] * (1 + 1e-15))
            fail("invalid-weights", "not nonincreasing at index " + std::to_string(k));
    }
    if (!(tail_sum(1) < std::numeric_limits<double>::infinity()))
        fail("invalid-weights", "non-summable");
    // k*a_k -> 0 on the stored prefix: last quarter must sit below the first.
    if (stored_.size() >= 16) {
        std::size_t n = stored_.size();
        double early = 0, late = 0;
        for (std::size_t k = 1; k < n / 4; ++k) early = std::max(early, k * stored_[k]);
        for (std::size_t k = 3 * n / 4; k < n; ++k) late = std::max(late, k * stored_[k]);
        if (late > early && late > 1e-12)
            fail("invalid-weights", "k*a_k does not decay on stored prefix");
    }
    if (!(regularity_A() >= 1.0)) fail("invalid-weights", "regularity constant below 1");
}

}  // namespace flatsteer
