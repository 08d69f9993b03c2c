#pragma once

#include "flatsteer/bigfloat.hpp"
#include "flatsteer/bump.hpp"
#include "flatsteer/weights.hpp"

namespace flatsteer {

// Even cutoff phi(x) = integral_{-inf}^{a - |x|} v(s) ds built on a sharpened
// bump v. phi = 1 on the plateau |x| <= a - supp(v), vanishes for |x| >= a,
// and phi^{(k)}(0) = 0 for k >= 1 exactly (the integrand's support does not
// reach the evaluation point).
class CutoffFunction {
  public:
    CutoffFunction() = default;
    CutoffFunction(BumpFunction v, double a, double delta, double C_measured)
        : v_(std::move(v)), a_(a), delta_(delta), C_(C_measured) {}

    Big value(const Big& x) const;
    Big derivative(int k, const Big& x) const;  // k <= depth()-1

    double support() const { return a_; }                              // [-a, a]
    double plateau_radius() const { return a_ - v_.support_end(); }    // exactness radius
    double delta() const { return delta_; }
    double C_measured() const { return C_; }
    const BumpFunction& base() const { return v_; }
    // highest exact derivative order: v supplies k-1 <= depth-2
    int max_order() const { return static_cast<int>(v_.depth()) - 1; }

  private:
    BumpFunction v_;
    double a_ = 0;
    double delta_ = 0;
    double C_ = 0;
};

// Corollary-style construction: sharpen the shifted sequence (a_1, a_2, ...)
// and integrate. The measured constant C reports the grid supremum of
// |phi^{(k)}| * (a_1...a_k) / delta^k.
CutoffFunction make_cutoff(const WeightSequence& w, double delta, int K);

// Same construction on an arbitrary sequence handed over as explicit
// callbacks (value b_j, tail sums, total); used by the interpolation blocks
// where the sequence is a scaled hat view never materialized in full.
struct SequenceView {
    // b_j, j >= 0
    double (*value)(std::size_t j, const void* ctx);
    // sum_{i >= j} b_i
    double (*tail)(std::size_t j, const void* ctx);
    const void* ctx;
    std::size_t hard_cap;
};

struct BlockCutoffResult {
    CutoffFunction cutoff;
    std::size_t k0 = 0;
    double kappa = 0;
};

BlockCutoffResult make_cutoff_from_view(const SequenceView& seq, double delta, int K,
                                        bool measure_constant);

}  // namespace flatsteer
