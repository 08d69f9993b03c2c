#pragma once

#include <cstddef>
#include <vector>

#include "flatsteer/bigfloat.hpp"
#include "flatsteer/weights.hpp"

namespace flatsteer {

// Compactly supported smooth bump: the exact K-fold convolution of normalized
// box kernels H_{a_0} * ... * H_{a_{K-1}} (a piecewise polynomial of degree
// K-1). Stored as the box-width multiset; values and derivatives are evaluated
// exactly from the truncated-power form
//   u^{(l)}(x) = (prod a_j)^{-1} sum_S (-1)^{|S|} (x - A_S)_+^{K-1-l} / (K-1-l)!
// with the subset sums A_S collapsed over equal-width groups (so the
// flattened sequences of the sharpening step cost K+1 terms, not 2^K).
class BumpFunction {
  public:
    BumpFunction() = default;
    explicit BumpFunction(std::vector<double> widths);

    std::size_t depth() const { return widths_.size(); }
    double support_end() const { return support_end_; }
    const std::vector<double>& widths() const { return widths_; }
    std::size_t term_count() const { return terms_; }

    Big value(const Big& x) const { return derivative(0, x); }

    // Exact derivative of order l <= K-2.
    Big derivative(int l, const Big& x) const;

    // Antiderivative U(x) = integral_{-inf}^x u (exact; U(support_end) = 1).
    Big antiderivative(const Big& x) const;

    // Same derivative through l explicit normalized difference operators
    // applied to the remaining (K-l)-fold convolution; used by the
    // consistency property tests.
    Big derivative_by_differences(int l, const Big& x) const;

    // Mass by adaptive quadrature (invariant check).
    double mass_quadrature(double abs_tol = 1e-12) const;

  private:
    struct Group {
        double width;
        int count;
        std::vector<Big> binom;  // C(count, i)
    };
    Big eval_power_sum(int power, const Big& x) const;  // sum over collapsed subsets

    std::vector<double> widths_;
    std::vector<Group> groups_;
    double support_end_ = 0;
    double log_prod_widths_ = 0;
    std::size_t terms_ = 0;
    unsigned eval_bits_ = 256;
};

// Lemma-style construction on the leading K weights.
BumpFunction make_bump(const WeightSequence& w, int K);

struct SharpenResult {
    BumpFunction bump;
    std::size_t k0 = 0;
    double kappa = 1.0;
    // Measured constant in |v^{(k)}| <= M * delta^k * (a_0...a_k)^{-1} over a
    // check grid, orders k <= K-2 (the sharpening trades a larger constant for
    // the delta^k rate).
    double M_measured = 0.0;
    double delta = 2.0;
};

// Sharpened bump: flattens the sequence to tilde a_k = kappa*a_{min(k,k0)}
// with k0 the smallest index making kappa = a / ((k0+1) a_{k0} + tail) exceed
// 2/delta. delta >= 2 reduces to make_bump (M <= 1).
SharpenResult sharpen_bump(const WeightSequence& w, double delta, int K);

// Flattened-width helper shared with the block construction: applies the
// same k0/kappa selection to an arbitrary positive nonincreasing sequence
// given by value/tail callbacks.
struct FlattenSpec {
    std::size_t k0;
    double kappa;
    double head_width;  // kappa * b_{k0}
};

}  // namespace flatsteer
