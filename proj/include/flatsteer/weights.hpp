#pragma once

#include <cstddef>
#include <string>
#include <vector>

namespace flatsteer {

// Weight sequence a_0, a_1, a_2, ... driving the iterated-convolution bumps:
// positive, nonincreasing from index 1, summable, with the regularity constant
//   p*a_p + sum_{k>p} a_k <= A * p * a_p   for all p >= 1.
// Derived moduli M_q = (a_0...a_q)^{-1} are kept in log form (they reach
// (2q)! for the factorial-pair sequence).
class WeightSequence {
  public:
    enum class Kind {
        ExplicitList,
        FactorialPair,  // a_0 = 1, a_p = 1/(2p(2p-1))  =>  M_p = (2p)!
        Dyadic,         // a_k = 2^{-(k+1)}
    };

    static WeightSequence from_list(std::vector<double> a);
    static WeightSequence factorial_pair(std::size_t prefix = 4096);
    static WeightSequence dyadic(std::size_t prefix = 256);

    Kind kind() const { return kind_; }

    // a_k; generator-backed kinds extend the prefix on demand (up to a hard
    // cap), explicit lists raise prefix-exhausted beyond their data.
    double a(std::size_t k) const;

    // sum_{j>=k} a_j for k >= 1 (closed form for generator kinds, numeric for
    // explicit lists).
    double tail_sum(std::size_t k) const;

    // Total sum_{k>=1} a_k.
    double sum_from_1() const { return tail_sum(1); }

    // Total sum_{k>=0}.
    double sum_all() const { return a(0) + tail_sum(1); }

    // Regularity constant over the stored prefix (>= 1).
    double regularity_A() const;

    // log M_q = -sum_{k<=q} log a_k.
    double log_modulus(std::size_t q) const;

    std::size_t prefix_size() const { return stored_.size(); }

    // Invariant check: positivity, monotone nonincreasing from index 1,
    // summability, k*a_k -> 0 on the stored prefix, A-inequality.
    void validate() const;

  private:
    WeightSequence(Kind k, std::vector<double> stored, std::size_t cap)
        : kind_(k), stored_(std::move(stored)), cap_(cap) {}
    void extend_to(std::size_t n) const;

    Kind kind_;
    mutable std::vector<double> stored_;
    mutable std::vector<double> log_prefix_;  // cumulative sum of log a_k
    std::size_t cap_;
};

}  // namespace flatsteer
