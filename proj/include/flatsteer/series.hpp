#pragma once

#include <memory>
#include <vector>

#include "flatsteer/flat_output.hpp"

namespace flatsteer {

// Truncated power-series solution field
//   even:  theta(x,t) = sum_{i<=N} x^{2i}   yhat_i(t)
//   odd:   phi(x,t)   = sum_{i<=N} x^{2i+1} zhat_i(t)
// evaluated by a Horner recurrence in x^2 on the factorial-scaled derivative
// tables (no explicit factorials). Mixed fields are an even/odd pair summed
// on demand, which keeps the parity identities exact.
class SeriesField {
  public:
    enum class Parity { even, odd, mixed };

    SeriesField() = default;
    SeriesField(std::shared_ptr<const FlatOutput> fo, int N, double tail_bound);
    static SeriesField mixed(SeriesField even_part, SeriesField odd_part);

    Parity parity() const { return parity_; }
    int truncation() const { return N_; }
    double tail_bound() const { return tail_bound_; }
    double T() const;

    // theta(x, t); even/odd fields accept x in [-1, 1] as well (parity
    // extension), mixed fields live on [-1, 1].
    double value(double x, double t) const;

    // d/dx trace of the truncated series (exact termwise derivative).
    double x_derivative(double x, double t) const;

    // Scaled derivative table at time t (cached per t internally).
    const std::vector<double>& scaled_at(double t) const;

    const FlatOutput& output() const { return *fo_; }

  private:
    Parity parity_ = Parity::even;
    std::shared_ptr<const FlatOutput> fo_;
    std::shared_ptr<SeriesField> even_, odd_;
    int N_ = 0;
    double tail_bound_ = 0;
    mutable std::vector<double> cache_tab_;
    mutable double cache_t_ = -1;
};

// Assembly per the solution ansatz; divergent-series when the certificate
// ratio R'/R reaches 1.
SeriesField assemble_even(std::shared_ptr<const FlatOutput> y, int N);
SeriesField assemble_odd(std::shared_ptr<const FlatOutput> z, int N);

}  // namespace flatsteer
