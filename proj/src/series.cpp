#include "flatsteer/series.hpp"

#include <cmath>

#include "flatsteer/errors.hpp"

namespace flatsteer {

SeriesField::SeriesField(std::shared_ptr<const FlatOutput> fo, int N, double tail_bound)
    : fo_(std::move(fo)), N_(N), tail_bound_(tail_bound) {
    parity_ = fo_->parity() == FlatOutput::Parity::even ? Parity::even : Parity::odd;
}

SeriesField SeriesField::mixed(SeriesField even_part, SeriesField odd_part) {
    SeriesField s;
    s.parity_ = Parity::mixed;
    s.even_ = std::make_shared<SeriesField>(std::move(even_part));
    s.odd_ = std::make_shared<SeriesField>(std::move(odd_part));
    s.N_ = std::max(s.even_->truncation(), s.odd_->truncation());
    s.tail_bound_ = s.even_->tail_bound() + s.odd_->tail_bound();
    return s;
}

double SeriesField::T() const {
    if (parity_ == Parity::mixed) return even_->T();
    return fo_->T();
}

const std::vector<double>& SeriesField::scaled_at(double t) const {
    if (cache_t_ != t || cache_tab_.empty()) {
        cache_tab_ = fo_->scaled_table(N_, t);
        cache_t_ = t;
    }
    return cache_tab_;
}

double SeriesField::value(double x, double t) const {
    if (parity_ == Parity::mixed) return even_->value(x, t) + odd_->value(x, t);
    const auto& c = scaled_at(t);
    const double x2 = x * x;
    double acc = 0;
    for (int i = N_; i >= 0; --i) acc = acc * x2 + c[i];
    return parity_ == Parity::even ? acc : x * acc;
}

double SeriesField::x_derivative(double x, double t) const {
    if (parity_ == Parity::mixed) return even_->x_derivative(x, t) + odd_->x_derivative(x, t);
    const auto& c = scaled_at(t);
    const double x2 = x * x;
    double acc = 0;
    if (parity_ == Parity::even) {
        // d/dx sum c_i x^{2i} = sum 2i c_i x^{2i-1}
        for (int i = N_; i >= 1; --i) acc = acc * x2 + 2.0 * i * c[i];
        return x * acc;
    }
    // d/dx sum c_i x^{2i+1} = sum (2i+1) c_i x^{2i}
    for (int i = N_; i >= 0; --i) acc = acc * x2 + (2.0 * i + 1.0) * c[i];
    return acc;
}

namespace {
SeriesField assemble(std::shared_ptr<const FlatOutput> fo, int N) {
    if (!(fo->ratio() < 1.0))
        fail("divergent-series", "certificate ratio R'/R must be below 1");
    // tail bound M' sum_{i>N} ratio^{2i} (value tail at |x|<=1)
    double r2 = fo->ratio() * fo->ratio();
    double tail = std::exp(fo->log_M_prime()) * std::pow(r2, N + 1) / (1 - r2);
    return SeriesField(std::move(fo), N, tail);
}
}  // namespace

SeriesField assemble_even(std::shared_ptr<const FlatOutput> y, int N) {
    if (y->parity() != FlatOutput::Parity::even)
        fail("invalid-weights", "assemble_even expects an even flat output");
    return assemble(std::move(y), N);
}

SeriesField assemble_odd(std::shared_ptr<const FlatOutput> z, int N) {
    if (z->parity() != FlatOutput::Parity::odd)
        fail("invalid-weights", "assemble_odd expects an odd flat output");
    return assemble(std::move(z), N);
}

}  // namespace flatsteer
