#include "flatsteer/petzsche.hpp"

#include <cmath>

#include "flatsteer/errors.hpp"
#include "flatsteer/gevrey.hpp"

namespace flatsteer {

namespace {

// Scaled hat-sequence view for block p over weights w (a_0 = 1):
//   b_j = (1/h) * a_p        for j <= p-1        (hat plateau)
//   b_j = (1/h) * a_{j+1}    for j >= p          (original tail)
// Block 0 is the plain shifted sequence.
struct HatCtx {
    const WeightSequence* w;
    int p;
    double inv_h;
};

double hat_value(std::size_t j, const void* vctx) {
    auto* c = static_cast<const HatCtx*>(vctx);
    std::size_t jj = j + 1;
    double a = (c->p >= 1 && jj <= static_cast<std::size_t>(c->p)) ? c->w->a(c->p) : c->w->a(jj);
    return a * c->inv_h;
}

double hat_tail(std::size_t j, const void* vctx) {
    auto* c = static_cast<const HatCtx*>(vctx);
    std::size_t jj = j + 1;
    double s;
    if (c->p >= 1 && jj <= static_cast<std::size_t>(c->p)) {
        s = (c->p - jj + 1) * c->w->a(c->p) + c->w->tail_sum(c->p + 1);
    } else {
        s = c->w->tail_sum(jj);
    }
    return s * c->inv_h;
}

}  // namespace

PetzscheInterpolant petzsche_interpolate(const CoeffSequence& d, const WeightSequence& w,
                                         double H, double Htilde, std::size_t N_max,
                                         int qmax_needed) {
    w.validate();
    if (std::fabs(w.a(0) - 1.0) > 1e-14)
        fail("invalid-weights", "interpolation requires a_0 = 1");
    const double e1e = std::exp(1.0 / std::exp(1.0));
    if (!(Htilde > e1e * H)) fail("loss-too-small", "Htilde must exceed e^{1/e} H");
    const double A = w.regularity_A();
    const double Ae = A * std::exp(1.0);
    // Largest delta with (1+delta)(delta*A*e + 1) = Htilde/(e^{1/e} H), shrunk
    // for margin; the quadratic always has a positive root when the
    // precondition holds.
    const double budget = Htilde / (e1e * H);
    const double disc = (Ae + 1.0) * (Ae + 1.0) - 4.0 * Ae * (1.0 - budget);
    double delta = (-(Ae + 1.0) + std::sqrt(disc)) / (2.0 * Ae) * 0.9;
    if (!(delta > 0)) fail("infeasible-parameters", "no admissible delta");
    const double h = (1.0 + delta) * A * std::exp(1.0 + 1.0 / std::exp(1.0)) * H;

    PetzscheInterpolant f;
    f.weights_copy_ = w;
    f.weights_ = &f.weights_copy_;
    f.prm_.H = H;
    f.prm_.Htilde = Htilde;
    f.prm_.A = A;
    f.prm_.delta = delta;
    f.prm_.h = h;
    f.prm_.N_max = N_max;
    f.prm_.tail_bound = std::pow(1.0 + delta, -static_cast<double>(N_max)) / delta;
    f.qmax_ = qmax_needed;

    const int K = qmax_needed + 3;
    std::size_t n_blocks = std::min(N_max + 1, d.size());
    for (std::size_t p = 0; p < n_blocks; ++p) {
        if (d.d[p] == 0) continue;  // empty sum for zero targets
        HatCtx ctx{&f.weights_copy_, static_cast<int>(p), 1.0 / h};
        SequenceView view{&hat_value, &hat_tail, &ctx, 4'000'000};
        auto blk = make_cutoff_from_view(view, delta, K, /*measure_constant=*/false);
        f.blocks_.push_back({static_cast<int>(p), d.d[p], std::move(blk.cutoff), blk.k0,
                             blk.kappa});
        f.support_ = std::max(f.support_, f.blocks_.back().phi.support());
    }
    return f;
}

std::vector<Big> PetzscheInterpolant::derivative_table(int qmax, const Big& x) const {
    if (qmax > qmax_)
        fail("invalid-depth", "interpolant built for orders <= " + std::to_string(qmax_));
    std::vector<Big> out(qmax + 1, Big(0));
    Big ax = abs(x);
    int pmax = 0;
    for (const Block& b : blocks_) pmax = std::max(pmax, b.p);
    std::vector<Big> fact(std::max(pmax, qmax) + 2);
    fact[0] = 1;
    for (int i = 1; i < static_cast<int>(fact.size()); ++i) fact[i] = fact[i - 1] * i;
    std::vector<Big> xpow(pmax + 2);
    xpow[0] = 1;
    for (int i = 1; i < static_cast<int>(xpow.size()); ++i) xpow[i] = xpow[i - 1] * x;
    for (const Block& b : blocks_) {
        const int p = b.p;
        if (ax >= Big(b.phi.support())) continue;
        // zeta_p^{(q)} = sum_j C(q,j) phi^{(j)}(x) x^{p-q+j}/(p-q+j)!
        if (to_double(ax) <= b.phi.plateau_radius()) {
            // phi == 1 exactly on the plateau: only j = 0 survives.
            for (int q = 0; q <= std::min(qmax, p); ++q)
                out[q] += b.d * xpow[p - q] / fact[p - q];
            continue;
        }
        std::vector<Big> phi(qmax + 1);
        for (int j = 0; j <= qmax; ++j) phi[j] = b.phi.derivative(j, x);
        for (int q = 0; q <= qmax; ++q) {
            Big z = 0;
            Big binom = 1;  // C(q, j)
            for (int j = 0; j <= q; ++j) {
                int m = p - q + j;
                if (m >= 0) z += binom * phi[j] * xpow[m] / fact[m];
                binom = binom * (q - j) / (j + 1);
            }
            out[q] += b.d * z;
        }
    }
    return out;
}

Big PetzscheInterpolant::derivative(int q, const Big& x) const {
    return derivative_table(q, x)[q];
}

double PetzscheInterpolant::measured_log_C(int qmax, int grid) const {
    double logC = -1e300;
    for (int i = -grid; i <= grid; ++i) {
        if (i == 0) continue;
        Big x = Big(support_) * i / grid;
        auto tab = derivative_table(qmax, x);
        for (int q = 0; q <= qmax; ++q) {
            if (tab[q] == 0) continue;
            double lv = to_double(log(abs(tab[q])));
            double env = q * std::log(prm_.Htilde) + weights_->log_modulus(q);
            logC = std::max(logC, lv - env);
        }
    }
    return logC;
}

}  // namespace flatsteer
