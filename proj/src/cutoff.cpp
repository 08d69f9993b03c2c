#include "flatsteer/cutoff.hpp"

#include <cmath>
#include <vector>

#include "flatsteer/errors.hpp"

namespace flatsteer {

Big CutoffFunction::value(const Big& x) const {
    Big ax = abs(x);
    if (ax >= Big(a_)) return Big(0);
    Big s = Big(a_) - ax;
    return v_.antiderivative(s);  // saturates to 1 past the support
}

Big CutoffFunction::derivative(int k, const Big& x) const {
    if (k == 0) return value(x);
    Big ax = abs(x);
    if (ax >= Big(a_)) return Big(0);
    Big s = Big(a_) - ax;
    if (s >= Big(v_.support_end())) return Big(0);  // plateau, exact zero
    // phi even; for x>0: phi^{(k)}(x) = (-1)^k v^{(k-1)}(a-x); for x<0 the
    // evenness gives phi^{(k)}(x) = v^{(k-1)}(a+x).
    Big vd = v_.derivative(k - 1, s);
    if (x > 0 && (k % 2 == 1)) return -vd;
    return vd;
}

namespace {

struct WeightShiftCtx {
    const WeightSequence* w;
};
double wshift_value(std::size_t j, const void* ctx) {
    return static_cast<const WeightShiftCtx*>(ctx)->w->a(j + 1);
}
double wshift_tail(std::size_t j, const void* ctx) {
    return static_cast<const WeightShiftCtx*>(ctx)->w->tail_sum(j + 1);
}

}  // namespace

BlockCutoffResult make_cutoff_from_view(const SequenceView& seq, double delta, int K,
                                        bool measure_constant) {
    if (!(delta > 0)) fail("invalid-weights", "delta must be positive");
    if (K < 3) fail("invalid-depth", "cutoff needs K >= 3");
    const double total = seq.tail(0, seq.ctx);
    BlockCutoffResult out;
    std::vector<double> widths(K);
    if (delta >= 2.0) {
        out.k0 = 0;
        out.kappa = 1.0;
        for (int k = 0; k < K; ++k) widths[k] = seq.value(k, seq.ctx);
    } else {
        const double threshold = 2.0 / delta;
        std::size_t k0 = 0;
        double kappa = 0;
        for (;; ++k0) {
            if (k0 >= seq.hard_cap) fail("prefix-exhausted", "no admissible k0 within prefix");
            kappa = total / ((k0 + 1) * seq.value(k0, seq.ctx) + seq.tail(k0 + 1, seq.ctx));
            if (kappa > threshold) break;
        }
        out.k0 = k0;
        out.kappa = kappa;
        const double head = kappa * seq.value(k0, seq.ctx);
        for (int k = 0; k < K; ++k)
            widths[k] =
                (static_cast<std::size_t>(k) <= out.k0) ? head : kappa * seq.value(k, seq.ctx);
    }
    BumpFunction v(std::move(widths));
    double C = 1.0;
    if (measure_constant) {
        // sup over grid/orders of |phi^{(k)}| * (b_0...b_{k-1}) / delta^k
        // (the shifted-index bound of the corollary).
        double logC = 0.0;
        double log_prod = 0.0;
        const double s_end = v.support_end();
        for (int k = 1; k <= K - 1; ++k) {
            log_prod += std::log(seq.value(k - 1, seq.ctx));
            double log_env = k * std::log(delta) - log_prod;
            for (int i = 1; i < 96; ++i) {
                Big s = Big(s_end) * i / 96;
                Big vd = abs(v.derivative(k - 1, s));
                if (vd > 0) logC = std::max(logC, to_double(log(vd)) - log_env);
            }
        }
        C = std::exp(logC);
    }
    out.cutoff = CutoffFunction(std::move(v), total, delta, C);
    return out;
}

CutoffFunction make_cutoff(const WeightSequence& w, double delta, int K) {
    w.validate();
    WeightShiftCtx ctx{&w};
    SequenceView view{&wshift_value, &wshift_tail, &ctx, 4'000'000};
    return make_cutoff_from_view(view, delta, K, true).cutoff;
}

}  // namespace flatsteer
