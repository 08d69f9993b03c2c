#include "flatsteer/flat_output.hpp"

#include <cmath>

#include "flatsteer/errors.hpp"
#include "flatsteer/weights.hpp"

namespace flatsteer {

double loss_reference_R0() { return std::exp(1.0 / (2.0 * std::exp(1.0))); }

namespace {

double scaled_denominator_log(FlatOutput::Parity par, int i) {
    return par == FlatOutput::Parity::even ? log_factorial(2.0 * i)
                                           : log_factorial(2.0 * i + 1.0);
}

}  // namespace

std::vector<double> FlatOutput::scaled_table(int imax, double t) const {
    std::vector<double> out(imax + 1, 0.0);
    if (t < 0) t = 0;
    if (t > T_) t = T_;
    auto gtab = step_.derivative_table(imax, Big(t));
    if (method_ == Method::petzsche) {
        auto ftab = pet_->derivative_table(imax, Big(t - T_));
        for (int i = 0; i <= imax; ++i) {
            Big acc = 0;
            Big binom = 1;
            for (int j = 0; j <= i; ++j) {
                acc += binom * ftab[j] * gtab[i - j];
                binom = binom * (i - j) / (j + 1);
            }
            double den = scaled_denominator_log(parity_, i);
            out[i] = to_double(acc * exp(Big(-den)));
        }
    } else {
        // f-scaled table fhat_j = f^{(j)}/(2j)! in doubles, recombined with
        // c_{ij} = C(i,j) (2j)!/(2i)! (or the odd analogue), all O(1)-sized.
        std::vector<double> fhat = lap_->f_scaled_table(imax, t);
        std::vector<double> gd(imax + 1);
        for (int k = 0; k <= imax; ++k) gd[k] = to_double(gtab[k]);
        for (int i = 0; i <= imax; ++i) {
            double acc = 0;
            for (int j = 0; j <= i; ++j) {
                double logc = log_factorial(i) - log_factorial(j) - log_factorial(i - j) +
                              log_factorial(2.0 * j) - scaled_denominator_log(parity_, i);
                acc += std::exp(logc) * fhat[j] * gd[i - j];
            }
            out[i] = acc;
        }
    }
    return out;
}

double FlatOutput::scaled_derivative(int i, double t) const { return scaled_table(i, t)[i]; }

void FlatOutput::measure(int grid) {
    const int imax = n_max_;
    log_sup_scaled_.assign(imax + 1, -1e300);
    for (int k = 0; k <= grid; ++k) {
        double t = T_ * k / grid;
        auto tab = scaled_table(imax, t);
        for (int i = 0; i <= imax; ++i) {
            double a = std::fabs(tab[i]);
            if (a > 0) log_sup_scaled_[i] = std::max(log_sup_scaled_[i], std::log(a));
        }
    }
    const double lr = std::log(R_prime_ / R_);
    log_M_prime_ = -1e300;
    for (int i = 0; i <= imax; ++i) {
        if (log_sup_scaled_[i] <= -1e299) continue;
        double pw = parity_ == Parity::even ? 2.0 * i : 2.0 * i + 1.0;
        log_M_prime_ = std::max(log_M_prime_, log_sup_scaled_[i] - pw * lr);
    }
    if (log_M_prime_ <= -1e299) log_M_prime_ = 0;
    // endpoint checks: (exact) flatness at 0, interpolation at T
    auto tab0 = scaled_table(imax, 0.0);
    auto tabT = scaled_table(imax, T_);
    endpoint0_abs_max_ = 0;
    interp_rel_max_ = 0;
    for (int i = 0; i <= imax; ++i) {
        endpoint0_abs_max_ = std::max(endpoint0_abs_max_, std::fabs(tab0[i]));
        if (i < static_cast<int>(targets_.d.size())) {
            double den = scaled_denominator_log(parity_, i);
            double dh = to_double(targets_.d[i] * exp(Big(-den)));
            double err = std::fabs(tabT[i] - dh);
            double rel = dh == 0 ? err : err / std::max(std::fabs(dh), 1e-300);
            interp_rel_max_ = std::max(interp_rel_max_, rel);
        }
    }
}

// Private-field access for the construction routines.
struct FlatOutputAccess {
    static FlatOutput steer_petzsche(const CoeffSequence& c, FlatOutput::Parity parity, double T,
                                     double R_prime, double sigma, int n_max,
                                     std::size_t N_blocks) {
        const double R0 = loss_reference_R0();
        const double R = c.R;
        if (!(R > R0)) fail("insufficient-radius", "target radius must exceed R0 = e^{1/(2e)}");
        if (!(R_prime > R0 && R_prime < R)) fail("invalid-loss", "need R0 < R' < R");
        FlatOutput fo;
        fo.method_ = FlatOutput::Method::petzsche;
        fo.parity_ = parity;
        fo.T_ = T;
        fo.n_max_ = n_max;
        fo.targets_ = c;
        fo.step_ = gevrey_step(sigma, T);

        // Reduce odd data to the even-convention radius bookkeeping:
        // |c_{2i+1}| <= M(2i+1)!/R^{2i+1}  =>  |d_i| <= Mt (2i)!/Rt^{2i}
        // with intermediate radii R0 < Rt' < R' < Rt < R and Rt'/Rt < R'/R.
        CoeffSequence d = c;
        double R_eff = R, Rp_eff = R_prime;
        if (parity == FlatOutput::Parity::odd) {
            double lo = std::max(R0 * R / R_prime, R_prime);
            if (!(lo < R)) fail("invalid-loss", "odd reduction has no admissible Rt window");
            double Rt = 0.5 * (lo + R);
            double Rtp_raw = R_prime * Rt / R;  // > R0 since Rt > R0 R/R'
            double Rtp = 0.5 * (R0 + Rtp_raw);
            double logMt = -1e300;
            for (std::size_t i = 0; i < c.d.size(); ++i) {
                double le = log_factorial(2.0 * i + 1.0) - (2.0 * i + 1.0) * std::log(R);
                double lt = log_factorial(2.0 * i) - 2.0 * i * std::log(Rt);
                logMt = std::max(logMt, std::log(c.M) + le - lt);
            }
            d.conv = CoeffSequence::Convention::EvenGevrey2;
            d.R = Rt;
            d.M = std::exp(logMt) * (1 + 1e-12);
            R_eff = Rt;
            Rp_eff = Rtp;
        }

        const double H = 1.0 / (R_eff * R_eff);
        const double e1e = std::exp(1.0 / std::exp(1.0));
        const double cap = (Rp_eff / R_eff) * (Rp_eff / R_eff);
        const double Htilde = std::sqrt(e1e * H * cap);  // geometric mean of the window
        WeightSequence w = WeightSequence::factorial_pair();
        std::size_t NB = N_blocks ? N_blocks : std::min<std::size_t>(c.d.size(), n_max + 1);
        auto f = petzsche_interpolate(d, w, H, Htilde, NB, n_max);
        fo.pet_ = std::make_shared<PetzscheInterpolant>(std::move(f));
        fo.R_ = R;
        fo.R_prime_ = R_prime;
        fo.measure(96);
        return fo;
    }

    static FlatOutput laplace(std::shared_ptr<const LaplaceKernel> kernel, Big d0,
                              FlatOutput::Parity parity, double T, double R, double sigma,
                              int n_max) {
        FlatOutput fo;
        fo.method_ = FlatOutput::Method::laplace;
        fo.parity_ = parity;
        fo.T_ = T;
        fo.n_max_ = n_max;
        fo.step_ = gevrey_step(sigma, T);
        auto lap = laplace_interpolate(kernel, d0, 0.0, T, n_max);
        fo.lap_ = std::make_shared<LaplaceInterpolant>(std::move(lap));
        CoeffSequence c;
        c.conv = parity == FlatOutput::Parity::even ? CoeffSequence::Convention::EvenGevrey2
                                                    : CoeffSequence::Convention::OddGevrey2;
        c.R = R;
        for (int n = 0; n <= n_max; ++n) c.d.push_back(fo.lap_->d(n));
        c.M = std::max(c.measured_M(), 1e-300);
        fo.targets_ = c;
        fo.R_ = R;
        fo.R_prime_ = 1.0;  // no-loss route: |y^{(i)}| <= M' (1/R)^{2i} (2i)!
        fo.measure(96);
        return fo;
    }
};

FlatOutput steer_output_even(const CoeffSequence& c_even, double T, double R_prime, double sigma,
                             int n_max, std::size_t N_blocks) {
    if (c_even.conv != CoeffSequence::Convention::EvenGevrey2)
        fail("invalid-weights", "steer_output_even expects even-convention targets");
    return FlatOutputAccess::steer_petzsche(c_even, FlatOutput::Parity::even, T, R_prime, sigma,
                                            n_max, N_blocks);
}

FlatOutput steer_output_odd(const CoeffSequence& c_odd, double T, double R_prime, double sigma,
                            int n_max, std::size_t N_blocks) {
    if (c_odd.conv != CoeffSequence::Convention::OddGevrey2)
        fail("invalid-weights", "steer_output_odd expects odd-convention targets");
    return FlatOutputAccess::steer_petzsche(c_odd, FlatOutput::Parity::odd, T, R_prime, sigma,
                                            n_max, N_blocks);
}

FlatOutput laplace_output(std::shared_ptr<const LaplaceKernel> kernel, Big d0,
                          FlatOutput::Parity parity, double T, double R, double sigma,
                          int n_max) {
    return FlatOutputAccess::laplace(std::move(kernel), d0, parity, T, R, sigma, n_max);
}

LossReport measure_loss_from_table(const std::vector<double>& log_sup_scaled, double R,
                                   bool odd_powers, double R_prime) {
    LossReport rep;
    rep.R0 = loss_reference_R0();
    const int i_max = static_cast<int>(log_sup_scaled.size()) - 1;
    auto log_ratios = [&](double rho) {
        std::vector<double> r(i_max + 1, -1e300);
        for (int i = 0; i <= i_max; ++i) {
            if (log_sup_scaled[i] <= -1e299) continue;
            double pw = odd_powers ? 2.0 * i + 1.0 : 2.0 * i;
            r[i] = log_sup_scaled[i] + pw * std::log(R / rho);
        }
        return r;
    };
    auto bounded = [&](double rho) {
        auto r = log_ratios(rho);
        double early = -1e300, all = -1e300;
        for (int i = 0; i <= std::min(5, i_max); ++i) early = std::max(early, r[i]);
        for (int i = 0; i <= i_max; ++i) all = std::max(all, r[i]);
        if (early <= -1e299) return all <= -1e299;  // zero output: trivially bounded
        return all <= early + std::log(10.0);
    };
    double lo = 1.0, hi = R;
    rep.bounded_at_cap = bounded(hi * (1 - 1e-12));
    if (bounded(lo + 1e-9)) {
        rep.rho_min = 1.0;
    } else if (!rep.bounded_at_cap) {
        rep.rho_min = R;  // capped: ratios grow through every admissible loss
    } else {
        for (int it = 0; it < 80; ++it) {
            double mid = 0.5 * (lo + hi);
            if (bounded(mid))
                hi = mid;
            else
                lo = mid;
        }
        rep.rho_min = hi;
    }
    rep.log_ratio_at_min = log_ratios(rep.rho_min);
    rep.log_ratio_at_Rp = log_ratios(R_prime);
    return rep;
}

LossReport measure_loss(const FlatOutput& fo, int i_max) {
    i_max = std::min(i_max, fo.n_max());
    std::vector<double> sup(fo.log_sup_scaled().begin(),
                            fo.log_sup_scaled().begin() + i_max + 1);
    return measure_loss_from_table(sup, fo.R(), fo.parity() == FlatOutput::Parity::odd,
                                   fo.R_prime());
}

}  // namespace flatsteer
