#include "flatsteer/config.hpp"

#include <fstream>
#include <sstream>

#include <json.hpp>

#include "flatsteer/errors.hpp"
#include "flatsteer/gevrey.hpp"

namespace flatsteer {

using nlohmann::json;

namespace {

[[noreturn]] void bad(const std::string& what) { fail("config-invalid", what); }

template <typename T>
T get_or(const json& j, const char* key, T def) {
    if (!j.contains(key)) return def;
    try {
        return j.at(key).get<T>();
    } catch (const json::exception&) {
        bad(std::string("field '") + key + "' has the wrong type");
    }
}

}  // namespace

ExperimentConfig parse_config_json(const std::string& text) {
    json j;
    try {
        j = json::parse(text);
    } catch (const json::exception& e) {
        bad(std::string("not valid JSON: ") + e.what());
    }
    ExperimentConfig c;
    if (!j.contains("schema_version")) bad("missing schema_version");
    c.schema_version = j.at("schema_version").get<int>();
    if (c.schema_version != 1) bad("unsupported schema_version");

    if (j.contains("problem")) {
        const auto& p = j.at("problem");
        c.boundary = get_or<std::string>(p, "boundary", c.boundary);
        c.T = get_or<double>(p, "T", c.T);
        if (p.contains("domain")) {
            auto d = p.at("domain");
            if (!d.is_array() || d.size() != 2) bad("problem.domain must be [lo, hi]");
            c.domain_lo = d[0].get<double>();
            c.domain_hi = d[1].get<double>();
        }
        if (p.contains("robin")) {
            const auto& r = p.at("robin");
            c.alpha0 = get_or<double>(r, "alpha0", c.alpha0);
            c.beta0 = get_or<double>(r, "beta0", c.beta0);
            c.alpha1 = get_or<double>(r, "alpha1", c.alpha1);
            c.beta1 = get_or<double>(r, "beta1", c.beta1);
        }
    }
    if (j.contains("target")) {
        const auto& t = j.at("target");
        c.target_kind = get_or<std::string>(t, "kind", c.target_kind);
        c.target_family = get_or<std::string>(t, "family", c.target_family);
        c.target_a = get_or<double>(t, "a", c.target_a);
        c.target_zeta = get_or<double>(t, "zeta", c.target_zeta);
        c.coeff_convention = get_or<std::string>(t, "convention", c.coeff_convention);
        c.coeff_M = get_or<double>(t, "M", c.coeff_M);
        c.coeff_R = get_or<double>(t, "R", c.coeff_R);
        if (t.contains("values")) c.coeff_values = t.at("values").get<std::vector<double>>();
    }
    if (j.contains("synthesis")) {
        const auto& s = j.at("synthesis");
        c.method = get_or<std::string>(s, "method", c.method);
        c.R_prime = get_or<double>(s, "R_prime", c.R_prime);
        c.sigma = get_or<double>(s, "sigma", c.sigma);
        c.tol = get_or<double>(s, "tol", c.tol);
        c.N = get_or<int>(s, "N", c.N);
        c.precision_bits = get_or<unsigned>(s, "precision_bits", c.precision_bits);
        c.contour_radius = get_or<double>(s, "contour_radius", c.contour_radius);
    }
    if (j.contains("simulation")) {
        const auto& s = j.at("simulation");
        c.nx = get_or<int>(s, "nx", c.nx);
        c.nt = get_or<int>(s, "nt", c.nt);
    }
    if (j.contains("outputs")) {
        const auto& o = j.at("outputs");
        c.out_dir = get_or<std::string>(o, "dir", c.out_dir);
        c.write_field = get_or<bool>(o, "field_csv", c.write_field);
        c.write_binary = get_or<bool>(o, "field_binary", c.write_binary);
    }
    if (j.contains("verify")) c.verify_tol = get_or<double>(j.at("verify"), "tolerance", c.verify_tol);

    // cross-field checks
    if (!(c.T > 0)) bad("problem.T must be positive");
    if (!(c.domain_hi > c.domain_lo)) bad("problem.domain must be increasing");
    if (c.boundary != "neumann" && c.boundary != "dirichlet" && c.boundary != "robin-two-sided")
        bad("problem.boundary must be neumann | dirichlet | robin-two-sided");
    if (c.method != "petzsche" && c.method != "laplace") bad("synthesis.method unknown");
    if (!(c.sigma > 1.0 && c.sigma < 2.0)) bad("synthesis.sigma must lie in (1,2)");
    if (c.nx < 16 || c.nt < 16) bad("simulation grid too coarse (nx, nt >= 16)");
    if (!(c.tol > 0)) bad("synthesis.tol must be positive");
    if (c.method == "petzsche") {
        const double R0 = std::exp(1.0 / (2.0 * std::exp(1.0)));
        if (!(c.R_prime > R0)) bad("synthesis.R_prime must exceed R0 = e^{1/(2e)}");
    }
    if (c.target_kind != "rational-poles" && c.target_kind != "coeffs" &&
        c.target_kind != "builtin")
        bad("target.kind must be rational-poles | coeffs | builtin");
    return c;
}

ExperimentConfig load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) bad("cannot read config file " + path);
    std::stringstream ss;
    ss << in.rdbuf();
    return parse_config_json(ss.str());
}

AnalyticTarget make_target(const ExperimentConfig& cfg) {
    AnalyticTarget t;
    t.name = cfg.target_family.empty() ? cfg.target_kind : cfg.target_family;
    if (cfg.target_kind == "coeffs") {
        t.kind = AnalyticTarget::Kind::coefficients;
        CoeffSequence c;
        if (cfg.coeff_convention == "even")
            c.conv = CoeffSequence::Convention::EvenGevrey2;
        else if (cfg.coeff_convention == "odd")
            c.conv = CoeffSequence::Convention::OddGevrey2;
        else
            c.conv = CoeffSequence::Convention::DerivativeFactorial;
        for (double v : cfg.coeff_values) c.d.push_back(Big(v));
        c.R = cfg.coeff_R > 0 ? cfg.coeff_R : 1.0;
        c.M = cfg.coeff_M;
        if (c.M <= 0) c.M = std::max(c.measured_M(), 1e-300);
        t.coeffs = std::move(c);
        t.claimed_radius = t.coeffs.R;
        return t;
    }
    const double a = cfg.target_a;
    if (cfg.target_family == "inverse-quadratic") {
        // 1/(x^2 + a^2), even, poles at +- i a
        t.f = [a](std::complex<double> z) { return 1.0 / (z * z + a * a); };
        t.poles = {{0.0, a}, {0.0, -a}};
        t.claimed_radius = a;
    } else if (cfg.target_family == "x-inverse-quadratic") {
        t.f = [a](std::complex<double> z) { return z / (z * z + a * a); };
        t.poles = {{0.0, a}, {0.0, -a}};
        t.claimed_radius = a;
    } else if (cfg.target_family == "shifted-inverse-quadratic") {
        // 1/((x-1/2)^2 + a^2), poles at 1/2 +- i a
        t.f = [a](std::complex<double> z) {
            auto w = z - 0.5;
            return 1.0 / (w * w + a * a);
        };
        t.poles = {{0.5, a}, {0.5, -a}};
        t.center = 0.5;
        t.claimed_radius = a;
    } else if (cfg.target_family == "zeta-even" || cfg.target_family == "zeta-odd") {
        // coefficient-defined targets d_n = (n!)^2 / zeta^{2n} (squared-pole
        // kernel family); evaluated by direct series summation.
        const double zeta = cfg.target_zeta;
        t.kind = AnalyticTarget::Kind::coefficients;
        CoeffSequence c;
        bool even = cfg.target_family == "zeta-even";
        c.conv = even ? CoeffSequence::Convention::EvenGevrey2
                      : CoeffSequence::Convention::OddGevrey2;
        const int N = 40;
        for (int n = 0; n <= N; ++n)
            c.d.push_back(exp(Big(2 * log_factorial(n) - 2 * n * std::log(zeta))));
        c.R = std::min(2 * zeta * 0.97, 2 * zeta - 0.05);
        c.M = c.measured_M() * (1 + 1e-12);
        t.coeffs = std::move(c);
        t.claimed_radius = 2 * zeta;
        return t;
    } else {
        fail("config-invalid", "unknown target family '" + cfg.target_family + "'");
    }
    return t;
}

}  // namespace flatsteer
