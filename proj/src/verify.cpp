#include "esf/verify.hpp"

#include <cmath>
#include <random>

namespace esf {

namespace {

long double dot_ld(const NodalField& a, const NodalField& b) {
    long double acc = 0.0L;
    for (Eigen::Index i = 0; i < a.size(); ++i)
        acc += static_cast<long double>(a[i]) * b[i];
    return acc;
}

}  // namespace

double weak_residual_planar(const Discretization& disc, const NodalField& u,
                            double lambda, double p, const NodalField& w) {
    if (disc.radial())
        throw std::invalid_argument("weak_residual_planar: discretization is radial");
    if (u.size() != disc.n_nodes() || w.size() != disc.n_nodes())
        throw std::invalid_argument("weak_residual_planar: field size mismatch");
    const NodalField f = disc.power_load(u, p - 1.0);
    return static_cast<double>(-static_cast<long double>(disc.k_form(w, u)) +
                               static_cast<long double>(lambda) * dot_ld(w, f));
}

double weak_residual_radial(const Discretization& disc, const NodalField& u,
                            double lambda, double p, const NodalField& w) {
    if (!disc.radial())
        throw std::invalid_argument("weak_residual_radial: discretization is planar");
    if (u.size() != disc.n_nodes() || w.size() != disc.n_nodes())
        throw std::invalid_argument("weak_residual_radial: field size mismatch");
    const NodalField f = disc.power_load(u, p - 1.0);
    return static_cast<double>(-static_cast<long double>(disc.k_form(w, u)) +
                               static_cast<long double>(lambda) * dot_ld(w, f));
}

double weak_residual(const Discretization& disc, const NodalField& u, double lambda,
                     double p, const NodalField& w) {
    return disc.radial() ? weak_residual_radial(disc, u, lambda, p, w)
                         : weak_residual_planar(disc, u, lambda, p, w);
}

double test_function_norm(const Discretization& disc, const NodalField& w) {
    return std::sqrt(disc.k_form(w, w) + disc.m_form(w, w));
}

NodalField random_test_function(const Discretization& disc, std::uint64_t seed) {
    std::mt19937_64 gen(seed);
    const auto& boundary = disc.boundary();
    std::vector<char> fixed(disc.n_nodes(), 0);
    for (int b : boundary) fixed[b] = 1;
    NodalField w = NodalField::Zero(disc.n_nodes());
    for (int i = 0; i < disc.n_nodes(); ++i) {
        if (fixed[i]) continue;
        // Top 53 bits -> [0,1); fixed construction avoids distribution
        // portability differences across standard libraries.
        const double x = static_cast<double>(gen() >> 11) * 0x1.0p-53;
        w[i] = 2.0 * x - 1.0;
    }
    return w;
}

ResidualReport residual_report(const Discretization& disc, const NodalField& u,
                               double lambda, double p, int count, std::uint64_t seed) {
    if (count < 1) throw std::invalid_argument("residual_report: count must be >= 1");
    ResidualReport report;
    report.count = count;
    report.seed = seed;
    const NodalField f = disc.power_load(u, p - 1.0);
    long double mean = 0.0L;
    for (int i = 0; i < count; ++i) {
        const NodalField w = random_test_function(disc, seed + static_cast<std::uint64_t>(i));
        const double wt = static_cast<double>(-static_cast<long double>(disc.k_form(w, u)) +
                                              static_cast<long double>(lambda) * dot_ld(w, f));
        const double normalized = std::abs(wt) / test_function_norm(disc, w);
        report.values.push_back(wt);
        report.normalized.push_back(normalized);
        report.max_abs = std::max(report.max_abs, normalized);
        mean += normalized;
    }
    report.mean_abs = static_cast<double>(mean / count);
    return report;
}

double rescale_lambda(double a, double p) {
    if (!(a > 0.0)) throw std::invalid_argument("rescale_lambda: a must be positive");
    return std::pow(a, 2.0 - p);
}

namespace {

__float128 sqrt_q(__float128 v) {
    if (v <= 0) return 0;
    __float128 s = sqrtl(static_cast<long double>(v));
    s = (s + v / s) / 2;
    s = (s + v / s) / 2;
    return s;
}

// pi split into two exact doubles keeps ~106 bits before the square root.
const __float128 kPi = static_cast<__float128>(3.141592653589793) +
                       static_cast<__float128>(1.2246467991473532e-16);
const __float128 kSqrtPi = sqrt_q(kPi);

bool order_is(double order, double target) { return std::abs(order - target) < 1e-12; }

}  // namespace

double bessel_j(double order, double x) {
    if (x < 0.0) throw std::invalid_argument("bessel_j: x must be >= 0");
    // Ascending series sum_k (-1)^k (x/2)^(2k+nu) / (k! Gamma(k+nu+1)) in
    // quad precision; alternating cancellation stays far below 1e-12 for
    // x <= 20.
    const __float128 half = static_cast<__float128>(x) / 2;
    __float128 gamma;  // Gamma(nu + 1)
    __float128 lead;   // (x/2)^nu
    if (order_is(order, 0.0)) {
        gamma = 1;
        lead = 1;
    } else if (order_is(order, 1.0)) {
        gamma = 1;
        lead = half;
    } else if (order_is(order, 0.5)) {
        gamma = kSqrtPi / 2;
        lead = sqrt_q(half);
    } else if (order_is(order, 1.5)) {
        gamma = 3 * kSqrtPi / 4;
        lead = half * sqrt_q(half);
    } else {
        throw std::invalid_argument("bessel_j: order must be one of 0, 1/2, 1, 3/2");
    }
    const __float128 nu = static_cast<__float128>(order);
    __float128 term = lead / gamma;
    __float128 sum = term;
    const __float128 x2 = half * half;
    for (int k = 1; k < 400; ++k) {
        term *= -x2 / (static_cast<__float128>(k) * (static_cast<__float128>(k) + nu));
        sum += term;
        const __float128 mag = term < 0 ? -term : term;
        if (k > 5 && mag < static_cast<__float128>(1e-40)) break;
    }
    return static_cast<double>(sum);
}

double bessel_j_first_zero(double order) {
    // All supported orders start positive away from 0 and cross before x=6.
    double a = 1e-3;
    double fa = bessel_j(order, a);
    double b = a;
    bool bracketed = false;
    for (int i = 1; i <= 400; ++i) {
        b = 1e-3 + 0.05 * i;
        const double fb = bessel_j(order, b);
        if (fa > 0.0 && fb <= 0.0) {
            bracketed = true;
            break;
        }
        a = b;
        fa = fb;
    }
    if (!bracketed) throw std::runtime_error("bessel_j_first_zero: no sign change found");
    for (int it = 0; it < 200; ++it) {
        const double mid = 0.5 * (a + b);
        if (bessel_j(order, mid) > 0.0)
            a = mid;
        else
            b = mid;
    }
    return 0.5 * (a + b);
}

std::function<double(double)> analytic_extremal_ball(int dim, int p) {
    if (dim < 2 || dim > 4)
        throw std::invalid_argument("analytic_extremal_ball: dim must be 2, 3 or 4");
    if (p == 1) {
        return [](double r) { return 1.0 - r * r; };
    }
    if (p == 2) {
        const double nu = (dim - 2) / 2.0;
        const double zero = bessel_j_first_zero(nu);
        // r^(-nu) J_nu(zero * r), normalized to 1 at r = 0, evaluated as the
        // series in (zero*r/2)^2 so the origin needs no special case.
        return [nu, zero](double r) {
            const double z = zero * r / 2.0;
            const double z2 = z * z;
            double term = 1.0;
            double sum = 1.0;
            for (int k = 1; k < 200; ++k) {
                term *= -z2 / (k * (k + nu));
                sum += term;
                if (k > 3 && std::abs(term) < 1e-17) break;
            }
            return sum;
        };
    }
    throw std::invalid_argument("analytic_extremal_ball: p must be 1 or 2");
}

std::function<double(double, double)> analytic_extremal_rect(double width, double height,
                                                             int p) {
    if (!(width > 0.0) || !(height > 0.0))
        throw std::invalid_argument("analytic_extremal_rect: sides must be positive");
    constexpr double pi = 3.14159265358979323846;
    if (p == 2) {
        return [width, height, pi](double x, double y) {
            return std::sin(pi * x / width) * std::sin(pi * y / height);
        };
    }
    if (p == 1) {
        // Torsion double sine series, odd modes up to 99, normalized by the
        // center value (the peak sits at the center by symmetry).
        auto raw = [width, height, pi](double x, double y) {
            long double acc = 0.0L;
            for (int m = 1; m <= 99; m += 2) {
                for (int n = 1; n <= 99; n += 2) {
                    const long double denom =
                        static_cast<long double>(m) * n *
                        ((m / width) * (m / width) + (n / height) * (n / height));
                    acc += 16.0L / (pi * pi * pi * pi * denom) *
                           std::sin(m * pi * x / width) * std::sin(n * pi * y / height);
                }
            }
            return static_cast<double>(acc);
        };
        const double center = raw(width / 2.0, height / 2.0);
        return [raw, center](double x, double y) { return raw(x, y) / center; };
    }
    throw std::invalid_argument("analytic_extremal_rect: p must be 1 or 2");
}

}  // namespace esf
