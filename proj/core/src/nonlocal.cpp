#include "orowan/nonlocal.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <map>
#include <memory>
#include <mutex>
#include <numbers>
#include <stdexcept>

#include "fft.hpp"
#include "orowan/numerics.hpp"

namespace orowan {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kZeta2 = kPi * kPi / 6.0;

double field_scale(const ScalarField& f) {
    double m = 1.0;
    for (double v : f.values) m = std::max(m, std::abs(v));
    return m;
}

bool limits_match(const ScalarField& f) {
    return std::abs(f.left_limit - f.right_limit) <= 1e-12 * field_scale(f);
}

// ---------------------------------------------------------------------------
// tail machinery
// ---------------------------------------------------------------------------

struct TailInfo {
    bool has = false;
    double p = 0.0;
    double a_left = 0.0;   // f ~ limit + a/|x|^p at the left edge
    double a_right = 0.0;
};

TailInfo tail_info(const ScalarField& f) {
    TailInfo t;
    if (!f.tail_power) return t;
    t.p = *f.tail_power;
    const double xl = f.grid.x_min(), xr = f.grid.x_max();
    if (xl <= -1.0) t.a_left = (f.values.front() - f.left_limit) * std::pow(-xl, t.p);
    if (xr >= 1.0) t.a_right = (f.values.back() - f.right_limit) * std::pow(xr, t.p);
    t.has = t.a_left != 0.0 || t.a_right != 0.0;
    return t;
}

// int_Y^inf dy / (y^2 (y+c)^p) and int_Y^inf dy / (y (y+c)^p), closed forms for
// p = 1, 2, log-Simpson otherwise. Requires Y > 0, Y + c > 0.
template <class G>
double log_simpson_tail(G&& g, double Y) {
    const int m = 512;  // even
    const double S = 42.0;
    const double ds = S / m;
    auto val = [&](double s) {
        const double y = Y * std::exp(s);
        return g(y) * y;
    };
    double acc = val(0.0) + val(S);
    for (int i = 1; i < m; ++i) acc += val(i * ds) * (i % 2 ? 4.0 : 2.0);
    return acc * ds / 3.0;
}

double tail_int_D(double p, double c, double Y) {
    const double t = c / Y;
    if (p == 1.0) {
        if (std::abs(t) < 1e-4)
            return (1.0 / (2.0 * Y * Y)) * (1.0 - (2.0 / 3.0) * t + 0.5 * t * t);
        return 1.0 / (c * Y) - std::log1p(t) / (c * c);
    }
    if (p == 2.0) {
        if (std::abs(t) < 1e-4)
            return (1.0 / (3.0 * Y * Y * Y)) * (1.0 - 1.5 * t + (9.0 / 5.0) * t * t);
        return (1.0 / Y + 1.0 / (Y + c)) / (c * c) - 2.0 * std::log1p(t) / (c * c * c);
    }
    return log_simpson_tail([&](double y) { return 1.0 / (y * y * std::pow(y + c, p)); }, Y);
}

double tail_int_E(double p, double c, double Y) {
    const double t = c / Y;
    if (p == 1.0) {
        if (std::abs(t) < 1e-4) return (1.0 / Y) * (1.0 - 0.5 * t + t * t / 3.0);
        return std::log1p(t) / c;
    }
    if (p == 2.0) {
        if (std::abs(t) < 1e-4)
            return (1.0 / (2.0 * Y * Y)) * (1.0 - (4.0 / 3.0) * t + 1.5 * t * t);
        return std::log1p(t) / (c * c) - 1.0 / (c * (Y + c));
    }
    return log_simpson_tail([&](double y) { return 1.0 / (y * std::pow(y + c, p)); }, Y);
}

// Discrete beyond-grid tail sums. The quadrature replaces
// sum_{k>K} h * A/(|x_j -+ kh|^p (kh)^q) by its midpoint-rule integral, which is
// only valid once the integrand varies slowly on the grid scale; the first terms
// (up to a handoff distance of ~64h, relevant for near-edge rows) are summed
// exactly. c = +-x_j so the extension coordinate is y + c > 0.
double tail_sum_D(double a, double p, double c, long k_start, double h) {
    const long k_hand = std::max(k_start, 64L);
    double s = 0.0;
    for (long k = k_start; k < k_hand; ++k) {
        const double y = k * h;
        s += h * a / (std::pow(y + c, p) * y * y);
    }
    return s + a * tail_int_D(p, c, (k_hand - 0.5) * h);
}

double tail_sum_E(double a, double p, double c, long k_start, double h) {
    const long k_hand = std::max(k_start, 64L);
    double s = 0.0;
    for (long k = k_start; k < k_hand; ++k) {
        const double y = k * h;
        s += h * a / (std::pow(y + c, p) * y);
    }
    return s + a * tail_int_E(p, c, (k_hand - 0.5) * h);
}

// ---------------------------------------------------------------------------
// cached integer-kernel data
// ---------------------------------------------------------------------------

struct KernelCache {
    int n = 0;
    int fft_size = 0;
    std::vector<double> q;                          // q[m] = sum_{k>m} 1/k^2
    std::vector<std::complex<double>> sq_sym;       // FFT(1/k^2) + conj(...)
    std::vector<std::complex<double>> inv_asym;     // conj(FFT(1/k)) - FFT(1/k)
};

std::shared_ptr<const KernelCache> kernel_cache(int n) {
    static std::mutex mu;
    static std::map<int, std::shared_ptr<const KernelCache>> cache;
    std::lock_guard<std::mutex> lock(mu);
    auto it = cache.find(n);
    if (it != cache.end()) return it->second;

    auto kc = std::make_shared<KernelCache>();
    kc->n = n;
    kc->fft_size = detail::next_pow2(2 * n);

    kc->q.resize(n + 1);
    {
        const double x = n + 1.0;
        kc->q[n] = 1.0 / x + 1.0 / (2.0 * x * x) + 1.0 / (6.0 * x * x * x) -
                   1.0 / (30.0 * x * x * x * x * x);
        for (int m = n; m >= 1; --m) kc->q[m - 1] = kc->q[m] + 1.0 / (double(m) * double(m));
    }

    std::vector<std::complex<double>> b(kc->fft_size, 0.0);
    for (int k = 1; k < n; ++k) b[k] = 1.0 / (double(k) * double(k));
    detail::fft_forward(b);
    kc->sq_sym.resize(kc->fft_size);
    for (int i = 0; i < kc->fft_size; ++i) kc->sq_sym[i] = b[i] + std::conj(b[i]);

    std::fill(b.begin(), b.end(), std::complex<double>(0.0));
    for (int k = 1; k < n; ++k) b[k] = 1.0 / double(k);
    detail::fft_forward(b);
    kc->inv_asym.resize(kc->fft_size);
    for (int i = 0; i < kc->fft_size; ++i) kc->inv_asym[i] = std::conj(b[i]) - b[i];

    cache.emplace(n, kc);
    return kc;
}

// pair_sums[j] = sum_{k=1}^{n-1-j} f_{j+k} w_k + sum_{k=1}^{j} f_{j-k} w_k   (sign=+1)
//            or sum_{k=1}^{n-1-j} f_{j+k} w_k - sum_{k=1}^{j} f_{j-k} w_k   (sign=-1)
std::vector<double> pair_sums_fft(const std::vector<double>& f,
                                  const std::vector<std::complex<double>>& kernel, int fft_size) {
    const int n = static_cast<int>(f.size());
    std::vector<std::complex<double>> a(fft_size, 0.0);
    for (int i = 0; i < n; ++i) a[i] = f[i];
    detail::fft_forward(a);
    for (int i = 0; i < fft_size; ++i) a[i] *= kernel[i];
    detail::fft_inverse(a);
    std::vector<double> out(n);
    const double inv = 1.0 / fft_size;
    for (int j = 0; j < n; ++j) out[j] = a[j].real() * inv;
    return out;
}

std::vector<double> pair_sums_direct(const std::vector<double>& f, bool squared, double sign_left) {
    const int n = static_cast<int>(f.size());
    std::vector<double> w(n);
    for (int k = 1; k < n; ++k)
        w[k] = squared ? 1.0 / (double(k) * double(k)) : 1.0 / double(k);
    std::vector<double> out(n, 0.0);
    for (int j = 0; j < n; ++j) {
        double acc = 0.0;
        const int kr = n - 1 - j, kl = j;
        for (int k = 1; k <= kr; ++k) acc += f[j + k] * w[k];
        for (int k = 1; k <= kl; ++k) acc += sign_left * f[j - k] * w[k];
        out[j] = acc;
    }
    return out;
}

// ---------------------------------------------------------------------------
// I1, pv quadrature
// ---------------------------------------------------------------------------

ScalarField i1_pv_impl(const ScalarField& f, bool use_fft) {
    if (!f.has_limits())
        throw std::invalid_argument("i1_apply: far-field metadata missing on the pv path");
    const int n = f.size();
    const double h = f.grid.h();
    const double L = f.left_limit, R = f.right_limit;
    const TailInfo tail = tail_info(f);
    auto kc = kernel_cache(n);

    std::vector<double> pair;
    if (use_fft)
        pair = pair_sums_fft(f.values, kc->sq_sym, kc->fft_size);
    else
        pair = pair_sums_direct(f.values, /*squared=*/true, +1.0);

    const double ghost_l = field_extension(f, f.grid.x_min() - h);
    const double ghost_r = field_extension(f, f.grid.x_max() + h);

    std::vector<double> out(n);
    for (int j = 0; j < n; ++j) {
        const double fj = f.values[j];
        const double xj = f.x(j);
        const int kr = n - 1 - j, kl = j;
        const double up = (j + 1 < n) ? f.values[j + 1] : ghost_r;
        const double dn = (j - 1 >= 0) ? f.values[j - 1] : ghost_l;
        const double g0 = (up + dn - 2.0 * fj) / (h * h);

        double acc = 0.5 * h * g0;
        acc += (pair[j] + R * kc->q[kr] + L * kc->q[kl] - 2.0 * kZeta2 * fj) / h;
        if (tail.has) {
            if (tail.a_right != 0.0) acc += tail_sum_D(tail.a_right, tail.p, xj, kr + 1, h);
            if (tail.a_left != 0.0) acc += tail_sum_D(tail.a_left, tail.p, -xj, kl + 1, h);
        }
        out[j] = acc / kPi;
    }
    return make_field(f.grid, std::move(out), 0.0, 0.0);
}

// ---------------------------------------------------------------------------
// spectral paths
// ---------------------------------------------------------------------------

ScalarField apply_symbol(const ScalarField& f, double shift,
                         const std::function<std::complex<double>(double)>& symbol) {
    const int n = f.size();
    const double period = n * f.grid.h();
    std::vector<std::complex<double>> buf(n);
    for (int i = 0; i < n; ++i) buf[i] = f.values[i] - shift;
    detail::fft_forward(buf);
    for (int k = 0; k < n; ++k) {
        const int ks = (k <= n / 2) ? k : k - n;
        const bool nyquist = (n % 2 == 0) && (k == n / 2);
        const double xi = 2.0 * kPi * ks / period;
        buf[k] *= nyquist ? std::complex<double>(symbol(xi).real(), 0.0) : symbol(xi);
    }
    detail::fft_inverse(buf);
    std::vector<double> out(n);
    for (int i = 0; i < n; ++i) out[i] = buf[i].real() / n;
    return make_field(f.grid, std::move(out), 0.0, 0.0);
}

ScalarField i1_spectral(const ScalarField& f) {
    if (!f.has_limits()) throw std::invalid_argument("i1_apply: far-field metadata missing");
    if (!limits_match(f))
        throw std::invalid_argument(
            "i1_apply: spectral backend needs matching limits (periodic extension); "
            "use i1_apply_ramped_spectral for layered fields");
    return apply_symbol(f, f.left_limit,
                        [](double xi) { return std::complex<double>(-std::abs(xi), 0.0); });
}

}  // namespace

ScalarField i1_apply(const ScalarField& f, OperatorBackend backend) {
    return backend == OperatorBackend::Spectral ? i1_spectral(f) : i1_pv_impl(f, true);
}

ScalarField i1_apply_pv_direct(const ScalarField& f) { return i1_pv_impl(f, false); }

ScalarField i1_apply_ramped_spectral(const ScalarField& f) {
    if (!f.has_limits()) throw std::invalid_argument("i1_apply_ramped_spectral: limits missing");
    const int n = f.size();
    const Grid1D& g = f.grid;
    const double L = f.left_limit, R = f.right_limit;
    const double jump = R - L;
    const double a = g.half_width / 8.0;  // ramp width: well resolved, near-flat at the edges

    std::vector<double> res(n);
    for (int i = 0; i < n; ++i) {
        const double z = (g.x(i) - g.center) / a;
        res[i] = f.values[i] - (L + jump * (0.5 + std::atan(z) / kPi));
    }
    // taper the residual to zero over the outer 10% so its periodic extension has no jump
    const int margin = std::max(4, n / 10);
    for (int i = 0; i < margin; ++i) {
        const double t = double(i) / margin;
        const double w = t * t * (3.0 - 2.0 * t);
        res[i] *= w;
        res[n - 1 - i] *= w;
    }
    ScalarField residual = make_field(g, std::move(res), 0.0, 0.0);
    ScalarField out = apply_symbol(residual, 0.0, [](double xi) {
        return std::complex<double>(-std::abs(xi), 0.0);
    });
    for (int i = 0; i < n; ++i) {
        const double z = g.x(i) - g.center;
        out.values[i] += -jump * z / (kPi * (a * a + z * z));  // I1 of the arctan ramp
    }
    return out;
}

I1Split i1_split(const ScalarField& f, double x, double r) {
    const double h = f.grid.h();
    if (!(r > 0.0) || r < 2.0 * h)
        throw std::invalid_argument("i1_split: r below the grid resolution (need r >= 2h)");
    if (x < f.grid.x_min() || x > f.grid.x_max())
        throw std::invalid_argument("i1_split: x outside the grid");
    if (!f.has_limits()) throw std::invalid_argument("i1_split: far-field metadata missing");

    const double fx = field_value(f, x);
    const double g0 = (field_value(f, x + h) + field_value(f, x - h) - 2.0 * fx) / (h * h);
    auto G = [&](double y) {
        if (y <= 0.0) return g0;
        return (field_value(f, x + y) + field_value(f, x - y) - 2.0 * fx) / (y * y);
    };
    auto simpson = [&](double lo, double hi, int m) {
        double acc = G(lo) + G(hi);
        const double dy = (hi - lo) / m;
        for (int i = 1; i < m; ++i) acc += G(lo + i * dy) * (i % 2 ? 4.0 : 2.0);
        return acc * dy / 3.0;
    };
    auto even = [](int m) { return m + (m % 2); };

    I1Split s;
    s.short_range = simpson(0.0, r, even(std::max(64, 8 * int(std::ceil(r / h))))) / kPi;

    const double y_grid = std::max({r, x - f.grid.x_min(), f.grid.x_max() - x});
    double long_acc = 0.0;
    if (y_grid > r)
        long_acc = simpson(r, y_grid, even(std::max(128, 2 * int(std::ceil((y_grid - r) / h)))));
    long_acc += (f.left_limit + f.right_limit - 2.0 * fx) / y_grid;
    const TailInfo tail = tail_info(f);
    if (tail.has) {
        if (tail.a_right != 0.0) long_acc += tail.a_right * tail_int_D(tail.p, x, y_grid);
        if (tail.a_left != 0.0) long_acc += tail.a_left * tail_int_D(tail.p, -x, y_grid);
    }
    s.long_range = long_acc / kPi;
    return s;
}

// ---------------------------------------------------------------------------
// Hilbert transform
// ---------------------------------------------------------------------------

namespace {

ScalarField hilbert_pv(const ScalarField& f) {
    const int n = f.size();
    const double h = f.grid.h();
    const double c = f.left_limit;  // == right_limit
    const TailInfo tail = tail_info(f);
    auto kc = kernel_cache(n);

    std::vector<double> shifted(f.values);
    for (double& v : shifted) v -= c;
    std::vector<double> pair = pair_sums_fft(shifted, kc->inv_asym, kc->fft_size);

    const double ghost_l = field_extension(f, f.grid.x_min() - h) - c;
    const double ghost_r = field_extension(f, f.grid.x_max() + h) - c;

    std::vector<double> out(n);
    for (int j = 0; j < n; ++j) {
        const double xj = f.x(j);
        const int kr = n - 1 - j, kl = j;
        const double up = (j + 1 < n) ? shifted[j + 1] : ghost_r;
        const double dn = (j - 1 >= 0) ? shifted[j - 1] : ghost_l;
        double acc = 0.5 * (up - dn);  // (h/2) * S0
        acc += pair[j];
        if (tail.has) {
            if (tail.a_right != 0.0) acc += tail_sum_E(tail.a_right, tail.p, xj, kr + 1, h);
            if (tail.a_left != 0.0) acc -= tail_sum_E(tail.a_left, tail.p, -xj, kl + 1, h);
        }
        out[j] = acc / kPi;
    }
    return make_field(f.grid, std::move(out), 0.0, 0.0);
}

}  // namespace

ScalarField hilbert_apply(const ScalarField& f, OperatorBackend backend) {
    if (!f.has_limits()) throw std::invalid_argument("hilbert_apply: far-field metadata missing");
    if (!limits_match(f))
        throw std::invalid_argument("hilbert_apply: non-decaying input (limits differ), PV integral diverges");
    if (backend == OperatorBackend::Spectral) {
        return apply_symbol(f, f.left_limit, [](double xi) {
            const double s = (xi > 0.0) - (xi < 0.0);
            return std::complex<double>(0.0, s);
        });
    }
    return hilbert_pv(f);
}

ScalarField hilbert_apply(const ScalarField& f) {
    return hilbert_apply(f, OperatorBackend::Spectral);
}

ScalarField spectral_derivative(const ScalarField& f) {
    if (!f.has_limits()) throw std::invalid_argument("spectral_derivative: limits missing");
    return apply_symbol(f, f.left_limit,
                        [](double xi) { return std::complex<double>(0.0, xi); });
}

// ---------------------------------------------------------------------------
// particle-sum estimators
// ---------------------------------------------------------------------------

std::size_t nearest_particle_index(std::span<const double> xs, double xbar) {
    if (xs.empty()) throw std::invalid_argument("nearest_particle_index: empty particle system");
    auto it = std::lower_bound(xs.begin(), xs.end(), xbar);
    if (it == xs.begin()) return 0;
    if (it == xs.end()) return xs.size() - 1;
    const std::size_t hi = static_cast<std::size_t>(it - xs.begin());
    const std::size_t lo = hi - 1;
    // equidistant ties pick the left particle
    return (xbar - xs[lo] <= xs[hi] - xbar) ? lo : hi;
}

double particle_sum_full(std::span<const double> xs, double epsilon, double xbar) {
    if (!std::isfinite(xbar)) throw std::invalid_argument("particle_sum_full: xbar not finite");
    const std::size_t i0 = nearest_particle_index(xs, xbar);
    double acc = 0.0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        if (i == i0) continue;
        acc += 1.0 / (xs[i] - xbar);
    }
    return epsilon * acc / kPi;
}

double particle_sum_truncated(std::span<const double> xs, double epsilon, double xbar, double r) {
    if (!(r > 0.0)) throw std::invalid_argument("particle_sum_truncated: r must be positive");
    double acc = 0.0;
    for (double x : xs)
        if (std::abs(x - xbar) >= r) acc += 1.0 / (x - xbar);
    return epsilon * acc / kPi;
}

double short_window_sum(std::span<const double> xs, double epsilon, double xbar, double r) {
    if (xs.empty()) return 0.0;
    const std::size_t i0 = nearest_particle_index(xs, xbar);
    double acc = 0.0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        if (i == i0) continue;
        if (std::abs(xs[i] - xbar) < r) acc += 1.0 / (xs[i] - xbar);
    }
    return epsilon * acc / kPi;
}

}  // namespace orowan
