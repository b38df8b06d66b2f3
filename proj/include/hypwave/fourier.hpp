#pragma once

#include <cmath>
#include <complex>
#include <cstddef>
#include <numbers>
#include <stdexcept>
#include <vector>

namespace hypwave::fourier {

using cplx = std::complex<double>;

inline bool is_power_of_two(std::size_t n) { return n != 0 && (n & (n - 1)) == 0; }

inline std::size_t next_power_of_two(std::size_t n) {
    std::size_t p = 1;
    while (p < n) p <<= 1;
    return p;
}

/// In-place radix-2 FFT. `inverse` applies the conjugate transform and the 1/n factor.
inline void fft(std::vector<cplx>& a, bool inverse = false) {
    const std::size_t n = a.size();
    if (!is_power_of_two(n)) throw std::invalid_argument("fft: size must be a power of two");
    for (std::size_t i = 1, j = 0; i < n; ++i) {
        std::size_t bit = n >> 1;
        for (; j & bit; bit >>= 1) j ^= bit;
        j ^= bit;
        if (i < j) std::swap(a[i], a[j]);
    }
    for (std::size_t len = 2; len <= n; len <<= 1) {
        const double ang = 2.0 * std::numbers::pi / double(len) * (inverse ? 1.0 : -1.0);
        const cplx wl(std::cos(ang), std::sin(ang));
        for (std::size_t i = 0; i < n; i += len) {
            cplx w(1.0);
            for (std::size_t k = 0; k < len / 2; ++k) {
                cplx u = a[i + k];
                cplx v = a[i + k + len / 2] * w;
                a[i + k] = u + v;
                a[i + k + len / 2] = u - v;
                w *= wl;
            }
        }
    }
    if (inverse) {
        for (auto& x : a) x /= double(n);
    }
}

/// Trigonometric interpolant of a real periodic sample set.
///
/// Samples are taken at x_j = j*period/n, j = 0..n-1. Evaluation sums the
/// centered Fourier series; the Nyquist mode is folded into a cosine so the
/// interpolant is real.
class TrigInterp {
public:
    TrigInterp() = default;

    TrigInterp(const std::vector<double>& samples, double period) : period_(period) {
        const std::size_t n = samples.size();
        if (!is_power_of_two(n)) throw std::invalid_argument("TrigInterp: n must be a power of two");
        coef_.assign(samples.begin(), samples.end());
        fft(coef_, false);
        for (auto& c : coef_) c /= double(n);
    }

    double period() const { return period_; }
    std::size_t size() const { return coef_.size(); }
    const std::vector<cplx>& coefficients() const { return coef_; }

    /// Centered coefficient c_m for the mode e^{2*pi*i*m*x/period}, |m| <= n/2.
    cplx mode(long m) const {
        const long n = long(coef_.size());
        if (m <= -n / 2 || m > n / 2 - 1) {
            // Nyquist split: the sampled data cannot distinguish +-n/2.
            if (m == n / 2 || m == -n / 2) return 0.5 * coef_[std::size_t(n / 2)];
            return {0.0, 0.0};
        }
        return coef_[std::size_t((m % n + n) % n)];
    }

    double operator()(double x) const {
        const long n = long(coef_.size());
        const double w = 2.0 * std::numbers::pi * x / period_;
        cplx acc = coef_[0];
        for (long m = 1; m < n / 2; ++m) {
            const cplx e(std::cos(m * w), std::sin(m * w));
            acc += coef_[std::size_t(m)] * e + coef_[std::size_t(n - m)] * std::conj(e);
        }
        acc += coef_[std::size_t(n / 2)] * std::cos((n / 2) * w);
        return acc.real();
    }

    /// Values on the refined uniform grid x_j = j*period/m (m >= n, power of two),
    /// via zero-padded inverse FFT. Exact for the band-limited interpolant.
    std::vector<double> dense(std::size_t m) const {
        const std::size_t n = coef_.size();
        if (!is_power_of_two(m) || m < n) throw std::invalid_argument("TrigInterp::dense: bad size");
        if (m == n) {
            std::vector<cplx> a = coef_;
            fft(a, true);
            std::vector<double> out(n);
            for (std::size_t j = 0; j < n; ++j) out[j] = a[j].real() * double(n);
            return out;
        }
        std::vector<cplx> padded(m, cplx(0.0));
        for (std::size_t k = 0; k < n / 2; ++k) padded[k] = coef_[k];
        for (std::size_t k = 1; k < n / 2; ++k) padded[m - k] = coef_[n - k];
        padded[n / 2] = 0.5 * coef_[n / 2];
        padded[m - n / 2] = 0.5 * coef_[n / 2];
        fft(padded, true);
        std::vector<double> out(m);
        for (std::size_t j = 0; j < m; ++j) out[j] = padded[j].real() * double(m);
        return out;
    }

private:
    double period_ = 1.0;
    std::vector<cplx> coef_;
};

} // namespace hypwave::fourier
