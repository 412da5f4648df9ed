#include "ddecay/analysis/fit.hpp"

#include <unsupported/Eigen/FFT>
#include <algorithm>
#include <cmath>
#include <limits>

#include "ddecay/errors.hpp"

namespace dd {

const char* to_string(FitKind k) {
    switch (k) {
        case FitKind::exponential_window: return "exponential_window";
        case FitKind::power_law_tail: return "power_law_tail";
        case FitKind::gamma_vs_r: return "gamma_vs_r";
    }
    return "?";
}

LineFit least_squares(const std::vector<double>& x, const std::vector<double>& y) {
    const std::size_t n = x.size();
    if (n < 2 || y.size() != n) throw DomainError("least squares needs two or more points");
    double mx = 0.0, my = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        mx += x[i];
        my += y[i];
    }
    mx /= n;
    my /= n;
    double sxx = 0.0, sxy = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        sxx += (x[i] - mx) * (x[i] - mx);
        sxy += (x[i] - mx) * (y[i] - my);
    }
    if (sxx == 0.0) throw DomainError("least squares: all abscissae equal");
    LineFit f;
    f.slope = sxy / sxx;
    f.intercept = my - f.slope * mx;
    double ss = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double d = y[i] - (f.intercept + f.slope * x[i]);
        ss += d * d;
    }
    f.rms = std::sqrt(ss / n);
    return f;
}

namespace {

void window_log10(const std::vector<double>& t, const std::vector<double>& v, double lo, double hi, bool logx,
                  std::vector<double>& x, std::vector<double>& y) {
    if (t.size() != v.size()) throw DomainError("abscissa and data lengths differ");
    if (t.empty() || lo < t.front() - 1e-12 * std::abs(t.front()) || hi > t.back() + 1e-12 * std::abs(t.back()) ||
        !(hi > lo))
        throw DomainError("fit window outside the data");
    for (std::size_t i = 0; i < t.size(); ++i) {
        if (t[i] < lo || t[i] > hi) continue;
        if (!(v[i] > 0.0)) throw DomainError("fit needs positive data in the window");
        x.push_back(logx ? std::log10(t[i]) : t[i]);
        y.push_back(std::log10(v[i]));
    }
    if (x.size() < 2) throw DomainError("fewer than two samples in the fit window");
}

}  // namespace

FitReport fit_exponential(const std::vector<double>& t, const std::vector<double>& abs2, double t1, double t2,
                          double omega, double threshold) {
    std::vector<double> x, y;
    window_log10(t, abs2, t1, t2, false, x, y);
    const LineFit f = least_squares(x, y);
    FitReport r;
    r.kind = FitKind::exponential_window;
    r.lo = t1;
    r.hi = t2;
    r.slope = f.slope * std::log(10.0);
    r.intercept = f.intercept;
    r.residual = f.rms;
    r.threshold = threshold;
    r.points = static_cast<int>(x.size());
    r.efolds = -r.slope * (t2 - t1);
    r.verdict = f.rms < threshold && (t2 - t1) >= 3.0 * 2.0 * PI / omega;
    return r;
}

FitReport fit_power_law(const std::vector<double>& t, const std::vector<double>& abs2, double t1, double t2) {
    if (!(t1 > 0.0)) throw DomainError("power-law window must start at t > 0");
    std::vector<double> x, y;
    window_log10(t, abs2, t1, t2, true, x, y);
    const LineFit f = least_squares(x, y);
    FitReport r;
    r.kind = FitKind::power_law_tail;
    r.lo = t1;
    r.hi = t2;
    r.slope = f.slope;
    r.intercept = f.intercept;
    r.residual = f.rms;
    r.points = static_cast<int>(x.size());
    r.verdict = true;
    return r;
}

FitReport fit_gamma_vs_r(const std::vector<double>& r, const std::vector<double>& gamma) {
    if (r.size() != gamma.size() || r.size() < 2) throw DomainError("gamma_vs_r needs matching r and Gamma lists");
    std::vector<double> x, y;
    for (std::size_t i = 0; i < r.size(); ++i) {
        if (!(r[i] > 0.0) || !(gamma[i] > 0.0)) throw DomainError("gamma_vs_r needs positive r and Gamma");
        x.push_back(std::log10(r[i]));
        y.push_back(std::log10(gamma[i]));
    }
    const LineFit f = least_squares(x, y);
    FitReport rep;
    rep.kind = FitKind::gamma_vs_r;
    rep.lo = *std::min_element(r.begin(), r.end());
    rep.hi = *std::max_element(r.begin(), r.end());
    rep.slope = f.slope;
    rep.intercept = f.intercept;
    rep.residual = f.rms;
    rep.points = static_cast<int>(x.size());
    rep.verdict = true;
    return rep;
}

FitReport exponential_window(const std::vector<double>& t, const std::vector<double>& abs2, double omega,
                             const WindowRule& rule) {
    if (t.size() != abs2.size() || t.size() < 5) throw DomainError("exponential window search needs >= 5 samples");
    const double P = 2.0 * PI / omega;
    std::vector<double> tt, y;
    for (std::size_t i = 0; i < t.size(); ++i) {
        if (abs2[i] > 0.0) {
            tt.push_back(t[i]);
            y.push_back(std::log10(abs2[i]));
        }
    }
    const std::size_t n = tt.size();
    if (n < 5) throw DomainError("exponential window search needs >= 5 positive samples");

    // ripple average over one period when the grid is uniform and fine
    std::vector<double> ts = tt, ys = y;
    const double dt = (tt.back() - tt.front()) / static_cast<double>(n - 1);
    bool uniform = dt <= P / 8.0;
    for (std::size_t i = 1; uniform && i < n; ++i)
        if (std::abs(tt[i] - tt[i - 1] - dt) > 1e-6 * dt) uniform = false;
    if (uniform) {
        const std::size_t k = static_cast<std::size_t>(std::llround(P / dt));
        if (k >= 2 && k < n) {
            ts.clear();
            ys.clear();
            double acc = 0.0;
            for (std::size_t i = 0; i < k; ++i) acc += y[i];
            for (std::size_t i = 0; i + k <= n; ++i) {
                ts.push_back(0.5 * (tt[i] + tt[i + k - 1]));
                ys.push_back(acc / static_cast<double>(k));
                if (i + k < n) acc += y[i + k] - y[i];
            }
        }
    }
    const std::size_t m = ts.size();
    const std::size_t stride = std::max<std::size_t>(1, m / static_cast<std::size_t>(std::max(1, rule.max_starts)));
    const double ln10 = std::log(10.0);

    FitReport best;
    best.kind = FitKind::exponential_window;
    best.threshold = rule.threshold;
    best.smooth_residual = std::numeric_limits<double>::infinity();
    bool found = false;
    for (std::size_t i = 0; i + 4 < m; i += stride) {
        // grow [i, j] with running sums until the window is long enough and decays enough
        double sx = 0, sy = 0, sxx = 0, sxy = 0, syy = 0;
        const double x0 = ts[i];
        for (std::size_t j = i; j < m; ++j) {
            const double x = ts[j] - x0, v = ys[j];
            sx += x;
            sy += v;
            sxx += x * x;
            sxy += x * v;
            syy += v * v;
            const double cnt = static_cast<double>(j - i + 1);
            const double span = ts[j] - ts[i];
            if (cnt < 5 || span < rule.min_periods * P) continue;
            const double vxx = sxx - sx * sx / cnt, vxy = sxy - sx * sy / cnt, vyy = syy - sy * sy / cnt;
            const double slope = vxy / vxx;
            const double efolds = -slope * ln10 * span;
            if (efolds < rule.min_efolds) continue;
            const double smooth_rms = std::sqrt(std::max(0.0, vyy - vxy * slope) / cnt);
            const double lo = ts[i], hi = ts[j];
            std::vector<double> xr, yr;
            for (std::size_t q = 0; q < n; ++q)
                if (tt[q] >= lo && tt[q] <= hi) {
                    xr.push_back(tt[q]);
                    yr.push_back(y[q]);
                }
            const LineFit raw = least_squares(xr, yr);
            const bool ok = raw.rms < rule.threshold && smooth_rms < rule.smooth_threshold;
            const bool better = (ok && !found) || ((ok == found) && smooth_rms < best.smooth_residual);
            if (better) {
                best.lo = lo;
                best.hi = hi;
                best.slope = raw.slope * ln10;
                best.intercept = raw.intercept;
                best.residual = raw.rms;
                best.smooth_residual = smooth_rms;
                best.efolds = efolds;
                best.points = static_cast<int>(xr.size());
                best.verdict = ok;
                found = found || ok;
            }
            break;
        }
    }
    if (!std::isfinite(best.smooth_residual)) {
        // nothing decays by min_efolds: report the whole-trace fit
        const LineFit f = least_squares(tt, y);
        best.lo = tt.front();
        best.hi = tt.back();
        best.slope = f.slope * ln10;
        best.intercept = f.intercept;
        best.residual = f.rms;
        best.smooth_residual = f.rms;
        best.efolds = -best.slope * (best.hi - best.lo);
        best.points = static_cast<int>(n);
        best.verdict = false;
    }
    return best;
}

SpectralPeak spectral_peak(const std::vector<double>& t, const std::vector<double>& y, double min_frequency) {
    const std::size_t n = t.size();
    if (n < 8 || y.size() != n) throw DomainError("spectral peak needs >= 8 uniform samples");
    const double dt = (t.back() - t.front()) / static_cast<double>(n - 1);
    const LineFit trend = least_squares(t, y);
    std::size_t nfft = 1;
    while (nfft < n) nfft <<= 1;
    std::vector<double> buf(nfft, 0.0);
    for (std::size_t i = 0; i < n; ++i) buf[i] = y[i] - (trend.intercept + trend.slope * t[i]);
    Eigen::FFT<double> fft;
    std::vector<std::complex<double>> spec;
    fft.fwd(spec, buf);
    SpectralPeak pk;
    pk.bin_width = 2.0 * PI / (static_cast<double>(nfft) * dt);
    for (std::size_t k = 1; k <= nfft / 2; ++k) {
        const double w = pk.bin_width * static_cast<double>(k);
        if (w < min_frequency) continue;
        const double p = std::norm(spec[k]);
        if (p > pk.power) {
            pk.power = p;
            pk.frequency = w;
        }
    }
    return pk;
}

double quasiperiodicity(const std::vector<double>& t, const std::vector<double>& y, double omega, double t_start,
                        int max_lags) {
    if (t.size() != y.size() || t.size() < 8) throw DomainError("quasiperiodicity needs a sampled trace");
    const double P = 2.0 * PI / omega;
    const double W = 0.5 * (t.back() - t_start);
    if (!(W > P)) throw DomainError("quasiperiodicity: the trace after t_start is shorter than two periods");
    auto interp = [&](double x) {
        auto it = std::lower_bound(t.begin(), t.end(), x);
        if (it == t.begin()) return y.front();
        if (it == t.end()) return y.back();
        const std::size_t j = static_cast<std::size_t>(it - t.begin());
        const double w = (x - t[j - 1]) / (t[j] - t[j - 1]);
        return (1.0 - w) * y[j - 1] + w * y[j];
    };
    const std::size_t samples = 2000;
    std::vector<double> a(samples), b(samples);
    for (std::size_t i = 0; i < samples; ++i) a[i] = interp(t_start + W * static_cast<double>(i) / (samples - 1));
    auto pearson = [&](const std::vector<double>& u, const std::vector<double>& v) {
        double mu = 0, mv = 0;
        for (std::size_t i = 0; i < samples; ++i) {
            mu += u[i];
            mv += v[i];
        }
        mu /= samples;
        mv /= samples;
        double suu = 0, svv = 0, suv = 0;
        for (std::size_t i = 0; i < samples; ++i) {
            suu += (u[i] - mu) * (u[i] - mu);
            svv += (v[i] - mv) * (v[i] - mv);
            suv += (u[i] - mu) * (v[i] - mv);
        }
        return suu > 0 && svv > 0 ? suv / std::sqrt(suu * svv) : 0.0;
    };
    double best = -1.0;
    const int lags = std::min(max_lags, static_cast<int>(std::floor(W / P)));
    for (int k = 1; k <= lags; ++k) {
        for (std::size_t i = 0; i < samples; ++i)
            b[i] = interp(t_start + k * P + W * static_cast<double>(i) / (samples - 1));
        best = std::max(best, pearson(a, b));
    }
    return best;
}

}  // namespace dd
