#pragma once

#include <string>
#include <vector>

#include "ddecay/types.hpp"

namespace dd {

enum class FitKind { exponential_window, power_law_tail, gamma_vs_r };
const char* to_string(FitKind k);

struct FitReport {
    FitKind kind = FitKind::exponential_window;
    double lo = 0.0, hi = 0.0;  // window [t1, t2] or [r1, r2]
    double slope = 0.0;         // exponential: d ln|theta|^2/dt; power law and gamma_vs_r: log-log slope
    double intercept = 0.0;
    double residual = 0.0;      // rms in the fitted log10 coordinates
    bool verdict = false;
    double threshold = 0.0;
    // exponential windows only: rms of the ripple-averaged curve and the fitted decay in e-folds
    double smooth_residual = 0.0;
    double efolds = 0.0;
    int points = 0;
};

struct LineFit {
    double slope = 0.0, intercept = 0.0, rms = 0.0;
};
LineFit least_squares(const std::vector<double>& x, const std::vector<double>& y);

// log10|theta|^2 against t on [t1, t2]; verdict: rms < threshold over at least 3 drive periods
FitReport fit_exponential(const std::vector<double>& t, const std::vector<double>& abs2, double t1, double t2,
                          double omega, double threshold = 0.05);

// log10|theta|^2 against log10 t on [t1, t2]
FitReport fit_power_law(const std::vector<double>& t, const std::vector<double>& abs2, double t1, double t2);

// log10 Gamma against log10 r
FitReport fit_gamma_vs_r(const std::vector<double>& r, const std::vector<double>& gamma);

// Search for an exponential window. A window qualifies when it
//   spans at least 3 drive periods and at least min_efolds of fitted decay of |theta|^2,
//   has rms < threshold in log10 (raw data), and
//   has rms < smooth_threshold after a one-period moving average (ripples removed).
// Uniformly sampled traces are averaged over one period; sparse or non-uniform ones are used as is.
// The returned report is the qualifying window with the smallest smoothed rms, or (verdict false)
// the best candidate found.
struct WindowRule {
    double threshold = 0.05;
    double smooth_threshold = 0.005;
    double min_periods = 3.0;
    double min_efolds = 1.0;
    int max_starts = 400;
};
FitReport exponential_window(const std::vector<double>& t, const std::vector<double>& abs2, double omega,
                             const WindowRule& rule = {});

// angular frequency of the largest spectral peak of y (uniform grid), mean and linear trend removed
struct SpectralPeak {
    double frequency = 0.0;
    double bin_width = 0.0;
    double power = 0.0;
};
SpectralPeak spectral_peak(const std::vector<double>& t, const std::vector<double>& y, double min_frequency = 0.0);

// max Pearson correlation between y on [t_start, t_start + W] and the same length shifted by k 2pi/omega,
// k = 1..max_lags; W = (t_end - t_start)/2
double quasiperiodicity(const std::vector<double>& t, const std::vector<double>& y, double omega, double t_start,
                        int max_lags = 20);

}  // namespace dd
