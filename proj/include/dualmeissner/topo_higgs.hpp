// Inflationary e-fold counting and the topologically suppressed Higgs mass.
//
// A compactification of cell volume `volume` with sound speed `cs` drives
// N = 3 volume / (2 cs) e-folds of expansion, and the light scalar comes out
// exponentially suppressed against the Planck mass,
//
//   M_H = m_P exp(-volume / (2 cs)) = m_P exp(-N / 3),
//
// so the same ratio volume/(2 cs) controls both numbers.  The mass of a mode
// tied to a length scale L runs like L^{-1/3}: doubling the mass costs a
// factor 8 in length.
//
// The quartic pinch that opens the suppressed minimum is the one-parameter
// family psi(rho) = q4 rho^4 + (q2 + t/2) rho^2; its critical points swap
// character where the effective quadratic coefficient crosses zero.
#ifndef DUALMEISSNER_TOPO_HIGGS_HPP
#define DUALMEISSNER_TOPO_HIGGS_HPP

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <vector>

namespace dm {

struct PhysicalConstants {
    // Planck mass in GeV; the hbar convention sqrt(hbar c / G) is the default,
    // the h convention is sqrt(2 pi) larger.
    double planck_mass_gev = 1.220890e19;

    static PhysicalConstants hbar_based() { return PhysicalConstants{1.220890e19}; }
    static PhysicalConstants h_based() {
        return PhysicalConstants{1.220890e19 * std::sqrt(2.0 * std::numbers::pi)};
    }
};

inline void check_inflation_inputs(double volume, double cs) {
    if (volume <= 0.0) throw std::invalid_argument("volume must be positive");
    if (cs <= 0.0) throw std::invalid_argument("sound speed must be positive");
}

/// Number of e-folds, N = 3 volume / (2 cs).
inline double efolds(double volume, double cs) {
    check_inflation_inputs(volume, cs);
    return 1.5 * volume / cs;
}

/// Expansion expressed in decades: log10(a_end / a_start) = N / ln 10.
inline double log10_scale(double n_efolds) { return n_efolds / std::numbers::ln10; }

/// Suppressed scalar mass M_H = m_P exp(-volume / (2 cs)).
inline double higgs_mass_gev(double volume, double cs,
                             const PhysicalConstants& pc = PhysicalConstants{}) {
    check_inflation_inputs(volume, cs);
    return pc.planck_mass_gev * std::exp(-0.5 * volume / cs);
}

/// Observational bound: at least 60 e-folds.
inline bool sufficient_inflation(double n_efolds) { return n_efolds >= 60.0; }

/// Cube-root mass-length trade: M(L) = M(L_ref) (L_ref / L)^{1/3}.
inline double mass_at_length(double mass_ref, double l_ref, double l) {
    if (mass_ref <= 0.0 || l_ref <= 0.0 || l <= 0.0)
        throw std::invalid_argument("mass_at_length: arguments must be positive");
    return mass_ref * std::cbrt(l_ref / l);
}

struct CriticalPoint {
    double rho = 0.0;
    double value = 0.0;
    bool is_minimum = false;
};

struct MorseAnalysis {
    double effective_q2 = 0.0;  // q2 + t/2
    bool degenerate = false;    // quartic pinch: the quadratic term vanishes
    std::vector<CriticalPoint> points;
};

/// Critical points of psi(rho) = q4 rho^4 + (q2 + t/2) rho^2 on rho >= 0.
inline MorseAnalysis morse_critical_points(double q4, double q2, double t) {
    if (q4 <= 0.0) throw std::invalid_argument("morse_critical_points: q4 must be positive");
    MorseAnalysis m;
    double q = q2 + 0.5 * t;
    m.effective_q2 = q;
    double scale = std::max({1.0, std::abs(q2), 0.5 * std::abs(t)});
    m.degenerate = std::abs(q) <= 1e-12 * scale;
    if (m.degenerate || q > 0.0) {
        // single critical point; for q = 0 the minimum is quartic-flat
        m.points.push_back(CriticalPoint{0.0, 0.0, true});
        return m;
    }
    m.points.push_back(CriticalPoint{0.0, 0.0, false});
    double rho = std::sqrt(-q / (2.0 * q4));
    m.points.push_back(CriticalPoint{rho, -q * q / (4.0 * q4), true});
    return m;
}

/// Double-well potential (lambda/4)(phi^2 - v^2)^2.
inline double higgs_potential(double phi, double lambda, double v) {
    double d = phi * phi - v * v;
    return 0.25 * lambda * d * d;
}

/// Curvature at the broken minimum: U''(v) = 2 lambda v^2.
inline double higgs_curvature(double lambda, double v) { return 2.0 * lambda * v * v; }

}  // namespace dm

#endif
