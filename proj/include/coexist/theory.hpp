#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "coexist/map.hpp"
#include "coexist/orbit.hpp"
#include "coexist/stability.hpp"

namespace coexist {

/// Parameters are user-specified exact values, so "zero" means |v| <= this.
inline constexpr double kTheoryTol = 1e-12;

enum class Verdict { Pass, Fail, NotApplicable };
enum class SignCase { Preserving, Reversing, Neither };
enum class Parity { AllK, EvenK, OddK, None };
enum class Theorem { PreservingSufficient, ReversingSufficient, None };

std::string_view to_string(Verdict v);
std::string_view to_string(SignCase s);
std::string_view to_string(Parity p);
std::string_view to_string(Theorem t);

struct Condition {
    Verdict verdict = Verdict::NotApplicable;
    double value = 0.0;  ///< the quantity the verdict was decided on
};

struct TheoryReport {
    Condition d2_zero;           ///< tangency: d2 = 0
    Condition d5_nonzero;        ///< quadratic tangency: d5 != 0
    Condition det_one;           ///< |lambda sigma| = 1, value lambda*sigma
    Condition global_resonance;  ///< |d1| = y*/x*, value d1 x*/y*
    SignCase sign_case = SignCase::Neither;
    Condition a1_plus_b1;        ///< a1 + b1 = 0 (orientation-preserving case)
    Condition delta;             ///< Delta > 0, value Delta
    Condition ineq13;            ///< -1 < c2 y*/x* < 1 - sqrt(Delta)/2
    Parity parity = Parity::None;
    Theorem applicable = Theorem::None;
    bool hypotheses_pass = false;  ///< all hypotheses of `applicable` hold
    std::optional<AsymptoticPrediction> predicted;
};

/// Delta = (1 - c2 y*/x* - d4 y*/d1)^2 - 4 d5 (d3 x*^2 + c1 d1 x*).
/// Throws DivisionByZero when d1 = 0.
double compute_Delta(const MapParams& params);

/// Both strict inequalities of the stability condition. Throws
/// NegativeDiscriminant when Delta < 0.
bool check_ineq13(const MapParams& params);

TheoryReport full_report(const MapParams& params);

std::string format_report(const TheoryReport& report);
std::string report_json(const TheoryReport& report, int indent = 2);

struct GrowthDiagnostic {
    std::vector<int> k_values;
    std::vector<double> tau_values;
    /// exp of the least-squares slope of log|tau_k| against k.
    double fitted_ratio = 1.0;
    /// All tau_k vanish (within 1e-12): the ratio is reported as 1.
    bool degenerate = false;
};

/// tau_k of the minus-branch SR_k orbit for every k in range where it exists,
/// with a log-linear growth fit. Throws InsufficientData below 4 orbits.
GrowthDiagnostic tau_growth_experiment(const MapParams& params, int k_min, int k_max);

/// Size bounds along a single-round orbit near the saddle.
struct NearSaddleBounds {
    double y_min = 0.0;        ///< smallest |y| over the orbit
    double y_min_bound = 0.0;  ///< 2 y* |sigma|^(-k/2)
    bool y_min_ok = false;
    bool xy_profile_ok = false;  ///< |x_j| <= w|lambda|^j, |y_j| <= w|sigma|^(j-k), w = 2 max(x*, y*)
};

NearSaddleBounds near_saddle_bounds(const MapParams& params, const SRkOrbit& orbit);

}  // namespace coexist
