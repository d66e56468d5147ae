#include "coexist/theory.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include <json.hpp>

#include "coexist/errors.hpp"

namespace coexist {

std::string_view to_string(Verdict v) {
    switch (v) {
        case Verdict::Pass: return "pass";
        case Verdict::Fail: return "FAIL";
        case Verdict::NotApplicable: return "n/a";
    }
    return "?";
}

std::string_view to_string(SignCase s) {
    switch (s) {
        case SignCase::Preserving: return "Preserving";
        case SignCase::Reversing: return "Reversing";
        case SignCase::Neither: return "Neither";
    }
    return "?";
}

std::string_view to_string(Parity p) {
    switch (p) {
        case Parity::AllK: return "AllK";
        case Parity::EvenK: return "EvenK";
        case Parity::OddK: return "OddK";
        case Parity::None: return "None";
    }
    return "?";
}

std::string_view to_string(Theorem t) {
    switch (t) {
        case Theorem::PreservingSufficient: return "orientation-preserving sufficient conditions";
        case Theorem::ReversingSufficient: return "orientation-reversing sufficient conditions";
        case Theorem::None: return "none";
    }
    return "?";
}

namespace {

bool is_zero(double v) { return std::abs(v) <= kTheoryTol; }

Verdict verdict_of(bool ok) { return ok ? Verdict::Pass : Verdict::Fail; }

}  // namespace

double compute_Delta(const MapParams& p) {
    if (p.d1 == 0.0) throw DivisionByZero("Delta requires d1 != 0");
    const double lead = 1.0 - p.c2 * p.y_star / p.x_star - p.d4 * p.y_star / p.d1;
    return lead * lead - 4.0 * p.d5 * (p.d3 * p.x_star * p.x_star + p.c1 * p.d1 * p.x_star);
}

bool check_ineq13(const MapParams& p) {
    const double delta = compute_Delta(p);
    if (delta < 0.0) throw NegativeDiscriminant(delta);
    const double ratio = p.c2 * p.y_star / p.x_star;
    return -1.0 < ratio && ratio < 1.0 - std::sqrt(delta) / 2.0;
}

TheoryReport full_report(const MapParams& p) {
    TheoryReport r;
    r.d2_zero = {verdict_of(is_zero(p.d2)), p.d2};
    r.d5_nonzero = {verdict_of(!is_zero(p.d5)), p.d5};

    const double ls = p.lambda * p.sigma;
    r.det_one = {verdict_of(is_zero(std::abs(ls) - 1.0)), ls};
    if (is_zero(ls - 1.0))
        r.sign_case = SignCase::Preserving;
    else if (is_zero(ls + 1.0))
        r.sign_case = SignCase::Reversing;

    const double xi = p.d1 * p.x_star / p.y_star;
    bool resonant = is_zero(std::abs(xi) - 1.0);
    if (r.sign_case == SignCase::Preserving) resonant = resonant && xi > 0.0;
    r.global_resonance = {verdict_of(resonant), xi};

    const double ab = p.a1 + p.b1;
    r.a1_plus_b1 = {r.sign_case == SignCase::Reversing ? Verdict::NotApplicable
                                                       : verdict_of(is_zero(ab)),
                    ab};

    try {
        const double delta = compute_Delta(p);
        r.delta = {verdict_of(delta > 0.0), delta};
        if (delta >= 0.0) {
            r.ineq13 = {verdict_of(check_ineq13(p)), p.c2 * p.y_star / p.x_star};
            r.predicted = predict_asymptotics(p);
        } else {
            r.ineq13 = {Verdict::NotApplicable, p.c2 * p.y_star / p.x_star};
        }
    } catch (const DivisionByZero&) {
        r.delta = {Verdict::Fail, 0.0};
        r.ineq13 = {Verdict::NotApplicable, p.c2 * p.y_star / p.x_star};
    }

    if (r.sign_case == SignCase::Preserving && is_zero(xi - 1.0))
        r.parity = Parity::AllK;
    else if (r.sign_case == SignCase::Reversing && is_zero(xi - 1.0))
        r.parity = Parity::EvenK;
    else if (r.sign_case == SignCase::Reversing && is_zero(xi + 1.0))
        r.parity = Parity::OddK;

    const auto ok = [](const Condition& c) { return c.verdict == Verdict::Pass; };
    const bool common = ok(r.d2_zero) && ok(r.d5_nonzero) && ok(r.det_one) &&
                        ok(r.global_resonance) && ok(r.delta) && ok(r.ineq13);
    switch (r.sign_case) {
        case SignCase::Preserving:
            r.applicable = Theorem::PreservingSufficient;
            r.hypotheses_pass = common && ok(r.a1_plus_b1);
            break;
        case SignCase::Reversing:
            r.applicable = Theorem::ReversingSufficient;
            r.hypotheses_pass = common;
            break;
        case SignCase::Neither:
            r.applicable = Theorem::None;
            r.hypotheses_pass = false;
            break;
    }
    return r;
}

std::string format_report(const TheoryReport& r) {
    std::ostringstream os;
    os.precision(12);
    const auto line = [&os](std::string_view name, const Condition& c) {
        os << "  " << name;
        for (std::size_t i = name.size(); i < 20; ++i) os << ' ';
        os << to_string(c.verdict) << "  (" << c.value << ")\n";
    };
    os << "theory report\n";
    line("tangency d2 = 0", r.d2_zero);
    line("d5 != 0", r.d5_nonzero);
    line("|lambda sigma| = 1", r.det_one);
    line("|d1| x*/y* = 1", r.global_resonance);
    line("a1 + b1 = 0", r.a1_plus_b1);
    line("Delta > 0", r.delta);
    line("stability ineq.", r.ineq13);
    os << "  sign case           " << to_string(r.sign_case) << '\n';
    os << "  parity              " << to_string(r.parity) << '\n';
    os << "  applicable theorem  " << to_string(r.applicable) << '\n';
    os << "  hypotheses          " << (r.hypotheses_pass ? "all pass" : "NOT satisfied") << '\n';
    if (r.predicted) {
        os << "  tau_inf (-, +)      " << r.predicted->tau_inf_minus << ", "
           << r.predicted->tau_inf_plus << '\n';
        os << "  delta_inf           " << r.predicted->delta_inf << '\n';
    }
    return os.str();
}

std::string report_json(const TheoryReport& r, int indent) {
    using nlohmann::ordered_json;
    const auto cond = [](const Condition& c) {
        return ordered_json{{"verdict", to_string(c.verdict)}, {"value", c.value}};
    };
    ordered_json j;
    j["d2_zero"] = cond(r.d2_zero);
    j["d5_nonzero"] = cond(r.d5_nonzero);
    j["det_one"] = cond(r.det_one);
    j["global_resonance"] = cond(r.global_resonance);
    j["sign_case"] = to_string(r.sign_case);
    j["a1_plus_b1"] = cond(r.a1_plus_b1);
    j["Delta"] = cond(r.delta);
    j["ineq13"] = cond(r.ineq13);
    j["parity"] = to_string(r.parity);
    j["applicable_theorem"] = to_string(r.applicable);
    j["hypotheses_pass"] = r.hypotheses_pass;
    if (r.predicted) {
        j["predicted"] = {{"tau_inf_minus", r.predicted->tau_inf_minus},
                          {"tau_inf_plus", r.predicted->tau_inf_plus},
                          {"delta_inf", r.predicted->delta_inf}};
    } else {
        j["predicted"] = nullptr;
    }
    return j.dump(indent);
}

GrowthDiagnostic tau_growth_experiment(const MapParams& params, int k_min, int k_max) {
    GrowthDiagnostic out;
    for (int k = k_min; k <= k_max; ++k) {
        const RootPair roots = srk_quadratic(params, k);
        if (!roots.u_minus) continue;
        try {
            const SRkOrbit orbit = assemble_orbit(params, k, *roots.u_minus, Branch::Minus);
            out.k_values.push_back(k);
            out.tau_values.push_back(orbit.trace);
        } catch (const Error&) {
        }
    }

    // Orientation-reversing maps alternate sign with k: fit one parity only.
    if (std::abs(params.lambda * params.sigma + 1.0) <= kTheoryTol) {
        std::size_t even = 0;
        for (int k : out.k_values) even += (k % 2 == 0);
        const int keep = 2 * even >= out.k_values.size() ? 0 : 1;
        GrowthDiagnostic same;
        for (std::size_t i = 0; i < out.k_values.size(); ++i) {
            if (out.k_values[i] % 2 != keep) continue;
            same.k_values.push_back(out.k_values[i]);
            same.tau_values.push_back(out.tau_values[i]);
        }
        out = std::move(same);
    }

    if (out.k_values.size() < 4) throw InsufficientData(out.k_values.size());

    std::vector<double> ks, logs;
    for (std::size_t i = 0; i < out.k_values.size(); ++i) {
        const double t = std::abs(out.tau_values[i]);
        if (t <= 1e-12) continue;
        ks.push_back(out.k_values[i]);
        logs.push_back(std::log(t));
    }
    if (ks.size() < 2) {
        out.degenerate = true;
        out.fitted_ratio = 1.0;
        return out;
    }
    const double n = static_cast<double>(ks.size());
    double mk = 0.0, ml = 0.0;
    for (std::size_t i = 0; i < ks.size(); ++i) {
        mk += ks[i];
        ml += logs[i];
    }
    mk /= n;
    ml /= n;
    double sxy = 0.0, sxx = 0.0;
    for (std::size_t i = 0; i < ks.size(); ++i) {
        sxy += (ks[i] - mk) * (logs[i] - ml);
        sxx += (ks[i] - mk) * (ks[i] - mk);
    }
    out.fitted_ratio = std::exp(sxy / sxx);
    return out;
}

NearSaddleBounds near_saddle_bounds(const MapParams& params, const SRkOrbit& orbit) {
    NearSaddleBounds b;
    const double sig = std::abs(params.sigma);
    const double lam = std::abs(params.lambda);
    const int k = orbit.k;
    b.y_min = std::abs(orbit.points.front().y);
    for (const Point2& p : orbit.points) b.y_min = std::min(b.y_min, std::abs(p.y));
    b.y_min_bound = 2.0 * params.y_star * std::pow(sig, -0.5 * k);
    b.y_min_ok = b.y_min <= b.y_min_bound;

    const double omega = 2.0 * std::max(params.x_star, params.y_star);
    b.xy_profile_ok = true;
    const std::size_t n = orbit.points.size();
    for (int j = 0; j <= k; ++j) {
        // points[0] is the excursion point (x_k, y_k); points[j + 1] is (x_j, y_j)
        const Point2 pj = orbit.points[static_cast<std::size_t>(j + 1) % n];
        if (std::abs(pj.x) > omega * std::pow(lam, j)) b.xy_profile_ok = false;
        if (std::abs(pj.y) > omega * std::pow(sig, j - k)) b.xy_profile_ok = false;
    }
    return b;
}

}  // namespace coexist
