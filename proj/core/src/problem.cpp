#include "sblfem/problem.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <utility>

#include "sblfem/errors.hpp"

namespace sblfem {

namespace {

std::string format_double(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.6g", v);
    return buf;
}

double sample_point(int i, int n) {
    if (i == n - 1) return 1.0;
    return static_cast<double>(i) / static_cast<double>(n - 1);
}

double checked(double v, const char* what, double x) {
    if (!std::isfinite(v)) {
        throw DataError(std::string("non-finite value of ") + what + " at x = " + format_double(x));
    }
    return v;
}

// Minimum of g over [0, 1]: uniform sampling, then golden-section search on
// the bracket around the best sample.
struct Minimum {
    double value;
    double at;
};

template <class F>
Minimum minimize_on_unit_interval(F&& g, int sample_count) {
    int best = 0;
    double best_value = g(0.0);
    for (int i = 1; i < sample_count; ++i) {
        const double v = g(sample_point(i, sample_count));
        if (v < best_value) {
            best_value = v;
            best = i;
        }
    }
    double lo = sample_point(std::max(best - 1, 0), sample_count);
    double hi = sample_point(std::min(best + 1, sample_count - 1), sample_count);
    Minimum result{best_value, sample_point(best, sample_count)};

    const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
    double x1 = hi - inv_phi * (hi - lo);
    double x2 = lo + inv_phi * (hi - lo);
    double g1 = g(x1);
    double g2 = g(x2);
    for (int it = 0; it < 200 && (hi - lo) > 1e-10 * std::max(1.0, std::abs(lo) + std::abs(hi)); ++it) {
        if (g1 < g2) {
            hi = x2;
            x2 = x1;
            g2 = g1;
            x1 = hi - inv_phi * (hi - lo);
            g1 = g(x1);
        } else {
            lo = x1;
            x1 = x2;
            g1 = g2;
            x2 = lo + inv_phi * (hi - lo);
            g2 = g(x2);
        }
    }
    for (double x : {lo, hi, x1, x2}) {
        const double v = g(x);
        if (v < result.value) result = {v, x};
    }
    return result;
}

}  // namespace

Coefficient::Coefficient(Function value, Function derivative, std::optional<double> constant)
    : value_(std::move(value)), derivative_(std::move(derivative)), constant_(constant) {}

Coefficient Coefficient::constant(double value) {
    return Coefficient([value](double) { return value; }, [](double) { return 0.0; }, value);
}

Coefficient Coefficient::function(Function value, Function derivative) {
    return Coefficient(std::move(value), std::move(derivative), std::nullopt);
}

void check_parameters(double eps1, double eps2) {
    if (!(eps1 > 0.0 && eps1 <= 1.0)) {
        throw AssumptionViolation("eps1 must satisfy 0 < eps1 <= 1, got " + format_double(eps1));
    }
    if (!(eps2 > 0.0 && eps2 <= 1.0)) {
        throw AssumptionViolation("eps2 must satisfy 0 < eps2 <= 1, got " + format_double(eps2));
    }
    if (eps1 > eps2) {
        throw AssumptionViolation("eps1 <= eps2 required, got eps1 = " + format_double(eps1) +
                                  ", eps2 = " + format_double(eps2));
    }
}

ProblemSpec::ProblemSpec(std::string name, double eps1, double eps2, Coefficient b, Coefficient c,
                         Coefficient f)
    : name_(std::move(name)), eps1_(eps1), eps2_(eps2), b_(std::move(b)), c_(std::move(c)), f_(std::move(f)) {
    check_parameters(eps1_, eps2_);
}

DataConstants validate_assumptions(const ProblemSpec& problem, int sample_count, Enforcement enforcement) {
    if (sample_count < 2) throw AssumptionViolation("validate_assumptions: sample_count must be >= 2");

    DataConstants out;
    out.sample_count = sample_count;
    out.beta = out.gamma = out.rho = std::numeric_limits<double>::infinity();
    for (int i = 0; i < sample_count; ++i) {
        const double x = sample_point(i, sample_count);
        const double b = checked(problem.b().value(x), "b", x);
        const double db = checked(problem.b().derivative(x), "b'", x);
        const double c = checked(problem.c().value(x), "c", x);
        checked(problem.f().value(x), "f", x);
        const double r = c - 0.5 * problem.eps2() * db;
        if (b < out.beta) out.beta = b, out.beta_at = x;
        if (c < out.gamma) out.gamma = c, out.gamma_at = x;
        if (r < out.rho) out.rho = r, out.rho_at = x;
    }

    auto require = [&](double v, double at, const char* inequality) {
        if (v > 0.0) return;
        out.violations.push_back(std::string(inequality) + " violated: infimum " + format_double(v) +
                                 " at x = " + format_double(at));
    };
    require(out.beta, out.beta_at, "b(x) >= beta > 0");
    require(out.gamma, out.gamma_at, "c(x) >= gamma > 0");
    require(out.rho, out.rho_at, "c(x) - (eps2/2) b'(x) >= rho > 0");

    if (enforcement == Enforcement::Strict && !out.violations.empty()) {
        std::string msg = "problem '" + problem.name() + "': " + out.violations.front();
        for (std::size_t i = 1; i < out.violations.size(); ++i) msg += "; " + out.violations[i];
        throw AssumptionViolation(msg);
    }
    return out;
}

std::string_view to_string(Regime regime) {
    switch (regime) {
        case Regime::ConvectionReactionDiffusion: return "convection-reaction-diffusion";
        case Regime::Comparable: return "comparable";
        case Regime::ReactionDiffusion: return "reaction-diffusion";
    }
    return "unknown";
}

std::optional<Regime> regime_from_string(std::string_view text) {
    for (Regime r : {Regime::ConvectionReactionDiffusion, Regime::Comparable, Regime::ReactionDiffusion}) {
        if (to_string(r) == text) return r;
    }
    return std::nullopt;
}

RegimeTag classify_regime(double eps1, double eps2) {
    check_parameters(eps1, eps2);
    const double ratio = eps1 / (eps2 * eps2);
    // Band edges are closed; the relative slack keeps ratios such as
    // 1e-9 / (1e-4)^2 on the edge despite rounding in eps2^2.
    constexpr double slack = 1e-12;
    if (ratio < 0.1 * (1.0 - slack)) return {Regime::ConvectionReactionDiffusion, ratio};
    if (ratio > 10.0 * (1.0 + slack)) return {Regime::ReactionDiffusion, ratio};
    return {Regime::Comparable, ratio};
}

CharacteristicRoots characteristic_roots(double eps1, double eps2, double b, double c) {
    const double convection = eps2 * b;
    const double disc = convection * convection + 4.0 * eps1 * c;
    if (!(disc > 0.0) || !std::isfinite(disc)) {
        throw DataError("characteristic discriminant eps2^2 b^2 + 4 eps1 c is not positive (" +
                        format_double(disc) + ")");
    }
    const double root = convection + std::sqrt(disc);
    return {-2.0 * c / root, root / (2.0 * eps1)};
}

LayerParameters compute_layer_parameters(const ProblemSpec& problem, int sample_count) {
    if (sample_count < 2) throw AssumptionViolation("compute_layer_parameters: sample_count must be >= 2");
    const double e1 = problem.eps1();
    const double e2 = problem.eps2();

    auto roots_at = [&](double x) {
        const double b = checked(problem.b().value(x), "b", x);
        const double c = checked(problem.c().value(x), "c", x);
        return characteristic_roots(e1, e2, b, c);
    };
    const Minimum m0 = minimize_on_unit_interval([&](double x) { return -roots_at(x).lambda0; }, sample_count);
    const Minimum m1 = minimize_on_unit_interval([&](double x) { return roots_at(x).lambda1; }, sample_count);

    if (!(m0.value >= 0.0) || !std::isfinite(m0.value) || !(m1.value > 0.0) || !std::isfinite(m1.value)) {
        throw DataError("layer parameters out of range: mu0 = " + format_double(m0.value) +
                        ", mu1 = " + format_double(m1.value));
    }

    LayerParameters out;
    out.mu0 = m0.value;
    out.mu1 = m1.value;
    out.mu0_at = m0.at;
    out.mu1_at = m1.at;
    out.regime = classify_regime(e1, e2);
    return out;
}

ClosedFormSolution::ClosedFormSolution(const ProblemSpec& problem) {
    const auto b = problem.b().constant_value();
    const auto c = problem.c().constant_value();
    const auto f = problem.f().constant_value();
    if (!b || !c || !f) {
        throw DataError("closed-form solution requires constant b, c, f (problem '" + problem.name() + "')");
    }
    if (*c == 0.0) throw DataError("closed-form solution requires c != 0");

    const CharacteristicRoots roots = characteristic_roots(problem.eps1(), problem.eps2(), *b, *c);
    lambda0_ = roots.lambda0;
    lambda1_ = roots.lambda1;
    particular_ = *f / *c;

    // u(0) = 0:  P + A + B e^{-lambda1} = 0
    // u(1) = 0:  P + A e^{lambda0} + B = 0
    const double s = std::exp(-lambda1_);
    const double t = std::exp(lambda0_);
    const double det = 1.0 - s * t;
    if (det == 0.0) throw SolverError("closed-form boundary system is singular");
    a_ = -particular_ * (1.0 - s) / det;
    b_shift_ = -particular_ * (1.0 - t) / det;
}

double ClosedFormSolution::value(double x) const {
    return particular_ + a_ * std::exp(lambda0_ * x) + b_shift_ * std::exp(lambda1_ * (x - 1.0));
}

double ClosedFormSolution::derivative(double x) const {
    return a_ * lambda0_ * std::exp(lambda0_ * x) + b_shift_ * lambda1_ * std::exp(lambda1_ * (x - 1.0));
}

double ClosedFormSolution::second_derivative(double x) const {
    return a_ * lambda0_ * lambda0_ * std::exp(lambda0_ * x) +
           b_shift_ * lambda1_ * lambda1_ * std::exp(lambda1_ * (x - 1.0));
}

ClosedFormSolution constant_coefficient_exact(const ProblemSpec& problem) { return ClosedFormSolution(problem); }

ProblemSpec make_registry_problem(std::string_view name, double eps1, double eps2) {
    if (name == "example1") {
        return ProblemSpec("example1", eps1, eps2, Coefficient::constant(1.0), Coefficient::constant(1.0),
                           Coefficient::constant(1.0));
    }
    if (name == "example2") {
        auto exp_fn = [](double x) { return std::exp(x); };
        return ProblemSpec("example2", eps1, eps2, Coefficient::function(exp_fn, exp_fn),
                           Coefficient::function([](double x) { return x; }, [](double) { return 1.0; }),
                           Coefficient::constant(1.0));
    }
    throw ConfigError("unknown problem '" + std::string(name) + "' (expected example1 or example2)");
}

std::vector<std::string> registry_names() { return {"example1", "example2"}; }

bool has_closed_form(const ProblemSpec& problem) {
    return problem.b().is_constant() && problem.c().is_constant() && problem.f().is_constant() &&
           problem.c().constant_value().value_or(0.0) != 0.0;
}

}  // namespace sblfem
