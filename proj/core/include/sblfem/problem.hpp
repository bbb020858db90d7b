#pragma once

#include <functional>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace sblfem {

/// A scalar function on [0, 1] together with its first derivative.
class Coefficient {
public:
    using Function = std::function<double(double)>;

    static Coefficient constant(double value);
    static Coefficient function(Function value, Function derivative);

    double value(double x) const { return value_(x); }
    double derivative(double x) const { return derivative_(x); }

    bool is_constant() const { return constant_.has_value(); }
    std::optional<double> constant_value() const { return constant_; }

private:
    Coefficient(Function value, Function derivative, std::optional<double> constant);

    Function value_;
    Function derivative_;
    std::optional<double> constant_;
};

/// -eps1 u'' + eps2 b u' + c u = f on (0, 1) with u(0) = u(1) = 0.
class ProblemSpec {
public:
    /// Throws AssumptionViolation unless 0 < eps1 <= eps2 <= 1.
    ProblemSpec(std::string name, double eps1, double eps2, Coefficient b, Coefficient c, Coefficient f);

    const std::string& name() const { return name_; }
    double eps1() const { return eps1_; }
    double eps2() const { return eps2_; }
    const Coefficient& b() const { return b_; }
    const Coefficient& c() const { return c_; }
    const Coefficient& f() const { return f_; }

private:
    std::string name_;
    double eps1_;
    double eps2_;
    Coefficient b_;
    Coefficient c_;
    Coefficient f_;
};

/// Throws AssumptionViolation unless 0 < eps1 <= eps2 <= 1.
void check_parameters(double eps1, double eps2);

/// Sampled lower bounds of the data; `violations` lists every failed inequality.
struct DataConstants {
    double beta = 0.0;
    double gamma = 0.0;
    double rho = 0.0;
    double beta_at = 0.0;
    double gamma_at = 0.0;
    double rho_at = 0.0;
    int sample_count = 0;
    std::vector<std::string> violations;

    bool accepted() const { return violations.empty(); }
};

enum class Enforcement {
    Strict,    ///< violations throw AssumptionViolation
    Advisory,  ///< violations are reported in DataConstants::violations
};

DataConstants validate_assumptions(const ProblemSpec& problem, int sample_count,
                                   Enforcement enforcement = Enforcement::Strict);

/// Classification by r = eps1 / eps2^2. The eps2 = 1 convection-diffusion
/// row is the r -> 0 end of ConvectionReactionDiffusion.
enum class Regime {
    ConvectionReactionDiffusion,  ///< r < 0.1
    Comparable,                   ///< 0.1 <= r <= 10, eps1 ~ eps2^2
    ReactionDiffusion,            ///< r > 10
};

std::string_view to_string(Regime regime);
std::optional<Regime> regime_from_string(std::string_view text);

struct RegimeTag {
    Regime regime;
    double ratio;
};

RegimeTag classify_regime(double eps1, double eps2);

struct LayerParameters {
    double mu0 = 0.0;  ///< -max_x lambda0(x); zero when c vanishes somewhere
    double mu1 = 0.0;  ///< min_x lambda1(x)
    double mu0_at = 0.0;
    double mu1_at = 0.0;
    RegimeTag regime{Regime::Comparable, 1.0};
};

inline constexpr int kDefaultSampleCount = 1024;

LayerParameters compute_layer_parameters(const ProblemSpec& problem,
                                         int sample_count = kDefaultSampleCount);

/// Characteristic roots of -eps1 l^2 + eps2 b l + c = 0 at one point, lambda0 < 0 < lambda1.
struct CharacteristicRoots {
    double lambda0;
    double lambda1;
};

/// lambda0 uses the rationalized form -2c / (eps2 b + sqrt(disc)).
CharacteristicRoots characteristic_roots(double eps1, double eps2, double b, double c);

/// Exact solution for constant b, c, f:
///   u(x) = f/c + A e^{lambda0 x} + B e^{lambda1 (x - 1)}
/// Every exponential has a non-positive argument on [0, 1].
class ClosedFormSolution {
public:
    explicit ClosedFormSolution(const ProblemSpec& problem);

    double value(double x) const;
    double derivative(double x) const;
    double second_derivative(double x) const;

    double lambda0() const { return lambda0_; }
    double lambda1() const { return lambda1_; }
    double a() const { return a_; }
    double b_shift() const { return b_shift_; }
    double particular() const { return particular_; }

private:
    double lambda0_;
    double lambda1_;
    double a_;
    double b_shift_;
    double particular_;
};

ClosedFormSolution constant_coefficient_exact(const ProblemSpec& problem);

/// Built-in problems: "example1" (b = c = f = 1) and "example2" (b = e^x, c = x, f = 1).
ProblemSpec make_registry_problem(std::string_view name, double eps1, double eps2);
std::vector<std::string> registry_names();
bool has_closed_form(const ProblemSpec& problem);

}  // namespace sblfem
