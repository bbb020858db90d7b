#include "sblfem/basis.hpp"

#include <cmath>
#include <numbers>
#include <string>

#include "sblfem/errors.hpp"

namespace sblfem {

LegendreTable legendre_eval(int n, double xi) {
    if (n < 0) throw DomainError("legendre_eval: negative degree");
    LegendreTable t;
    t.values.assign(static_cast<std::size_t>(n) + 1, 0.0);
    t.derivatives.assign(static_cast<std::size_t>(n) + 1, 0.0);
    t.values[0] = 1.0;
    if (n == 0) return t;
    t.values[1] = xi;
    t.derivatives[1] = 1.0;
    for (int k = 1; k < n; ++k) {
        t.values[k + 1] = ((2 * k + 1) * xi * t.values[k] - k * t.values[k - 1]) / (k + 1);
        // P'_{k+1} = P'_{k-1} + (2k+1) P_k, exact at xi = +-1
        t.derivatives[k + 1] = t.derivatives[k - 1] + (2 * k + 1) * t.values[k];
    }
    return t;
}

void shape_functions(int p, double xi, double* values, double* derivatives) {
    values[0] = 0.5 * (1.0 - xi);
    values[1] = 0.5 * (1.0 + xi);
    derivatives[0] = -0.5;
    derivatives[1] = 0.5;
    if (p < 2) return;

    // P_{k} by recurrence; psi_i = (P_i - P_{i-2}) / sqrt(2(2i-1)), psi_i' = sqrt((2i-1)/2) P_{i-1}
    double pm2 = 1.0;  // P_{i-2}
    double pm1 = xi;   // P_{i-1}
    for (int i = 2; i <= p; ++i) {
        const int k = i - 1;
        const double pi = ((2 * k + 1) * xi * pm1 - k * pm2) / (k + 1);
        values[i] = (pi - pm2) / std::sqrt(2.0 * (2 * i - 1));
        derivatives[i] = std::sqrt(0.5 * (2 * i - 1)) * pm1;
        pm2 = pm1;
        pm1 = pi;
    }
}

ShapeValues shape_functions(int p, double xi) {
    if (p < 1) throw DomainError("shape_functions: degree must be >= 1");
    ShapeValues s;
    s.values.resize(static_cast<std::size_t>(p) + 1);
    s.derivatives.resize(static_cast<std::size_t>(p) + 1);
    shape_functions(p, xi, s.values.data(), s.derivatives.data());
    return s;
}

QuadratureRule gauss_rule(int n) {
    if (n < 1 || n > kMaxGaussPoints) {
        throw DomainError("gauss_rule: point count must be in [1, " + std::to_string(kMaxGaussPoints) + "]");
    }
    QuadratureRule rule;
    rule.nodes.resize(n);
    rule.weights.resize(n);

    const int half = (n + 1) / 2;
    for (int i = 0; i < half; ++i) {
        double x = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
        double dp = 0.0;
        bool converged = false;
        for (int it = 0; it < 100; ++it) {
            double p0 = 1.0;
            double p1 = x;
            for (int k = 1; k < n; ++k) {
                const double p2 = ((2 * k + 1) * x * p1 - k * p0) / (k + 1);
                p0 = p1;
                p1 = p2;
            }
            // p1 = P_n(x), p0 = P_{n-1}(x)
            dp = n == 1 ? 1.0 : n * (x * p1 - p0) / (x * x - 1.0);
            const double dx = p1 / dp;
            x -= dx;
            if (std::abs(dx) <= 1e-15) {
                converged = true;
                break;
            }
        }
        if (!converged) throw SolverError("gauss_rule: Newton iteration did not converge for n = " + std::to_string(n));

        // Final derivative at the converged node.
        double p0 = 1.0;
        double p1 = x;
        for (int k = 1; k < n; ++k) {
            const double p2 = ((2 * k + 1) * x * p1 - k * p0) / (k + 1);
            p0 = p1;
            p1 = p2;
        }
        dp = n == 1 ? 1.0 : n * (x * p1 - p0) / (x * x - 1.0);
        const double w = 2.0 / ((1.0 - x * x) * dp * dp);

        rule.nodes[n - 1 - i] = x;
        rule.nodes[i] = -x;
        rule.weights[i] = w;
        rule.weights[n - 1 - i] = w;
    }
    if (n % 2 == 1) rule.nodes[n / 2] = 0.0;
    return rule;
}

}  // namespace sblfem
