#pragma once

#include <vector>

namespace sblfem {

struct ValueAndDerivative {
    double value = 0.0;
    double derivative = 0.0;
};

/// P_0..P_n and their derivatives at xi.
struct LegendreTable {
    std::vector<double> values;
    std::vector<double> derivatives;
};

LegendreTable legendre_eval(int n, double xi);

/// Values and xi-derivatives of the p + 1 reference shape functions
///   N0 = (1 - xi)/2, N1 = (1 + xi)/2, psi_i = sqrt((2i-1)/2) int_{-1}^{xi} P_{i-1},  i = 2..p
/// in that order.
struct ShapeValues {
    std::vector<double> values;
    std::vector<double> derivatives;
};

ShapeValues shape_functions(int p, double xi);

/// Same as shape_functions but writes into caller storage of size p + 1.
void shape_functions(int p, double xi, double* values, double* derivatives);

struct QuadratureRule {
    std::vector<double> nodes;
    std::vector<double> weights;

    std::size_t size() const { return nodes.size(); }
};

inline constexpr int kMaxGaussPoints = 200;

/// n-point Gauss-Legendre rule on [-1, 1], exact up to degree 2n - 1.
QuadratureRule gauss_rule(int n);

/// Rule used for element assembly at degree p.
inline int assembly_points(int p) { return p + 4; }

}  // namespace sblfem
