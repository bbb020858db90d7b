#include "oracles.hpp"

#include <cmath>

namespace sblfem::oracle {

Rule golub_welsch(int n) {
    Eigen::MatrixXd jacobi = Eigen::MatrixXd::Zero(n, n);
    for (int k = 1; k < n; ++k) {
        const double beta = k / std::sqrt(4.0 * k * k - 1.0);
        jacobi(k, k - 1) = beta;
        jacobi(k - 1, k) = beta;
    }
    const Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(jacobi);
    Rule rule;
    for (int i = 0; i < n; ++i) {
        rule.nodes.push_back(eig.eigenvalues()(i));
        const double v0 = eig.eigenvectors()(0, i);
        rule.weights.push_back(2.0 * v0 * v0);
    }
    return rule;
}

namespace {

double binomial(int n, int k) {
    double r = 1.0;
    for (int i = 1; i <= k; ++i) r = r * (n - k + i) / i;
    return r;
}

}  // namespace

double legendre_explicit(int n, double x) {
    const double t = 0.5 * (x - 1.0);
    double sum = 0.0;
    double tk = 1.0;
    for (int k = 0; k <= n; ++k) {
        sum += binomial(n, k) * binomial(n + k, k) * tk;
        tk *= t;
    }
    return sum;
}

double legendre_explicit_derivative(int n, double x) {
    const double t = 0.5 * (x - 1.0);
    double sum = 0.0;
    double tk = 1.0;  // t^(k-1)
    for (int k = 1; k <= n; ++k) {
        sum += binomial(n, k) * binomial(n + k, k) * k * tk * 0.5;
        tk *= t;
    }
    return sum;
}

double shape_value(int mode, double xi) {
    if (mode == 0) return 0.5 * (1.0 - xi);
    if (mode == 1) return 0.5 * (1.0 + xi);
    // int_{-1}^{xi} P_{i-1} = (P_i - P_{i-2}) / (2i - 1)
    const int i = mode;
    return std::sqrt(0.5 * (2 * i - 1)) * (legendre_explicit(i, xi) - legendre_explicit(i - 2, xi)) / (2 * i - 1);
}

double shape_derivative(int mode, double xi) {
    if (mode == 0) return -0.5;
    if (mode == 1) return 0.5;
    return std::sqrt(0.5 * (2 * mode - 1)) * legendre_explicit(mode - 1, xi);
}

DenseSystem brute_force_assembly(const ProblemSpec& problem, const Mesh& mesh, int p, int points) {
    const std::size_t ne = mesh.element_count();
    const std::size_t ndof = ne * static_cast<std::size_t>(p) - 1;
    const auto bp = mesh.breakpoints();

    // Global basis function g restricted to element j: list of (element, local mode).
    struct Piece {
        std::size_t element;
        int mode;
    };
    std::vector<std::vector<Piece>> support(ndof);
    for (std::size_t node = 1; node < ne; ++node) {
        support[node - 1] = {{node - 1, 1}, {node, 0}};
    }
    for (std::size_t j = 0; j < ne; ++j) {
        for (int i = 2; i <= p; ++i) support[(ne - 1) + j * (p - 1) + (i - 2)] = {{j, i}};
    }

    const Rule rule = golub_welsch(points);
    DenseSystem sys{Eigen::MatrixXd::Zero(ndof, ndof), Eigen::VectorXd::Zero(ndof)};
    for (std::size_t test = 0; test < ndof; ++test) {
        for (const Piece& tp : support[test]) {
            const double a = bp[tp.element];
            const double h = mesh.width(tp.element);
            for (std::size_t q = 0; q < rule.nodes.size(); ++q) {
                const double xi = rule.nodes[q];
                const double x = a + 0.5 * (xi + 1.0) * h;
                const double w = rule.weights[q] * 0.5 * h;
                const double v = shape_value(tp.mode, xi);
                const double dv = shape_derivative(tp.mode, xi) * 2.0 / h;
                sys.rhs(test) += w * problem.f().value(x) * v;
                for (std::size_t trial = 0; trial < ndof; ++trial) {
                    for (const Piece& up : support[trial]) {
                        if (up.element != tp.element) continue;
                        const double u = shape_value(up.mode, xi);
                        const double du = shape_derivative(up.mode, xi) * 2.0 / h;
                        sys.matrix(test, trial) += w * (problem.eps1() * du * dv +
                                                        problem.eps2() * problem.b().value(x) * du * v +
                                                        problem.c().value(x) * u * v);
                    }
                }
            }
        }
    }
    return sys;
}

double integrate_on_mesh(const std::function<double(double)>& g, const Mesh& mesh, int levels, int points) {
    const Rule rule = golub_welsch(points);
    const auto bp = mesh.breakpoints();
    double total = 0.0;
    for (std::size_t j = 0; j < mesh.element_count(); ++j) {
        const double a = bp[j];
        const double b = bp[j + 1];
        const double h = mesh.width(j);
        // distances from the nearer end, in units of h/2
        std::vector<double> cuts{0.0};
        for (int k = levels; k >= 0; --k) cuts.push_back(std::ldexp(1.0, -k));
        for (int side = 0; side < 2; ++side) {
            for (std::size_t c = 0; c + 1 < cuts.size(); ++c) {
                const double lo = cuts[c], hi = cuts[c + 1];
                for (std::size_t q = 0; q < rule.nodes.size(); ++q) {
                    const double d = 0.5 * (lo + hi) + 0.5 * (hi - lo) * rule.nodes[q];
                    const double x = side == 0 ? a + d * 0.5 * h : b - d * 0.5 * h;
                    total += 0.5 * (hi - lo) * rule.weights[q] * 0.5 * h * g(x);
                }
            }
        }
    }
    return total;
}

}  // namespace sblfem::oracle
