#include "cgstep/polyspace.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

namespace cgstep {

namespace {

// P_n(x) and P_n'(x) in one pass of the three-term recurrence.
void legendre_pair(int n, double x, double& value, double& deriv) {
    if (n == 0) {
        value = 1.0;
        deriv = 0.0;
        return;
    }
    double pm1 = 1.0, p = x;        // P_0, P_1
    double dm1 = 0.0, d = 1.0;      // P_0', P_1'
    for (int j = 1; j < n; ++j) {
        const double pj1 = ((2.0 * j + 1.0) * x * p - j * pm1) / (j + 1.0);
        const double dj1 = dm1 + (2.0 * j + 1.0) * p;
        pm1 = p;
        p = pj1;
        dm1 = d;
        d = dj1;
    }
    value = p;
    deriv = d;
}

// Cyclic Jacobi eigen-decomposition of a symmetric matrix; eigenvectors are
// accumulated column-wise in v. Sufficient for the small Jacobi matrices of
// the Golub-Welsch construction.
void symmetric_eigen(Matrix& a, Matrix& v) {
    const int n = a.rows();
    v = Matrix::identity(n);
    for (int sweep = 0; sweep < 100; ++sweep) {
        double off = 0.0;
        for (int p = 0; p < n; ++p)
            for (int q = p + 1; q < n; ++q) off += a(p, q) * a(p, q);
        if (off < 1e-30) return;
        for (int p = 0; p < n; ++p) {
            for (int q = p + 1; q < n; ++q) {
                if (std::abs(a(p, q)) < 1e-300) continue;
                const double theta = (a(q, q) - a(p, p)) / (2.0 * a(p, q));
                const double t = (theta >= 0 ? 1.0 : -1.0) /
                                 (std::abs(theta) + std::sqrt(theta * theta + 1.0));
                const double c = 1.0 / std::sqrt(t * t + 1.0);
                const double s = t * c;
                for (int k = 0; k < n; ++k) {
                    const double akp = a(k, p), akq = a(k, q);
                    a(k, p) = c * akp - s * akq;
                    a(k, q) = s * akp + c * akq;
                }
                for (int k = 0; k < n; ++k) {
                    const double apk = a(p, k), aqk = a(q, k);
                    a(p, k) = c * apk - s * aqk;
                    a(q, k) = s * apk + c * aqk;
                }
                for (int k = 0; k < n; ++k) {
                    const double vkp = v(k, p), vkq = v(k, q);
                    v(k, p) = c * vkp - s * vkq;
                    v(k, q) = s * vkp + c * vkq;
                }
            }
        }
    }
}

}  // namespace

double legendre_eval(int degree, double x) {
    if (degree < 0) throw std::invalid_argument("Legendre degree must be non-negative");
    double p, d;
    legendre_pair(degree, x, p, d);
    return p;
}

double legendre_deriv(int degree, double x) {
    if (degree < 0) throw std::invalid_argument("Legendre degree must be non-negative");
    double p, d;
    legendre_pair(degree, x, p, d);
    return d;
}

QuadratureRule gauss_legendre_golub_welsch(int q) {
    if (q < 1) throw std::invalid_argument("quadrature needs at least one point");
    Matrix jac(q, q), vec;
    for (int j = 1; j < q; ++j) {
        const double b = j / std::sqrt(4.0 * j * j - 1.0);
        jac(j - 1, j) = b;
        jac(j, j - 1) = b;
    }
    symmetric_eigen(jac, vec);

    std::vector<std::pair<double, double>> nw(q);
    for (int i = 0; i < q; ++i) nw[i] = {jac(i, i), 2.0 * vec(0, i) * vec(0, i)};
    std::sort(nw.begin(), nw.end());

    QuadratureRule rule;
    rule.points.resize(q);
    rule.weights.resize(q);
    for (int i = 0; i < q; ++i) {
        rule.points[i] = nw[i].first;
        rule.weights[i] = nw[i].second;
    }
    return rule;
}

QuadratureRule gauss_legendre(int q) {
    if (q < 1) throw std::invalid_argument("quadrature needs at least one point");
    QuadratureRule rule;
    rule.points.resize(q);
    rule.weights.resize(q);

    // One root per symmetric pair; classic cosine initial guess.
    for (int i = 0; i < (q + 1) / 2; ++i) {
        double x = std::cos(std::numbers::pi * (i + 0.75) / (q + 0.5));
        double p = 0.0, d = 1.0;
        bool converged = false;
        for (int it = 0; it < 100; ++it) {
            legendre_pair(q, x, p, d);
            const double dx = p / d;
            x -= dx;
            if (std::abs(dx) <= 1e-15) {
                converged = true;
                break;
            }
        }
        if (!converged) return gauss_legendre_golub_welsch(q);
        legendre_pair(q, x, p, d);
        const double w = 2.0 / ((1.0 - x * x) * d * d);
        rule.points[q - 1 - i] = x;
        rule.points[i] = -x;
        rule.weights[i] = w;
        rule.weights[q - 1 - i] = w;
    }
    if (q % 2 == 1) rule.points[q / 2] = 0.0;
    return rule;
}

std::vector<double> gauss_lobatto_nodes(int degree) {
    if (degree < 1) throw std::invalid_argument("Lobatto node set needs degree >= 1");
    const int r = degree;
    std::vector<double> nodes(r + 1);
    nodes.front() = -1.0;
    nodes.back() = 1.0;

    // Interior nodes are the roots of P'_r; Chebyshev-Lobatto initial guesses.
    for (int i = 1; i < r; ++i) {
        double x = -std::cos(std::numbers::pi * i / r);
        for (int it = 0; it < 100; ++it) {
            double p, d;
            legendre_pair(r, x, p, d);
            const double d2 = (2.0 * x * d - r * (r + 1.0) * p) / (1.0 - x * x);
            const double dx = d / d2;
            x -= dx;
            if (std::abs(dx) <= 1e-15) break;
        }
        nodes[i] = x;
    }
    // Enforce exact symmetry of the node set.
    for (int i = 1; 2 * i < r; ++i) {
        const double m = 0.5 * (nodes[i] - nodes[r - i]);
        nodes[i] = m;
        nodes[r - i] = -m;
    }
    if (r % 2 == 0) nodes[r / 2] = 0.0;
    if (!std::is_sorted(nodes.begin(), nodes.end()))
        throw std::runtime_error("Lobatto node computation failed to order the roots");
    return nodes;
}

double lagrange_value(std::span<const double> nodes, int j, double x) {
    double v = 1.0;
    for (size_t m = 0; m < nodes.size(); ++m) {
        if (static_cast<int>(m) == j) continue;
        v *= (x - nodes[m]) / (nodes[j] - nodes[m]);
    }
    return v;
}

double lagrange_deriv(std::span<const double> nodes, int j, double x) {
    double sum = 0.0;
    for (size_t i = 0; i < nodes.size(); ++i) {
        if (static_cast<int>(i) == j) continue;
        double term = 1.0 / (nodes[j] - nodes[i]);
        for (size_t m = 0; m < nodes.size(); ++m) {
            if (static_cast<int>(m) == j || m == i) continue;
            term *= (x - nodes[m]) / (nodes[j] - nodes[m]);
        }
        sum += term;
    }
    return sum;
}

ReferenceBasis build_basis(int order, int quad_points) {
    if (order < 1) throw std::invalid_argument("trial order must be at least 1");
    if (quad_points < order + 1)
        throw std::invalid_argument("need at least order+1 quadrature points (got " +
                                    std::to_string(quad_points) + " for order " +
                                    std::to_string(order) + ")");
    ReferenceBasis basis;
    basis.order = order;
    basis.quad = gauss_legendre(quad_points);
    basis.trial_nodes = gauss_lobatto_nodes(order);

    const int q = quad_points;
    basis.trial_values_at_quad = Matrix(order + 1, q);
    basis.trial_derivs_at_quad = Matrix(order + 1, q);
    basis.test_values_at_quad = Matrix(order, q);
    for (int a = 0; a < q; ++a) {
        const double x = basis.quad.points[a];
        for (int m = 0; m <= order; ++m) {
            basis.trial_values_at_quad(m, a) = lagrange_value(basis.trial_nodes, m, x);
            basis.trial_derivs_at_quad(m, a) = lagrange_deriv(basis.trial_nodes, m, x);
        }
        for (int i = 0; i < order; ++i) basis.test_values_at_quad(i, a) = legendre_eval(i, x);
    }
    return basis;
}

ReferenceBasis build_basis(int order) { return build_basis(order, order + 2); }

int CgSolution::find_interval(double t) const {
    const auto& nodes = partition.nodes;
    if (t < nodes.front() || t > nodes.back())
        throw std::domain_error("time " + std::to_string(t) + " outside [0, " +
                                std::to_string(nodes.back()) + "]");
    const auto it = std::upper_bound(nodes.begin(), nodes.end(), t);
    int n = static_cast<int>(it - nodes.begin()) - 1;
    if (n >= partition.intervals()) n = partition.intervals() - 1;  // t == T
    return n;
}

std::vector<double> eval_piecewise(const CgSolution& sol, double t) {
    const int n = sol.find_interval(t);
    const int r = sol.partition.degrees[n];
    const double x = 2.0 * (t - sol.partition.nodes[n]) / sol.partition.width(n) - 1.0;
    const std::vector<double> ref_nodes = gauss_lobatto_nodes(r);

    const Matrix& block = sol.blocks[n];
    std::vector<double> out(block.cols(), 0.0);
    for (int m = 0; m <= r; ++m) {
        const double lm = lagrange_value(ref_nodes, m, x);
        for (int s = 0; s < block.cols(); ++s) out[s] += lm * block(m, s);
    }
    return out;
}

}  // namespace cgstep
