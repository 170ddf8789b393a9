#include "cgstep/problem.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace cgstep {

std::vector<double> OdeProblem::rhs_at(double t, std::span<const double> u) const {
    std::vector<double> out(dim);
    rhs(t, u, out);
    return out;
}

std::vector<double> OdeProblem::exact_at(double t) const {
    if (!exact) throw std::logic_error("problem '" + name + "' has no exact solution");
    std::vector<double> out(dim);
    exact(t, out);
    return out;
}

OdeProblem example1() {
    OdeProblem p;
    p.name = "ex1";
    p.dim = 1;
    p.rhs = [](double, std::span<const double> u, std::span<double> out) {
        out[0] = -std::sin(u[0]);
    };
    p.jacobian = [](double, std::span<const double> u, Matrix& out) {
        out(0, 0) = -std::cos(u[0]);
    };
    p.exact = [](double t, std::span<double> out) { out[0] = 2.0 * std::atan(std::exp(-t)); };
    p.initial_value = {std::numbers::pi / 2.0};
    p.horizon = 1.0;
    p.lipschitz_constant = 1.0;
    p.derivative_bound = 1.0;
    return p;
}

OdeProblem example2() {
    OdeProblem p;
    p.name = "ex2";
    p.dim = 1;
    p.rhs = [](double t, std::span<const double> u, std::span<double> out) {
        out[0] = -2.0 * t * u[0] * u[0];
    };
    p.jacobian = [](double t, std::span<const double> u, Matrix& out) {
        out(0, 0) = -4.0 * t * u[0];
    };
    p.exact = [](double t, std::span<double> out) { out[0] = 1.0 / (1.0 + t * t); };
    p.initial_value = {1.0};
    p.horizon = 1.0;
    // No global Lipschitz or derivative bound exists for this right side.
    return p;
}

OdeProblem example3() {
    OdeProblem p;
    p.name = "ex3";
    p.dim = 2;
    p.rhs = [](double, std::span<const double> u, std::span<double> out) {
        out[0] = -u[1] / (1.0 + u[1] * u[1]);
        out[1] = -std::tan(u[0]);
    };
    p.jacobian = [](double, std::span<const double> u, Matrix& out) {
        const double denom = 1.0 + u[1] * u[1];
        const double sec = 1.0 / std::cos(u[0]);
        out(0, 0) = 0.0;
        out(0, 1) = (u[1] * u[1] - 1.0) / (denom * denom);
        out(1, 0) = -sec * sec;
        out(1, 1) = 0.0;
    };
    p.exact = [](double t, std::span<double> out) {
        out[0] = std::atan(std::exp(-t));
        out[1] = std::exp(-t);
    };
    p.initial_value = {std::numbers::pi / 4.0, 1.0};
    p.horizon = 1.0;
    return p;
}

OdeProblem make_problem(std::string_view id) {
    if (id == "ex1") return example1();
    if (id == "ex2") return example2();
    if (id == "ex3") return example3();
    throw std::invalid_argument("unknown problem id '" + std::string(id) +
                                "' (expected ex1, ex2 or ex3)");
}

}  // namespace cgstep
