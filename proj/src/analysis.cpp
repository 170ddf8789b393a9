#include "cgstep/analysis.hpp"

#include <cmath>
#include <stdexcept>
#include <unordered_map>

#include "cgstep/polyspace.hpp"

namespace cgstep {

namespace {

// Per-degree evaluation table: trial basis values at a fixed reference grid.
Matrix trial_values_at(const std::vector<double>& trial_nodes, const std::vector<double>& xs) {
    Matrix values(static_cast<int>(trial_nodes.size()), static_cast<int>(xs.size()));
    for (size_t m = 0; m < trial_nodes.size(); ++m)
        for (size_t a = 0; a < xs.size(); ++a)
            values(static_cast<int>(m), static_cast<int>(a)) =
                lagrange_value(trial_nodes, static_cast<int>(m), xs[a]);
    return values;
}

}  // namespace

long dof(const TimePartition& partition, int dim) {
    validate(partition);
    if (dim < 1) throw std::invalid_argument("dimension must be at least 1");
    long sum = 0;
    for (int r : partition.degrees) sum += r;
    return static_cast<long>(dim) * sum;
}

double l2_error(const CgSolution& sol, const ExactFn& exact, int quad_boost) {
    if (!exact) throw std::invalid_argument("l2_error needs an exact solution");
    if (quad_boost < 1) throw std::invalid_argument("quad_boost must be at least 1");
    const int d = sol.dim();
    std::vector<double> u_exact(d);

    struct Table {
        QuadratureRule rule;
        Matrix values;
    };
    std::unordered_map<int, Table> tables;

    double acc = 0.0;
    for (int n = 0; n < sol.partition.intervals(); ++n) {
        const int r = sol.partition.degrees[n];
        auto it = tables.find(r);
        if (it == tables.end()) {
            Table t;
            t.rule = gauss_legendre(r + quad_boost);
            t.values = trial_values_at(gauss_lobatto_nodes(r), t.rule.points);
            it = tables.emplace(r, std::move(t)).first;
        }
        const Table& table = it->second;
        const Matrix& block = sol.blocks[n];
        const double k = sol.partition.width(n);
        for (int a = 0; a < table.rule.size(); ++a) {
            const double t = sol.partition.nodes[n] + k * 0.5 * (table.rule.points[a] + 1.0);
            exact(t, u_exact);
            double err_sq = 0.0;
            for (int s = 0; s < d; ++s) {
                double v = 0.0;
                for (int m = 0; m <= r; ++m) v += block(m, s) * table.values(m, a);
                const double e = v - u_exact[s];
                err_sq += e * e;
            }
            acc += 0.5 * k * table.rule.weights[a] * err_sq;
        }
    }
    return std::sqrt(acc);
}

double linf_error(const CgSolution& sol, const ExactFn& exact, int samples_per_interval) {
    if (!exact) throw std::invalid_argument("linf_error needs an exact solution");
    if (samples_per_interval < 2) throw std::invalid_argument("need at least two samples");
    const int d = sol.dim();
    std::vector<double> u_exact(d);

    std::vector<double> xs(samples_per_interval);
    for (int j = 0; j < samples_per_interval; ++j)
        xs[j] = -1.0 + 2.0 * j / (samples_per_interval - 1);

    std::unordered_map<int, Matrix> tables;
    double worst = 0.0;
    for (int n = 0; n < sol.partition.intervals(); ++n) {
        const int r = sol.partition.degrees[n];
        auto it = tables.find(r);
        if (it == tables.end())
            it = tables.emplace(r, trial_values_at(gauss_lobatto_nodes(r), xs)).first;
        const Matrix& values = it->second;
        const Matrix& block = sol.blocks[n];
        const double k = sol.partition.width(n);
        for (int a = 0; a < samples_per_interval; ++a) {
            const double t = sol.partition.nodes[n] + k * 0.5 * (xs[a] + 1.0);
            exact(t, u_exact);
            double err_sq = 0.0;
            for (int s = 0; s < d; ++s) {
                double v = 0.0;
                for (int m = 0; m <= r; ++m) v += block(m, s) * values(m, a);
                const double e = v - u_exact[s];
                err_sq += e * e;
            }
            worst = std::max(worst, err_sq);
        }
    }
    return std::sqrt(worst);
}

std::optional<double> eoc(const ConvergenceRow& prev, const ConvergenceRow& curr) {
    if (curr.dof <= prev.dof)
        throw std::invalid_argument("EOC needs strictly increasing degrees of freedom");
    if (!(prev.l2_error > 0.0) || !(curr.l2_error > 0.0)) return std::nullopt;
    if (!std::isfinite(prev.l2_error) || !std::isfinite(curr.l2_error)) return std::nullopt;
    return std::log(prev.l2_error / curr.l2_error) /
           std::log(static_cast<double>(curr.dof) / static_cast<double>(prev.dof));
}

}  // namespace cgstep
