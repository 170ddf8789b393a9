#include "cgstep/harness.hpp"

#include <algorithm>
#include <atomic>
#include <charconv>
#include <cstdio>
#include <cstdlib>
#include <functional>
#include <limits>
#include <map>
#include <stdexcept>
#include <thread>

namespace cgstep {

namespace {

std::string format_shortest(double v) {
    char buf[32];
    const auto res = std::to_chars(buf, buf + sizeof(buf), v);
    return std::string(buf, res.ptr);
}

std::string format_scientific2(double v) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.2e", v);
    return buf;
}

std::string format_fixed2(double v) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.2f", v);
    return buf;
}

ConvergenceRow make_row(const OdeProblem& problem, const TimePartition& partition,
                        const SolveResult& result, Scheme scheme) {
    ConvergenceRow row;
    row.elements = partition.intervals();
    row.degree = partition.degrees.front();
    row.dof = dof(partition, problem.dim);
    if (problem.has_exact()) {
        row.l2_error = l2_error(result.solution, problem.exact);
        row.linf_error = linf_error(result.solution, problem.exact);
    } else {
        row.l2_error = std::numeric_limits<double>::quiet_NaN();
        row.linf_error = std::numeric_limits<double>::quiet_NaN();
    }
    row.total_iterations = result.total_iterations();
    row.scheme = scheme_name(scheme);
    row.problem = problem.name;
    return row;
}

void sort_rows(std::vector<ConvergenceRow>& rows) {
    std::stable_sort(rows.begin(), rows.end(), [](const ConvergenceRow& a, const ConvergenceRow& b) {
        if (a.degree != b.degree) return a.degree < b.degree;
        return a.elements < b.elements;
    });
}

// Runs `count` independent sweep cells, concurrently when CG_STEPPER_THREADS
// allows. Results must be written to pre-sized slots so ordering stays
// deterministic.
void run_cells(int count, const std::function<void(int)>& work) {
    const int cap = std::min(count, sweep_thread_cap());
    if (cap < 2) {
        for (int i = 0; i < count; ++i) work(i);
        return;
    }
    std::atomic<int> next{0};
    std::vector<std::exception_ptr> errors(count);
    auto runner = [&] {
        for (;;) {
            const int i = next.fetch_add(1);
            if (i >= count) return;
            try {
                work(i);
            } catch (...) {
                errors[i] = std::current_exception();
            }
        }
    };
    std::vector<std::thread> pool;
    pool.reserve(cap);
    for (int t = 0; t < cap; ++t) pool.emplace_back(runner);
    for (auto& th : pool) th.join();
    for (auto& e : errors)
        if (e) std::rethrow_exception(e);
}

// Solves one sweep cell, tagging solver aborts with the offending (N, r).
SolveResult solve_cell(const OdeProblem& problem, const TimePartition& partition,
                       const IterationConfig& config) {
    try {
        return solve(problem, partition, config);
    } catch (const SolverError& e) {
        throw SolverError(std::string(e.what()) + " [sweep cell N=" +
                              std::to_string(partition.intervals()) + ", r=" +
                              std::to_string(partition.degrees.front()) + "]",
                          e.interval());
    }
}

// One h-version column: bisection from a single element. n_limit < 0 applies
// the error-floor/cap stopping rule; otherwise every stage up to n_limit runs.
std::vector<ConvergenceRow> h_column(const OdeProblem& problem, const ExperimentSpec& spec,
                                     int order, Scheme scheme, long n_limit) {
    IterationConfig config = spec.iteration_config();
    config.scheme = scheme;

    std::vector<ConvergenceRow> rows;
    TimePartition partition = uniform(problem.horizon, 1, order);
    for (;;) {
        const SolveResult result = solve_cell(problem, partition, config);
        ConvergenceRow row = make_row(problem, partition, result, scheme);
        if (!rows.empty()) row.eoc = eoc(rows.back(), row);
        rows.push_back(std::move(row));

        const long n = partition.intervals();
        if (n_limit < 0) {
            if (rows.back().l2_error < spec.error_floor) break;
            if (2 * n > spec.max_elements) break;
        } else {
            if (2 * n > n_limit) break;
        }
        partition = bisect(partition);
    }
    return rows;
}

}  // namespace

OutputFormat parse_format(std::string_view name) {
    if (name == "csv") return OutputFormat::Csv;
    if (name == "md") return OutputFormat::Markdown;
    throw std::invalid_argument("unknown output format '" + std::string(name) +
                                "' (expected csv or md)");
}

IterationConfig ExperimentSpec::iteration_config() const {
    IterationConfig config;
    config.scheme = scheme;
    config.tol_abs = tol_abs;
    config.tol_rel = tol_rel;
    config.quad_points = quad_points;
    config.enforce_step_bound = check_step_bound;
    return config;
}

int sweep_thread_cap() {
    const char* env = std::getenv("CG_STEPPER_THREADS");
    if (!env) return 0;
    int value = 0;
    const auto res = std::from_chars(env, env + std::string_view(env).size(), value);
    if (res.ec != std::errc{} || value < 0) return 0;
    return value;
}

std::vector<ConvergenceRow> run_single(const OdeProblem& problem, const ExperimentSpec& spec) {
    if (spec.orders.empty()) throw std::invalid_argument("single run needs an order");
    const TimePartition partition = uniform(problem.horizon, spec.elements, spec.orders.front());
    const SolveResult result = solve(problem, partition, spec.iteration_config());
    return {make_row(problem, partition, result, spec.scheme)};
}

std::vector<ConvergenceRow> run_h_sweep(const OdeProblem& problem, const ExperimentSpec& spec) {
    if (!problem.has_exact())
        throw std::invalid_argument("h sweep requires an exact solution for '" + problem.name + "'");
    if (spec.orders.empty()) throw std::invalid_argument("h sweep needs at least one order");
    if (!(spec.error_floor > 0.0)) throw std::invalid_argument("error floor must be positive");

    std::vector<std::vector<ConvergenceRow>> columns(spec.orders.size());
    run_cells(static_cast<int>(spec.orders.size()), [&](int i) {
        columns[i] = h_column(problem, spec, spec.orders[i], spec.scheme, -1);
    });

    std::vector<ConvergenceRow> rows;
    for (auto& column : columns) rows.insert(rows.end(), column.begin(), column.end());
    sort_rows(rows);
    return rows;
}

std::vector<ConvergenceRow> run_p_sweep(const OdeProblem& problem, const ExperimentSpec& spec) {
    if (!problem.has_exact())
        throw std::invalid_argument("p sweep requires an exact solution for '" + problem.name + "'");
    if (spec.element_counts.empty()) throw std::invalid_argument("p sweep needs element counts");
    if (spec.max_order < 1) throw std::invalid_argument("p sweep needs max_order >= 1");
    if (!(spec.error_floor > 0.0)) throw std::invalid_argument("error floor must be positive");
    const IterationConfig config = spec.iteration_config();

    std::vector<std::vector<ConvergenceRow>> cells(spec.element_counts.size());
    run_cells(static_cast<int>(spec.element_counts.size()), [&](int i) {
        const TimePartition base = uniform(problem.horizon, spec.element_counts[i], 1);
        std::vector<ConvergenceRow>& rows = cells[i];
        for (int r = 1; r <= spec.max_order; ++r) {
            const TimePartition partition = r == 1 ? base : raise_order(base, r - 1);
            const SolveResult result = solve_cell(problem, partition, config);
            ConvergenceRow row = make_row(problem, partition, result, spec.scheme);
            if (!rows.empty()) row.eoc = eoc(rows.back(), row);
            rows.push_back(std::move(row));
            if (rows.back().l2_error < spec.error_floor) break;
        }
    });

    std::vector<ConvergenceRow> rows;
    for (auto& cell : cells) rows.insert(rows.end(), cell.begin(), cell.end());
    sort_rows(rows);
    return rows;
}

std::vector<ConvergenceRow> run_scheme_comparison(const OdeProblem& problem,
                                                  const ExperimentSpec& spec) {
    if (!problem.has_jacobian())
        throw std::invalid_argument("scheme comparison requires a Jacobian for '" + problem.name +
                                    "'");
    if (!problem.has_exact())
        throw std::invalid_argument("scheme comparison requires an exact solution for '" +
                                    problem.name + "'");
    if (spec.orders.empty()) throw std::invalid_argument("comparison needs at least one order");

    std::vector<std::vector<ConvergenceRow>> columns(spec.orders.size());
    run_cells(static_cast<int>(spec.orders.size()), [&](int i) {
        // The Newton column fixes the refinement grid; Picard repeats it.
        std::vector<ConvergenceRow> newton =
            h_column(problem, spec, spec.orders[i], Scheme::SimplifiedNewton, -1);
        std::vector<ConvergenceRow> picard = h_column(problem, spec, spec.orders[i],
                                                      Scheme::Picard, newton.back().elements);
        std::vector<ConvergenceRow>& out = columns[i];
        for (size_t j = 0; j < newton.size(); ++j) {
            out.push_back(std::move(newton[j]));
            out.push_back(std::move(picard[j]));
        }
    });

    std::vector<ConvergenceRow> rows;
    for (auto& column : columns) rows.insert(rows.end(), column.begin(), column.end());
    sort_rows(rows);
    return rows;
}

std::vector<ConvergenceRow> run_h_sweep(const ExperimentSpec& spec) {
    return run_h_sweep(make_problem(spec.problem_id), spec);
}
std::vector<ConvergenceRow> run_p_sweep(const ExperimentSpec& spec) {
    return run_p_sweep(make_problem(spec.problem_id), spec);
}
std::vector<ConvergenceRow> run_scheme_comparison(const ExperimentSpec& spec) {
    return run_scheme_comparison(make_problem(spec.problem_id), spec);
}

std::string emit_csv(const std::vector<ConvergenceRow>& rows) {
    if (rows.empty()) throw std::invalid_argument("nothing to emit");
    std::string out = "elements,degree,dof,l2_error,linf_error,eoc,iterations,scheme,problem\n";
    for (const ConvergenceRow& row : rows) {
        out += std::to_string(row.elements);
        out += ',';
        out += std::to_string(row.degree);
        out += ',';
        out += std::to_string(row.dof);
        out += ',';
        out += format_shortest(row.l2_error);
        out += ',';
        out += format_shortest(row.linf_error);
        out += ',';
        if (row.eoc) out += format_shortest(*row.eoc);
        out += ',';
        out += std::to_string(row.total_iterations);
        out += ',';
        out += row.scheme;
        out += ',';
        out += row.problem;
        out += '\n';
    }
    return out;
}

std::string emit_markdown(const std::vector<ConvergenceRow>& rows_in) {
    if (rows_in.empty()) throw std::invalid_argument("nothing to emit");
    std::vector<ConvergenceRow> rows = rows_in;
    sort_rows(rows);

    std::vector<int> element_axis;
    std::vector<std::string> scheme_order;
    for (const ConvergenceRow& row : rows) {
        if (std::find(element_axis.begin(), element_axis.end(), row.elements) == element_axis.end())
            element_axis.push_back(row.elements);
        if (std::find(scheme_order.begin(), scheme_order.end(), row.scheme) == scheme_order.end())
            scheme_order.push_back(row.scheme);
    }
    std::sort(element_axis.begin(), element_axis.end());
    const bool multi_scheme = scheme_order.size() > 1;

    // Column groups ordered by degree, then by scheme appearance.
    std::vector<std::pair<int, std::string>> groups;
    std::map<std::pair<int, std::string>, std::map<int, const ConvergenceRow*>> lookup;
    for (const ConvergenceRow& row : rows) {
        const std::pair<int, std::string> key{row.degree, row.scheme};
        if (lookup.find(key) == lookup.end()) groups.push_back(key);
        lookup[key][row.elements] = &row;
    }
    std::stable_sort(groups.begin(), groups.end(), [&](const auto& a, const auto& b) {
        if (a.first != b.first) return a.first < b.first;
        const auto ra = std::find(scheme_order.begin(), scheme_order.end(), a.second);
        const auto rb = std::find(scheme_order.begin(), scheme_order.end(), b.second);
        return ra < rb;
    });

    std::string out = "| #el. |";
    for (const auto& [degree, scheme] : groups) {
        out += " $r=" + std::to_string(degree) + "$";
        if (multi_scheme) out += " (" + scheme + ")";
        out += multi_scheme ? " | It. |" : " | Ord. |";
    }
    out += '\n';
    out += "|---|";
    for (size_t i = 0; i < groups.size(); ++i) out += "---|---|";
    out += '\n';

    for (int n : element_axis) {
        out += "| " + std::to_string(n) + " |";
        for (const auto& key : groups) {
            const auto& column = lookup[key];
            const auto it = column.find(n);
            if (it == column.end()) {
                out += " -- | -- |";
                continue;
            }
            const ConvergenceRow& row = *it->second;
            out += ' ' + format_scientific2(row.l2_error) + " |";
            if (multi_scheme)
                out += ' ' + std::to_string(row.total_iterations) + " |";
            else
                out += row.eoc ? ' ' + format_fixed2(*row.eoc) + " |" : std::string(" -- |");
        }
        out += '\n';
    }
    return out;
}

std::string emit(const std::vector<ConvergenceRow>& rows, OutputFormat format) {
    return format == OutputFormat::Csv ? emit_csv(rows) : emit_markdown(rows);
}

}  // namespace cgstep
