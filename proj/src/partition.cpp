#include "cgstep/partition.hpp"

#include <algorithm>
#include <stdexcept>
#include <string>

namespace cgstep {

double TimePartition::max_width() const {
    double m = 0.0;
    for (int n = 0; n < intervals(); ++n) m = std::max(m, width(n));
    return m;
}

void validate(const TimePartition& p) {
    if (p.nodes.size() < 2) throw std::invalid_argument("partition needs at least two nodes");
    if (p.degrees.size() != p.nodes.size() - 1)
        throw std::invalid_argument("partition needs one degree per interval");
    if (p.nodes.front() != 0.0) throw std::invalid_argument("partition must start at t = 0");
    if (p.nodes.back() <= 0.0) throw std::invalid_argument("partition horizon must be positive");
    for (size_t i = 0; i + 1 < p.nodes.size(); ++i)
        if (!(p.nodes[i] < p.nodes[i + 1]))
            throw std::invalid_argument("partition nodes must be strictly increasing");
    for (int r : p.degrees)
        if (r < 1) throw std::invalid_argument("every interval degree must be at least 1");
}

TimePartition uniform(double horizon, int intervals, int degree) {
    if (horizon <= 0.0) throw std::invalid_argument("horizon must be positive");
    if (intervals < 1) throw std::invalid_argument("need at least one interval");
    if (degree < 1) throw std::invalid_argument("degree must be at least 1");
    TimePartition p;
    p.nodes.resize(intervals + 1);
    for (int i = 0; i <= intervals; ++i) p.nodes[i] = horizon * static_cast<double>(i) / intervals;
    p.nodes.front() = 0.0;
    p.nodes.back() = horizon;
    p.degrees.assign(intervals, degree);
    return p;
}

TimePartition bisect(const TimePartition& p) {
    validate(p);
    TimePartition out;
    out.nodes.reserve(2 * p.nodes.size() - 1);
    out.degrees.reserve(2 * p.degrees.size());
    for (int n = 0; n < p.intervals(); ++n) {
        out.nodes.push_back(p.nodes[n]);
        out.nodes.push_back(0.5 * (p.nodes[n] + p.nodes[n + 1]));
        out.degrees.push_back(p.degrees[n]);
        out.degrees.push_back(p.degrees[n]);
    }
    out.nodes.push_back(p.nodes.back());
    return out;
}

TimePartition raise_order(const TimePartition& p, int delta) {
    validate(p);
    if (delta < 1) throw std::invalid_argument("delta must be at least 1");
    TimePartition out = p;
    for (int& r : out.degrees) r += delta;
    return out;
}

}  // namespace cgstep
