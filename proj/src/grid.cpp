#include "wf/grid.hpp"

#include <cmath>
#include <limits>

#include "wf/errors.hpp"

namespace wf {

namespace {

void check_spacing(std::size_t n_intervals, double h) {
    if (n_intervals < 2) throw ContractError("grid needs N >= 2");
    if (h <= 0.0) throw ContractError("grid spacing must be positive");
    const double one = h * static_cast<double>(n_intervals);
    if (std::abs(one - 1.0) > 4.0 * std::numeric_limits<double>::epsilon())
        throw ContractError("grid spacing h must satisfy h*N = 1");
}

}  // namespace

EdgeFunction::EdgeFunction(std::vector<double> v, double spacing)
    : values(std::move(v)), h(spacing) {
    if (values.size() < 3) throw ContractError("EdgeFunction needs at least 3 nodes (N >= 2)");
    check_spacing(values.size() - 1, h);
}

CellFunction::CellFunction(std::vector<double> v, double spacing)
    : values(std::move(v)), h(spacing) {
    if (values.empty()) throw ContractError("CellFunction must not be empty");
    check_spacing(values.size(), h);
}

double inner_edge(const EdgeFunction& l, const EdgeFunction& g) {
    if (l.values.size() != g.values.size() || l.h != g.h)
        throw ContractError("inner_edge: operands must share grid");
    double acc = 0.0;
    for (std::size_t i = 1; i + 1 < l.values.size(); ++i) acc += l.values[i] * g.values[i];
    return l.h * acc;
}

double inner_cell(const CellFunction& phi, const CellFunction& psi) {
    if (phi.values.size() != psi.values.size() || phi.h != psi.h)
        throw ContractError("inner_cell: operands must share grid");
    double acc = 0.0;
    for (std::size_t i = 0; i < phi.values.size(); ++i) acc += phi.values[i] * psi.values[i];
    return phi.h * acc;
}

CellFunction diff_edge_to_cell(const EdgeFunction& l) {
    CellFunction out;
    out.h = l.h;
    out.values.resize(l.values.size() - 1);
    for (std::size_t i = 0; i + 1 < l.values.size(); ++i)
        out.values[i] = (l.values[i + 1] - l.values[i]) / l.h;
    return out;
}

EdgeFunction diff_cell_to_edge(const CellFunction& phi) {
    EdgeFunction out;
    out.h = phi.h;
    out.values.assign(phi.values.size() + 1, 0.0);
    for (std::size_t i = 1; i < phi.values.size(); ++i)
        out.values[i] = (phi.values[i] - phi.values[i - 1]) / phi.h;
    return out;
}

CellFunction average_edge_to_cell(const EdgeFunction& l) {
    CellFunction out;
    out.h = l.h;
    out.values.resize(l.values.size() - 1);
    for (std::size_t i = 0; i + 1 < l.values.size(); ++i)
        out.values[i] = 0.5 * (l.values[i] + l.values[i + 1]);
    return out;
}

}  // namespace wf
