#pragma once

#include <cstddef>
#include <vector>

namespace wf {

/// Grid function living on the nodes X_i = i*h, i = 0..N.
struct EdgeFunction {
    std::vector<double> values;  // length N+1
    double h = 0.0;              // 1/N

    EdgeFunction() = default;
    EdgeFunction(std::vector<double> v, double spacing);

    std::size_t intervals() const { return values.size() - 1; }  // N
    double& operator[](std::size_t i) { return values[i]; }
    double operator[](std::size_t i) const { return values[i]; }
};

/// Grid function living on the half-nodes X_{i-1/2}, i = 1..N.
struct CellFunction {
    std::vector<double> values;  // length N
    double h = 0.0;

    CellFunction() = default;
    CellFunction(std::vector<double> v, double spacing);

    double& operator[](std::size_t i) { return values[i]; }
    double operator[](std::size_t i) const { return values[i]; }
};

/// [l|g] = h * sum_{i=1}^{N-1} l_i g_i; endpoints excluded.
double inner_edge(const EdgeFunction& l, const EdgeFunction& g);

/// (phi|psi) = h * sum_{i=1}^{N} phi_{i-1/2} psi_{i-1/2}.
double inner_cell(const CellFunction& phi, const CellFunction& psi);

/// (D_h l)_{i-1/2} = (l_i - l_{i-1}) / h.
CellFunction diff_edge_to_cell(const EdgeFunction& l);

/// (d_h phi)_i = (phi_{i+1/2} - phi_{i-1/2}) / h at interior nodes.
/// Endpoint slots i = 0 and i = N are stored as 0 and are undefined.
EdgeFunction diff_cell_to_edge(const CellFunction& phi);

/// (A l)_{i-1/2} = (l_i + l_{i-1}) / 2.
CellFunction average_edge_to_cell(const EdgeFunction& l);

}  // namespace wf
