#pragma once

#include <functional>
#include <vector>

#include "qcdg/basis.hpp"
#include "qcdg/system.hpp"

namespace qcdg {

/// Per-cell modal coefficients of the primitive vector, [cell][mode][var].
struct DGField {
    int ncells = 0;
    int nmodes = 0;
    std::vector<double> data;

    DGField() = default;
    DGField(int nc, int nm) : ncells(nc), nmodes(nm), data(size_t(nc) * nm * 5, 0.0) {}

    double* cell(int c) { return data.data() + size_t(c) * nmodes * 5; }
    const double* cell(int c) const { return data.data() + size_t(c) * nmodes * 5; }
    double& coeff(int c, int l, int v) { return data[(size_t(c) * nmodes + l) * 5 + v]; }
    double coeff(int c, int l, int v) const { return data[(size_t(c) * nmodes + l) * 5 + v]; }
};

using IcFunction = std::function<PrimState(const Vec2&)>;

/// Cell-wise L2 projection of an initial condition.
DGField project_ic(const Mesh& mesh, const DiscOps& ops, const IcFunction& ic);

/// Pointwise evaluation of the cell polynomial.
Vec5 eval_field(const Mesh& mesh, const DiscOps& ops, const DGField& f, int c, const Vec2& x);

/// Cell mean of each variable (uses the cached basis integrals).
Vec5 cell_mean(const Mesh& mesh, const DiscOps& ops, const DGField& f, int c);

}  // namespace qcdg
