#include "qcdg/field.hpp"

namespace qcdg {

DGField project_ic(const Mesh& mesh, const DiscOps& ops, const IcFunction& ic) {
    const int ns = ops.basis.n_space;
    DGField f(mesh.num_cells(), ns);
    std::vector<double> phi(ns);
    Eigen::MatrixXd rhs(ns, 5);
    for (int c = 0; c < mesh.num_cells(); ++c) {
        const CellOperators& co = ops.cell[c];
        rhs.setZero();
        for (size_t q = 0; q < co.vol_wts.size(); ++q) {
            ops.basis.eval_space(mesh.barycenter[c], mesh.h[c], co.vol_pts[q], phi.data());
            const Vec5 v = ic(co.vol_pts[q]).vec();
            for (int a = 0; a < ns; ++a)
                rhs.row(a) += co.vol_wts[q] * phi[a] * v.transpose();
        }
        Eigen::MatrixXd sol = co.mass_llt.solve(rhs);
        for (int a = 0; a < ns; ++a)
            for (int v = 0; v < 5; ++v) f.coeff(c, a, v) = sol(a, v);
    }
    return f;
}

Vec5 eval_field(const Mesh& mesh, const DiscOps& ops, const DGField& f, int c, const Vec2& x) {
    const int ns = ops.basis.n_space;
    double phi[10];
    ops.basis.eval_space(mesh.barycenter[c], mesh.h[c], x, phi);
    Vec5 out = Vec5::Zero();
    const double* cc = f.cell(c);
    for (int a = 0; a < ns; ++a)
        for (int v = 0; v < 5; ++v) out[v] += phi[a] * cc[a * 5 + v];
    return out;
}

Vec5 cell_mean(const Mesh& mesh, const DiscOps& ops, const DGField& f, int c) {
    const int ns = ops.basis.n_space;
    const CellOperators& co = ops.cell[c];
    Vec5 out = Vec5::Zero();
    const double* cc = f.cell(c);
    for (int a = 0; a < ns; ++a)
        for (int v = 0; v < 5; ++v) out[v] += co.phi_int[a] * cc[a * 5 + v];
    return out / mesh.area[c];
}

}  // namespace qcdg
