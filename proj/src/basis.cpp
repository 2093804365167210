#include "qcdg/basis.hpp"

#include <cmath>
#include <stdexcept>

namespace qcdg {

int dof_count(int N, int d) {
    if (N < 0 || d < 1 || d > 3) throw std::invalid_argument("dof_count: bad arguments");
    long long r = 1;
    for (int m = 1; m <= d; ++m) r *= (N + m);
    for (int m = 2; m <= d; ++m) r /= m;
    return static_cast<int>(r);
}

BasisSet::BasisSet(int N_) : N(N_) {
    if (N < 0 || N > 3) throw std::invalid_argument("BasisSet: N must lie in [0, 3]");
    n_space = dof_count(N, 2);
    n_spacetime = dof_count(N, 3);

    for (int deg = 0; deg <= N; ++deg)
        for (int p = deg; p >= 0; --p) {
            px.push_back(p);
            qx.push_back(deg - p);
        }

    st_of_space.assign(n_space, -1);
    for (int deg = 0; deg <= N; ++deg)
        for (int r = 0; r <= deg; ++r)
            for (int p = deg - r; p >= 0; --p) {
                pt.push_back(p);
                qt.push_back(deg - r - p);
                rt.push_back(r);
            }
    for (int j = 0; j < n_space; ++j)
        for (int l = 0; l < n_spacetime; ++l)
            if (rt[l] == 0 && pt[l] == px[j] && qt[l] == qx[j]) {
                st_of_space[j] = l;
                break;
            }
}

namespace {

inline void powers(double base, int N, double* tab) {
    tab[0] = 1.0;
    for (int k = 1; k <= N; ++k) tab[k] = tab[k - 1] * base;
}

}  // namespace

void BasisSet::eval_space(const Vec2& xb, double h, const Vec2& x, double* phi) const {
    double xp[4], yp[4];
    powers((x.x - xb.x) / h, N, xp);
    powers((x.y - xb.y) / h, N, yp);
    for (int l = 0; l < n_space; ++l) phi[l] = xp[px[l]] * yp[qx[l]];
}

void BasisSet::eval_space_grad(const Vec2& xb, double h, const Vec2& x, double* phi,
                               double* dphidx, double* dphidy) const {
    double xp[4], yp[4];
    const double xi = (x.x - xb.x) / h, eta = (x.y - xb.y) / h;
    powers(xi, N, xp);
    powers(eta, N, yp);
    for (int l = 0; l < n_space; ++l) {
        const int p = px[l], q = qx[l];
        phi[l] = xp[p] * yp[q];
        dphidx[l] = p > 0 ? p * xp[p - 1] * yp[q] / h : 0.0;
        dphidy[l] = q > 0 ? q * xp[p] * yp[q - 1] / h : 0.0;
    }
}

void BasisSet::eval_spacetime(const Vec2& xb, double h, const Vec2& x, double t_minus_tn,
                              double* theta) const {
    double xp[4], yp[4], tp[4];
    powers((x.x - xb.x) / h, N, xp);
    powers((x.y - xb.y) / h, N, yp);
    powers(t_minus_tn / h, N, tp);
    for (int l = 0; l < n_spacetime; ++l) theta[l] = xp[pt[l]] * yp[qt[l]] * tp[rt[l]];
}

void BasisSet::eval_st_spatial(const Vec2& xb, double h, const Vec2& x, double* sx) const {
    double xp[4], yp[4];
    powers((x.x - xb.x) / h, N, xp);
    powers((x.y - xb.y) / h, N, yp);
    for (int l = 0; l < n_spacetime; ++l) sx[l] = xp[pt[l]] * yp[qt[l]];
}

void BasisSet::eval_st_spatial_grad(const Vec2& xb, double h, const Vec2& x, double* sx,
                                    double* dsxdx, double* dsxdy) const {
    double xp[4], yp[4];
    powers((x.x - xb.x) / h, N, xp);
    powers((x.y - xb.y) / h, N, yp);
    for (int l = 0; l < n_spacetime; ++l) {
        const int p = pt[l], q = qt[l];
        sx[l] = xp[p] * yp[q];
        dsxdx[l] = p > 0 ? p * xp[p - 1] * yp[q] / h : 0.0;
        dsxdy[l] = q > 0 ? q * xp[p] * yp[q - 1] / h : 0.0;
    }
}

namespace {

CellOperators build_cell(const Mesh& mesh, const SubcellGrid& sub, const BasisSet& basis, int c) {
    CellOperators ops;
    const int ns = basis.n_space;
    const int nst = basis.n_spacetime;
    const int N = basis.N;
    const Vec2 xb = mesh.barycenter[c];
    const double h = mesh.h[c];

    const QuadRule& vol = triangle_rule(2 * N + 1);
    const int k = mesh.cell_size(c);
    for (int j = 0; j < k; ++j) {
        MappedQuad mq = map_to_triangle(vol, xb, mesh.vertices[mesh.cell_vertex(c, j)],
                                        mesh.vertices[mesh.cell_vertex(c, (j + 1) % k)]);
        ops.vol_pts.insert(ops.vol_pts.end(), mq.points.begin(), mq.points.end());
        ops.vol_wts.insert(ops.vol_wts.end(), mq.weights.begin(), mq.weights.end());
    }
    const int nq = static_cast<int>(ops.vol_wts.size());

    // spatial mass matrix and basis integrals
    ops.mass = Eigen::MatrixXd::Zero(ns, ns);
    ops.phi_int = Eigen::VectorXd::Zero(ns);
    std::vector<double> phi(ns);
    for (int q = 0; q < nq; ++q) {
        basis.eval_space(xb, h, ops.vol_pts[q], phi.data());
        const double w = ops.vol_wts[q];
        for (int a = 0; a < ns; ++a) {
            ops.phi_int[a] += w * phi[a];
            for (int b = 0; b <= a; ++b) ops.mass(a, b) += w * phi[a] * phi[b];
        }
    }
    ops.mass = ops.mass.selfadjointView<Eigen::Lower>();
    ops.mass_llt.compute(ops.mass);
    if (ops.mass_llt.info() != Eigen::Success)
        throw MeshError("degenerate cell " + std::to_string(c) + ": singular mass matrix");
    {
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(ops.mass);
        ops.mass_cond = es.eigenvalues().maxCoeff() / es.eigenvalues().minCoeff();
    }

    // space-time products on the unit slab
    Eigen::MatrixXd S = Eigen::MatrixXd::Zero(nst, nst);  // spatial products of sx_k sx_l
    std::vector<double> sx(nst);
    for (int q = 0; q < nq; ++q) {
        basis.eval_st_spatial(xb, h, ops.vol_pts[q], sx.data());
        const double w = ops.vol_wts[q];
        for (int a = 0; a < nst; ++a)
            for (int b = 0; b <= a; ++b) S(a, b) += w * sx[a] * sx[b];
    }
    S = S.selfadjointView<Eigen::Lower>();

    ops.K1.resize(nst, nst);
    ops.Mhat.resize(nst, nst);
    for (int a = 0; a < nst; ++a)
        for (int b = 0; b < nst; ++b) {
            const int ra = basis.rt[a], rb = basis.rt[b];
            const double kt = ra > 0 ? double(ra) / double(ra + rb) : 0.0;
            ops.K1(a, b) = S(a, b) * (1.0 - kt);
            ops.Mhat(a, b) = S(a, b) / double(ra + rb + 1);
        }
    ops.K1_lu.compute(ops.K1);

    ops.F0 = Eigen::MatrixXd::Zero(nst, ns);
    for (int a = 0; a < nst; ++a) {
        if (basis.rt[a] != 0) continue;
        for (int j = 0; j < ns; ++j) ops.F0(a, j) = S(a, basis.st_of_space[j]);
    }

    // subcell projection: exact means of degree-N polynomials
    const QuadRule& sub_rule = triangle_rule(std::max(N, 1));
    const int s0 = sub.cell_begin(c), s1 = sub.cell_end(c);
    const int nsub = s1 - s0;
    ops.P = Eigen::MatrixXd::Zero(nsub, ns);
    for (int s = s0; s < s1; ++s) {
        MappedQuad mq = map_to_triangle(sub_rule, sub.vertex(s, 0), sub.vertex(s, 1),
                                        sub.vertex(s, 2));
        for (int q = 0; q < static_cast<int>(mq.weights.size()); ++q) {
            basis.eval_space(xb, h, mq.points[q], phi.data());
            for (int a = 0; a < ns; ++a) ops.P(s - s0, a) += mq.weights[q] * phi[a];
        }
        ops.P.row(s - s0) /= sub.area[s];
    }

    // reconstruction: area-weighted least squares with the exact-mean
    // constraint eliminated through mode 0
    Eigen::VectorXd t(nsub);
    for (int s = 0; s < nsub; ++s) t[s] = sub.area[s0 + s];
    const double a0 = ops.phi_int[0];
    if (ns == 1) {
        ops.R = t.transpose() / a0;
        return ops;
    }
    Eigen::VectorXd atail = ops.phi_int.tail(ns - 1);
    Eigen::MatrixXd A = ops.P.rightCols(ns - 1) - ops.P.col(0) * (atail.transpose() / a0);
    Eigen::MatrixXd B = Eigen::MatrixXd::Identity(nsub, nsub) - ops.P.col(0) * (t.transpose() / a0);
    Eigen::VectorXd wsqrt = t.array().sqrt();
    A.array().colwise() *= wsqrt.array();
    B.array().colwise() *= wsqrt.array();

    Eigen::MatrixXd AtA = A.transpose() * A;
    Eigen::VectorXd scale = AtA.diagonal().array().sqrt().inverse();
    Eigen::MatrixXd AtAs = scale.asDiagonal() * AtA * scale.asDiagonal();
    Eigen::LDLT<Eigen::MatrixXd> ldlt(AtAs);
    if (ldlt.info() != Eigen::Success || (AtA.diagonal().array() <= 0.0).any())
        throw MeshError("cell " + std::to_string(c) + ": rank-deficient subcell reconstruction");
    Eigen::MatrixXd Rtail =
        scale.asDiagonal() * ldlt.solve(scale.asDiagonal() * (A.transpose() * B));

    ops.R.resize(ns, nsub);
    ops.R.bottomRows(ns - 1) = Rtail;
    ops.R.row(0) = (t.transpose() - atail.transpose() * Rtail) / a0;
    return ops;
}

}  // namespace

DiscOps::DiscOps(const Mesh& mesh, const SubcellGrid& sub, int N) : basis(N) {
    cell.reserve(mesh.num_cells());
    for (int c = 0; c < mesh.num_cells(); ++c) {
        cell.push_back(build_cell(mesh, sub, basis, c));
        max_mass_cond = std::max(max_mass_cond, cell.back().mass_cond);
    }
    const QuadRule& er = edge_rule(2 * N + 1);
    n_face_qp = er.size();
    face_pts.resize(static_cast<size_t>(mesh.num_faces()) * n_face_qp);
    face_wts.resize(face_pts.size());
    for (int f = 0; f < mesh.num_faces(); ++f) {
        const Face& fc = mesh.faces[f];
        const Vec2 a = mesh.vertices[fc.v0], b = mesh.vertices[fc.v1];
        for (int q = 0; q < n_face_qp; ++q) {
            face_pts[f * n_face_qp + q] = a + er.points[q].x * (b - a);
            face_wts[f * n_face_qp + q] = er.weights[q] * fc.length;
        }
    }
}

void project_to_subcells(const CellOperators& ops, const double* coeffs, int nvars,
                         double* averages) {
    const int ns = static_cast<int>(ops.P.cols());
    const int nsub = static_cast<int>(ops.P.rows());
    Eigen::Map<const Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>> C(
        coeffs, ns, nvars);
    Eigen::Map<Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>> A(
        averages, nsub, nvars);
    A.noalias() = ops.P * C;
}

void reconstruct_from_subcells(const CellOperators& ops, const double* averages, int nvars,
                               double* coeffs) {
    const int ns = static_cast<int>(ops.P.cols());
    const int nsub = static_cast<int>(ops.P.rows());
    Eigen::Map<const Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>> A(
        averages, nsub, nvars);
    Eigen::Map<Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>> C(
        coeffs, ns, nvars);
    C.noalias() = ops.R * A;
}

}  // namespace qcdg
