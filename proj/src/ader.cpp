#include "qcdg/ader.hpp"

#include <cmath>
#include <stdexcept>

#include "qcdg/parallel.hpp"

namespace qcdg {

namespace {

inline PrimState floored(const PrimState& v) {
    PrimState w = v;
    if (!(w.rho > kAdmissibleEps)) w.rho = kAdmissibleEps;
    if (!(w.p > kAdmissibleEps)) w.p = kAdmissibleEps;
    return w;
}

struct Scratch {
    std::vector<double> sx, dsx, dsy;        // [qp][l]
    Eigen::MatrixXd Cm, Vq, Gx, Gy, Hq, B, rhs0, C, Cnew, diff;
};

Scratch& scratch() {
    thread_local Scratch s;
    return s;
}

}  // namespace

PrimState ghost_state(const PrimState& inside, const Vec2& n, BcTag tag,
                      const PrimState& dirichlet) {
    switch (tag) {
        case BcTag::wall: {
            PrimState g = inside;
            const double un = inside.u * n.x + inside.v * n.y;
            g.u -= 2.0 * un * n.x;
            g.v -= 2.0 * un * n.y;
            return g;
        }
        case BcTag::dirichlet:
            return dirichlet;
        case BcTag::outflow:
        default:
            return inside;
    }
}

Vec5 eval_predictor(const Mesh& mesh, const DiscOps& ops, const PredictorField& pf, int c,
                    const Vec2& x, double tau) {
    const BasisSet& b = ops.basis;
    double sx[20], tp[4];
    b.eval_st_spatial(mesh.barycenter[c], mesh.h[c], x, sx);
    tp[0] = 1.0;
    for (int k = 1; k <= b.N; ++k) tp[k] = tp[k - 1] * tau;
    Vec5 out = Vec5::Zero();
    const double* cc = pf.cell(c);
    for (int l = 0; l < b.n_spacetime; ++l) {
        const double w = sx[l] * tp[b.rt[l]];
        for (int v = 0; v < 5; ++v) out[v] += w * cc[l * 5 + v];
    }
    return out;
}

double compute_dt(const Mesh& mesh, const DiscOps& ops, const DGField& f, const EosClosure& eos,
                  double cfl) {
    const int N = ops.basis.N;
    const double d = 2.0;
    double dt = std::numeric_limits<double>::infinity();
    for (int c = 0; c < mesh.num_cells(); ++c) {
        const PrimState avg = PrimState::from(cell_mean(mesh, ops, f, c));
        if (!admissible(avg))
            throw std::runtime_error("compute_dt: inadmissible average state in cell " +
                                     std::to_string(c));
        double lmax = max_wavespeed(avg, eos);
        for (int k = 0; k < mesh.cell_size(c); ++k) {
            const PrimState corner = PrimState::from(
                eval_field(mesh, ops, f, c, mesh.vertices[mesh.cell_vertex(c, k)]));
            if (admissible(corner)) lmax = std::max(lmax, max_wavespeed(corner, eos));
        }
        if (!std::isfinite(lmax))
            throw std::runtime_error("compute_dt: non-finite wavespeed in cell " +
                                     std::to_string(c));
        dt = std::min(dt, cfl * mesh.area[c] / ((2.0 * N + 1.0) * d * lmax * mesh.perimeter[c]));
    }
    return dt;
}

void predict_all(const Mesh& mesh, const DiscOps& ops, const DGField& f, const EosClosure& eos,
                 double dt, int workers, PredictorField& out) {
    const BasisSet& basis = ops.basis;
    const int nst = basis.n_spacetime;
    const int ns = basis.n_space;
    const int nc = mesh.num_cells();
    const int max_iter = 2 * (basis.N + 1) + 2;

    out.nst = nst;
    out.dt = dt;
    out.coef.assign(size_t(nc) * nst * 5, 0.0);
    out.failed.assign(nc, 0);
    out.iterations.assign(nc, 0);

    const QuadRule tq = gauss_legendre_01(basis.N + 1);
    const int nt = tq.size();
    std::vector<double> tau_pow(size_t(nt) * (basis.N + 1));
    for (int m = 0; m < nt; ++m) {
        tau_pow[m * (basis.N + 1)] = 1.0;
        for (int k = 1; k <= basis.N; ++k)
            tau_pow[m * (basis.N + 1) + k] = tau_pow[m * (basis.N + 1) + k - 1] * tq.points[m].x;
    }

    parallel_for(nc, workers, [&](int c) {
        const CellOperators& co = ops.cell[c];
        const int nq = static_cast<int>(co.vol_wts.size());
        Scratch& s = scratch();
        s.sx.resize(size_t(nq) * nst);
        s.dsx.resize(size_t(nq) * nst);
        s.dsy.resize(size_t(nq) * nst);
        for (int q = 0; q < nq; ++q)
            basis.eval_st_spatial_grad(mesh.barycenter[c], mesh.h[c], co.vol_pts[q],
                                       &s.sx[size_t(q) * nst], &s.dsx[size_t(q) * nst],
                                       &s.dsy[size_t(q) * nst]);
        using RowMat = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
        Eigen::Map<const RowMat> SX(s.sx.data(), nq, nst);
        Eigen::Map<const RowMat> DX(s.dsx.data(), nq, nst);
        Eigen::Map<const RowMat> DY(s.dsy.data(), nq, nst);

        s.C.setZero(nst, 5);
        Eigen::Map<const RowMat> Cn(f.cell(c), ns, 5);
        for (int j = 0; j < ns; ++j) s.C.row(basis.st_of_space[j]) = Cn.row(j);
        s.rhs0.noalias() = co.F0 * Cn;

        bool bad = false;
        int it = 0;
        for (it = 1; it <= max_iter; ++it) {
            s.B.setZero(nst, 5);
            for (int m = 0; m < nt && !bad; ++m) {
                const double* tp = &tau_pow[size_t(m) * (basis.N + 1)];
                s.Cm.resize(nst, 5);
                for (int l = 0; l < nst; ++l) s.Cm.row(l) = tp[basis.rt[l]] * s.C.row(l);
                s.Vq.noalias() = SX * s.Cm;
                s.Gx.noalias() = DX * s.Cm;
                s.Gy.noalias() = DY * s.Cm;
                s.Hq.resize(nq, 5);
                for (int q = 0; q < nq; ++q) {
                    const Vec5 V = s.Vq.row(q);
                    if (!(V[0] > kAdmissibleEps) || !(V[3] > kAdmissibleEps) ||
                        !V.allFinite()) {
                        bad = true;
                        break;
                    }
                    s.Hq.row(q) = co.vol_wts[q] *
                                  noncons_product(V, s.Gx.row(q), s.Gy.row(q), eos).transpose();
                }
                if (bad) break;
                const double wm = dt * tq.weights[m];
                s.Cm.noalias() = SX.transpose() * s.Hq;  // reuse as moment buffer
                for (int l = 0; l < nst; ++l) s.B.row(l) += wm * tp[basis.rt[l]] * s.Cm.row(l);
            }
            if (bad) break;
            s.Cnew = co.K1_lu.solve(s.rhs0 - s.B);
            s.diff = s.Cnew - s.C;
            double num = 0.0, den = 0.0;
            for (int v = 0; v < 5; ++v) {
                num += s.diff.col(v).dot(co.Mhat * s.diff.col(v));
                den += s.C.col(v).dot(co.Mhat * s.C.col(v));
            }
            s.C = s.Cnew;
            if (std::sqrt(std::max(num, 0.0)) < 1e-7 * std::sqrt(std::max(den, 1e-300))) break;
        }
        out.iterations[c] = std::min(it, max_iter);
        if (bad || it > max_iter || !s.C.allFinite()) {
            out.failed[c] = 1;
            // fall back to the constant-in-time lift so neighbors see finite traces
            s.C.setZero(nst, 5);
            for (int j = 0; j < ns; ++j) s.C.row(basis.st_of_space[j]) = Cn.row(j);
        }
        Eigen::Map<RowMat>(out.cell(c), nst, 5) = s.C;
    });
}

PathMatrices path_dissipation(const PrimState& vm, const PrimState& vp, const Vec2& n,
                              const EosClosure& eos, const QuadRule& s_rule) {
    PathMatrices out;
    out.Dminus.setZero();
    out.Dplus.setZero();
    out.Dabs.setZero();
    const Vec5 a = vm.vec(), b = vp.vec();
    for (int i = 0; i < s_rule.size(); ++i) {
        const double s = s_rule.points[i].x;
        PrimState mid = PrimState::from(a + s * (b - a));
        if (!admissible(mid)) {
            out.ok = false;
            mid = floored(mid);
        }
        const SignedJac sj = signed_jac_prim(mid, eos, n);
        const double w = s_rule.weights[i];
        out.Dminus += w * sj.neg;
        out.Dplus += w * sj.pos;
        out.Dabs += w * sj.abs;
    }
    return out;
}

PathMatrices path_dissipation(const PrimState& vm, const PrimState& vp, const Vec2& n,
                              const EosClosure& eos) {
    static const QuadRule rule3 = gauss_legendre_01(3);
    return path_dissipation(vm, vp, n, eos, rule3);
}

void corrector(const Mesh& mesh, const DiscOps& ops, const DGField& fn,
               const PredictorField& pf, const EosClosure& eos, double dt,
               const BoundaryData& bdata, int workers, DGField& candidate,
               std::vector<std::uint8_t>& bad_face, TraceRecord* traces) {
    const BasisSet& basis = ops.basis;
    const int ns = basis.n_space;
    const int nst = basis.n_spacetime;
    const int nf = mesh.num_faces();
    const int nqf = ops.n_face_qp;

    const QuadRule tq = gauss_legendre_01(basis.N + 1);
    const int nt = tq.size();

    if (traces) {
        traces->n_time = nt;
        traces->n_qp = nqf;
        traces->time_wts.resize(nt);
        for (int m = 0; m < nt; ++m) traces->time_wts[m] = tq.weights[m];
        traces->data.assign(size_t(nf) * nt * nqf * 10, 0.0);
    }

    bad_face.assign(nf, 0);
    // per-face moment contributions for the two adjacent cells
    std::vector<double> fmom(size_t(nf) * 2 * ns * 5, 0.0);

    parallel_for(nf, workers, [&](int f) {
        const Face& fc = mesh.faces[f];
        double phiL[8][10], phiR[8][10];
        for (int q = 0; q < nqf; ++q) {
            const Vec2 x = ops.face_pts[size_t(f) * nqf + q];
            basis.eval_space(mesh.barycenter[fc.left], mesh.h[fc.left], x, phiL[q]);
            if (fc.right >= 0)
                basis.eval_space(mesh.barycenter[fc.right], mesh.h[fc.right], x, phiR[q]);
        }
        double* mL = &fmom[size_t(f) * 2 * ns * 5];
        double* mR = mL + size_t(ns) * 5;
        for (int m = 0; m < nt; ++m) {
            const double tau = tq.points[m].x;
            for (int q = 0; q < nqf; ++q) {
                const Vec2 x = ops.face_pts[size_t(f) * nqf + q];
                const double w = ops.face_wts[size_t(f) * nqf + q] * tq.weights[m] * dt;
                const Vec5 vm5 = eval_predictor(mesh, ops, pf, fc.left, x, tau);
                const PrimState vm = PrimState::from(vm5);
                PrimState vp;
                if (fc.right >= 0) {
                    vp = PrimState::from(eval_predictor(mesh, ops, pf, fc.right, x, tau));
                } else {
                    vp = ghost_state(vm, fc.normal, fc.tag,
                                     bdata.face_qp_state[size_t(f) * nqf + q]);
                }
                if (traces) {
                    double* t = traces->at(f, m, q);
                    for (int v = 0; v < 5; ++v) {
                        t[v] = vm5[v];
                        t[5 + v] = vp.vec()[v];
                    }
                }
                const PathMatrices pm = path_dissipation(vm, vp, fc.normal, eos);
                if (!pm.ok) bad_face[f] = 1;
                const Vec5 jump = vp.vec() - vm5;
                const Vec5 dl = pm.Dminus * jump;
                for (int a = 0; a < ns; ++a)
                    for (int v = 0; v < 5; ++v) mL[a * 5 + v] += w * phiL[q][a] * dl[v];
                if (fc.right >= 0) {
                    const Vec5 dr = pm.Dplus * jump;
                    for (int a = 0; a < ns; ++a)
                        for (int v = 0; v < 5; ++v) mR[a * 5 + v] += w * phiR[q][a] * dr[v];
                }
            }
        }
    });

    candidate = fn;
    std::vector<double> tau_pow(size_t(nt) * (basis.N + 1));
    for (int m = 0; m < nt; ++m) {
        tau_pow[m * (basis.N + 1)] = 1.0;
        for (int k = 1; k <= basis.N; ++k)
            tau_pow[m * (basis.N + 1) + k] = tau_pow[m * (basis.N + 1) + k - 1] * tq.points[m].x;
    }

    parallel_for(mesh.num_cells(), workers, [&](int c) {
        const CellOperators& co = ops.cell[c];
        const int nq = static_cast<int>(co.vol_wts.size());
        Scratch& s = scratch();
        s.sx.resize(size_t(nq) * nst);
        s.dsx.resize(size_t(nq) * nst);
        s.dsy.resize(size_t(nq) * nst);
        for (int q = 0; q < nq; ++q)
            basis.eval_st_spatial_grad(mesh.barycenter[c], mesh.h[c], co.vol_pts[q],
                                       &s.sx[size_t(q) * nst], &s.dsx[size_t(q) * nst],
                                       &s.dsy[size_t(q) * nst]);
        using RowMat = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
        Eigen::Map<const RowMat> SX(s.sx.data(), nq, nst);
        Eigen::Map<const RowMat> DX(s.dsx.data(), nq, nst);
        Eigen::Map<const RowMat> DY(s.dsy.data(), nq, nst);
        Eigen::Map<const RowMat> Cst(pf.cell(c), nst, 5);

        std::vector<double> phiq(size_t(nq) * ns);
        for (int q = 0; q < nq; ++q)
            basis.eval_space(mesh.barycenter[c], mesh.h[c], co.vol_pts[q], &phiq[size_t(q) * ns]);

        Eigen::MatrixXd b = Eigen::MatrixXd::Zero(ns, 5);
        for (int m = 0; m < nt; ++m) {
            const double* tp = &tau_pow[size_t(m) * (basis.N + 1)];
            s.Cm.resize(nst, 5);
            for (int l = 0; l < nst; ++l) s.Cm.row(l) = tp[basis.rt[l]] * Cst.row(l);
            s.Vq.noalias() = SX * s.Cm;
            s.Gx.noalias() = DX * s.Cm;
            s.Gy.noalias() = DY * s.Cm;
            const double wm = dt * tq.weights[m];
            for (int q = 0; q < nq; ++q) {
                Vec5 V = s.Vq.row(q);
                if (!(V[0] > kAdmissibleEps)) V[0] = kAdmissibleEps;
                if (!(V[3] > kAdmissibleEps)) V[3] = kAdmissibleEps;
                const Vec5 H = noncons_product(V, s.Gx.row(q), s.Gy.row(q), eos);
                const double w = wm * co.vol_wts[q];
                const double* phi = &phiq[size_t(q) * ns];
                for (int a = 0; a < ns; ++a) b.row(a) += (w * phi[a]) * H.transpose();
            }
        }
        for (int k = mesh.cell_face_offsets[c]; k < mesh.cell_face_offsets[c + 1]; ++k) {
            const int f = mesh.cell_faces[k];
            const double* mom = &fmom[size_t(f) * 2 * ns * 5];
            if (mesh.cell_face_sign[k] < 0) mom += size_t(ns) * 5;
            for (int a = 0; a < ns; ++a)
                for (int v = 0; v < 5; ++v) b(a, v) += mom[a * 5 + v];
        }
        Eigen::MatrixXd dc = co.mass_llt.solve(b);
        double* out = candidate.cell(c);
        for (int a = 0; a < ns; ++a)
            for (int v = 0; v < 5; ++v) out[a * 5 + v] -= dc(a, v);
    });
}

}  // namespace qcdg
