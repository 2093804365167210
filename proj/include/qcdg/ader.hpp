#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "qcdg/field.hpp"

namespace qcdg {

/// Boundary ghost data sampled from the case at setup time: a Dirichlet
/// state per boundary-face quadrature point and per boundary subface
/// midpoint (wall/outflow ghosts are built from the interior trace instead).
struct BoundaryData {
    std::vector<PrimState> face_qp_state;  // num_faces * n_face_qp (boundary entries only)
    std::vector<PrimState> subface_state;  // num_subfaces (boundary entries only)
};

/// Ghost trace for a boundary face: wall mirrors the normal velocity,
/// dirichlet returns the supplied state, outflow copies the interior trace.
PrimState ghost_state(const PrimState& inside, const Vec2& n, BcTag tag,
                      const PrimState& dirichlet);

/// Space-time predictor coefficients in the tau-parametrized slab basis,
/// [cell][st_mode][var]. The trace at tau = 0 reproduces the spatial
/// polynomial up to the fixed-point tolerance.
struct PredictorField {
    int nst = 0;
    double dt = 0.0;
    std::vector<double> coef;
    std::vector<std::uint8_t> failed;  // non-converged or inadmissible mid-iteration
    std::vector<int> iterations;

    const double* cell(int c) const { return coef.data() + size_t(c) * nst * 5; }
    double* cell(int c) { return coef.data() + size_t(c) * nst * 5; }
};

/// Value of cell c's predictor at physical point x and slab fraction tau.
Vec5 eval_predictor(const Mesh& mesh, const DiscOps& ops, const PredictorField& pf, int c,
                    const Vec2& x, double tau);

/// CFL time step: cfl * min_i |w_i| / ((2N+1) d lmax_i |dw_i|), with lmax_i
/// the largest wavespeed among the cell-average state and the corner values.
double compute_dt(const Mesh& mesh, const DiscOps& ops, const DGField& f, const EosClosure& eos,
                  double cfl);

/// Element-local fixed-point solve K1 v = F0 v^n - M H(v); tolerance 1e-7 on
/// the relative L2 increment, iteration cap 2(N+1)+2. Failures are flagged,
/// not thrown (the limiter forces those cells troubled).
void predict_all(const Mesh& mesh, const DiscOps& ops, const DGField& f, const EosClosure& eos,
                 double dt, int workers, PredictorField& out);

/// Path-integrated negative/positive Jacobian parts along the segment path
/// between two states. `ok` turns false if an interior path state is
/// inadmissible (the matrices are then built from floored states).
struct PathMatrices {
    Mat5 Dminus, Dplus, Dabs;
    bool ok = true;
};
PathMatrices path_dissipation(const PrimState& vm, const PrimState& vp, const Vec2& n,
                              const EosClosure& eos, const QuadRule& s_rule);
PathMatrices path_dissipation(const PrimState& vm, const PrimState& vp, const Vec2& n,
                              const EosClosure& eos);

/// Face traces recorded during the corrector for the conservation
/// diagnostics: per face, time node and quadrature point, the pair (v-, v+).
struct TraceRecord {
    int n_time = 0, n_qp = 0;
    std::vector<double> time_wts;                   // sum to 1
    std::vector<double> data;                       // [face][t][qp][side][5]
    double* at(int f, int m, int q) {
        return data.data() + (((size_t(f) * n_time + m) * n_qp + q) * 2) * 5;
    }
    const double* at(int f, int m, int q) const {
        return data.data() + (((size_t(f) * n_time + m) * n_qp + q) * 2) * 5;
    }
};

/// One-step path-integrated DG corrector producing the candidate field.
/// `bad_face[f]` is set when a path state on face f left the admissible set;
/// both adjacent cells are then forced troubled by the limiter.
void corrector(const Mesh& mesh, const DiscOps& ops, const DGField& fn,
               const PredictorField& pf, const EosClosure& eos, double dt,
               const BoundaryData& bdata, int workers, DGField& candidate,
               std::vector<std::uint8_t>& bad_face, TraceRecord* traces);

}  // namespace qcdg
