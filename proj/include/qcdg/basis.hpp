#pragma once

#include <vector>

#include <Eigen/Dense>

#include "qcdg/mesh.hpp"
#include "qcdg/quadrature.hpp"
#include "qcdg/subcell.hpp"

namespace qcdg {

/// Number of monomials of total degree <= N in d variables:
/// (1/d!) * prod_{m=1..d} (N+m).
int dof_count(int N, int d);

/// Modal Taylor basis in space and space-time for one polynomial degree.
///
/// Spatial functions are ((x-xb)/h)^p ((y-yb)/h)^q with 0 <= p+q <= N;
/// space-time functions additionally carry ((t-tn)/h)^r with p+q+r <= N,
/// so the space-time count is dof(N, 3).
struct BasisSet {
    int N = 1;
    int n_space = 0;      // dof(N, 2)
    int n_spacetime = 0;  // dof(N, 3)

    std::vector<int> px, qx;            // spatial multi-indices
    std::vector<int> pt, qt, rt;        // space-time multi-indices
    std::vector<int> st_of_space;       // spatial index -> space-time index with r=0

    explicit BasisSet(int N);

    /// phi at a physical point for a cell given (xb, h).
    void eval_space(const Vec2& xb, double h, const Vec2& x, double* phi) const;
    /// phi plus physical-space gradients.
    void eval_space_grad(const Vec2& xb, double h, const Vec2& x, double* phi, double* dphidx,
                         double* dphidy) const;
    /// theta at (x, t) with the paper's time scaling (t-tn)/h.
    void eval_spacetime(const Vec2& xb, double h, const Vec2& x, double t_minus_tn,
                        double* theta) const;
    /// Spatial factor of the space-time basis (the time power is applied by
    /// the caller, which lets the slab be parametrized by tau in [0,1]).
    void eval_st_spatial(const Vec2& xb, double h, const Vec2& x, double* sx) const;
    void eval_st_spatial_grad(const Vec2& xb, double h, const Vec2& x, double* sx, double* dsxdx,
                              double* dsxdy) const;
};

/// Per-cell dense operators for the ADER-DG update and the subcell
/// projection/reconstruction pair.
///
/// Space-time matrices are assembled on the unit time slab tau in [0,1]
/// (time powers tau^r); only the volume space-time product matrix picks up a
/// dt factor at use time.
struct CellOperators {
    Eigen::MatrixXd mass;        // n_space x n_space, SPD
    Eigen::LLT<Eigen::MatrixXd> mass_llt;
    Eigen::VectorXd phi_int;     // integral of each phi over the cell; phi_int[0] = |w|

    Eigen::MatrixXd K1;          // n_st x n_st (tau-form; dt-independent)
    Eigen::PartialPivLU<Eigen::MatrixXd> K1_lu;
    Eigen::MatrixXd F0;          // n_st x n_space
    Eigen::MatrixXd Mhat;        // n_st x n_st; time-slab product / dt

    Eigen::MatrixXd P;           // n_sub x n_space: modal -> subcell averages
    Eigen::MatrixXd R;           // n_space x n_sub: constrained least-squares inverse

    double mass_cond = 0.0;

    // volume quadrature mapped over the barycenter fan (weights sum to |w|)
    std::vector<Vec2> vol_pts;
    std::vector<double> vol_wts;
};

struct DiscOps {
    BasisSet basis;
    std::vector<CellOperators> cell;
    double max_mass_cond = 0.0;

    // face quadrature (shared by the two adjacent cells)
    int n_face_qp = 0;
    std::vector<Vec2> face_pts;      // num_faces * n_face_qp
    std::vector<double> face_wts;    // weights sum to the face length

    DiscOps(const Mesh& mesh, const SubcellGrid& sub, int N);
};

/// Subcell averages of a modal polynomial (operator P).
void project_to_subcells(const CellOperators& ops, const double* coeffs, int nvars,
                         double* averages);

/// Constrained least-squares fit of subcell averages (operator R); the mean
/// over the cell is matched exactly.
void reconstruct_from_subcells(const CellOperators& ops, const double* averages, int nvars,
                               double* coeffs);

}  // namespace qcdg
