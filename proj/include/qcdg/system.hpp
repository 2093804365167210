#pragma once

#include <array>
#include <stdexcept>
#include <string>

#include <Eigen/Dense>

#include "qcdg/geom.hpp"

namespace qcdg {

using Vec5 = Eigen::Matrix<double, 5, 1>;
using Mat5 = Eigen::Matrix<double, 5, 5>;

/// Shared positivity floor: density/pressure are admissible iff strictly
/// above this value (same constant the limiter uses).
inline constexpr double kAdmissibleEps = 1e-12;

struct AdmissibilityError : std::runtime_error {
    double value;
    AdmissibilityError(const std::string& what, double v)
        : std::runtime_error(what + " (value " + std::to_string(v) + ")"), value(v) {}
};

/// Physical state (rho, u, v, p, chi).
struct PrimState {
    double rho = 1.0, u = 0.0, v = 0.0, p = 1.0, chi = 1.0;

    Vec5 vec() const { return Vec5{rho, u, v, p, chi}; }
    static PrimState from(const Vec5& w) { return {w[0], w[1], w[2], w[3], w[4]}; }
};

/// Conserved state (rho, rho*u, rho*v, rho*E, rho*chi).
struct ConsState {
    double rho = 1.0, mx = 0.0, my = 0.0, E = 1.0, rho_chi = 1.0;

    Vec5 vec() const { return Vec5{rho, mx, my, E, rho_chi}; }
    static ConsState from(const Vec5& w) { return {w[0], w[1], w[2], w[3], w[4]}; }
};

/// Ideal-gas closure for the two-material marker.
///
/// Variant A advects chi = (gamma-1)/(gamma_j-1) and uses
/// lambda(chi) = chi/(gamma-1); variant B advects chi = gamma_j/gamma with
/// gamma_tilde = chi*gamma. Both close the EOS as
/// p = (gamma_tilde - 1)(rhoE - rho*kappa).
struct EosClosure {
    enum class Kind { A, B };
    Kind kind = Kind::A;
    double gamma = 1.4;     // reference adiabatic index
    double gamma1 = 1.4;    // per-material indices
    double gamma2 = 1.4;

    static EosClosure single_phase(double g = 1.4) { return {Kind::A, g, g, g}; }
    static EosClosure make(Kind k, double g, double g1, double g2) { return {k, g, g1, g2}; }

    double chi_of_material(int j) const {
        const double gj = (j == 1) ? gamma1 : gamma2;
        return kind == Kind::A ? (gamma - 1.0) / (gj - 1.0) : gj / gamma;
    }
    double lambda(double chi) const {
        return kind == Kind::A ? chi / (gamma - 1.0) : 1.0 / (chi * gamma - 1.0);
    }
    double gamma_tilde(double chi) const {
        return kind == Kind::A ? 1.0 + (gamma - 1.0) / chi : chi * gamma;
    }
    /// dBeta = p * d(lambda)/d(chi), the marker column of the energy row of dQ/dV.
    double beta(double p, double chi) const {
        if (kind == Kind::A) return p / (gamma - 1.0);
        const double l = lambda(chi);
        return -gamma * p * l * l;
    }
};

ConsState prim_to_cons(const PrimState& V, const EosClosure& eos);
PrimState cons_to_prim(const ConsState& Q, const EosClosure& eos);  // throws AdmissibilityError

double sound_speed(const PrimState& V, const EosClosure& eos);
/// |velocity| + c.
double max_wavespeed(const PrimState& V, const EosClosure& eos);

/// Conservative flux tensor columns F (x) and G (y).
void flux(const ConsState& Q, const EosClosure& eos, Vec5& F, Vec5& G);
/// F*nx + G*ny evaluated from a primitive state.
Vec5 flux_normal(const PrimState& V, const EosClosure& eos, const Vec2& n);

/// Quasi-linear Jacobian A_V*nx + B_V*ny of the primitive-variable form.
Mat5 jac_prim(const PrimState& V, const EosClosure& eos, const Vec2& n);

/// dQ/dV at a single state.
Mat5 dcons_dprim(const PrimState& V, const EosClosure& eos);

/// Two-state average of dQ/dV satisfying Q(V2) - Q(V1) = T * (V2 - V1) exactly.
Mat5 roe_avg_dcons_dprim(const PrimState& V1, const PrimState& V2, const EosClosure& eos);

struct EigenSystem {
    Vec5 lambda;  // {un-c, un, un, un, un+c}
    Mat5 right;   // columns are right eigenvectors
    Mat5 left;    // rows are left eigenvectors, left*right = I
};
EigenSystem eig_prim(const PrimState& V, const EosClosure& eos, const Vec2& n);

/// Negative/positive parts and absolute value of jac_prim, split through the
/// analytic eigenstructure: f(A) = sum_k f(lambda_k) r_k l_k^T.
struct SignedJac {
    Mat5 neg, pos, abs;
};
SignedJac signed_jac_prim(const PrimState& V, const EosClosure& eos, const Vec2& n);

/// H = A_V dV/dx + B_V dV/dy evaluated from pointwise values and gradients.
Vec5 noncons_product(const Vec5& V, const Vec5& dVdx, const Vec5& dVdy, const EosClosure& eos);

inline bool admissible(const PrimState& V) {
    return std::isfinite(V.rho) && std::isfinite(V.p) && std::isfinite(V.u) &&
           std::isfinite(V.v) && std::isfinite(V.chi) && V.rho > kAdmissibleEps &&
           V.p > kAdmissibleEps;
}

}  // namespace qcdg
