#include "qcdg/system.hpp"

#include <cmath>

namespace qcdg {

ConsState prim_to_cons(const PrimState& V, const EosClosure& eos) {
    const double kappa = 0.5 * (V.u * V.u + V.v * V.v);
    ConsState Q;
    Q.rho = V.rho;
    Q.mx = V.rho * V.u;
    Q.my = V.rho * V.v;
    Q.E = V.p * eos.lambda(V.chi) + V.rho * kappa;
    Q.rho_chi = V.rho * V.chi;
    return Q;
}

PrimState cons_to_prim(const ConsState& Q, const EosClosure& eos) {
    if (!(std::isfinite(Q.rho) && Q.rho > kAdmissibleEps))
        throw AdmissibilityError("cons_to_prim: non-positive density", Q.rho);
    PrimState V;
    V.rho = Q.rho;
    V.u = Q.mx / Q.rho;
    V.v = Q.my / Q.rho;
    V.chi = Q.rho_chi / Q.rho;
    const double kappa = 0.5 * (V.u * V.u + V.v * V.v);
    V.p = (Q.E - Q.rho * kappa) / eos.lambda(V.chi);
    if (!(std::isfinite(V.p) && V.p > kAdmissibleEps))
        throw AdmissibilityError("cons_to_prim: non-positive pressure", V.p);
    return V;
}

double sound_speed(const PrimState& V, const EosClosure& eos) {
    return std::sqrt(eos.gamma_tilde(V.chi) * V.p / V.rho);
}

double max_wavespeed(const PrimState& V, const EosClosure& eos) {
    return std::sqrt(V.u * V.u + V.v * V.v) + sound_speed(V, eos);
}

void flux(const ConsState& Q, const EosClosure& eos, Vec5& F, Vec5& G) {
    const double u = Q.mx / Q.rho;
    const double v = Q.my / Q.rho;
    const double chi = Q.rho_chi / Q.rho;
    const double kappa = 0.5 * (u * u + v * v);
    const double p = (Q.E - Q.rho * kappa) / eos.lambda(chi);
    F << Q.mx, Q.mx * u + p, Q.my * u, u * (Q.E + p), Q.rho_chi * u;
    G << Q.my, Q.mx * v, Q.my * v + p, v * (Q.E + p), Q.rho_chi * v;
}

Vec5 flux_normal(const PrimState& V, const EosClosure& eos, const Vec2& n) {
    const double un = V.u * n.x + V.v * n.y;
    const double E = V.p * eos.lambda(V.chi) + 0.5 * V.rho * (V.u * V.u + V.v * V.v);
    Vec5 f;
    f << V.rho * un, V.rho * V.u * un + V.p * n.x, V.rho * V.v * un + V.p * n.y,
        un * (E + V.p), V.rho * V.chi * un;
    return f;
}

Mat5 jac_prim(const PrimState& V, const EosClosure& eos, const Vec2& n) {
    const double un = V.u * n.x + V.v * n.y;
    const double gt_p = eos.gamma_tilde(V.chi) * V.p;
    Mat5 A = Mat5::Zero();
    A(0, 0) = un;
    A(0, 1) = V.rho * n.x;
    A(0, 2) = V.rho * n.y;
    A(1, 1) = un;
    A(1, 3) = n.x / V.rho;
    A(2, 2) = un;
    A(2, 3) = n.y / V.rho;
    A(3, 1) = gt_p * n.x;
    A(3, 2) = gt_p * n.y;
    A(3, 3) = un;
    A(4, 4) = un;
    return A;
}

Mat5 dcons_dprim(const PrimState& V, const EosClosure& eos) {
    const double kappa = 0.5 * (V.u * V.u + V.v * V.v);
    Mat5 T = Mat5::Zero();
    T(0, 0) = 1.0;
    T(1, 0) = V.u;
    T(1, 1) = V.rho;
    T(2, 0) = V.v;
    T(2, 2) = V.rho;
    T(3, 0) = kappa;
    T(3, 1) = V.rho * V.u;
    T(3, 2) = V.rho * V.v;
    T(3, 3) = eos.lambda(V.chi);
    T(3, 4) = eos.beta(V.p, V.chi);
    T(4, 0) = V.chi;
    T(4, 4) = V.rho;
    return T;
}

Mat5 roe_avg_dcons_dprim(const PrimState& V1, const PrimState& V2, const EosClosure& eos) {
    const double rho = 0.5 * (V1.rho + V2.rho);
    const double u = 0.5 * (V1.u + V2.u);
    const double v = 0.5 * (V1.v + V2.v);
    const double p = 0.5 * (V1.p + V2.p);
    const double chi = 0.5 * (V1.chi + V2.chi);
    const double kappa = 0.25 * (V1.u * V1.u + V1.v * V1.v + V2.u * V2.u + V2.v * V2.v);
    // Arithmetic-average lambda and the divided difference of p*lambda(chi);
    // written with the per-closure formulas so both reduce continuously to
    // the single-state Jacobian when V1 = V2.
    double lam_bar, beta_bar;
    if (eos.kind == EosClosure::Kind::A) {
        lam_bar = chi / (eos.gamma - 1.0);
        beta_bar = p / (eos.gamma - 1.0);
    } else {
        const double gt1 = V1.chi * eos.gamma - 1.0;
        const double gt2 = V2.chi * eos.gamma - 1.0;
        lam_bar = 0.5 * (1.0 / gt1 + 1.0 / gt2);
        beta_bar = -eos.gamma * p / (gt1 * gt2);
    }
    Mat5 T = Mat5::Zero();
    T(0, 0) = 1.0;
    T(1, 0) = u;
    T(1, 1) = rho;
    T(2, 0) = v;
    T(2, 2) = rho;
    T(3, 0) = kappa;
    T(3, 1) = rho * u;
    T(3, 2) = rho * v;
    T(3, 3) = lam_bar;
    T(3, 4) = beta_bar;
    T(4, 0) = chi;
    T(4, 4) = rho;
    return T;
}

EigenSystem eig_prim(const PrimState& V, const EosClosure& eos, const Vec2& n) {
    const double c = sound_speed(V, eos);
    if (!std::isfinite(c)) throw AdmissibilityError("eig_prim: non-finite sound speed", c);
    const double un = V.u * n.x + V.v * n.y;
    const double rho = V.rho, c2 = c * c;

    EigenSystem es;
    es.lambda << un - c, un, un, un, un + c;

    Mat5& R = es.right;
    R.setZero();
    // acoustic pair
    R(0, 0) = rho;  R(1, 0) = -c * n.x;  R(2, 0) = -c * n.y;  R(3, 0) = rho * c2;
    R(0, 4) = rho;  R(1, 4) = c * n.x;   R(2, 4) = c * n.y;   R(3, 4) = rho * c2;
    // contact space: density, transverse velocity, marker
    R(0, 1) = 1.0;
    R(1, 2) = -n.y;  R(2, 2) = n.x;
    R(4, 3) = 1.0;

    Mat5& L = es.left;
    L.setZero();
    L(0, 1) = -n.x / (2.0 * c);  L(0, 2) = -n.y / (2.0 * c);  L(0, 3) = 1.0 / (2.0 * rho * c2);
    L(4, 1) = n.x / (2.0 * c);   L(4, 2) = n.y / (2.0 * c);   L(4, 3) = 1.0 / (2.0 * rho * c2);
    L(1, 0) = 1.0;               L(1, 3) = -1.0 / c2;
    L(2, 1) = -n.y;              L(2, 2) = n.x;
    L(3, 4) = 1.0;
    return es;
}

SignedJac signed_jac_prim(const PrimState& V, const EosClosure& eos, const Vec2& n) {
    const double c = sound_speed(V, eos);
    if (!std::isfinite(c))
        throw AdmissibilityError("signed_jac_prim: non-finite sound speed", c);
    const double un = V.u * n.x + V.v * n.y;
    const double rho = V.rho, c2 = c * c;

    // rank-1 acoustic projectors r*l^T; the contact projector is I minus both
    Vec5 rm, lm, rp, lp;
    rm << rho, -c * n.x, -c * n.y, rho * c2, 0.0;
    lm << 0.0, -n.x / (2.0 * c), -n.y / (2.0 * c), 1.0 / (2.0 * rho * c2), 0.0;
    rp << rho, c * n.x, c * n.y, rho * c2, 0.0;
    lp << 0.0, n.x / (2.0 * c), n.y / (2.0 * c), 1.0 / (2.0 * rho * c2), 0.0;

    const Mat5 Pm = rm * lm.transpose();
    const Mat5 Pp = rp * lp.transpose();
    const Mat5 P0 = Mat5::Identity() - Pm - Pp;

    auto assemble = [&](auto f) -> Mat5 {
        return f(un - c) * Pm + f(un) * P0 + f(un + c) * Pp;
    };
    SignedJac s;
    s.neg = assemble([](double x) { return std::min(x, 0.0); });
    s.pos = assemble([](double x) { return std::max(x, 0.0); });
    s.abs = assemble([](double x) { return std::abs(x); });
    return s;
}

Vec5 noncons_product(const Vec5& V, const Vec5& dVdx, const Vec5& dVdy, const EosClosure& eos) {
    const double rho = V[0], u = V[1], v = V[2], p = V[3], chi = V[4];
    const double gt_p = eos.gamma_tilde(chi) * p;
    Vec5 H;
    H[0] = u * dVdx[0] + rho * dVdx[1] + v * dVdy[0] + rho * dVdy[2];
    H[1] = u * dVdx[1] + dVdx[3] / rho + v * dVdy[1];
    H[2] = u * dVdx[2] + v * dVdy[2] + dVdy[3] / rho;
    H[3] = gt_p * (dVdx[1] + dVdy[2]) + u * dVdx[3] + v * dVdy[3];
    H[4] = u * dVdx[4] + v * dVdy[4];
    return H;
}

}  // namespace qcdg
