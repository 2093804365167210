#include "qcdg/quadrature.hpp"

#include <cmath>
#include <map>
#include <stdexcept>

namespace qcdg {

namespace {

// Appends the three barycentric permutations of (1-2a, a, a).
void orbit3(QuadRule& r, double a, double w) {
    r.points.push_back({a, a});
    r.points.push_back({1.0 - 2.0 * a, a});
    r.points.push_back({a, 1.0 - 2.0 * a});
    for (int i = 0; i < 3; ++i) r.weights.push_back(w);
}

// Appends the six barycentric permutations of (1-a-b, a, b).
void orbit6(QuadRule& r, double a, double b, double w) {
    const double c = 1.0 - a - b;
    r.points.push_back({a, b});
    r.points.push_back({b, a});
    r.points.push_back({a, c});
    r.points.push_back({c, a});
    r.points.push_back({b, c});
    r.points.push_back({c, b});
    for (int i = 0; i < 6; ++i) r.weights.push_back(w);
}

void centroid(QuadRule& r, double w) {
    r.points.push_back({1.0 / 3.0, 1.0 / 3.0});
    r.weights.push_back(w);
}

// Symmetric rules with positive weights (Dunavant 1985). Weights here are
// normalized to sum to 1; the reference-triangle measure 1/2 is applied after
// assembly. A request for degree 3 or 7 is served by the next rule up.
QuadRule make_triangle_rule(int degree) {
    QuadRule r;
    switch (degree) {
        case 0:
        case 1:
            r.degree = 1;
            centroid(r, 1.0);
            break;
        case 2:
            r.degree = 2;
            orbit3(r, 1.0 / 6.0, 1.0 / 3.0);
            break;
        case 3:
        case 4:
            r.degree = 4;
            orbit3(r, 0.445948490915965, 0.223381589678011);
            orbit3(r, 0.091576213509771, 0.109951743655322);
            break;
        case 5: {
            r.degree = 5;
            const double s15 = std::sqrt(15.0);
            centroid(r, 9.0 / 40.0);
            orbit3(r, (6.0 + s15) / 21.0, (155.0 + s15) / 1200.0);
            orbit3(r, (6.0 - s15) / 21.0, (155.0 - s15) / 1200.0);
            break;
        }
        case 6:
            r.degree = 6;
            orbit3(r, 0.249286745170910, 0.116786275726379);
            orbit3(r, 0.063089014491502, 0.050844906370207);
            orbit6(r, 0.310352451033785, 0.636502499121399, 0.082851075618374);
            break;
        case 7:
        case 8:
            r.degree = 8;
            centroid(r, 0.144315607677787);
            orbit3(r, 0.459292588292723, 0.095091634413245);
            orbit3(r, 0.170569307751760, 0.103217370534718);
            orbit3(r, 0.050547228317031, 0.032458497623198);
            orbit6(r, 0.263112829634638, 0.728492392955404, 0.027230314174435);
            break;
        case 9:
            r.degree = 9;
            centroid(r, 0.097135796282799);
            orbit3(r, 0.489682519198738, 0.031334700227139);
            orbit3(r, 0.437089591492937, 0.077827541004774);
            orbit3(r, 0.188203535619033, 0.079647738927210);
            orbit3(r, 0.044729513394453, 0.025577675658698);
            orbit6(r, 0.221962989160766, 0.741198598784498, 0.043283539377289);
            break;
        default:
            throw std::invalid_argument("triangle_rule: unsupported degree " +
                                        std::to_string(degree));
    }
    for (double& w : r.weights) w *= 0.5;
    return r;
}

}  // namespace

const QuadRule& triangle_rule(int degree) {
    if (degree < 0 || degree > 9)
        throw std::invalid_argument("triangle_rule: unsupported degree " +
                                    std::to_string(degree));
    static std::map<int, QuadRule> cache;
    auto it = cache.find(degree);
    if (it == cache.end()) it = cache.emplace(degree, make_triangle_rule(degree)).first;
    return it->second;
}

QuadRule gauss_legendre_01(int n) {
    if (n < 1) throw std::invalid_argument("gauss_legendre_01: n must be >= 1");
    QuadRule r;
    r.degree = 2 * n - 1;
    r.points.resize(n);
    r.weights.resize(n);
    for (int i = 0; i < n; ++i) {
        // Newton iteration on P_n over [-1,1], cosine initial guess.
        double x = std::cos(M_PI * (i + 0.75) / (n + 0.5));
        double dp = 0.0;
        for (int it = 0; it < 100; ++it) {
            double p0 = 1.0, p1 = x;
            for (int k = 2; k <= n; ++k) {
                const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
                p0 = p1;
                p1 = p2;
            }
            dp = n * (x * p1 - p0) / (x * x - 1.0);
            const double dx = p1 / dp;
            x -= dx;
            if (std::abs(dx) < 1e-16) break;
        }
        r.points[i] = {0.5 * (x + 1.0), 0.0};
        r.weights[i] = 1.0 / ((1.0 - x * x) * dp * dp);
    }
    return r;
}

const QuadRule& edge_rule(int degree) {
    if (degree < 0 || degree > 9)
        throw std::invalid_argument("edge_rule: unsupported degree " + std::to_string(degree));
    static std::map<int, QuadRule> cache;
    const int n = degree / 2 + 1;
    auto it = cache.find(n);
    if (it == cache.end()) it = cache.emplace(n, gauss_legendre_01(n)).first;
    return it->second;
}

MappedQuad map_to_triangle(const QuadRule& rule, const Vec2& a, const Vec2& b, const Vec2& c) {
    MappedQuad m;
    const double area = tri_area(a, b, c);
    m.points.reserve(rule.size());
    m.weights.reserve(rule.size());
    for (int q = 0; q < rule.size(); ++q) {
        const double u = rule.points[q].x, v = rule.points[q].y;
        m.points.push_back(a + u * (b - a) + v * (c - a));
        m.weights.push_back(2.0 * area * rule.weights[q]);
    }
    return m;
}

}  // namespace qcdg
