#pragma once

#include <vector>

#include "qcdg/geom.hpp"

namespace qcdg {

/// Quadrature rule on a reference element.
///
/// Triangle rules live on the unit right triangle (0,0)-(1,0)-(0,1) and their
/// weights sum to 1/2; edge rules live on [0,1] and their weights sum to 1.
/// All shipped rules have strictly positive weights.
struct QuadRule {
    std::vector<Vec2> points;      // edge rules use only .x
    std::vector<double> weights;
    int degree = 0;                // every polynomial up to this total degree is exact

    int size() const { return static_cast<int>(weights.size()); }
};

/// Symmetric positive rule on the unit right triangle, exact at least to `degree`.
/// Supported requests: 0 <= degree <= 9.
const QuadRule& triangle_rule(int degree);

/// Gauss-Legendre rule on [0,1], exact at least to `degree` (0 <= degree <= 9).
const QuadRule& edge_rule(int degree);

/// Gauss-Legendre nodes/weights on [0,1] for a given point count (n >= 1).
QuadRule gauss_legendre_01(int n);

/// Physical quadrature points of a triangle rule mapped onto triangle (a,b,c);
/// the mapped weights sum to the triangle area.
struct MappedQuad {
    std::vector<Vec2> points;
    std::vector<double> weights;
};
MappedQuad map_to_triangle(const QuadRule& rule, const Vec2& a, const Vec2& b, const Vec2& c);

}  // namespace qcdg
