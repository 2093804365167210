#pragma once

#include <vector>

#include "qcdg/mesh.hpp"

namespace qcdg {

struct SubFace {
    int v0 = -1, v1 = -1;       // ids into SubcellGrid::verts
    int left = -1, right = -1;  // subcell ids; right = -1 on the domain boundary
    Vec2 normal;                // unit, out of `left`
    Vec2 midpoint;
    double length = 0.0;
    int parent_face = -1;       // mesh face id when the subface lies on a cell boundary
    BcTag tag = BcTag::none;    // inherited from the parent face on the domain boundary
};

/// Conforming sub-triangulation of every cell: the barycenter fan refined
/// N^2-fold, so a cell with N_k vertices carries N_k*N^2 subcells. Subcell
/// vertices on shared cell boundaries are identified exactly (single global
/// vertex pool), which makes the adjacency across parent faces watertight.
class SubcellGrid {
  public:
    int degree = 0;  // the N used for the refinement

    std::vector<Vec2> verts;

    // per subcell
    std::vector<int> tri;          // 3 vertex ids each, CCW
    std::vector<int> parent;       // parent cell id
    std::vector<double> area;
    std::vector<Vec2> centroid;
    std::vector<double> h;         // sqrt(area)

    // cell -> subcells (contiguous)
    std::vector<int> cell_offsets;

    std::vector<SubFace> subfaces;

    // subcell -> its 3 subfaces; sign +1 when the subcell is the face's left
    std::vector<int> sub_face_ids;   // 3 per subcell
    std::vector<int> sub_face_sign;  // 3 per subcell

    // subcell -> subcells sharing at least one vertex, self excluded (CSR)
    std::vector<int> vneigh_offsets;
    std::vector<int> vneigh;

    int num_subcells() const { return static_cast<int>(parent.size()); }
    int num_subfaces() const { return static_cast<int>(subfaces.size()); }
    int cell_begin(int c) const { return cell_offsets[c]; }
    int cell_end(int c) const { return cell_offsets[c + 1]; }
    int vertex_id(int s, int k) const { return tri[3 * s + k]; }
    Vec2 vertex(int s, int k) const { return verts[tri[3 * s + k]]; }
};

/// Throws MeshError for N < 1 or non-convex cells (overlapping fan triangles).
SubcellGrid build_subcells(const Mesh& mesh, int N);

}  // namespace qcdg
