#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "qcdg/geom.hpp"

namespace qcdg {

enum class BcTag : std::uint8_t { none = 0, wall, dirichlet, outflow };

const char* bc_tag_name(BcTag t);
BcTag bc_tag_from_name(const std::string& s);

struct MeshError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct Face {
    int v0 = -1, v1 = -1;     // vertex ids
    int left = -1, right = -1;  // right = -1 on the domain boundary
    Vec2 normal;              // unit, pointing out of `left`
    Vec2 midpoint;
    double length = 0.0;
    BcTag tag = BcTag::none;  // boundary faces only
};

struct Rect {
    double x0 = 0.0, y0 = 0.0, x1 = 1.0, y1 = 1.0;
    double width() const { return x1 - x0; }
    double height() const { return y1 - y0; }
};

/// Immutable 2-D polygonal tessellation with geometry and connectivity.
///
/// Cells are counterclockwise vertex loops. The per-cell characteristic
/// length h is the radius of gyration about the vertex barycenter, computed
/// by quadrature so polygonal cells follow the same code path as triangles.
class Mesh {
  public:
    std::vector<Vec2> vertices;

    // cell -> vertex loop (CSR)
    std::vector<int> cell_offsets;  // size num_cells()+1
    std::vector<int> cell_verts;

    std::vector<Face> faces;

    // per-cell geometry
    std::vector<Vec2> barycenter;   // vertex average (paper's x_b)
    std::vector<double> area;
    std::vector<double> h;          // radius of gyration
    std::vector<double> perimeter;

    // cell -> incident faces (CSR); sign +1 when the cell is the face's left
    std::vector<int> cell_face_offsets;
    std::vector<int> cell_faces;
    std::vector<int> cell_face_sign;

    // cell -> cells sharing at least one vertex, self excluded (CSR)
    std::vector<int> vneigh_offsets;
    std::vector<int> vneigh;

    int num_cells() const { return static_cast<int>(cell_offsets.size()) - 1; }
    int num_vertices() const { return static_cast<int>(vertices.size()); }
    int num_faces() const { return static_cast<int>(faces.size()); }

    int cell_size(int c) const { return cell_offsets[c + 1] - cell_offsets[c]; }
    int cell_vertex(int c, int k) const { return cell_verts[cell_offsets[c] + k]; }

    /// Finalize geometry and connectivity from vertices + cell loops
    /// (+ boundary tags already set on faces when loaded from file).
    /// Throws MeshError on invalid input (zero/negative areas, non-convex
    /// cells, open cell boundaries).
    void build_geometry();
};

/// Structured right-triangle mesh of `bounds` aimed at cells whose radius of
/// gyration lands near target_h (grid spacing = 3*target_h). Interior nodes
/// are jittered by perturb*target_h using the given seed. All boundary faces
/// are tagged `wall`; the driver retags them per case.
Mesh generate_rect_mesh(const Rect& bounds, double target_h, double perturb = 0.0,
                        std::uint64_t seed = 0);

/// Plain-text mesh format: header "NV NC NBF", NV lines "x y", NC lines
/// "k v1 ... vk" (0-based, counterclockwise), NBF lines "v1 v2 tag" with
/// tag in {wall, dirichlet, outflow}.
Mesh read_mesh(const std::string& path);
void write_mesh(const Mesh& mesh, const std::string& path);

}  // namespace qcdg
