#include "qcdg/subcell.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <set>
#include <stdexcept>

namespace qcdg {

SubcellGrid build_subcells(const Mesh& mesh, int N) {
    if (N < 1) throw MeshError("build_subcells: N must be >= 1");
    SubcellGrid g;
    g.degree = N;

    const int nc = mesh.num_cells();
    const int nmv = mesh.num_vertices();

    // Global vertex pool. Mesh vertices first, then one barycenter per cell,
    // then N-1 canonical subdivision points per mesh face (computed once, so
    // the two cells sharing a face index bit-identical coordinates), then
    // cell-local spoke and fan-interior points.
    g.verts = mesh.vertices;
    std::vector<int> bary_id(nc);
    for (int c = 0; c < nc; ++c) {
        bary_id[c] = static_cast<int>(g.verts.size());
        g.verts.push_back(mesh.barycenter[c]);
    }
    std::vector<int> face_pt0(mesh.num_faces(), -1);
    for (int f = 0; f < mesh.num_faces(); ++f) {
        const Face& fc = mesh.faces[f];
        const int a = std::min(fc.v0, fc.v1), b = std::max(fc.v0, fc.v1);
        face_pt0[f] = static_cast<int>(g.verts.size());
        for (int m = 1; m < N; ++m)
            g.verts.push_back(mesh.vertices[a] + (double(m) / N) * (mesh.vertices[b] - mesh.vertices[a]));
    }

    // face lookup by vertex pair
    std::map<std::pair<int, int>, int> edge_to_face;
    for (int f = 0; f < mesh.num_faces(); ++f)
        edge_to_face[std::minmax(mesh.faces[f].v0, mesh.faces[f].v1)] = f;

    g.cell_offsets.assign(nc + 1, 0);
    for (int c = 0; c < nc; ++c)
        g.cell_offsets[c + 1] = g.cell_offsets[c] + mesh.cell_size(c) * N * N;

    const int total = g.cell_offsets[nc];
    g.tri.assign(3 * total, -1);
    g.parent.resize(total);
    g.area.resize(total);
    g.centroid.resize(total);
    g.h.resize(total);

    int sub = 0;
    for (int c = 0; c < nc; ++c) {
        const int k = mesh.cell_size(c);
        const Vec2 xb = mesh.barycenter[c];

        std::vector<std::vector<int>> spoke(k);  // barycenter -> vertex, N-1 inner points
        for (int j = 0; j < k; ++j) {
            const Vec2 v = mesh.vertices[mesh.cell_vertex(c, j)];
            for (int m = 1; m < N; ++m) {
                spoke[j].push_back(static_cast<int>(g.verts.size()));
                g.verts.push_back(xb + (double(m) / N) * (v - xb));
            }
        }

        for (int j = 0; j < k; ++j) {
            const int vj = mesh.cell_vertex(c, j);
            const int vj1 = mesh.cell_vertex(c, (j + 1) % k);
            const int f = edge_to_face.at(std::minmax(vj, vj1));
            const Vec2 A = xb, B = mesh.vertices[vj], C = mesh.vertices[vj1];
            if (tri_area(A, B, C) <= 0.0)
                throw MeshError("build_subcells: non-convex cell " + std::to_string(c));

            // lattice (a,b): A + (a/N)(B-A) + (b/N)(C-A), a+b <= N
            std::vector<int> gid((N + 1) * (N + 2) / 2);
            auto idx = [N](int a, int b) { return a * (2 * N + 3 - a) / 2 + b; };
            for (int a = 0; a <= N; ++a)
                for (int b = 0; a + b <= N; ++b) {
                    int id;
                    if (a == 0 && b == 0) id = bary_id[c];
                    else if (a == N && b == 0) id = vj;
                    else if (a == 0 && b == N) id = vj1;
                    else if (b == 0) id = spoke[j][a - 1];
                    else if (a == 0) id = spoke[(j + 1) % k][b - 1];
                    else if (a + b == N) id = (vj < vj1) ? face_pt0[f] + (b - 1)
                                                         : face_pt0[f] + (N - b - 1);
                    else {
                        id = static_cast<int>(g.verts.size());
                        g.verts.push_back(A + (double(a) / N) * (B - A) + (double(b) / N) * (C - A));
                    }
                    gid[idx(a, b)] = id;
                }

            auto emit = [&](int i0, int i1, int i2) {
                g.tri[3 * sub] = i0;
                g.tri[3 * sub + 1] = i1;
                g.tri[3 * sub + 2] = i2;
                g.parent[sub] = c;
                const Vec2 p0 = g.verts[i0], p1 = g.verts[i1], p2 = g.verts[i2];
                g.area[sub] = tri_area(p0, p1, p2);
                g.centroid[sub] = (p0 + p1 + p2) * (1.0 / 3.0);
                g.h[sub] = std::sqrt(g.area[sub]);
                ++sub;
            };
            for (int a = 0; a + 1 <= N; ++a)
                for (int b = 0; a + b + 1 <= N; ++b) {
                    emit(gid[idx(a, b)], gid[idx(a + 1, b)], gid[idx(a, b + 1)]);
                    if (a + b + 2 <= N)
                        emit(gid[idx(a + 1, b)], gid[idx(a + 1, b + 1)], gid[idx(a, b + 1)]);
                }
        }
    }

    // Subfaces from subcell edges; shared edges match exactly through the
    // global vertex pool.
    std::map<std::pair<int, int>, int> edge_map;
    g.sub_face_ids.assign(3 * total, -1);
    g.sub_face_sign.assign(3 * total, 0);
    for (int s = 0; s < total; ++s) {
        for (int e = 0; e < 3; ++e) {
            const int a = g.tri[3 * s + e];
            const int b = g.tri[3 * s + (e + 1) % 3];
            auto key = std::minmax(a, b);
            auto it = edge_map.find(key);
            if (it == edge_map.end()) {
                SubFace sf;
                sf.v0 = a;
                sf.v1 = b;
                sf.left = s;
                const Vec2 t = g.verts[b] - g.verts[a];
                sf.length = norm(t);
                sf.normal = Vec2{t.y, -t.x} * (1.0 / sf.length);
                sf.midpoint = (g.verts[a] + g.verts[b]) * 0.5;
                const int id = static_cast<int>(g.subfaces.size());
                edge_map.emplace(key, id);
                g.subfaces.push_back(sf);
                g.sub_face_ids[3 * s + e] = id;
                g.sub_face_sign[3 * s + e] = +1;
            } else {
                SubFace& sf = g.subfaces[it->second];
                if (sf.right != -1)
                    throw MeshError("build_subcells: subface shared by more than two subcells");
                sf.right = s;
                g.sub_face_ids[3 * s + e] = it->second;
                g.sub_face_sign[3 * s + e] = -1;
            }
        }
    }

    // Tag subfaces lying on parent-cell boundaries: both endpoints on the
    // same mesh face (mesh vertices or that face's subdivision points).
    auto on_face = [&](int gid_pt, int f) {
        const Face& fc = mesh.faces[f];
        if (gid_pt == fc.v0 || gid_pt == fc.v1) return true;
        return N > 1 && gid_pt >= face_pt0[f] && gid_pt < face_pt0[f] + (N - 1);
    };
    for (SubFace& sf : g.subfaces) {
        const bool b0_mesh = sf.v0 < nmv, b1_mesh = sf.v1 < nmv;
        int cand = -1;
        if (!b0_mesh && sf.v0 >= nmv + nc) {
            // binary search over faces via face_pt0 is unnecessary; derive directly
            // from the contiguous block layout.
            int lo = 0, hi = mesh.num_faces() - 1;
            while (lo < hi) {
                int mid = (lo + hi + 1) / 2;
                if (face_pt0[mid] <= sf.v0) lo = mid; else hi = mid - 1;
            }
            cand = lo;
        } else if (!b1_mesh && sf.v1 >= nmv + nc) {
            int lo = 0, hi = mesh.num_faces() - 1;
            while (lo < hi) {
                int mid = (lo + hi + 1) / 2;
                if (face_pt0[mid] <= sf.v1) lo = mid; else hi = mid - 1;
            }
            cand = lo;
        } else if (b0_mesh && b1_mesh) {
            auto it = edge_to_face.find(std::minmax(sf.v0, sf.v1));
            if (it != edge_to_face.end()) cand = it->second;
        }
        if (cand >= 0 && on_face(sf.v0, cand) && on_face(sf.v1, cand)) {
            sf.parent_face = cand;
            if (mesh.faces[cand].right < 0) sf.tag = mesh.faces[cand].tag;
        }
    }

    // Vertex-neighbor adjacency over subcells.
    std::vector<std::vector<int>> v2s(g.verts.size());
    for (int s = 0; s < total; ++s)
        for (int e = 0; e < 3; ++e) v2s[g.tri[3 * s + e]].push_back(s);
    g.vneigh_offsets.assign(total + 1, 0);
    std::vector<std::vector<int>> nb(total);
    for (int s = 0; s < total; ++s) {
        std::set<int> set;
        for (int e = 0; e < 3; ++e)
            for (int o : v2s[g.tri[3 * s + e]])
                if (o != s) set.insert(o);
        nb[s].assign(set.begin(), set.end());
        g.vneigh_offsets[s + 1] = g.vneigh_offsets[s] + static_cast<int>(nb[s].size());
    }
    g.vneigh.reserve(g.vneigh_offsets[total]);
    for (int s = 0; s < total; ++s) g.vneigh.insert(g.vneigh.end(), nb[s].begin(), nb[s].end());

    return g;
}

}  // namespace qcdg
