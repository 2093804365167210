#include "qcdg/mesh.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <random>
#include <set>
#include <sstream>

#include "qcdg/quadrature.hpp"

namespace qcdg {

const char* bc_tag_name(BcTag t) {
    switch (t) {
        case BcTag::wall: return "wall";
        case BcTag::dirichlet: return "dirichlet";
        case BcTag::outflow: return "outflow";
        default: return "none";
    }
}

BcTag bc_tag_from_name(const std::string& s) {
    if (s == "wall") return BcTag::wall;
    if (s == "dirichlet") return BcTag::dirichlet;
    if (s == "outflow") return BcTag::outflow;
    throw MeshError("unknown boundary tag '" + s + "'");
}

void Mesh::build_geometry() {
    const int nc = num_cells();
    barycenter.resize(nc);
    area.resize(nc);
    h.resize(nc);
    perimeter.resize(nc);

    const QuadRule& vol = triangle_rule(4);  // exact for the quadratic gyration integrand

    for (int c = 0; c < nc; ++c) {
        const int k = cell_size(c);
        if (k < 3) throw MeshError("cell " + std::to_string(c) + " has fewer than 3 vertices");
        Vec2 xb{0.0, 0.0};
        for (int j = 0; j < k; ++j) xb += vertices[cell_vertex(c, j)];
        xb = xb * (1.0 / k);
        barycenter[c] = xb;

        double a_sum = 0.0, gyr = 0.0, per = 0.0;
        for (int j = 0; j < k; ++j) {
            const Vec2 p = vertices[cell_vertex(c, j)];
            const Vec2 q = vertices[cell_vertex(c, (j + 1) % k)];
            per += norm(q - p);
            const double a = tri_area(xb, p, q);
            if (a <= 0.0)
                throw MeshError("cell " + std::to_string(c) +
                                ": non-convex or clockwise (fan triangle area <= 0)");
            a_sum += a;
            MappedQuad mq = map_to_triangle(vol, xb, p, q);
            for (int qq = 0; qq < static_cast<int>(mq.weights.size()); ++qq) {
                const Vec2 d = mq.points[qq] - xb;
                gyr += mq.weights[qq] * (d.x * d.x + d.y * d.y);
            }
        }
        area[c] = a_sum;
        perimeter[c] = per;
        h[c] = std::sqrt(gyr / a_sum);
    }

    // Faces from directed cell edges. Each undirected edge must appear once
    // (boundary) or twice with opposite direction (interior).
    faces.clear();
    std::map<std::pair<int, int>, int> edge_to_face;
    for (int c = 0; c < nc; ++c) {
        const int k = cell_size(c);
        for (int j = 0; j < k; ++j) {
            const int a = cell_vertex(c, j);
            const int b = cell_vertex(c, (j + 1) % k);
            auto key = std::minmax(a, b);
            auto it = edge_to_face.find(key);
            if (it == edge_to_face.end()) {
                Face f;
                f.v0 = a;
                f.v1 = b;
                f.left = c;
                const Vec2 t = vertices[b] - vertices[a];
                f.length = norm(t);
                if (f.length <= 0.0) throw MeshError("zero-length edge in cell " + std::to_string(c));
                f.normal = Vec2{t.y, -t.x} * (1.0 / f.length);  // outward for ccw loops
                f.midpoint = (vertices[a] + vertices[b]) * 0.5;
                edge_to_face.emplace(key, static_cast<int>(faces.size()));
                faces.push_back(f);
            } else {
                Face& f = faces[it->second];
                if (f.right != -1)
                    throw MeshError("edge shared by more than two cells near cell " +
                                    std::to_string(c));
                if (f.v0 != b || f.v1 != a)
                    throw MeshError("inconsistent edge orientation between cells " +
                                    std::to_string(f.left) + " and " + std::to_string(c));
                f.right = c;
            }
        }
    }

    cell_face_offsets.assign(nc + 1, 0);
    for (const Face& f : faces) {
        ++cell_face_offsets[f.left + 1];
        if (f.right >= 0) ++cell_face_offsets[f.right + 1];
    }
    for (int c = 0; c < nc; ++c) cell_face_offsets[c + 1] += cell_face_offsets[c];
    cell_faces.resize(cell_face_offsets[nc]);
    cell_face_sign.resize(cell_face_offsets[nc]);
    std::vector<int> fill(nc, 0);
    for (int fi = 0; fi < num_faces(); ++fi) {
        const Face& f = faces[fi];
        int p = cell_face_offsets[f.left] + fill[f.left]++;
        cell_faces[p] = fi;
        cell_face_sign[p] = +1;
        if (f.right >= 0) {
            p = cell_face_offsets[f.right] + fill[f.right]++;
            cell_faces[p] = fi;
            cell_face_sign[p] = -1;
        }
    }

    // Vertex-neighbor adjacency.
    std::vector<std::vector<int>> v2c(num_vertices());
    for (int c = 0; c < nc; ++c)
        for (int j = 0; j < cell_size(c); ++j) v2c[cell_vertex(c, j)].push_back(c);
    vneigh_offsets.assign(nc + 1, 0);
    std::vector<std::vector<int>> nb(nc);
    for (int c = 0; c < nc; ++c) {
        std::set<int> s;
        for (int j = 0; j < cell_size(c); ++j)
            for (int o : v2c[cell_vertex(c, j)])
                if (o != c) s.insert(o);
        nb[c].assign(s.begin(), s.end());
        vneigh_offsets[c + 1] = vneigh_offsets[c] + static_cast<int>(nb[c].size());
    }
    vneigh.clear();
    vneigh.reserve(vneigh_offsets[nc]);
    for (int c = 0; c < nc; ++c) vneigh.insert(vneigh.end(), nb[c].begin(), nb[c].end());
}

Mesh generate_rect_mesh(const Rect& bounds, double target_h, double perturb, std::uint64_t seed) {
    if (bounds.width() <= 0.0 || bounds.height() <= 0.0)
        throw MeshError("generate_rect_mesh: degenerate bounds");
    if (target_h <= 0.0) throw MeshError("generate_rect_mesh: target_h must be positive");
    const double spacing = 3.0 * target_h;  // right triangles have h = leg/3
    const double short_side = std::min(bounds.width(), bounds.height());
    if (spacing > 3.0 * short_side)
        throw MeshError("generate_rect_mesh: target_h too large for the domain");
    if (perturb < 0.0 || perturb > 0.3)
        throw MeshError("generate_rect_mesh: perturb must lie in [0, 0.3]");

    const int nx = std::max(1, static_cast<int>(std::lround(bounds.width() / spacing)));
    const int ny = std::max(1, static_cast<int>(std::lround(bounds.height() / spacing)));
    const double dx = bounds.width() / nx;
    const double dy = bounds.height() / ny;

    Mesh m;
    m.vertices.resize((nx + 1) * (ny + 1));
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> jit(-perturb * target_h, perturb * target_h);
    for (int j = 0; j <= ny; ++j)
        for (int i = 0; i <= nx; ++i) {
            Vec2 p{bounds.x0 + i * dx, bounds.y0 + j * dy};
            if (perturb > 0.0 && i > 0 && i < nx && j > 0 && j < ny) {
                p.x += jit(rng);
                p.y += jit(rng);
            }
            m.vertices[j * (nx + 1) + i] = p;
        }

    auto vid = [nx](int i, int j) { return j * (nx + 1) + i; };
    m.cell_offsets.push_back(0);
    for (int j = 0; j < ny; ++j)
        for (int i = 0; i < nx; ++i) {
            const int a = vid(i, j), b = vid(i + 1, j), c = vid(i + 1, j + 1), d = vid(i, j + 1);
            m.cell_verts.insert(m.cell_verts.end(), {a, b, c});
            m.cell_offsets.push_back(static_cast<int>(m.cell_verts.size()));
            m.cell_verts.insert(m.cell_verts.end(), {a, c, d});
            m.cell_offsets.push_back(static_cast<int>(m.cell_verts.size()));
        }

    m.build_geometry();
    for (Face& f : m.faces)
        if (f.right < 0) f.tag = BcTag::wall;
    return m;
}

namespace {

[[noreturn]] void parse_fail(const std::string& path, int line, const std::string& what) {
    throw MeshError(path + ":" + std::to_string(line) + ": " + what);
}

}  // namespace

Mesh read_mesh(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw MeshError("cannot open mesh file '" + path + "'");
    int lineno = 0;
    auto next_line = [&](std::istringstream& ss) {
        std::string line;
        while (std::getline(in, line)) {
            ++lineno;
            if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
            ss = std::istringstream(line);
            return true;
        }
        return false;
    };

    std::istringstream ss;
    if (!next_line(ss)) parse_fail(path, lineno, "missing header");
    int nv = 0, nc = 0, nbf = 0;
    if (!(ss >> nv >> nc >> nbf) || nv < 3 || nc < 1 || nbf < 0)
        parse_fail(path, lineno, "bad header (expected 'NV NC NBF')");

    Mesh m;
    m.vertices.resize(nv);
    for (int i = 0; i < nv; ++i) {
        if (!next_line(ss)) parse_fail(path, lineno, "unexpected end of file in vertex list");
        if (!(ss >> m.vertices[i].x >> m.vertices[i].y))
            parse_fail(path, lineno, "bad vertex line");
    }
    for (int i = 0; i < nv; ++i)
        for (int j = i + 1; j < nv; ++j)
            if (m.vertices[i].x == m.vertices[j].x && m.vertices[i].y == m.vertices[j].y)
                throw MeshError(path + ": duplicate vertex " + std::to_string(j) +
                                " coincides with vertex " + std::to_string(i));

    m.cell_offsets.push_back(0);
    for (int c = 0; c < nc; ++c) {
        if (!next_line(ss)) parse_fail(path, lineno, "unexpected end of file in cell list");
        int k = 0;
        if (!(ss >> k) || k < 3) parse_fail(path, lineno, "bad cell vertex count");
        double a2 = 0.0;
        std::vector<int> loop(k);
        for (int j = 0; j < k; ++j) {
            if (!(ss >> loop[j]) || loop[j] < 0 || loop[j] >= nv)
                parse_fail(path, lineno, "bad vertex index in cell " + std::to_string(c));
        }
        for (int j = 0; j < k; ++j)
            a2 += cross(m.vertices[loop[j]], m.vertices[loop[(j + 1) % k]]);
        if (a2 <= 0.0)
            parse_fail(path, lineno,
                       "cell " + std::to_string(c) + " has clockwise orientation");
        m.cell_verts.insert(m.cell_verts.end(), loop.begin(), loop.end());
        m.cell_offsets.push_back(static_cast<int>(m.cell_verts.size()));
    }

    struct TaggedEdge {
        int v0, v1, line;
        BcTag tag;
    };
    std::vector<TaggedEdge> tagged(nbf);
    for (int i = 0; i < nbf; ++i) {
        if (!next_line(ss)) parse_fail(path, lineno, "unexpected end of file in boundary list");
        std::string tag;
        if (!(ss >> tagged[i].v0 >> tagged[i].v1 >> tag)) parse_fail(path, lineno, "bad boundary line");
        tagged[i].line = lineno;
        try {
            tagged[i].tag = bc_tag_from_name(tag);
        } catch (const MeshError&) {
            parse_fail(path, lineno, "unknown boundary tag '" + tag + "'");
        }
    }

    m.build_geometry();

    std::map<std::pair<int, int>, int> boundary_edges;
    for (int f = 0; f < m.num_faces(); ++f)
        if (m.faces[f].right < 0)
            boundary_edges[std::minmax(m.faces[f].v0, m.faces[f].v1)] = f;
    for (const TaggedEdge& e : tagged) {
        auto it = boundary_edges.find(std::minmax(e.v0, e.v1));
        if (it == boundary_edges.end())
            parse_fail(path, e.line, "dangling face (" + std::to_string(e.v0) + "," +
                                         std::to_string(e.v1) + ") is not a boundary edge");
        m.faces[it->second].tag = e.tag;
    }
    for (auto& [key, f] : boundary_edges)
        if (m.faces[f].tag == BcTag::none)
            throw MeshError(path + ": boundary edge (" + std::to_string(key.first) + "," +
                            std::to_string(key.second) + ") has no tag");
    return m;
}

void write_mesh(const Mesh& mesh, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw MeshError("cannot write mesh file '" + path + "'");
    std::vector<int> bfaces;
    for (int f = 0; f < mesh.num_faces(); ++f)
        if (mesh.faces[f].right < 0) bfaces.push_back(f);
    out << mesh.num_vertices() << " " << mesh.num_cells() << " " << bfaces.size() << "\n";
    char buf[80];
    for (const Vec2& v : mesh.vertices) {
        std::snprintf(buf, sizeof(buf), "%.17g %.17g\n", v.x, v.y);
        out << buf;
    }
    for (int c = 0; c < mesh.num_cells(); ++c) {
        out << mesh.cell_size(c);
        for (int j = 0; j < mesh.cell_size(c); ++j) out << " " << mesh.cell_vertex(c, j);
        out << "\n";
    }
    for (int f : bfaces)
        out << mesh.faces[f].v0 << " " << mesh.faces[f].v1 << " "
            << bc_tag_name(mesh.faces[f].tag == BcTag::none ? BcTag::wall : mesh.faces[f].tag)
            << "\n";
}

}  // namespace qcdg
