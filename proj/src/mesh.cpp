#include "reebsym/mesh.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <iomanip>
#include <map>
#include <sstream>

namespace reebsym {

namespace {

Vec3 sub(const Vec3& a, const Vec3& b) { return {a[0] - b[0], a[1] - b[1], a[2] - b[2]}; }

Vec3 cross(const Vec3& a, const Vec3& b) {
    return {a[1] * b[2] - a[2] * b[1], a[2] * b[0] - a[0] * b[2], a[0] * b[1] - a[1] * b[0]};
}

double norm(const Vec3& a) { return std::sqrt(a[0] * a[0] + a[1] * a[1] + a[2] * a[2]); }

double triangle_area(const Vec3& a, const Vec3& b, const Vec3& c) {
    return 0.5 * norm(cross(sub(b, a), sub(c, a)));
}

void recompute_areas(SphereMesh& mesh) {
    mesh.triangle_areas.resize(mesh.triangles.size());
    mesh.total_area = 0.0;
    for (std::size_t i = 0; i < mesh.triangles.size(); ++i) {
        const auto& t = mesh.triangles[i];
        mesh.triangle_areas[i] =
            triangle_area(mesh.vertices[t[0]], mesh.vertices[t[1]], mesh.vertices[t[2]]);
        mesh.total_area += mesh.triangle_areas[i];
    }
}

SphereMesh finalize(SphereMesh mesh) {
    recompute_areas(mesh);
    validate_sphere_topology(mesh);
    return normalize_total_area(std::move(mesh));
}

double get_param(const FieldParams& params, const std::string& key, double fallback) {
    auto it = params.find(key);
    return it == params.end() ? fallback : it->second;
}

}  // namespace

int SphereMesh::edge_count() const {
    std::map<std::pair<int, int>, int> edges;
    for (const auto& t : triangles)
        for (int k = 0; k < 3; ++k) {
            int a = t[k], b = t[(k + 1) % 3];
            ++edges[{std::min(a, b), std::max(a, b)}];
        }
    return static_cast<int>(edges.size());
}

std::vector<double> SphereMesh::vertex_masses() const {
    std::vector<double> m(vertices.size(), 0.0);
    for (std::size_t i = 0; i < triangles.size(); ++i)
        for (int v : triangles[i]) m[v] += triangle_areas[i] / 3.0;
    return m;
}

void validate_sphere_topology(const SphereMesh& mesh) {
    if (mesh.vertices.size() < 4 || mesh.triangles.empty())
        throw TopologyError("mesh is too small to be a closed surface");
    std::map<std::pair<int, int>, int> undirected;
    std::map<std::pair<int, int>, int> directed;
    int nv = mesh.vertex_count();
    for (const auto& t : mesh.triangles) {
        for (int k = 0; k < 3; ++k) {
            int a = t[k], b = t[(k + 1) % 3];
            if (a < 0 || b < 0 || a >= nv || b >= nv)
                throw ParseError("face references vertex out of range");
            if (a == b) throw DegenerateError("face repeats a vertex");
            ++undirected[{std::min(a, b), std::max(a, b)}];
            if (++directed[{a, b}] > 1)
                throw TopologyError("inconsistently oriented or non-manifold faces");
        }
    }
    for (const auto& [e, cnt] : undirected) {
        if (cnt == 1) throw TopologyError("boundary edge found; surface is not closed");
        if (cnt > 2) throw TopologyError("non-manifold edge found");
    }
    long long V = nv, E = static_cast<long long>(undirected.size()), F = mesh.triangle_count();
    if (V - E + F != 2)
        throw TopologyError("Euler characteristic is " + std::to_string(V - E + F) +
                            ", expected 2 (genus 0)");
    for (double a : mesh.triangle_areas)
        if (!(a > 0.0)) throw DegenerateError("zero-area triangle");
}

SphereMesh normalize_total_area(SphereMesh mesh) {
    recompute_areas(mesh);
    if (!(mesh.total_area > 0.0)) throw DegenerateError("mesh has zero total area");
    double s = 1.0 / std::sqrt(mesh.total_area);
    if (std::abs(s - 1.0) > 1e-16) {
        for (auto& v : mesh.vertices)
            for (auto& c : v) c *= s;
        recompute_areas(mesh);
    }
    return mesh;
}

SphereMesh load_mesh(const std::string& path) {
    auto dot = path.find_last_of('.');
    std::string ext = dot == std::string::npos ? "" : path.substr(dot + 1);
    for (auto& c : ext) c = static_cast<char>(std::tolower(c));
    if (ext == "off") return load_mesh(path, MeshFormat::off);
    if (ext == "obj") return load_mesh(path, MeshFormat::obj);
    throw ParseError("cannot infer mesh format from extension of " + path);
}

SphereMesh load_mesh(const std::string& path, MeshFormat format) {
    std::ifstream in(path);
    if (!in) throw ParseError("cannot open mesh file " + path);
    return load_mesh_stream(in, format);
}

namespace {

SphereMesh load_off(std::istream& in) {
    auto next_token = [&](std::string& tok) {
        while (in >> tok) {
            if (tok[0] == '#') {
                std::string rest;
                std::getline(in, rest);
                continue;
            }
            return true;
        }
        return false;
    };
    std::string tok;
    if (!next_token(tok) || tok != "OFF") throw ParseError("missing OFF header");
    long long nv, nf, ne;
    if (!(in >> nv >> nf >> ne)) throw ParseError("malformed OFF counts");
    if (nv <= 0 || nf <= 0) throw ParseError("OFF mesh is empty");
    SphereMesh mesh;
    mesh.vertices.resize(static_cast<std::size_t>(nv));
    for (auto& v : mesh.vertices)
        if (!(in >> v[0] >> v[1] >> v[2])) throw ParseError("malformed OFF vertex");
    mesh.triangles.reserve(static_cast<std::size_t>(nf));
    for (long long f = 0; f < nf; ++f) {
        int sides;
        if (!(in >> sides)) throw ParseError("malformed OFF face");
        if (sides != 3) throw ParseError("only triangular faces are supported");
        std::array<int, 3> t{};
        if (!(in >> t[0] >> t[1] >> t[2])) throw ParseError("malformed OFF face");
        mesh.triangles.push_back(t);
    }
    return mesh;
}

SphereMesh load_obj(std::istream& in) {
    SphereMesh mesh;
    std::string line;
    auto face_index = [&](const std::string& tok) {
        std::string head = tok.substr(0, tok.find('/'));
        long long idx;
        try {
            idx = std::stoll(head);
        } catch (...) {
            throw ParseError("malformed OBJ face index '" + tok + "'");
        }
        long long n = static_cast<long long>(mesh.vertices.size());
        long long zero_based = idx > 0 ? idx - 1 : n + idx;
        if (zero_based < 0 || zero_based >= n) throw ParseError("OBJ face index out of range");
        return static_cast<int>(zero_based);
    };
    while (std::getline(in, line)) {
        std::istringstream ls(line);
        std::string kind;
        if (!(ls >> kind) || kind[0] == '#') continue;
        if (kind == "v") {
            Vec3 v;
            if (!(ls >> v[0] >> v[1] >> v[2])) throw ParseError("malformed OBJ vertex");
            mesh.vertices.push_back(v);
        } else if (kind == "f") {
            std::vector<std::string> toks;
            std::string t;
            while (ls >> t) toks.push_back(t);
            if (toks.size() != 3) throw ParseError("only triangular faces are supported");
            mesh.triangles.push_back({face_index(toks[0]), face_index(toks[1]), face_index(toks[2])});
        }
        // all other record types are ignored
    }
    if (mesh.vertices.empty() || mesh.triangles.empty()) throw ParseError("OBJ mesh is empty");
    return mesh;
}

}  // namespace

SphereMesh load_mesh_stream(std::istream& in, MeshFormat format) {
    SphereMesh mesh = format == MeshFormat::off ? load_off(in) : load_obj(in);
    return finalize(std::move(mesh));
}

SphereMesh make_icosphere(int subdivisions) {
    if (subdivisions < 0 || subdivisions > 8)
        throw ResourceError("icosphere subdivisions must lie in [0, 8]");
    const double p = (1.0 + std::sqrt(5.0)) / 2.0;
    std::vector<Vec3> verts = {
        {-1, p, 0}, {1, p, 0},   {-1, -p, 0}, {1, -p, 0}, {0, -1, p},  {0, 1, p},
        {0, -1, -p}, {0, 1, -p}, {p, 0, -1},  {p, 0, 1},  {-p, 0, -1}, {-p, 0, 1}};
    std::vector<std::array<int, 3>> faces = {
        {0, 11, 5}, {0, 5, 1},  {0, 1, 7},   {0, 7, 10}, {0, 10, 11}, {1, 5, 9},  {5, 11, 4},
        {11, 10, 2}, {10, 7, 6}, {7, 1, 8},  {3, 9, 4},  {3, 4, 2},   {3, 2, 6},  {3, 6, 8},
        {3, 8, 9},  {4, 9, 5},  {2, 4, 11}, {6, 2, 10}, {8, 6, 7},   {9, 8, 1}};

    auto project = [](Vec3 v) {
        double n = norm(v);
        return Vec3{v[0] / n, v[1] / n, v[2] / n};
    };
    for (auto& v : verts) v = project(v);

    for (int step = 0; step < subdivisions; ++step) {
        std::map<std::pair<int, int>, int> midpoint;
        auto mid = [&](int a, int b) {
            auto key = std::make_pair(std::min(a, b), std::max(a, b));
            auto it = midpoint.find(key);
            if (it != midpoint.end()) return it->second;
            Vec3 m = {(verts[a][0] + verts[b][0]) / 2, (verts[a][1] + verts[b][1]) / 2,
                      (verts[a][2] + verts[b][2]) / 2};
            verts.push_back(project(m));
            int idx = static_cast<int>(verts.size()) - 1;
            midpoint.emplace(key, idx);
            return idx;
        };
        std::vector<std::array<int, 3>> next;
        next.reserve(faces.size() * 4);
        for (const auto& f : faces) {
            int ab = mid(f[0], f[1]), bc = mid(f[1], f[2]), ca = mid(f[2], f[0]);
            next.push_back({f[0], ab, ca});
            next.push_back({f[1], bc, ab});
            next.push_back({f[2], ca, bc});
            next.push_back({ab, bc, ca});
        }
        faces = std::move(next);
    }

    SphereMesh mesh;
    mesh.vertices = std::move(verts);
    mesh.triangles = std::move(faces);
    return finalize(std::move(mesh));
}

double field_mean(const SphereMesh& mesh, const ScalarField& field) {
    if (field.values.size() != mesh.vertices.size())
        throw DomainError("field size does not match mesh");
    auto mass = mesh.vertex_masses();
    double acc = 0.0;
    for (std::size_t i = 0; i < mass.size(); ++i) acc += mass[i] * field.values[i];
    return acc / mesh.total_area;
}

double field_osc(const ScalarField& field) {
    auto [lo, hi] = std::minmax_element(field.values.begin(), field.values.end());
    return *hi - *lo;
}

ScalarField normalize_mean_zero(const SphereMesh& mesh, ScalarField field) {
    // iterate to a bitwise fixpoint so a second application is a no-op
    for (int pass = 0; pass < 4; ++pass) {
        double m = field_mean(mesh, field);
        bool changed = false;
        for (auto& v : field.values) {
            double next = v - m;
            if (next != v) {
                v = next;
                changed = true;
            }
        }
        if (!changed) break;
    }
    return field;
}

ScalarField builtin_field(const SphereMesh& mesh, const std::string& name,
                          const FieldParams& params) {
    if (std::abs(mesh.total_area - 1.0) > 1e-9)
        throw DomainError("builtin fields require an area-normalized mesh");
    std::size_t n = mesh.vertices.size();
    ScalarField f;
    f.values.resize(n);

    auto rescaled_coord = [&](int axis) {
        double lo = mesh.vertices[0][axis], hi = lo;
        for (const auto& v : mesh.vertices) {
            lo = std::min(lo, v[axis]);
            hi = std::max(hi, v[axis]);
        }
        if (!(hi > lo)) throw DegenerateError("mesh is flat along the requested axis");
        std::vector<double> c(n);
        for (std::size_t i = 0; i < n; ++i)
            c[i] = (mesh.vertices[i][axis] - 0.5 * (lo + hi)) / (hi - lo);
        return c;
    };

    if (name == "height_z") {
        f.values = rescaled_coord(2);
    } else if (name == "height_x") {
        f.values = rescaled_coord(0);
    } else if (name == "quadratic_z") {
        auto c = rescaled_coord(2);
        for (std::size_t i = 0; i < n; ++i) f.values[i] = c[i] * c[i] - 1.0 / 12.0;
    } else if (name == "cubic_z") {
        auto c = rescaled_coord(2);
        for (std::size_t i = 0; i < n; ++i) f.values[i] = c[i] * c[i] * c[i] + c[i];
    } else if (name == "double_bump") {
        double amp1 = get_param(params, "amp1", 1.0);
        double amp2 = get_param(params, "amp2", 0.8);
        double width = get_param(params, "width", 0.9);
        double tilt = get_param(params, "tilt", 0.05);
        for (std::size_t i = 0; i < n; ++i) {
            const Vec3& v = mesh.vertices[i];
            double r = norm(v);
            Vec3 p = {v[0] / r, v[1] / r, v[2] / r};
            double d1 = (p[0] * p[0] + p[1] * p[1] + (p[2] - 1) * (p[2] - 1)) / (width * width);
            double d2 = ((p[0] - 1) * (p[0] - 1) + p[1] * p[1] + p[2] * p[2]) / (width * width);
            f.values[i] = amp1 * std::exp(-d1) + amp2 * std::exp(-d2) + tilt * p[1];
        }
    } else {
        throw UnknownFieldError("unknown builtin field '" + name + "'");
    }
    return normalize_mean_zero(mesh, std::move(f));
}

ScalarField load_field_csv(const SphereMesh& mesh, const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ParseError("cannot open field file " + path);
    return load_field_csv_stream(mesh, in);
}

ScalarField load_field_csv_stream(const SphereMesh& mesh, std::istream& in) {
    ScalarField f;
    f.values.assign(mesh.vertices.size(), 0.0);
    std::string line;
    while (std::getline(in, line)) {
        if (line.empty() || line[0] == '#') continue;
        std::istringstream ls(line);
        std::string idx_s, val_s;
        if (!std::getline(ls, idx_s, ',') || !std::getline(ls, val_s))
            throw ParseError("malformed field CSV line: " + line);
        int idx;
        double val;
        try {
            idx = std::stoi(idx_s);
            val = std::stod(val_s);
        } catch (...) {
            throw ParseError("malformed field CSV line: " + line);
        }
        if (idx < 0 || idx >= mesh.vertex_count())
            throw ParseError("field CSV vertex index out of range: " + idx_s);
        f.values[static_cast<std::size_t>(idx)] = val;
    }
    return f;
}

void write_mesh_off(const SphereMesh& mesh, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw ParseError("cannot write " + path);
    out << "OFF\n" << mesh.vertex_count() << ' ' << mesh.triangle_count() << ' '
        << mesh.edge_count() << '\n';
    out << std::setprecision(17);
    for (const auto& v : mesh.vertices) out << v[0] << ' ' << v[1] << ' ' << v[2] << '\n';
    for (const auto& t : mesh.triangles) out << "3 " << t[0] << ' ' << t[1] << ' ' << t[2] << '\n';
}

void write_field_csv(const ScalarField& field, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw ParseError("cannot write " + path);
    out << std::setprecision(17);
    for (std::size_t i = 0; i < field.values.size(); ++i) out << i << ',' << field.values[i] << '\n';
}

}  // namespace reebsym
