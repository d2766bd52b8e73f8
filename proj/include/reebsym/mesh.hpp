#pragma once

#include <array>
#include <iosfwd>
#include <map>
#include <string>
#include <vector>

#include "reebsym/errors.hpp"

namespace reebsym {

using Vec3 = std::array<double, 3>;

/// Closed triangulated genus-0 surface. Positions are scaled on construction
/// so the triangle areas sum to 1 (the probability-measure convention used
/// throughout).
struct SphereMesh {
    std::vector<Vec3> vertices;
    std::vector<std::array<int, 3>> triangles;
    std::vector<double> triangle_areas;
    double total_area = 0.0;

    int vertex_count() const { return static_cast<int>(vertices.size()); }
    int triangle_count() const { return static_cast<int>(triangles.size()); }
    int edge_count() const;

    // 1/3 of the incident triangle areas per vertex; sums to total_area.
    std::vector<double> vertex_masses() const;
};

enum class MeshFormat { off, obj };

SphereMesh load_mesh(const std::string& path);
SphereMesh load_mesh(const std::string& path, MeshFormat format);
SphereMesh load_mesh_stream(std::istream& in, MeshFormat format);

// Icosahedron subdivided n times, vertices projected to the round sphere,
// then area-normalized. Guarded at n <= 8.
SphereMesh make_icosphere(int subdivisions);

// Scales vertex positions so the total area becomes 1.
SphereMesh normalize_total_area(SphereMesh mesh);

// Validates closedness (every edge in exactly two triangles, consistent
// orientation), Euler characteristic 2, and positive triangle areas.
void validate_sphere_topology(const SphereMesh& mesh);

/// Per-vertex real values attached to a mesh of matching vertex count.
struct ScalarField {
    std::vector<double> values;
};

using FieldParams = std::map<std::string, double>;

// Builtin analytic fields: height_z, height_x, quadratic_z, cubic_z,
// double_bump. Height-style fields are affinely rescaled so the value range
// is [-1/2, 1/2] (on the round sphere the induced area coordinate then spans
// [-1/2, 1/2] as well); all results are mean-zero normalized.
ScalarField builtin_field(const SphereMesh& mesh, const std::string& name,
                          const FieldParams& params = {});

// Subtracts the mass-weighted mean, iterated to an exact fixpoint so the
// operation is exactly idempotent.
ScalarField normalize_mean_zero(const SphereMesh& mesh, ScalarField field);

double field_mean(const SphereMesh& mesh, const ScalarField& field);
double field_osc(const ScalarField& field);

// CSV lines "vertex_index,value"; unlisted vertices default to 0.
ScalarField load_field_csv(const SphereMesh& mesh, const std::string& path);
ScalarField load_field_csv_stream(const SphereMesh& mesh, std::istream& in);

void write_mesh_off(const SphereMesh& mesh, const std::string& path);
void write_field_csv(const ScalarField& field, const std::string& path);

}  // namespace reebsym
