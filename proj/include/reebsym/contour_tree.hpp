#pragma once

#include <vector>

#include "reebsym/mesh.hpp"
#include "reebsym/profile.hpp"
#include "reebsym/tree.hpp"

namespace reebsym {

struct CriticalPoint {
    int vertex;
    NodeKind kind;
    double value;
};

// Classifies every vertex by the sign changes of the field around its link
// under the (value, index) tie-break order. Saddles of multiplicity m are
// reported m times, so #minima - #saddles + #maxima = 2 on a sphere.
std::vector<CriticalPoint> critical_points(const SphereMesh& mesh, const ScalarField& field);

// Join/split sweep with union-find, merged into the contour tree. Node ids
// are mesh vertex indices; each edge carries the area of its preimage band
// as measure and the sublevel-area-within-band profile sampled at the vertex
// values inside the band.
MeasuredTree build_contour_tree(const SphereMesh& mesh, const ScalarField& field);

// PL-exact area of {H < t}.
double sublevel_area(const SphereMesh& mesh, const ScalarField& field, double t);

int count_reeb_edges(const MeasuredTree& tree);

// build_contour_tree followed by mean-zero renormalization and the
// combinatorial symmetrization.
EvenProfile symmetrize_field(const SphereMesh& mesh, const ScalarField& field);

}  // namespace reebsym
