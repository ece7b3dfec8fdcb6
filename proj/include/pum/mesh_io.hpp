#pragma once

// JSON mesh files: vertices, cells, faces with normals, optional periodic
// block. Coordinates round-trip exactly (shortest-round-trip doubles).

#include <string>

#include "pum/polygon_mesh.hpp"

namespace pum {

void write_polygon_mesh(const PolygonMesh& mesh, const std::string& path);
PolygonMesh read_polygon_mesh(const std::string& path);

}  // namespace pum
