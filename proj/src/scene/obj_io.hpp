#pragma once

#include <string>

#include "scene/mesh.hpp"

namespace airforge {

// ASCII OBJ subset: v / vn / vt / f records, faces triangulated as fans.
// Missing normals are recomputed from the faces, missing UVs are
// planar-projected from the mesh bounds. Parse failures carry the 1-based
// line number of the offending record.
Mesh load_obj(const std::string &path);

// Emits v/vt/vn/f records with 6 decimal places.
void write_obj(const std::string &path, const Mesh &mesh);

}  // namespace airforge
