#include "pum/mesh_io.hpp"

#include <fstream>
#include <stdexcept>

#include <json.hpp>

namespace pum {

using nlohmann::json;

void write_polygon_mesh(const PolygonMesh& mesh, const std::string& path) {
    json j;
    j["domain"] = {mesh.domain.lo.x, mesh.domain.lo.y, mesh.domain.hi.x, mesh.domain.hi.y};
    auto& jv = j["vertices"] = json::array();
    for (const Vec2& v : mesh.vertices) jv.push_back({v.x, v.y});
    j["cells"] = mesh.cells;
    auto& jf = j["faces"] = json::array();
    for (const PolygonFace& f : mesh.faces)
        jf.push_back({{"a", f.a}, {"b", f.b}, {"normal", {f.normal.x, f.normal.y}}});
    if (mesh.periodic_hint) {
        const PeriodicHint& h = *mesh.periodic_hint;
        j["periodic"] = {{"lattice",
                          {{h.lattice[0].x, h.lattice[0].y}, {h.lattice[1].x, h.lattice[1].y}}},
                         {"sigma", h.sigma},
                         {"pattern_size", h.pattern_size}};
    }
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot open " + path + " for writing");
    out << j.dump(1) << "\n";
}

PolygonMesh read_polygon_mesh(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open " + path);
    json j;
    in >> j;
    const auto& d = j.at("domain");
    Box domain{{d.at(0).get<double>(), d.at(1).get<double>()},
               {d.at(2).get<double>(), d.at(3).get<double>()}};
    std::vector<Vec2> verts;
    for (const auto& v : j.at("vertices"))
        verts.push_back({v.at(0).get<double>(), v.at(1).get<double>()});
    std::vector<std::vector<int>> cells = j.at("cells").get<std::vector<std::vector<int>>>();
    PolygonMesh mesh = build_polygon_mesh(std::move(verts), std::move(cells), domain);
    if (j.contains("faces") && j["faces"].size() != mesh.faces.size())
        throw std::runtime_error("face count mismatch in " + path);
    if (j.contains("periodic")) {
        const auto& p = j["periodic"];
        PeriodicHint h;
        h.lattice[0] = {p.at("lattice").at(0).at(0).get<double>(),
                        p.at("lattice").at(0).at(1).get<double>()};
        h.lattice[1] = {p.at("lattice").at(1).at(0).get<double>(),
                        p.at("lattice").at(1).at(1).get<double>()};
        h.sigma = p.at("sigma").get<std::vector<std::array<int, 3>>>();
        h.pattern_size = p.at("pattern_size").get<int>();
        mesh.periodic_hint = std::move(h);
    }
    return mesh;
}

}  // namespace pum
