#include "gaze3d/io.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

namespace gaze3d::io {

namespace {

std::string format_g9(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.9g", v);
    return buf;
}

std::string format_g17(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

struct PlyProperty {
    std::string type;
    std::string name;
    bool is_list = false;
};

struct PlyElement {
    std::string name;
    std::size_t count = 0;
    std::vector<PlyProperty> properties;
};

struct PlyHeader {
    std::vector<std::string> comments;
    std::vector<PlyElement> elements;
};

// Parses the ASCII header; leaves the stream at the first data row.
PlyHeader parse_header(std::istream& in, const fs::path& path) {
    std::string line;
    auto fail = [&](const std::string& why) -> void {
        throw Error(path.string() + ": " + why);
    };

    if (!std::getline(in, line) || line.substr(0, 3) != "ply") fail("not a PLY file");
    if (!std::getline(in, line)) fail("unexpected end of header");
    {
        std::istringstream ls(line);
        std::string kw, fmt, ver;
        ls >> kw >> fmt >> ver;
        if (kw != "format") fail("expected 'format' after 'ply'");
        if (fmt != "ascii") fail("only ASCII PLY is supported");
    }

    PlyHeader header;
    while (std::getline(in, line)) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        std::istringstream ls(line);
        std::string kw;
        ls >> kw;
        if (kw == "end_header") return header;
        if (kw == "comment") {
            std::string rest;
            std::getline(ls, rest);
            if (!rest.empty() && rest.front() == ' ') rest.erase(0, 1);
            header.comments.push_back(rest);
        } else if (kw == "element") {
            PlyElement element;
            ls >> element.name >> element.count;
            header.elements.push_back(element);
        } else if (kw == "property") {
            if (header.elements.empty()) fail("property before any element");
            PlyProperty prop;
            ls >> prop.type;
            if (prop.type == "list") {
                std::string count_type, value_type;
                ls >> count_type >> value_type >> prop.name;
                prop.is_list = true;
            } else {
                ls >> prop.name;
            }
            header.elements.back().properties.push_back(prop);
        } else if (kw == "obj_info" || kw.empty()) {
            continue;
        } else {
            fail("unrecognized header line: " + line);
        }
    }
    fail("missing end_header");
    return header;
}

double token_to_double(const std::string& token, const fs::path& path) {
    double v = 0.0;
    const auto [ptr, ec] = std::from_chars(token.data(), token.data() + token.size(), v);
    if (ec != std::errc() || ptr != token.data() + token.size() || !std::isfinite(v))
        throw Error(path.string() + ": malformed numeric token '" + token + "'");
    return v;
}

long long token_to_int(const std::string& token, const fs::path& path) {
    long long v = 0;
    const auto [ptr, ec] = std::from_chars(token.data(), token.data() + token.size(), v);
    if (ec != std::errc() || ptr != token.data() + token.size())
        throw Error(path.string() + ": expected an integer, got '" + token + "'");
    return v;
}

std::vector<std::string> row_tokens(std::istream& in, const fs::path& path) {
    std::string line;
    while (std::getline(in, line)) {
        std::istringstream ls(line);
        std::vector<std::string> tokens;
        std::string tok;
        while (ls >> tok) tokens.push_back(tok);
        if (!tokens.empty()) return tokens;
    }
    throw Error(path.string() + ": unexpected end of file in data section");
}

int property_index(const PlyElement& element, const std::string& name) {
    for (std::size_t i = 0; i < element.properties.size(); ++i)
        if (element.properties[i].name == name) return static_cast<int>(i);
    return -1;
}

std::string ply_header_text(std::size_t vertex_count, std::size_t face_count,
                            const std::vector<std::string>& comments, bool colors, bool regions,
                            bool weights, bool with_faces) {
    std::ostringstream out;
    out << "ply\nformat ascii 1.0\n";
    for (const std::string& c : comments) out << "comment " << c << "\n";
    out << "element vertex " << vertex_count << "\n";
    out << "property float x\nproperty float y\nproperty float z\n";
    if (colors) out << "property uchar red\nproperty uchar green\nproperty uchar blue\n";
    if (regions) out << "property int region\n";
    if (weights) out << "property float weight\n";
    if (with_faces) {
        out << "element face " << face_count << "\n";
        out << "property list uchar int vertex_indices\n";
    }
    out << "end_header\n";
    return out.str();
}

} // namespace

void write_mesh(const SurfaceMesh& mesh, const fs::path& path) {
    mesh.validate();
    std::ostringstream out;
    out << ply_header_text(mesh.vertices.size(), mesh.faces.size(), {}, mesh.has_colors(),
                           mesh.has_region_labels(), false, true);
    for (std::size_t i = 0; i < mesh.vertices.size(); ++i) {
        const Point3& v = mesh.vertices[i];
        out << format_g9(v.x) << " " << format_g9(v.y) << " " << format_g9(v.z);
        if (mesh.has_colors()) {
            for (double c : mesh.vertex_colors[i]) {
                const int byte = static_cast<int>(std::lround(std::clamp(c, 0.0, 1.0) * 255.0));
                out << " " << byte;
            }
        }
        if (mesh.has_region_labels()) out << " " << mesh.region_labels[i];
        out << "\n";
    }
    for (const auto& f : mesh.faces) out << "3 " << f[0] << " " << f[1] << " " << f[2] << "\n";
    atomic_write_bytes(path, out.str());
}

SurfaceMesh read_mesh(const fs::path& path) {
    std::ifstream in(path);
    if (!in) throw Error(path.string() + ": cannot open file");
    const PlyHeader header = parse_header(in, path);

    const PlyElement* vertex_elem = nullptr;
    const PlyElement* face_elem = nullptr;
    for (const PlyElement& e : header.elements) {
        if (e.name == "vertex") vertex_elem = &e;
        if (e.name == "face") face_elem = &e;
    }
    if (!vertex_elem) throw Error(path.string() + ": PLY has no vertex element");

    const int ix = property_index(*vertex_elem, "x");
    const int iy = property_index(*vertex_elem, "y");
    const int iz = property_index(*vertex_elem, "z");
    if (ix < 0 || iy < 0 || iz < 0)
        throw Error(path.string() + ": vertex element lacks x/y/z properties");
    const int ired = property_index(*vertex_elem, "red");
    const int igreen = property_index(*vertex_elem, "green");
    const int iblue = property_index(*vertex_elem, "blue");
    const int iregion = property_index(*vertex_elem, "region");
    const bool colors = ired >= 0 && igreen >= 0 && iblue >= 0;

    SurfaceMesh mesh;
    mesh.vertices.reserve(vertex_elem->count);
    for (std::size_t i = 0; i < vertex_elem->count; ++i) {
        const std::vector<std::string> tokens = row_tokens(in, path);
        if (tokens.size() < vertex_elem->properties.size())
            throw Error(path.string() + ": vertex row has too few values");
        mesh.vertices.push_back({token_to_double(tokens[ix], path),
                                 token_to_double(tokens[iy], path),
                                 token_to_double(tokens[iz], path)});
        if (colors) {
            std::array<double, 3> rgb;
            const int channels[3] = {ired, igreen, iblue};
            for (int c = 0; c < 3; ++c) {
                const long long byte = token_to_int(tokens[channels[c]], path);
                if (byte < 0 || byte > 255)
                    throw Error(path.string() + ": color component " + tokens[channels[c]] +
                                " outside [0, 255]");
                rgb[c] = static_cast<double>(byte) / 255.0;
            }
            mesh.vertex_colors.push_back(rgb);
        }
        if (iregion >= 0)
            mesh.region_labels.push_back(static_cast<int>(token_to_int(tokens[iregion], path)));
    }

    if (face_elem) {
        mesh.faces.reserve(face_elem->count);
        for (std::size_t i = 0; i < face_elem->count; ++i) {
            const std::vector<std::string> tokens = row_tokens(in, path);
            const long long count = token_to_int(tokens[0], path);
            if (count != 3)
                throw Error(path.string() + ": non-triangular face (got " +
                            std::to_string(count) + " vertices)");
            if (tokens.size() < 4) throw Error(path.string() + ": face row has too few values");
            std::array<std::uint32_t, 3> face;
            for (int c = 0; c < 3; ++c) {
                const long long idx = token_to_int(tokens[c + 1], path);
                if (idx < 0 || static_cast<std::size_t>(idx) >= mesh.vertices.size())
                    throw Error(path.string() + ": face index " + tokens[c + 1] +
                                " out of range");
                face[c] = static_cast<std::uint32_t>(idx);
            }
            mesh.faces.push_back(face);
        }
    }
    mesh.validate();
    return mesh;
}

void write_cloud(const FixationCloud3D& cloud, const std::optional<ScaleSpec>& scale,
                 const fs::path& path) {
    cloud.validate();
    std::vector<std::string> comments;
    if (scale) {
        comments.push_back("scale_min " + format_g17(scale->min[0]) + " " +
                           format_g17(scale->min[1]) + " " + format_g17(scale->min[2]));
        comments.push_back("scale_range " + format_g17(scale->range[0]) + " " +
                           format_g17(scale->range[1]) + " " + format_g17(scale->range[2]));
    }
    comments.push_back("dropped " + std::to_string(cloud.dropped_count));
    for (const FixationProvenance& p : cloud.provenance)
        comments.push_back("fix t=" + format_g17(p.timestamp) +
                           " frame=" + std::to_string(p.frame_index) + " obs=" + p.observer_id);

    std::ostringstream out;
    out << ply_header_text(cloud.points.size(), 0, comments, false, false, true, false);
    for (std::size_t i = 0; i < cloud.points.size(); ++i) {
        const Point3& p = cloud.points[i];
        out << format_g9(p.x) << " " << format_g9(p.y) << " " << format_g9(p.z) << " "
            << format_g9(cloud.weights[i]) << "\n";
    }
    atomic_write_bytes(path, out.str());
}

CloudFile read_cloud(const fs::path& path) {
    std::ifstream in(path);
    if (!in) throw Error(path.string() + ": cannot open file");
    const PlyHeader header = parse_header(in, path);

    const PlyElement* vertex_elem = nullptr;
    for (const PlyElement& e : header.elements)
        if (e.name == "vertex") vertex_elem = &e;
    if (!vertex_elem) throw Error(path.string() + ": PLY has no vertex element");

    const int ix = property_index(*vertex_elem, "x");
    const int iy = property_index(*vertex_elem, "y");
    const int iz = property_index(*vertex_elem, "z");
    if (ix < 0 || iy < 0 || iz < 0)
        throw Error(path.string() + ": vertex element lacks x/y/z properties");
    const int iweight = property_index(*vertex_elem, "weight");

    CloudFile file;
    std::array<double, 3> scale_min {};
    std::array<double, 3> scale_range {};
    bool have_min = false, have_range = false;

    for (const std::string& comment : header.comments) {
        std::istringstream cs(comment);
        std::string tag;
        cs >> tag;
        if (tag == "scale_min") {
            cs >> scale_min[0] >> scale_min[1] >> scale_min[2];
            have_min = !cs.fail();
        } else if (tag == "scale_range") {
            cs >> scale_range[0] >> scale_range[1] >> scale_range[2];
            have_range = !cs.fail();
        } else if (tag == "dropped") {
            cs >> file.cloud.dropped_count;
        } else if (tag == "fix") {
            FixationProvenance prov;
            std::string field;
            while (cs >> field) {
                if (field.rfind("t=", 0) == 0)
                    prov.timestamp = token_to_double(field.substr(2), path);
                else if (field.rfind("frame=", 0) == 0)
                    prov.frame_index = static_cast<int>(token_to_double(field.substr(6), path));
                else if (field.rfind("obs=", 0) == 0) {
                    std::string rest;
                    std::getline(cs, rest);
                    prov.observer_id = field.substr(4) + rest;
                    break;
                }
            }
            file.cloud.provenance.push_back(std::move(prov));
        }
    }
    if (have_min && have_range) file.scale = ScaleSpec {scale_min, scale_range};

    for (std::size_t i = 0; i < vertex_elem->count; ++i) {
        const std::vector<std::string> tokens = row_tokens(in, path);
        if (tokens.size() < vertex_elem->properties.size())
            throw Error(path.string() + ": vertex row has too few values");
        file.cloud.points.push_back({token_to_double(tokens[ix], path),
                                     token_to_double(tokens[iy], path),
                                     token_to_double(tokens[iz], path)});
        file.cloud.weights.push_back(iweight >= 0 ? token_to_double(tokens[iweight], path)
                                                  : 1.0);
    }
    if (file.cloud.provenance.size() != file.cloud.points.size())
        file.cloud.provenance.assign(file.cloud.points.size(), FixationProvenance {});
    file.cloud.validate();
    return file;
}

} // namespace gaze3d::io
