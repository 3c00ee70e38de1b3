#include "gaze3d/io.hpp"

#include <nlohmann/json.hpp>

#include <bit>
#include <charconv>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <sstream>

namespace gaze3d::io {

using nlohmann::json;

namespace {

std::string read_file_bytes(const fs::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error(path.string() + ": cannot open file");
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

std::string trim(const std::string& s) {
    const auto begin = s.find_first_not_of(" \t\r\n");
    if (begin == std::string::npos) return {};
    const auto end = s.find_last_not_of(" \t\r\n");
    return s.substr(begin, end - begin + 1);
}

std::vector<std::string> split(const std::string& line, char sep) {
    std::vector<std::string> fields;
    std::size_t start = 0;
    while (true) {
        const std::size_t pos = line.find(sep, start);
        if (pos == std::string::npos) {
            fields.push_back(line.substr(start));
            return fields;
        }
        fields.push_back(line.substr(start, pos - start));
        start = pos + 1;
    }
}

double parse_double(const std::string& text, const fs::path& path, std::size_t line,
                    const char* column) {
    const std::string t = trim(text);
    double value = 0.0;
    const auto [ptr, ec] = std::from_chars(t.data(), t.data() + t.size(), value);
    if (ec != std::errc() || ptr != t.data() + t.size() || !std::isfinite(value)) {
        std::ostringstream msg;
        msg << path.string() << ": malformed number '" << text << "' in column " << column
            << " at line " << line;
        throw Error(msg.str());
    }
    return value;
}

} // namespace

void atomic_write_bytes(const fs::path& path, const std::string& bytes) {
    if (path.has_parent_path()) fs::create_directories(path.parent_path());
    const fs::path tmp = path.string() + ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw Error(tmp.string() + ": cannot open for writing");
        out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
        if (!out) throw Error(tmp.string() + ": write failed");
    }
    fs::rename(tmp, path);
}

// --- fixation logs -------------------------------------------------------

static const char* kFixationHeader = "timestamp,col,row,duration,observer_id";

std::vector<FixationRecord> read_fixations(const fs::path& path) {
    const std::string bytes = read_file_bytes(path);
    std::istringstream in(bytes);
    std::string line;
    if (!std::getline(in, line) || trim(line) != kFixationHeader)
        throw Error(path.string() + ": expected header '" + kFixationHeader + "'");

    std::vector<FixationRecord> records;
    std::size_t line_no = 1;
    while (std::getline(in, line)) {
        ++line_no;
        if (trim(line).empty()) continue;
        const std::vector<std::string> fields = split(line, ',');
        if (fields.size() != 5) {
            std::ostringstream msg;
            msg << path.string() << ": expected 5 fields at line " << line_no << " (got "
                << fields.size() << ")";
            throw Error(msg.str());
        }
        FixationRecord rec;
        rec.timestamp = parse_double(fields[0], path, line_no, "timestamp");
        if (rec.timestamp < 0.0) {
            std::ostringstream msg;
            msg << path.string() << ": negative timestamp at line " << line_no;
            throw Error(msg.str());
        }
        rec.col = parse_double(fields[1], path, line_no, "col");
        rec.row = parse_double(fields[2], path, line_no, "row");
        if (!trim(fields[3]).empty()) {
            const double d = parse_double(fields[3], path, line_no, "duration");
            if (d < 0.0) {
                std::ostringstream msg;
                msg << path.string() << ": negative duration at line " << line_no;
                throw Error(msg.str());
            }
            rec.duration = d;
        }
        rec.observer_id = trim(fields[4]);
        records.push_back(std::move(rec));
    }
    return records;
}

void write_fixations(const std::vector<FixationRecord>& fixations, const fs::path& path) {
    std::ostringstream out;
    out << kFixationHeader << "\n";
    char buf[96];
    for (const FixationRecord& f : fixations) {
        if (f.observer_id.find_first_of(",\r\n") != std::string::npos)
            throw Error("observer id '" + f.observer_id + "' cannot contain commas or newlines");
        std::snprintf(buf, sizeof(buf), "%.9g,%.9g,%.9g,", f.timestamp, f.col, f.row);
        out << buf;
        if (f.duration) {
            std::snprintf(buf, sizeof(buf), "%.9g", *f.duration);
            out << buf;
        }
        out << "," << f.observer_id << "\n";
    }
    atomic_write_bytes(path, out.str());
}

// --- scale sidecars ------------------------------------------------------

void write_scale_sidecar(const ScaleSpec& scale, const fs::path& json_path) {
    json j;
    j["min"] = scale.min;
    j["range"] = scale.range;
    atomic_write_bytes(json_path, j.dump(2) + "\n");
}

ScaleSpec read_scale_sidecar(const fs::path& json_path) {
    if (!fs::exists(json_path)) throw Error(json_path.string() + ": missing sidecar");
    json j;
    try {
        j = json::parse(read_file_bytes(json_path));
    } catch (const json::exception& e) {
        throw Error(json_path.string() + ": invalid sidecar JSON: " + e.what());
    }
    if (!j.contains("min") || !j.contains("range"))
        throw Error(json_path.string() + ": sidecar must contain 'min' and 'range'");
    ScaleSpec scale;
    for (int axis = 0; axis < 3; ++axis) {
        scale.min[axis] = j["min"].at(axis).get<double>();
        scale.range[axis] = j["range"].at(axis).get<double>();
        if (!(scale.range[axis] >= 0.0))
            throw Error(json_path.string() + ": sidecar range must be >= 0");
    }
    return scale;
}

fs::path frame_png_path(const std::string& prefix, int frame_index) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "_%04d.png", frame_index);
    return fs::path(prefix + buf);
}

fs::path scale_sidecar_path(const std::string& prefix) { return fs::path(prefix + ".scale.json"); }

void write_coordmap(const CoordinateMap& map, const std::string& path_prefix) {
    write_coordmap_png(map, fs::path(path_prefix + ".png"));
    write_scale_sidecar(map.scale, scale_sidecar_path(path_prefix));
}

CoordinateMap read_coordmap(const std::string& path_prefix) {
    const ScaleSpec scale = read_scale_sidecar(scale_sidecar_path(path_prefix));
    return read_coordmap_png(fs::path(path_prefix + ".png"), scale);
}

// --- voxel grids ---------------------------------------------------------

static const char kGridMagic[16] = {'g', '3', 'd', '-', 'v', 'o', 'x', 'e',
                                    'l', 'g', 'r', 'i', 'd', '-', 'v', '1'};

namespace {

void put_u32(std::string& out, std::uint32_t v) {
    for (int i = 0; i < 4; ++i) out.push_back(static_cast<char>((v >> (8 * i)) & 0xff));
}

void put_f64(std::string& out, double v) {
    const std::uint64_t bits = std::bit_cast<std::uint64_t>(v);
    for (int i = 0; i < 8; ++i) out.push_back(static_cast<char>((bits >> (8 * i)) & 0xff));
}

std::uint32_t get_u32(const std::string& in, std::size_t offset) {
    std::uint32_t v = 0;
    for (int i = 0; i < 4; ++i)
        v |= static_cast<std::uint32_t>(static_cast<unsigned char>(in[offset + i])) << (8 * i);
    return v;
}

double get_f64(const std::string& in, std::size_t offset) {
    std::uint64_t bits = 0;
    for (int i = 0; i < 8; ++i)
        bits |= static_cast<std::uint64_t>(static_cast<unsigned char>(in[offset + i])) << (8 * i);
    return std::bit_cast<double>(bits);
}

} // namespace

void write_grid(const VoxelGrid& grid, const fs::path& path) {
    grid.validate();
    std::string out;
    out.reserve(48 + grid.values.size() * 8);
    out.append(kGridMagic, sizeof(kGridMagic));
    for (int axis = 0; axis < 3; ++axis) put_u32(out, static_cast<std::uint32_t>(grid.dims[axis]));
    for (int axis = 0; axis < 3; ++axis) put_f64(out, grid.origin[axis]);
    put_f64(out, grid.voxel_size);
    for (double v : grid.values) put_f64(out, v);
    atomic_write_bytes(path, out);
}

VoxelGrid read_grid(const fs::path& path) {
    const std::string bytes = read_file_bytes(path);
    if (bytes.size() < 68 || bytes.compare(0, 16, kGridMagic, 16) != 0)
        throw Error(path.string() + ": not a voxel grid file (bad magic)");

    VoxelGrid grid;
    std::size_t off = 16;
    for (int axis = 0; axis < 3; ++axis, off += 4) {
        const std::uint32_t n = get_u32(bytes, off);
        // cap keeps the dims product far from overflow and the allocation sane
        if (n < 1 || n > (1u << 20)) throw Error(path.string() + ": invalid grid dims");
        grid.dims[axis] = static_cast<int>(n);
    }
    if (static_cast<std::uint64_t>(grid.dims[0]) * grid.dims[1] * grid.dims[2] >
        (1ull << 33))
        throw Error(path.string() + ": grid dims product too large");
    for (int axis = 0; axis < 3; ++axis, off += 8) grid.origin[axis] = get_f64(bytes, off);
    grid.voxel_size = get_f64(bytes, off);
    off += 8;

    const std::size_t count =
        static_cast<std::size_t>(grid.dims[0]) * grid.dims[1] * grid.dims[2];
    if (bytes.size() != off + count * 8)
        throw Error(path.string() + ": truncated or oversized voxel grid file");
    grid.values.resize(count);
    for (std::size_t i = 0; i < count; ++i, off += 8) grid.values[i] = get_f64(bytes, off);
    grid.validate();
    return grid;
}

// --- analysis reports ----------------------------------------------------

void write_report(const AnalysisReport& report, const fs::path& path) {
    json j = json::object();
    for (const auto& [key, cond] : report.conditions) {
        json entry;
        entry["mean_wss"] = cond.distribution.mean_wss;
        entry["var_x"] = cond.distribution.var_x;
        entry["var_y"] = cond.distribution.var_y;
        entry["var_z"] = cond.distribution.var_z;
        entry["map_max"] = cond.distribution.map_max;
        entry["map_mean"] = cond.distribution.map_mean;
        entry["n_fixations"] = cond.distribution.n_fixations;
        if (!cond.region_fractions.empty() || cond.region_unassigned) {
            entry["regions"] = cond.region_fractions;
            entry["region_unassigned"] = cond.region_unassigned.value_or(0);
        }
        j[key] = std::move(entry);
    }
    for (const auto& [key, pair] : report.pairs) {
        json entry;
        entry["cc"] = pair.cc;
        entry["sim"] = pair.sim;
        entry["wss_diff"] = pair.wss_diff;
        j[key] = std::move(entry);
    }
    atomic_write_bytes(path, j.dump(2) + "\n");
}

// --- session manifests ---------------------------------------------------

const ManifestCondition& SessionManifest::condition_by_key(const std::string& key) const {
    for (const ManifestCondition& c : conditions)
        if (c.key() == key) return c;
    throw Error("manifest names no condition '" + key + "'");
}

SessionManifest read_manifest(const fs::path& path) {
    if (!fs::exists(path)) throw Error(path.string() + ": manifest not found");
    json j;
    try {
        j = json::parse(read_file_bytes(path));
    } catch (const json::exception& e) {
        throw Error(path.string() + ": invalid manifest JSON: " + e.what());
    }

    SessionManifest manifest;
    manifest.base_dir = path.has_parent_path() ? path.parent_path() : fs::path(".");
    auto resolve = [&](const std::string& rel) -> fs::path {
        const fs::path p(rel);
        return p.is_absolute() ? p : manifest.base_dir / p;
    };

    try {
        if (j.contains("mesh")) manifest.mesh = resolve(j["mesh"].get<std::string>());
        if (j.contains("region_names"))
            for (const auto& [label, name] : j["region_names"].items())
                manifest.region_names[std::stoi(label)] = name.get<std::string>();
        if (j.contains("schedule")) {
            const json& s = j["schedule"];
            if (s.contains("full_angle_deg"))
                manifest.schedule.full_angle_deg = s["full_angle_deg"].get<double>();
            if (s.contains("frame_count"))
                manifest.schedule.frame_count = s["frame_count"].get<int>();
            if (s.contains("motion")) manifest.schedule.motion = s["motion"].get<std::string>();
            if (s.contains("fps")) manifest.schedule.fps = s["fps"].get<double>();
            if (s.contains("playback"))
                manifest.schedule.playback = s["playback"].get<std::string>();
        }
        if (!j.contains("conditions") || !j["conditions"].is_array() || j["conditions"].empty())
            throw Error(path.string() + ": manifest needs a non-empty 'conditions' array");
        for (const json& c : j["conditions"]) {
            ManifestCondition cond;
            cond.question = c.value("question", "");
            cond.model = c.value("model", "");
            cond.material = c.value("material", "");
            if (c.contains("fixations")) cond.fixations = resolve(c["fixations"].get<std::string>());
            if (c.contains("cloud")) cond.cloud = resolve(c["cloud"].get<std::string>());
            if (c.contains("grid")) cond.grid = resolve(c["grid"].get<std::string>());
            manifest.conditions.push_back(std::move(cond));
        }
        if (j.contains("pairs"))
            for (const json& p : j["pairs"]) {
                if (!p.is_array() || p.size() != 2)
                    throw Error(path.string() + ": each pair must be a [a, b] array");
                manifest.pairs.emplace_back(p.at(0).get<std::string>(),
                                            p.at(1).get<std::string>());
            }
    } catch (const json::exception& e) {
        throw Error(path.string() + ": invalid manifest field: " + e.what());
    }

    for (std::size_t i = 0; i < manifest.conditions.size(); ++i)
        for (std::size_t k = i + 1; k < manifest.conditions.size(); ++k)
            if (manifest.conditions[i].key() == manifest.conditions[k].key())
                throw Error(path.string() + ": duplicate condition '" +
                            manifest.conditions[i].key() + "'");
    for (const auto& [a, b] : manifest.pairs) {
        manifest.condition_by_key(a);
        manifest.condition_by_key(b);
    }
    return manifest;
}

} // namespace gaze3d::io
