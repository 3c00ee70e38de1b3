#include "gaze3d/config.hpp"

#include "gaze3d/io.hpp"

#include <charconv>
#include <cstdio>
#include <fstream>
#include <map>
#include <sstream>

namespace gaze3d {

namespace {

std::string trim(const std::string& s) {
    const auto begin = s.find_first_not_of(" \t\r");
    if (begin == std::string::npos) return {};
    const auto end = s.find_last_not_of(" \t\r");
    return s.substr(begin, end - begin + 1);
}

struct IniFile {
    // section -> key -> (value, line)
    std::map<std::string, std::map<std::string, std::pair<std::string, std::size_t>>> data;
    std::filesystem::path path;

    static IniFile parse(const std::filesystem::path& path) {
        std::ifstream in(path);
        if (!in) throw Error(path.string() + ": cannot open config file");
        IniFile ini;
        ini.path = path;
        std::string line;
        std::string section;
        std::size_t line_no = 0;
        while (std::getline(in, line)) {
            ++line_no;
            const std::string t = trim(line);
            if (t.empty() || t.front() == '#' || t.front() == ';') continue;
            if (t.front() == '[') {
                if (t.back() != ']')
                    throw Error(path.string() + ":" + std::to_string(line_no) +
                                ": malformed section header");
                section = trim(t.substr(1, t.size() - 2));
                continue;
            }
            const auto eq = t.find('=');
            if (eq == std::string::npos)
                throw Error(path.string() + ":" + std::to_string(line_no) +
                            ": expected 'key = value'");
            std::string key = trim(t.substr(0, eq));
            std::string value = trim(t.substr(eq + 1));
            // strip a trailing inline comment
            const auto hash = value.find(" #");
            if (hash != std::string::npos) value = trim(value.substr(0, hash));
            ini.data[section][key] = {value, line_no};
        }
        return ini;
    }

    [[noreturn]] void fail(const std::string& section, const std::string& key,
                           const std::string& why) const {
        const auto line = data.at(section).at(key).second;
        throw Error(path.string() + ":" + std::to_string(line) + ": [" + section + "] " + key +
                    ": " + why);
    }
};

double to_double(const IniFile& ini, const std::string& section, const std::string& key,
                 const std::string& value) {
    double v = 0.0;
    const std::string t = trim(value);
    const auto [ptr, ec] = std::from_chars(t.data(), t.data() + t.size(), v);
    if (ec != std::errc() || ptr != t.data() + t.size())
        ini.fail(section, key, "expected a number, got '" + value + "'");
    return v;
}

int to_int(const IniFile& ini, const std::string& section, const std::string& key,
           const std::string& value) {
    int v = 0;
    const std::string t = trim(value);
    const auto [ptr, ec] = std::from_chars(t.data(), t.data() + t.size(), v);
    if (ec != std::errc() || ptr != t.data() + t.size())
        ini.fail(section, key, "expected an integer, got '" + value + "'");
    return v;
}

bool to_bool(const IniFile& ini, const std::string& section, const std::string& key,
             const std::string& value) {
    if (value == "true" || value == "1" || value == "yes" || value == "on") return true;
    if (value == "false" || value == "0" || value == "no" || value == "off") return false;
    ini.fail(section, key, "expected true/false, got '" + value + "'");
}

Vec3 to_vec3(const IniFile& ini, const std::string& section, const std::string& key,
             const std::string& value) {
    std::istringstream vs(value);
    Vec3 v;
    if (!(vs >> v.x >> v.y >> v.z)) ini.fail(section, key, "expected three numbers");
    std::string extra;
    if (vs >> extra) ini.fail(section, key, "expected exactly three numbers");
    return v;
}

std::optional<double> to_auto_double(const IniFile& ini, const std::string& section,
                                     const std::string& key, const std::string& value) {
    if (value == "auto") return std::nullopt;
    return to_double(ini, section, key, value);
}

// anchors = pos:r,g,b pos:r,g,b ...
ColormapSpec to_colormap(const IniFile& ini, const std::string& section, const std::string& key,
                         const std::string& value) {
    ColormapSpec map;
    std::istringstream vs(value);
    std::string item;
    while (vs >> item) {
        const auto colon = item.find(':');
        if (colon == std::string::npos) ini.fail(section, key, "anchor needs 'pos:r,g,b'");
        ColormapSpec::Anchor anchor {};
        try {
            anchor.position = std::stod(item.substr(0, colon));
            std::string rgb = item.substr(colon + 1);
            for (int c = 0; c < 3; ++c) {
                const auto comma = rgb.find(',');
                const std::string tok = c < 2 ? rgb.substr(0, comma) : rgb;
                anchor.color[c] = std::stod(tok);
                if (c < 2) {
                    if (comma == std::string::npos)
                        ini.fail(section, key, "anchor needs three color components");
                    rgb = rgb.substr(comma + 1);
                }
            }
        } catch (const std::exception&) {
            ini.fail(section, key, "malformed anchor '" + item + "'");
        }
        map.anchors.push_back(anchor);
    }
    try {
        map.validate();
    } catch (const Error& e) {
        ini.fail(section, key, e.what());
    }
    return map;
}

std::string colormap_to_text(const ColormapSpec& map) {
    std::ostringstream out;
    char buf[80];
    for (std::size_t i = 0; i < map.anchors.size(); ++i) {
        const auto& a = map.anchors[i];
        std::snprintf(buf, sizeof(buf), "%g:%g,%g,%g", a.position, a.color[0], a.color[1],
                      a.color[2]);
        out << (i ? " " : "") << buf;
    }
    return out.str();
}

} // namespace

RotationMotion parse_motion(const std::string& name) {
    if (name == "linear") return RotationMotion::linear;
    if (name == "sinusoidal") return RotationMotion::sinusoidal;
    throw Error("unknown motion '" + name + "' (expected linear or sinusoidal)");
}

Playback parse_playback(const std::string& name) {
    if (name == "clamp") return Playback::clamp;
    if (name == "loop") return Playback::loop;
    if (name == "pingpong") return Playback::pingpong;
    throw Error("unknown playback '" + name + "' (expected clamp, loop, or pingpong)");
}

const char* motion_name(RotationMotion motion) {
    return motion == RotationMotion::linear ? "linear" : "sinusoidal";
}

const char* playback_name(Playback playback) {
    switch (playback) {
    case Playback::clamp: return "clamp";
    case Playback::loop: return "loop";
    case Playback::pingpong: return "pingpong";
    }
    return "clamp";
}

Camera PipelineConfig::camera() const {
    return Camera {camera_position, camera_look_at, camera_up, camera_fov_deg, image_width,
                   image_height};
}

FrameSchedule PipelineConfig::frame_schedule() const { return {fps, frame_count, playback}; }

void PipelineConfig::load_file(const std::filesystem::path& path) {
    const IniFile ini = IniFile::parse(path);
    for (const auto& [section, entries] : ini.data) {
        for (const auto& [key, value_line] : entries) {
            const std::string& value = value_line.first;
            const std::string id = section + "." + key;
            if (id == "camera.position") camera_position = to_vec3(ini, section, key, value);
            else if (id == "camera.look_at") camera_look_at = to_vec3(ini, section, key, value);
            else if (id == "camera.up") camera_up = to_vec3(ini, section, key, value);
            else if (id == "camera.fov_deg") camera_fov_deg = to_double(ini, section, key, value);
            else if (id == "camera.width") image_width = to_int(ini, section, key, value);
            else if (id == "camera.height") image_height = to_int(ini, section, key, value);
            else if (id == "schedule.full_angle_deg")
                full_angle_deg = to_double(ini, section, key, value);
            else if (id == "schedule.frame_count") frame_count = to_int(ini, section, key, value);
            else if (id == "schedule.motion") {
                try {
                    motion = parse_motion(value);
                } catch (const Error& e) {
                    ini.fail(section, key, e.what());
                }
            } else if (id == "schedule.fps") fps = to_double(ini, section, key, value);
            else if (id == "schedule.playback") {
                try {
                    playback = parse_playback(value);
                } catch (const Error& e) {
                    ini.fail(section, key, e.what());
                }
            } else if (id == "raster.margin") margin = to_double(ini, section, key, value);
            else if (id == "projection.duration_weighting")
                duration_weighting = to_bool(ini, section, key, value);
            else if (id == "projection.depth_break")
                depth_break = to_auto_double(ini, section, key, value);
            else if (id == "saliency.resolution")
                voxel_resolution = to_int(ini, section, key, value);
            else if (id == "saliency.sigma_voxels")
                sigma_voxels = to_double(ini, section, key, value);
            else if (id == "saliency.padding") grid_padding = to_double(ini, section, key, value);
            else if (id == "metrics.region_max_dist")
                region_max_dist = to_auto_double(ini, section, key, value);
            else if (id == "colormap.anchors") colormap = to_colormap(ini, section, key, value);
            else ini.fail(section, key, "unknown configuration key");
        }
    }
}

std::string PipelineConfig::to_text() const {
    std::ostringstream out;
    char buf[160];
    auto put = [&](const char* fmt, auto... args) {
        std::snprintf(buf, sizeof(buf), fmt, args...);
        out << buf << "\n";
    };
    out << "# gaze3d pipeline configuration\n\n";
    out << "[camera]\n";
    put("position = %.17g %.17g %.17g", camera_position.x, camera_position.y, camera_position.z);
    put("look_at = %.17g %.17g %.17g", camera_look_at.x, camera_look_at.y, camera_look_at.z);
    put("up = %.17g %.17g %.17g", camera_up.x, camera_up.y, camera_up.z);
    put("fov_deg = %.17g", camera_fov_deg);
    put("width = %d", image_width);
    put("height = %d", image_height);
    out << "\n[schedule]\n";
    put("full_angle_deg = %.17g", full_angle_deg);
    put("frame_count = %d", frame_count);
    put("motion = %s", motion_name(motion));
    put("fps = %.17g", fps);
    put("playback = %s", playback_name(playback));
    out << "\n[raster]\n";
    put("margin = %.17g", margin);
    out << "\n[projection]\n";
    put("duration_weighting = %s", duration_weighting ? "true" : "false");
    if (depth_break) put("depth_break = %.17g", *depth_break);
    else out << "depth_break = auto  # 2% of the scale volume diagonal\n";
    out << "\n[saliency]\n";
    put("resolution = %d", voxel_resolution);
    put("sigma_voxels = %.17g", sigma_voxels);
    put("padding = %.17g", grid_padding);
    out << "\n[metrics]\n";
    if (region_max_dist) put("region_max_dist = %.17g", *region_max_dist);
    else out << "region_max_dist = auto  # 5% of the scale volume diagonal\n";
    out << "\n[colormap]\n";
    out << "anchors = " << colormap_to_text(colormap) << "\n";
    return out.str();
}

void PipelineConfig::save(const std::filesystem::path& path) const {
    io::atomic_write_bytes(path, to_text());
}

} // namespace gaze3d
