#include "qrt/scene_io.hpp"

#include <fstream>
#include <sstream>
#include <stdexcept>

namespace qrt {

namespace {

[[noreturn]] void fail(const std::string& origin, int line,
                       const std::string& msg) {
    throw std::runtime_error(origin + ":" + std::to_string(line) + ": " + msg);
}

struct Parser {
    std::istringstream in;
    std::string origin;
    int line_no = 0;
    std::string line;

    bool next_line() {
        while (std::getline(in, line)) {
            ++line_no;
            const auto hash = line.find('#');
            if (hash != std::string::npos)
                line.erase(hash);
            std::istringstream probe(line);
            std::string tok;
            if (probe >> tok)
                return true;
        }
        return false;
    }

    Vec3i read_vec3i(std::istringstream& s, const std::string& key) {
        Vec3i v;
        if (!(s >> v.x >> v.y >> v.z))
            fail(origin, line_no, "expected three integers after '" + key + "'");
        return v;
    }

    Vec3d read_vec3d(std::istringstream& s, const std::string& key) {
        Vec3d v;
        if (!(s >> v.x >> v.y >> v.z))
            fail(origin, line_no, "expected three numbers after '" + key + "'");
        return v;
    }

    Rgb read_rgb(std::istringstream& s, const std::string& key) {
        Rgb c;
        if (!(s >> c[0] >> c[1] >> c[2]))
            fail(origin, line_no, "expected three numbers after '" + key + "'");
        return c;
    }

    // Reads "key value..." lines until the closing brace. Calls handler(key,
    // value stream); handler returns false for unknown keys.
    template <typename F>
    void read_block(const std::string& what, F&& handler) {
        while (next_line()) {
            std::istringstream s(line);
            std::string key;
            s >> key;
            if (key == "}")
                return;
            if (!handler(key, s))
                fail(origin, line_no, "unknown key '" + key + "' in " + what);
        }
        fail(origin, line_no, "unterminated " + what + " block");
    }
};

void expect_open_brace(Parser& p, std::istringstream& s,
                       const std::string& what) {
    std::string brace;
    if (!(s >> brace) || brace != "{")
        fail(p.origin, p.line_no, "expected '{' after " + what);
}

} // namespace

Scene parse_scene(const std::string& text, const std::string& origin) {
    Parser p;
    p.in.str(text);
    p.origin = origin;

    Scene scene;
    bool saw_world_bits = false;

    while (p.next_line()) {
        std::istringstream s(p.line);
        std::string key;
        s >> key;
        if (key == "world_bits") {
            if (!(s >> scene.cb))
                fail(origin, p.line_no, "expected integer after 'world_bits'");
            saw_world_bits = true;
        } else if (key == "camera") {
            expect_open_brace(p, s, "camera");
            p.read_block("camera", [&](const std::string& k,
                                       std::istringstream& v) {
                if (k == "position") {
                    scene.camera.position = p.read_vec3i(v, k);
                } else if (k == "look_at") {
                    scene.camera.look_at = p.read_vec3d(v, k);
                } else if (k == "vfov") {
                    if (!(v >> scene.camera.vfov_deg))
                        fail(origin, p.line_no, "expected number after 'vfov'");
                } else {
                    return false;
                }
                return true;
            });
        } else if (key == "primitive") {
            expect_open_brace(p, s, "primitive");
            ScenePrimitive prim;
            prim.id = std::uint32_t(scene.primitives.size());
            p.read_block("primitive", [&](const std::string& k,
                                          std::istringstream& v) {
                if (k == "min") {
                    prim.lo = p.read_vec3i(v, k);
                } else if (k == "max") {
                    prim.hi = p.read_vec3i(v, k);
                } else if (k == "albedo") {
                    prim.material.albedo = p.read_rgb(v, k);
                } else if (k == "mirror") {
                    int m = 0;
                    if (!(v >> m))
                        fail(origin, p.line_no, "expected 0/1 after 'mirror'");
                    prim.material.mirror = m != 0;
                } else if (k == "emissive") {
                    prim.material.emissive = p.read_rgb(v, k);
                } else {
                    return false;
                }
                return true;
            });
            scene.primitives.push_back(prim);
        } else if (key == "point_light") {
            expect_open_brace(p, s, "point_light");
            PointLight l;
            p.read_block("point_light", [&](const std::string& k,
                                            std::istringstream& v) {
                if (k == "position")
                    l.position = p.read_vec3d(v, k);
                else if (k == "intensity")
                    l.intensity = p.read_rgb(v, k);
                else
                    return false;
                return true;
            });
            scene.point_lights.push_back(l);
        } else if (key == "area_light") {
            expect_open_brace(p, s, "area_light");
            AreaLight l;
            p.read_block("area_light", [&](const std::string& k,
                                           std::istringstream& v) {
                if (k == "min")
                    l.lo = p.read_vec3i(v, k);
                else if (k == "max")
                    l.hi = p.read_vec3i(v, k);
                else if (k == "intensity")
                    l.intensity = p.read_rgb(v, k);
                else
                    return false;
                return true;
            });
            scene.area_lights.push_back(l);
        } else if (key == "directional_light") {
            expect_open_brace(p, s, "directional_light");
            DirectionalLight l;
            p.read_block("directional_light", [&](const std::string& k,
                                                  std::istringstream& v) {
                if (k == "direction")
                    l.direction = p.read_vec3d(v, k).normalized();
                else if (k == "intensity")
                    l.intensity = p.read_rgb(v, k);
                else
                    return false;
                return true;
            });
            scene.directional_lights.push_back(l);
        } else {
            fail(origin, p.line_no, "unknown directive '" + key + "'");
        }
    }

    if (!saw_world_bits)
        fail(origin, p.line_no, "missing 'world_bits'");
    const std::string err = validate_scene(scene);
    if (!err.empty())
        fail(origin, p.line_no, err);
    return scene;
}

Scene load_scene(const std::string& path) {
    std::ifstream in(path);
    if (!in)
        throw std::runtime_error("cannot open scene file: " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_scene(buf.str(), path);
}

void save_scene(const Scene& scene, const std::string& path) {
    std::ofstream out(path);
    if (!out)
        throw std::runtime_error("cannot write scene file: " + path);
    out << "world_bits " << scene.cb << "\n";
    out << "camera {\n"
        << "  position " << scene.camera.position.x << " "
        << scene.camera.position.y << " " << scene.camera.position.z << "\n"
        << "  look_at " << scene.camera.look_at.x << " " << scene.camera.look_at.y
        << " " << scene.camera.look_at.z << "\n"
        << "  vfov " << scene.camera.vfov_deg << "\n}\n";
    for (const auto& p : scene.primitives) {
        out << "primitive {\n"
            << "  min " << p.lo.x << " " << p.lo.y << " " << p.lo.z << "\n"
            << "  max " << p.hi.x << " " << p.hi.y << " " << p.hi.z << "\n"
            << "  albedo " << p.material.albedo[0] << " " << p.material.albedo[1]
            << " " << p.material.albedo[2] << "\n";
        if (p.material.mirror)
            out << "  mirror 1\n";
        if (p.material.emissive != Rgb{0, 0, 0})
            out << "  emissive " << p.material.emissive[0] << " "
                << p.material.emissive[1] << " " << p.material.emissive[2]
                << "\n";
        out << "}\n";
    }
    for (const auto& l : scene.point_lights)
        out << "point_light {\n  position " << l.position.x << " "
            << l.position.y << " " << l.position.z << "\n  intensity "
            << l.intensity[0] << " " << l.intensity[1] << " " << l.intensity[2]
            << "\n}\n";
    for (const auto& l : scene.area_lights)
        out << "area_light {\n  min " << l.lo.x << " " << l.lo.y << " " << l.lo.z
            << "\n  max " << l.hi.x << " " << l.hi.y << " " << l.hi.z
            << "\n  intensity " << l.intensity[0] << " " << l.intensity[1] << " "
            << l.intensity[2] << "\n}\n";
    for (const auto& l : scene.directional_lights)
        out << "directional_light {\n  direction " << l.direction.x << " "
            << l.direction.y << " " << l.direction.z << "\n  intensity "
            << l.intensity[0] << " " << l.intensity[1] << " " << l.intensity[2]
            << "\n}\n";
}

} // namespace qrt
