#include "epigrow/io.hpp"

#include <charconv>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

namespace epigrow::io {

std::string format_double(double x) {
    char buf[32];
    const auto res = std::to_chars(buf, buf + sizeof(buf), x);
    return std::string(buf, res.ptr);
}

std::string read_text_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open for reading: " + path);
    std::ostringstream os;
    os << in.rdbuf();
    return os.str();
}

void write_text_file(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("cannot open for writing: " + path);
    out << content;
    if (!out) throw IoError("write failed: " + path);
}

std::string RunManifest::to_json() const {
    nlohmann::ordered_json j;
    j["tool"] = "epigrow";
    j["version"] = version.empty() ? kToolVersion : version;
    j["subcommand"] = subcommand;
    j["seed"] = seed;
    nlohmann::ordered_json p = nlohmann::ordered_json::object();
    for (const auto& [k, v] : params) p[k] = v;
    j["params"] = p;
    j["outputs"] = outputs;
    j["duration_s"] = duration_s;
    return j.dump(2) + "\n";
}

}  // namespace epigrow::io
