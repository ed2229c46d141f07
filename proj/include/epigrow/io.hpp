#pragma once

#include <cstdint>
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

namespace epigrow::io {

struct IoError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// shortest round-trip decimal form, locale-independent
std::string format_double(double x);

std::string read_text_file(const std::string& path);
void write_text_file(const std::string& path, const std::string& content);

// Every CLI output file gets a sidecar manifest describing how to reproduce it.
struct RunManifest {
    std::string subcommand;
    std::map<std::string, std::string> params;  // resolved flag values
    uint64_t seed = 0;
    std::vector<std::string> outputs;
    std::string version;
    double duration_s = 0.0;

    std::string to_json() const;
};

inline constexpr const char* kToolVersion = "1.0.0";

}  // namespace epigrow::io
