#pragma once

#include "toti/builder.hpp"

#include <filesystem>
#include <map>
#include <stdexcept>
#include <string>
#include <string_view>

namespace toti {

inline constexpr const char* kToolVersion = "0.1.0";

struct MissingFile : std::runtime_error {
  using std::runtime_error::runtime_error;
};

std::string sha256_hex(std::string_view bytes);

/// Every bundle file except the manifest, keyed by relative path. Contents
/// depend only on the build parameters.
std::map<std::string, std::string> render_bundle(const BuildResult& result);

/// Writes the rendered files plus manifest.json (file digests, config digest,
/// tool version and build time).
void write_bundle(const BuildResult& result, const std::filesystem::path& dir, double build_seconds);

std::string read_file(const std::filesystem::path& path);
void write_file(const std::filesystem::path& path, const std::string& contents);

struct LoadedBundle {
  BuildResult result;  // rebuilt from config.txt, then overlaid with the stored maps
  Report report;       // manifest digests, parse checks, agreement with the rebuild
};

/// MissingFile if config.txt, manifest.json or a stored map is absent.
LoadedBundle load_bundle(const std::filesystem::path& dir);

}  // namespace toti
