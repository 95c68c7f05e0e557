// Copyright 2026 The petcarbon Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

namespace petcarbon::web {

struct Resource {
  std::string path;  // relative, '/'-separated, no leading slash
  std::size_t bytes = 0;
};

/// A static site on disk described by `manifest.txt` (one relative path per
/// line; blank lines and lines starting with '#' are ignored).
struct SiteSnapshot {
  std::filesystem::path root;
  std::vector<Resource> resources;

  std::size_t total_bytes() const;
};

inline constexpr const char* kManifestName = "manifest.txt";

/// IoError for a missing manifest or unreadable resource, InvalidArgument for
/// an empty manifest or a path escaping the root.
SiteSnapshot load_snapshot(const std::filesystem::path& root);

/// Writes a deterministic HTML/CSS/JS/image site plus its manifest.
/// Sizes are log-uniform in [1 KB, 500 KB]; the first and last generated
/// assets pin both ends of the range.
SiteSnapshot generate_synthetic_site(const std::filesystem::path& root, std::uint64_t seed,
                                     std::size_t file_count = 50);

inline constexpr std::uint64_t kBundledSiteSeed = 20240602;
inline constexpr std::size_t kBundledSiteFiles = 50;

/// The bundled snapshot, generated once per machine under the temp directory
/// (or `cache_root` when given) and reused while its manifest matches.
SiteSnapshot bundled_site(const std::filesystem::path& cache_root = {});

std::string content_type_for(const std::string& path);

}  // namespace petcarbon::web
