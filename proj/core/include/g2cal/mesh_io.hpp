#pragma once

// JSON persistence of domains:
// {"kind": "torus|ball|tet", "nodes": [[7 floats]...], "cells": [[4 ints]...],
//  "boundary_triangles": [[3 ints]...], "frames": {...}, "params": {...}}

#include "g2cal/mesh.hpp"

#include <nlohmann/json.hpp>

#include <string>

namespace g2cal {

nlohmann::json domainToJson(const Domain& domain, bool includeFrames = true);
/// Throws ConfigError on schema violations; mesh checks as in finalizeTetDomain().
Domain domainFromJson(const nlohmann::json& j);

/// Throws IoError.
Domain readDomain(const std::string& path);
void writeDomain(const Domain& domain, const std::string& path, bool includeFrames = true);

/// Writes to a sibling temporary file and renames it over `path`. Throws IoError.
void writeFileAtomic(const std::string& path, const std::string& content);

} // namespace g2cal
