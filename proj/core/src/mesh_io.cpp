#include "g2cal/mesh_io.hpp"

#include "g2cal/errors.hpp"

#include <filesystem>
#include <fstream>

namespace g2cal {

namespace {

using nlohmann::json;

json vec(const Vec7& v) { return json(std::vector<double>(v.data(), v.data() + 7)); }

Vec7 vec7(const json& j) {
  if (!j.is_array() || j.size() != 7) throw Error(ErrorKind::ConfigError, "expected a 7-vector, got " + j.dump());
  Vec7 v;
  for (int i = 0; i < 7; ++i) v(i) = j[i].get<double>();
  return v;
}

template <std::size_t N>
std::vector<std::array<int, N>> indexList(const json& j, const char* name, int nodeCount) {
  std::vector<std::array<int, N>> out;
  if (!j.contains(name)) return out;
  for (const auto& row : j.at(name)) {
    if (!row.is_array() || row.size() != N)
      throw Error(ErrorKind::ConfigError, std::string(name) + ": expected " + std::to_string(N) + " indices");
    std::array<int, N> a{};
    for (std::size_t k = 0; k < N; ++k) {
      a[k] = row[k].get<int>();
      if (a[k] < 0 || a[k] >= nodeCount)
        throw Error(ErrorKind::ConfigError, std::string(name) + ": node index " + std::to_string(a[k]) + " out of range");
    }
    out.push_back(a);
  }
  return out;
}

const char* kindName(DomainKind k) {
  switch (k) {
  case DomainKind::PeriodicGrid: return "torus";
  case DomainKind::BallMesh: return "ball";
  case DomainKind::TetMesh: return "tet";
  }
  return "tet";
}

} // namespace

json domainToJson(const Domain& domain, bool includeFrames) {
  json j;
  j["kind"] = kindName(domain.kind);
  j["label"] = domain.label;
  json params = json::object();
  if (domain.kind == DomainKind::PeriodicGrid) params["n"] = domain.gridN;
  if (domain.kind == DomainKind::BallMesh) {
    params["refinement"] = domain.refinement;
    params["shape"] = domain.shape;
  }
  j["params"] = params;
  j["nodes"] = json::array();
  for (const Vec7& p : domain.nodes) j["nodes"].push_back(vec(p));
  j["cells"] = json::array();
  for (const auto& c : domain.cells) j["cells"].push_back(c);
  j["boundary_triangles"] = json::array();
  if (domain.boundary) {
    const SurfaceMesh& s = *domain.boundary;
    for (const auto& t : s.triangles)
      j["boundary_triangles"].push_back({s.volumeNode[t[0]], s.volumeNode[t[1]], s.volumeNode[t[2]]});
  }
  if (includeFrames && domain.hasFrames()) {
    json tangent = json::array(), normal = json::array();
    for (int i = 0; i < domain.nodeCount(); ++i) {
      json t = json::array(), n = json::array();
      for (const Vec7& v : domain.tangentFrame[i]) t.push_back(vec(v));
      for (const Vec7& v : domain.normalFrame[i]) n.push_back(vec(v));
      tangent.push_back(t);
      normal.push_back(n);
    }
    j["frames"] = {{"tangent", tangent}, {"normal", normal}};
  }
  return j;
}

Domain domainFromJson(const json& j) {
  try {
    const std::string kind = j.at("kind").get<std::string>();
    const json params = j.value("params", json::object());
    if (kind == "torus") {
      int n = params.value("n", 0);
      if (n == 0 && j.contains("nodes")) n = static_cast<int>(std::lround(std::cbrt(static_cast<double>(j["nodes"].size()))));
      return buildTorusGrid(n);
    }
    if (kind != "ball" && kind != "tet") throw Error(ErrorKind::ConfigError, "unknown mesh kind '" + kind + "'");
    Domain d;
    d.kind = kind == "ball" ? DomainKind::BallMesh : DomainKind::TetMesh;
    d.label = j.value("label", kind);
    d.refinement = params.value("refinement", 0);
    d.shape = params.value("shape", std::string());
    for (const auto& p : j.at("nodes")) d.nodes.push_back(vec7(p));
    d.cells = indexList<4>(j, "cells", d.nodeCount());
    if (d.cells.empty()) throw Error(ErrorKind::ConfigError, "mesh has no cells");
    const auto tris = indexList<3>(j, "boundary_triangles", d.nodeCount());
    if (j.contains("frames")) {
      const json& f = j["frames"];
      const auto& tangent = f.at("tangent");
      const auto& normal = f.at("normal");
      if (tangent.size() != d.nodes.size() || normal.size() != d.nodes.size())
        throw Error(ErrorKind::ConfigError, "frame count does not match node count");
      for (std::size_t i = 0; i < d.nodes.size(); ++i) {
        std::array<Vec7, 3> t;
        std::array<Vec7, 4> n;
        for (int a = 0; a < 3; ++a) t[a] = vec7(tangent[i].at(a));
        for (int a = 0; a < 4; ++a) n[a] = vec7(normal[i].at(a));
        d.tangentFrame.push_back(t);
        d.normalFrame.push_back(n);
      }
    }
    finalizeTetDomain(d, tris);
    return d;
  } catch (const json::exception& e) {
    throw Error(ErrorKind::ConfigError, std::string("malformed mesh JSON: ") + e.what());
  }
}

Domain readDomain(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorKind::IoError, "cannot open mesh file " + path);
  json j;
  try {
    in >> j;
  } catch (const json::exception& e) {
    throw Error(ErrorKind::ConfigError, path + ": " + e.what());
  }
  return domainFromJson(j);
}

void writeDomain(const Domain& domain, const std::string& path, bool includeFrames) {
  writeFileAtomic(path, domainToJson(domain, includeFrames).dump() + "\n");
}

void writeFileAtomic(const std::string& path, const std::string& content) {
  namespace fs = std::filesystem;
  const fs::path target(path);
  fs::path tmp = target;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw Error(ErrorKind::IoError, "cannot write " + tmp.string());
    out << content;
    out.flush();
    if (!out) throw Error(ErrorKind::IoError, "short write to " + tmp.string());
  }
  std::error_code ec;
  fs::rename(tmp, target, ec);
  if (ec) {
    fs::remove(tmp, ec);
    throw Error(ErrorKind::IoError, "cannot rename onto " + path);
  }
}

} // namespace g2cal
