#include "mesh.hpp"

#include <algorithm>
#include <cctype>
#include <cstdio>
#include <fstream>
#include <map>
#include <sstream>

namespace pwf {
namespace {

std::string lowercase_ext(const std::string& path) {
  auto pos = path.find_last_of('.');
  if (pos == std::string::npos) return "";
  std::string ext = path.substr(pos + 1);
  std::transform(ext.begin(), ext.end(), ext.begin(),
                 [](unsigned char c) { return std::tolower(c); });
  return ext;
}

void push_face(Mesh& m, const std::vector<long>& idx, const std::string& path,
               std::vector<std::string>* warnings) {
  if (idx.size() < 3 || idx.size() > 4)
    throw MeshError(path + ": face with " + std::to_string(idx.size()) + " vertices");
  for (long i : idx)
    if (i < 0 || i >= static_cast<long>(m.vertices.size()))
      throw MeshError(path + ": face index " + std::to_string(i + 1) + " out of range (" +
                      std::to_string(m.vertices.size()) + " vertices)");
  if (idx.size() == 3) {
    m.faces.push_back({int(idx[0]), int(idx[1]), int(idx[2])});
  } else {
    // Fan around the first vertex; splits the quad along one diagonal.
    m.faces.push_back({int(idx[0]), int(idx[1]), int(idx[2])});
    m.faces.push_back({int(idx[0]), int(idx[2]), int(idx[3])});
    if (warnings)
      warnings->push_back(path + ": quad face triangulated along diagonal");
  }
}

Mesh load_obj(const std::string& path, std::vector<std::string>* warnings) {
  std::ifstream in(path);
  if (!in) throw MeshError("cannot open " + path);
  Mesh m;
  std::string line;
  while (std::getline(in, line)) {
    std::istringstream ss(line);
    std::string tag;
    if (!(ss >> tag) || tag[0] == '#') continue;
    if (tag == "v") {
      Vec3d p;
      if (!(ss >> p.x >> p.y >> p.z)) throw MeshError(path + ": malformed vertex line: " + line);
      m.vertices.push_back(p);
    } else if (tag == "f") {
      std::vector<long> idx;
      std::string tok;
      while (ss >> tok) {
        // accept v, v/vt, v/vt/vn, v//vn
        long i = std::strtol(tok.c_str(), nullptr, 10);
        if (i == 0) throw MeshError(path + ": malformed face token '" + tok + "'");
        if (i < 0) i = static_cast<long>(m.vertices.size()) + i + 1;
        idx.push_back(i - 1);
      }
      push_face(m, idx, path, warnings);
    }
    // other records (vn, vt, o, g, s, usemtl, ...) are ignored
  }
  if (m.vertices.empty()) throw MeshError(path + ": no vertices found");
  return m;
}

Mesh load_ply(const std::string& path, std::vector<std::string>* warnings) {
  std::ifstream in(path);
  if (!in) throw MeshError("cannot open " + path);
  std::string line;
  if (!std::getline(in, line) || line.substr(0, 3) != "ply")
    throw MeshError(path + ": missing ply magic");
  long n_vert = -1, n_face = -1;
  int xi = -1, yi = -1, zi = -1, n_vert_props = 0;
  bool ascii = false;
  std::string cur_element;
  while (std::getline(in, line)) {
    std::istringstream ss(line);
    std::string tag;
    ss >> tag;
    if (tag == "comment") continue;
    if (tag == "format") {
      std::string fmt;
      ss >> fmt;
      ascii = (fmt == "ascii");
    } else if (tag == "element") {
      std::string name;
      long count;
      ss >> name >> count;
      cur_element = name;
      if (name == "vertex") n_vert = count;
      if (name == "face") n_face = count;
    } else if (tag == "property" && cur_element == "vertex") {
      std::string type, name;
      ss >> type >> name;
      if (type == "list") throw MeshError(path + ": list property on vertex element unsupported");
      if (name == "x") xi = n_vert_props;
      if (name == "y") yi = n_vert_props;
      if (name == "z") zi = n_vert_props;
      ++n_vert_props;
    } else if (tag == "end_header") {
      break;
    }
  }
  if (!ascii) throw MeshError(path + ": only ASCII PLY is supported");
  if (n_vert <= 0 || n_face < 0 || xi < 0 || yi < 0 || zi < 0)
    throw MeshError(path + ": incomplete PLY header");
  Mesh m;
  m.vertices.reserve(n_vert);
  for (long v = 0; v < n_vert; ++v) {
    if (!std::getline(in, line)) throw MeshError(path + ": truncated vertex data");
    std::istringstream ss(line);
    std::vector<double> vals(n_vert_props);
    for (double& x : vals)
      if (!(ss >> x)) throw MeshError(path + ": malformed vertex line: " + line);
    m.vertices.push_back({vals[xi], vals[yi], vals[zi]});
  }
  for (long f = 0; f < n_face; ++f) {
    if (!std::getline(in, line)) throw MeshError(path + ": truncated face data");
    std::istringstream ss(line);
    long n;
    if (!(ss >> n)) throw MeshError(path + ": malformed face line: " + line);
    std::vector<long> idx(n);
    for (long& i : idx)
      if (!(ss >> i)) throw MeshError(path + ": malformed face line: " + line);
    push_face(m, idx, path, warnings);
  }
  return m;
}

double face_quality(const Vec3d& p0, const Vec3d& p1, const Vec3d& p2) {
  const double a = norm(p1 - p2), b = norm(p0 - p2), c = norm(p0 - p1);
  const double area2 = norm(cross(p1 - p0, p2 - p0));  // 2*area
  if (a + b + c <= 0.0 || area2 <= 0.0) return 0.0;
  const double inradius = area2 / (a + b + c);            // area / semiperimeter
  const double circumradius = a * b * c / (2.0 * area2);  // abc / (4 area)
  return inradius / circumradius;
}

}  // namespace

Mesh load_mesh(const std::string& path, std::vector<std::string>* warnings) {
  const std::string ext = lowercase_ext(path);
  if (ext == "ply") return load_ply(path, warnings);
  return load_obj(path, warnings);
}

void save_mesh(const Mesh& m, const std::string& path) {
  if (m.faces.empty()) throw MeshError("refusing to write mesh with no faces: " + path);
  std::ofstream out(path);
  if (!out) throw MeshError("cannot open for writing: " + path);
  char buf[128];
  const std::string ext = lowercase_ext(path);
  if (ext == "ply") {
    out << "ply\nformat ascii 1.0\n";
    out << "element vertex " << m.vertices.size() << "\n";
    out << "property double x\nproperty double y\nproperty double z\n";
    out << "element face " << m.faces.size() << "\n";
    out << "property list uchar int vertex_indices\nend_header\n";
    for (const auto& v : m.vertices) {
      std::snprintf(buf, sizeof buf, "%.17g %.17g %.17g\n", v.x, v.y, v.z);
      out << buf;
    }
    for (const auto& f : m.faces) out << "3 " << f[0] << " " << f[1] << " " << f[2] << "\n";
  } else {
    for (const auto& v : m.vertices) {
      std::snprintf(buf, sizeof buf, "v %.17g %.17g %.17g\n", v.x, v.y, v.z);
      out << buf;
    }
    for (const auto& f : m.faces)
      out << "f " << f[0] + 1 << " " << f[1] + 1 << " " << f[2] + 1 << "\n";
  }
  if (!out) throw MeshError("write failure: " + path);
}

MeshDiagnostics validate_mesh(const Mesh& m) {
  MeshDiagnostics d;
  for (const auto& f : m.faces) {
    for (int i : f)
      if (i < 0 || i >= m.vertex_count()) throw MeshError("face index out of range");
    if (f[0] == f[1] || f[1] == f[2] || f[0] == f[2]) throw MeshError("face repeats a vertex");
  }
  // Undirected edge -> (count, sum of directions). Opposite directed
  // orientations cancel, so dir_sum == 0 on a consistently oriented pair.
  std::map<std::pair<int, int>, std::pair<int, int>> edges;
  for (const auto& f : m.faces) {
    for (int e = 0; e < 3; ++e) {
      int a = f[e], b = f[(e + 1) % 3];
      auto key = std::minmax(a, b);
      auto& slot = edges[{key.first, key.second}];
      slot.first += 1;
      slot.second += (a < b) ? 1 : -1;
    }
  }
  d.edge_count = static_cast<int>(edges.size());
  bool manifold = true, oriented = true;
  for (const auto& [key, slot] : edges) {
    if (slot.first == 1) ++d.boundary_edge_count;
    if (slot.first > 2) manifold = false;
    if (slot.first == 2 && slot.second != 0) oriented = false;
  }
  d.is_closed = manifold && d.boundary_edge_count == 0;
  d.is_oriented = manifold && oriented;
  if (d.is_closed) {
    const int chi = m.vertex_count() - d.edge_count + m.face_count();
    d.genus = (2 - chi) / 2;
  }
  d.min_face_quality = 1.0;
  for (const auto& f : m.faces) {
    const double q = face_quality(m.vertices[f[0]], m.vertices[f[1]], m.vertices[f[2]]);
    d.min_face_quality = std::min(d.min_face_quality, q);
  }
  return d;
}

std::vector<int> vertex_valences(const Mesh& m) {
  std::vector<int> val(m.vertex_count(), 0);
  for (const auto& f : m.faces)
    for (int i : f) ++val[i];
  return val;
}

double mean_edge_length(const Mesh& m) {
  double total = 0.0;
  long n = 0;
  for (const auto& f : m.faces) {
    for (int e = 0; e < 3; ++e) {
      total += norm(m.vertices[f[e]] - m.vertices[f[(e + 1) % 3]]);
      ++n;
    }
  }
  return n ? total / double(n) : 0.0;  // each interior edge counted twice; fine for a mean
}

void require_flowable(const Mesh& m) {
  const MeshDiagnostics d = validate_mesh(m);
  if (!d.is_closed) throw MeshError("mesh not closed (boundary edges: " +
                                    std::to_string(d.boundary_edge_count) + ")");
  if (!d.is_oriented) throw MeshError("mesh not consistently oriented");
  if (d.min_face_quality <= kDegenerateQuality)
    throw MeshError("mesh has a degenerate face (quality " +
                    std::to_string(d.min_face_quality) + ")");
}

}  // namespace pwf
