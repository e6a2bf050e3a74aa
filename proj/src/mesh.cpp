#include "sketchgen/mesh.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include "sketchgen/rng.hpp"

namespace sketchgen {

namespace {

[[noreturn]] void fail(const std::string& name, const std::string& msg) {
  throw std::runtime_error(name + ": " + msg);
}

[[noreturn]] void fail_line(const std::string& name, size_t line, const std::string& msg) {
  throw std::runtime_error(name + ":" + std::to_string(line) + ": " + msg);
}

double face_area_of(const std::vector<Vec3>& v, const std::array<int, 3>& f) {
  return 0.5 * norm(cross(v[f[1]] - v[f[0]], v[f[2]] - v[f[0]]));
}

// Shared tail of every parser: validate indices, drop zero-area faces,
// compute normals, fill stats.
TriMesh finish_mesh(std::vector<Vec3> vertices, std::vector<std::array<int, 3>> faces,
                    const std::string& name, const std::string& format,
                    MeshLoadStats* stats) {
  if (vertices.empty()) fail(name, "mesh has no vertices");
  size_t faces_read = faces.size();

  int nv = static_cast<int>(vertices.size());
  for (const auto& f : faces)
    for (int k = 0; k < 3; ++k)
      if (f[k] < 0 || f[k] >= nv)
        fail(name, "face references vertex " + std::to_string(f[k]) + " out of range [0, " +
                       std::to_string(nv) + ")");

  Aabb box;
  for (const auto& v : vertices) box.expand(v);
  double scale = box.longest_side();
  double area_eps = 1e-12 * scale * scale;

  TriMesh mesh;
  mesh.vertices = std::move(vertices);
  size_t dropped = 0;
  for (const auto& f : faces) {
    if (f[0] == f[1] || f[1] == f[2] || f[0] == f[2] ||
        face_area_of(mesh.vertices, f) <= area_eps) {
      ++dropped;
      continue;
    }
    mesh.faces.push_back(f);
  }
  if (mesh.faces.empty()) fail(name, "mesh has no non-degenerate faces");
  mesh.compute_face_normals();

  if (stats) {
    stats->format = format;
    stats->vertices_read = mesh.vertices.size();
    stats->faces_read = faces_read;
    stats->degenerate_dropped = dropped;
  }
  return mesh;
}

bool parse_double(const std::string& tok, double& out) {
  try {
    size_t pos = 0;
    out = std::stod(tok, &pos);
    return pos == tok.size();
  } catch (const std::exception&) {
    return false;
  }
}

bool parse_int(const std::string& tok, long& out) {
  try {
    size_t pos = 0;
    out = std::stol(tok, &pos);
    return pos == tok.size();
  } catch (const std::exception&) {
    return false;
  }
}

std::vector<std::string> split_ws(const std::string& line) {
  std::vector<std::string> toks;
  std::istringstream ss(line);
  std::string t;
  while (ss >> t) toks.push_back(t);
  return toks;
}

// Fan-triangulate a polygon's vertex list into `faces`.
void emit_fan(const std::vector<int>& poly, std::vector<std::array<int, 3>>& faces) {
  for (size_t i = 1; i + 1 < poly.size(); ++i)
    faces.push_back({poly[0], poly[static_cast<int>(i)], poly[static_cast<int>(i) + 1]});
}

}  // namespace

Aabb TriMesh::bounds() const {
  Aabb box;
  for (const auto& v : vertices) box.expand(v);
  return box;
}

double TriMesh::face_area(int f) const { return face_area_of(vertices, faces[f]); }

double TriMesh::total_area() const {
  double a = 0.0;
  for (size_t f = 0; f < faces.size(); ++f) a += face_area(static_cast<int>(f));
  return a;
}

void TriMesh::compute_face_normals() {
  face_normals.resize(faces.size());
  for (size_t f = 0; f < faces.size(); ++f) {
    const auto& t = faces[f];
    face_normals[f] = normalized(cross(vertices[t[1]] - vertices[t[0]],
                                       vertices[t[2]] - vertices[t[0]]));
  }
}

TriMesh parse_obj(std::istream& in, const std::string& name, MeshLoadStats* stats) {
  std::vector<Vec3> vertices;
  std::vector<std::array<int, 3>> faces;
  std::string line;
  size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    auto toks = split_ws(line);
    if (toks.empty() || toks[0][0] == '#') continue;
    if (toks[0] == "v") {
      if (toks.size() < 4) fail_line(name, lineno, "vertex record needs 3 coordinates");
      Vec3 v;
      for (int k = 0; k < 3; ++k)
        if (!parse_double(toks[k + 1], v[k]))
          fail_line(name, lineno, "bad vertex coordinate '" + toks[k + 1] + "'");
      vertices.push_back(v);
    } else if (toks[0] == "f") {
      if (toks.size() < 4) fail_line(name, lineno, "face record needs at least 3 vertices");
      std::vector<int> poly;
      for (size_t i = 1; i < toks.size(); ++i) {
        std::string ref = toks[i].substr(0, toks[i].find('/'));
        long idx = 0;
        if (!parse_int(ref, idx) || idx == 0)
          fail_line(name, lineno, "bad face vertex reference '" + toks[i] + "'");
        // OBJ indices are 1-based; negative values count back from the end.
        long resolved = idx > 0 ? idx - 1 : static_cast<long>(vertices.size()) + idx;
        poly.push_back(static_cast<int>(resolved));
      }
      emit_fan(poly, faces);
    }
    // vn/vt/usemtl/o/g/s records carry no geometry we use
  }
  return finish_mesh(std::move(vertices), std::move(faces), name, "obj", stats);
}

TriMesh parse_off(std::istream& in, const std::string& name, MeshLoadStats* stats) {
  // Token stream parse; OFF allows arbitrary line breaks between numbers.
  std::vector<std::string> toks;
  std::string line;
  size_t lineno = 0;
  bool header_seen = false;
  while (std::getline(in, line)) {
    ++lineno;
    auto pos = line.find('#');
    if (pos != std::string::npos) line.resize(pos);
    for (auto& t : split_ws(line)) {
      if (!header_seen) {
        if (t != "OFF") fail_line(name, lineno, "expected OFF header, got '" + t + "'");
        header_seen = true;
        continue;
      }
      toks.push_back(t);
    }
  }
  if (!header_seen) fail(name, "expected OFF header");

  size_t cur = 0;
  auto next_tok = [&](const char* what) -> const std::string& {
    if (cur >= toks.size()) fail(name, std::string("unexpected end of file reading ") + what);
    return toks[cur++];
  };
  auto next_long = [&](const char* what) {
    long v = 0;
    const std::string& t = next_tok(what);
    if (!parse_int(t, v)) fail(name, std::string("bad ") + what + " '" + t + "'");
    return v;
  };
  auto next_double = [&](const char* what) {
    double v = 0;
    const std::string& t = next_tok(what);
    if (!parse_double(t, v)) fail(name, std::string("bad ") + what + " '" + t + "'");
    return v;
  };

  long nv = next_long("vertex count");
  long nf = next_long("face count");
  next_long("edge count");
  if (nv < 0 || nf < 0) fail(name, "negative counts in OFF header");

  std::vector<Vec3> vertices;
  vertices.reserve(nv);
  for (long i = 0; i < nv; ++i) {
    Vec3 v;
    for (int k = 0; k < 3; ++k) v[k] = next_double("vertex coordinate");
    vertices.push_back(v);
  }
  std::vector<std::array<int, 3>> faces;
  for (long i = 0; i < nf; ++i) {
    long cnt = next_long("face vertex count");
    if (cnt < 3) fail(name, "face with fewer than 3 vertices");
    std::vector<int> poly;
    for (long k = 0; k < cnt; ++k) poly.push_back(static_cast<int>(next_long("face vertex index")));
    emit_fan(poly, faces);
  }
  return finish_mesh(std::move(vertices), std::move(faces), name, "off", stats);
}

TriMesh parse_ply_ascii(std::istream& in, const std::string& name, MeshLoadStats* stats) {
  std::string line;
  size_t lineno = 0;
  if (!std::getline(in, line) || split_ws(line) != std::vector<std::string>{"ply"})
    fail(name, "expected 'ply' magic");
  ++lineno;

  long nv = -1, nf = -1;
  // Per-vertex property layout; we need the positions of x, y, z.
  std::vector<std::string> vertex_props;
  std::string element;
  bool format_ok = false;
  while (std::getline(in, line)) {
    ++lineno;
    auto toks = split_ws(line);
    if (toks.empty() || toks[0] == "comment") continue;
    if (toks[0] == "format") {
      if (toks.size() < 2 || toks[1] != "ascii")
        fail_line(name, lineno, "only ascii PLY is supported");
      format_ok = true;
    } else if (toks[0] == "element") {
      if (toks.size() < 3) fail_line(name, lineno, "malformed element record");
      element = toks[1];
      long cnt = 0;
      if (!parse_int(toks[2], cnt) || cnt < 0)
        fail_line(name, lineno, "bad element count '" + toks[2] + "'");
      if (element == "vertex") nv = cnt;
      else if (element == "face") nf = cnt;
    } else if (toks[0] == "property") {
      if (element == "vertex" && toks.size() >= 3 && toks[1] != "list")
        vertex_props.push_back(toks.back());
    } else if (toks[0] == "end_header") {
      break;
    }
  }
  if (!format_ok) fail(name, "missing 'format ascii' in PLY header");
  if (nv < 0) fail(name, "PLY header has no vertex element");
  if (nf < 0) fail(name, "PLY header has no face element");

  int xi = -1, yi = -1, zi = -1;
  for (size_t i = 0; i < vertex_props.size(); ++i) {
    if (vertex_props[i] == "x") xi = static_cast<int>(i);
    if (vertex_props[i] == "y") yi = static_cast<int>(i);
    if (vertex_props[i] == "z") zi = static_cast<int>(i);
  }
  if (xi < 0 || yi < 0 || zi < 0) fail(name, "PLY vertex element lacks x/y/z properties");

  std::vector<Vec3> vertices;
  vertices.reserve(nv);
  for (long i = 0; i < nv; ++i) {
    if (!std::getline(in, line)) fail(name, "unexpected end of file in vertex data");
    ++lineno;
    auto toks = split_ws(line);
    if (toks.size() < vertex_props.size())
      fail_line(name, lineno, "short vertex record");
    Vec3 v;
    if (!parse_double(toks[xi], v.x) || !parse_double(toks[yi], v.y) ||
        !parse_double(toks[zi], v.z))
      fail_line(name, lineno, "bad vertex coordinate");
    vertices.push_back(v);
  }
  std::vector<std::array<int, 3>> faces;
  for (long i = 0; i < nf; ++i) {
    if (!std::getline(in, line)) fail(name, "unexpected end of file in face data");
    ++lineno;
    auto toks = split_ws(line);
    if (toks.empty()) { --i; continue; }
    long cnt = 0;
    if (!parse_int(toks[0], cnt) || cnt < 3 || toks.size() < static_cast<size_t>(cnt) + 1)
      fail_line(name, lineno, "malformed face record");
    std::vector<int> poly;
    for (long k = 0; k < cnt; ++k) {
      long idx = 0;
      if (!parse_int(toks[k + 1], idx))
        fail_line(name, lineno, "bad face vertex index '" + toks[k + 1] + "'");
      poly.push_back(static_cast<int>(idx));
    }
    emit_fan(poly, faces);
  }
  return finish_mesh(std::move(vertices), std::move(faces), name, "ply", stats);
}

TriMesh load_mesh(const std::string& path, MeshFormat fmt, MeshLoadStats* stats) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error(path + ": cannot open file");

  if (fmt == MeshFormat::Auto) {
    std::string ext;
    auto dot = path.find_last_of('.');
    if (dot != std::string::npos) {
      ext = path.substr(dot + 1);
      std::transform(ext.begin(), ext.end(), ext.begin(),
                     [](unsigned char c) { return std::tolower(c); });
    }
    if (ext == "obj") fmt = MeshFormat::Obj;
    else if (ext == "off") fmt = MeshFormat::Off;
    else if (ext == "ply") fmt = MeshFormat::PlyAscii;
    else {
      // No usable extension; sniff the magic token.
      std::string first;
      in >> first;
      in.seekg(0);
      if (first == "OFF") fmt = MeshFormat::Off;
      else if (first == "ply") fmt = MeshFormat::PlyAscii;
      else fmt = MeshFormat::Obj;
    }
  }

  switch (fmt) {
    case MeshFormat::Obj: return parse_obj(in, path, stats);
    case MeshFormat::Off: return parse_off(in, path, stats);
    case MeshFormat::PlyAscii: return parse_ply_ascii(in, path, stats);
    default: throw std::runtime_error(path + ": unknown mesh format");
  }
}

void save_obj(const TriMesh& mesh, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error(path + ": cannot open file for writing");
  char buf[128];
  for (const auto& v : mesh.vertices) {
    std::snprintf(buf, sizeof buf, "v %.17g %.17g %.17g\n", v.x, v.y, v.z);
    out << buf;
  }
  for (const auto& f : mesh.faces)
    out << "f " << f[0] + 1 << ' ' << f[1] + 1 << ' ' << f[2] + 1 << '\n';
  if (!out) throw std::runtime_error(path + ": write failed");
}

TriMesh normalize(const TriMesh& mesh) {
  if (mesh.vertices.empty()) throw std::runtime_error("normalize: empty mesh");
  Aabb box = mesh.bounds();
  double side = box.longest_side();
  if (!(side > 0.0)) throw std::runtime_error("normalize: mesh has zero spatial extent");

  Vec3 center = box.center();
  // Already in canonical pose: return unchanged so the operation is exactly
  // idempotent (recomputing center/scale would perturb vertices by a few ulp).
  if (std::abs(center.x) <= 1e-12 && std::abs(center.y) <= 1e-12 &&
      std::abs(center.z) <= 1e-12 && std::abs(side - 1.0) <= 1e-12)
    return mesh;

  double s = 1.0 / side;
  TriMesh out;
  out.vertices.reserve(mesh.vertices.size());
  for (const auto& v : mesh.vertices) out.vertices.push_back((v - center) * s);
  out.faces = mesh.faces;
  out.compute_face_normals();
  return out;
}

bool is_normalized(const TriMesh& mesh, double tol) {
  if (mesh.vertices.empty()) return false;
  Aabb box = mesh.bounds();
  Vec3 c = box.center();
  return std::abs(c.x) <= tol && std::abs(c.y) <= tol && std::abs(c.z) <= tol &&
         std::abs(box.longest_side() - 1.0) <= tol;
}

std::vector<SurfaceSample> sample_surface(const TriMesh& mesh, int n, uint64_t seed) {
  if (n < 0) throw std::invalid_argument("sample_surface: negative sample count");
  if (mesh.faces.empty()) throw std::runtime_error("sample_surface: mesh has no faces");
  if (mesh.face_normals.size() != mesh.faces.size())
    throw std::runtime_error("sample_surface: face normals not computed");

  std::vector<double> cum(mesh.faces.size());
  double total = 0.0;
  for (size_t f = 0; f < mesh.faces.size(); ++f) {
    total += mesh.face_area(static_cast<int>(f));
    cum[f] = total;
  }
  if (!(total > 0.0)) throw std::runtime_error("sample_surface: mesh has zero area");

  Rng rng(seed);
  std::vector<SurfaceSample> out;
  out.reserve(n);
  for (int i = 0; i < n; ++i) {
    double r = rng.uniform() * total;
    auto it = std::upper_bound(cum.begin(), cum.end(), r);
    int f = static_cast<int>(std::min<size_t>(it - cum.begin(), cum.size() - 1));
    double u = rng.uniform(), v = rng.uniform();
    if (u + v > 1.0) {
      u = 1.0 - u;
      v = 1.0 - v;
    }
    const auto& tri = mesh.faces[f];
    const Vec3& a = mesh.vertices[tri[0]];
    Vec3 p = a + (mesh.vertices[tri[1]] - a) * u + (mesh.vertices[tri[2]] - a) * v;
    out.push_back({p, mesh.face_normals[f], f});
  }
  return out;
}

}  // namespace sketchgen
