#include "sketchgen/sketch.hpp"

#include <cmath>
#include <fstream>
#include <stdexcept>

namespace sketchgen {

namespace {

nlohmann::json params_to_json(const PipelineParams& p) {
  return {
      {"surface_samples", p.surface_samples},
      {"sharp_threshold_deg", p.sharp_threshold_deg},
      {"salient_spacing", p.salient_spacing},
      {"link_radius", p.link_radius},
      {"min_seg_len", p.min_seg_len},
      {"fit_rms_max", p.fit_rms_max},
      {"cull_cos_dist", p.cull_cos_dist},
      {"merge_threshold", p.merge_threshold},
      {"knn", p.knn},
      {"skip_prob", p.skip_prob},
  };
}

PipelineParams params_from_json(const nlohmann::json& j) {
  PipelineParams p;
  p.surface_samples = j.value("surface_samples", p.surface_samples);
  p.sharp_threshold_deg = j.value("sharp_threshold_deg", p.sharp_threshold_deg);
  p.salient_spacing = j.value("salient_spacing", p.salient_spacing);
  p.link_radius = j.value("link_radius", p.link_radius);
  p.min_seg_len = j.value("min_seg_len", p.min_seg_len);
  p.fit_rms_max = j.value("fit_rms_max", p.fit_rms_max);
  p.cull_cos_dist = j.value("cull_cos_dist", p.cull_cos_dist);
  p.merge_threshold = j.value("merge_threshold", p.merge_threshold);
  p.knn = j.value("knn", p.knn);
  p.skip_prob = j.value("skip_prob", p.skip_prob);
  return p;
}

}  // namespace

size_t Sketch::total_points() const {
  size_t n = 0;
  for (const auto& s : strokes) n += s.points.size();
  return n;
}

bool Sketch::operator==(const Sketch& o) const {
  if (!(meta == o.meta) || strokes.size() != o.strokes.size()) return false;
  for (size_t i = 0; i < strokes.size(); ++i)
    if (strokes[i].id != o.strokes[i].id || strokes[i].points != o.strokes[i].points)
      return false;
  return true;
}

void validate_sketch(const Sketch& s, const std::string& context) {
  if (s.strokes.empty()) throw std::runtime_error(context + ": sketch has no strokes");
  for (size_t i = 0; i < s.strokes.size(); ++i) {
    const auto& pts = s.strokes[i].points;
    if (pts.size() < 2)
      throw std::runtime_error(context + ": stroke " + std::to_string(i) +
                               " has fewer than 2 points");
    for (const auto& p : pts)
      for (int k = 0; k < 3; ++k) {
        if (!std::isfinite(p[k]))
          throw std::runtime_error(context + ": stroke " + std::to_string(i) +
                                   " has a non-finite coordinate");
        if (p[k] < 0.0 || p[k] > 1.0)
          throw std::runtime_error(context + ": stroke " + std::to_string(i) +
                                   " has a coordinate outside [0, 1]");
      }
  }
}

nlohmann::json sketch_to_json(const Sketch& s) {
  nlohmann::json strokes = nlohmann::json::array();
  for (const auto& stroke : s.strokes) {
    nlohmann::json pts = nlohmann::json::array();
    for (const auto& p : stroke.points) pts.push_back({p.x, p.y, p.z});
    strokes.push_back(std::move(pts));
  }
  return {
      {"version", 1},
      {"strokes", std::move(strokes)},
      {"meta",
       {{"mesh_id", s.meta.mesh_id},
        {"seed", s.meta.seed},
        {"params", params_to_json(s.meta.params)}}},
  };
}

Sketch sketch_from_json(const nlohmann::json& j, const std::string& context) {
  if (!j.is_object()) throw std::runtime_error(context + ": sketch document must be an object");
  if (!j.contains("version") || !j["version"].is_number_integer() ||
      j["version"].get<int>() != 1)
    throw std::runtime_error(context + ": unsupported or missing sketch version");
  if (!j.contains("strokes") || !j["strokes"].is_array())
    throw std::runtime_error(context + ": missing strokes array");

  Sketch s;
  int id = 0;
  for (const auto& js : j["strokes"]) {
    if (!js.is_array()) throw std::runtime_error(context + ": stroke must be an array");
    Stroke stroke;
    stroke.id = id++;
    for (const auto& jp : js) {
      if (!jp.is_array() || jp.size() != 3 || !jp[0].is_number() || !jp[1].is_number() ||
          !jp[2].is_number())
        throw std::runtime_error(context + ": point must be an array of 3 numbers");
      stroke.points.push_back({jp[0].get<double>(), jp[1].get<double>(), jp[2].get<double>()});
    }
    s.strokes.push_back(std::move(stroke));
  }
  if (j.contains("meta")) {
    const auto& m = j["meta"];
    s.meta.mesh_id = m.value("mesh_id", std::string());
    s.meta.seed = m.value("seed", uint64_t{0});
    if (m.contains("params")) s.meta.params = params_from_json(m["params"]);
  }
  validate_sketch(s, context);
  return s;
}

void save_sketch(const Sketch& s, const std::string& path) {
  validate_sketch(s, "save_sketch(" + path + ")");
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error(path + ": cannot open file for writing");
  out << sketch_to_json(s).dump(2) << '\n';
  if (!out) throw std::runtime_error(path + ": write failed");
}

Sketch load_sketch(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error(path + ": cannot open file");
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& e) {
    throw std::runtime_error(path + ": invalid JSON: " + e.what());
  }
  return sketch_from_json(j, path);
}

Sketch truncate(const Sketch& s, double keep_fraction) {
  validate_sketch(s, "truncate");
  if (!(keep_fraction > 0.0) || keep_fraction > 1.0)
    throw std::invalid_argument("truncate: keep_fraction must be in (0, 1]");

  size_t total = s.total_points();
  size_t budget = static_cast<size_t>(std::ceil(keep_fraction * static_cast<double>(total)));
  budget = std::max<size_t>(2, std::min(budget, total));

  Sketch out;
  out.meta = s.meta;
  size_t used = 0;
  for (const auto& stroke : s.strokes) {
    if (used >= budget) break;
    size_t room = budget - used;
    Stroke kept;
    kept.id = static_cast<int>(out.strokes.size());
    if (stroke.points.size() <= room) {
      kept.points = stroke.points;
    } else {
      // Partial strokes keep at least 2 points to stay a valid polyline.
      size_t take = std::max<size_t>(2, room);
      kept.points.assign(stroke.points.begin(), stroke.points.begin() + take);
    }
    used += kept.points.size();
    out.strokes.push_back(std::move(kept));
  }
  return out;
}

}  // namespace sketchgen
