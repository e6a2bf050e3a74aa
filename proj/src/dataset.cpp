#include "sketchgen/dataset.hpp"

#include <chrono>
#include <filesystem>
#include <fstream>
#include <set>
#include <sstream>
#include <stdexcept>

#include "sketchgen/mesh.hpp"
#include "sketchgen/pipeline.hpp"
#include "sketchgen/rng.hpp"

namespace sketchgen {

namespace {

std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> fields;
  std::stringstream ss(line);
  std::string f;
  while (std::getline(ss, f, ',')) fields.push_back(f);
  if (!line.empty() && line.back() == ',') fields.push_back("");
  return fields;
}

const char* kHeader = "mesh_path,sketch_path,category,split";

}  // namespace

std::string split_name(Split s) {
  switch (s) {
    case Split::SyntheticTrain: return "synthetic-train";
    case Split::RealFinetune: return "real-finetune";
    case Split::RealEval: return "real-eval";
  }
  throw std::logic_error("split_name: bad enum value");
}

Split split_from_name(const std::string& name, const std::string& context) {
  if (name == "synthetic-train") return Split::SyntheticTrain;
  if (name == "real-finetune") return Split::RealFinetune;
  if (name == "real-eval") return Split::RealEval;
  throw std::runtime_error(context + ": unknown split '" + name +
                           "' (expected synthetic-train, real-finetune or real-eval)");
}

DatasetManifest load_manifest(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error(path + ": cannot open file");

  std::string line;
  size_t lineno = 0;
  if (!std::getline(in, line)) throw std::runtime_error(path + ": empty manifest");
  ++lineno;
  if (!line.empty() && line.back() == '\r') line.pop_back();
  if (line != kHeader)
    throw std::runtime_error(path + ": bad header '" + line + "' (expected '" + kHeader + "')");

  DatasetManifest m;
  std::set<std::string> sketch_paths;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    auto fields = split_csv_line(line);
    std::string ctx = path + ":" + std::to_string(lineno);
    if (fields.size() != 4)
      throw std::runtime_error(ctx + ": expected 4 fields, got " +
                               std::to_string(fields.size()));
    ManifestEntry e;
    e.mesh_path = fields[0];
    e.sketch_path = fields[1];
    e.category = fields[2];
    e.split = split_from_name(fields[3], ctx);
    if (e.mesh_path.empty() || e.sketch_path.empty())
      throw std::runtime_error(ctx + ": mesh_path and sketch_path must be non-empty");
    if (!sketch_paths.insert(e.sketch_path).second)
      throw std::runtime_error(ctx + ": duplicate sketch_path '" + e.sketch_path + "'");
    m.entries.push_back(std::move(e));
  }
  return m;
}

void save_manifest(const DatasetManifest& m, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error(path + ": cannot open file for writing");
  out << kHeader << '\n';
  for (const auto& e : m.entries) {
    for (const std::string* f : {&e.mesh_path, &e.sketch_path, &e.category})
      if (f->find(',') != std::string::npos)
        throw std::runtime_error(path + ": field '" + *f + "' contains a comma");
    out << e.mesh_path << ',' << e.sketch_path << ',' << e.category << ','
        << split_name(e.split) << '\n';
  }
  if (!out) throw std::runtime_error(path + ": write failed");
}

nlohmann::json batch_report_to_json(const BatchReport& r) {
  nlohmann::json entries = nlohmann::json::array();
  for (const auto& e : r.entries) {
    const char* status = e.status == BatchStatus::Generated ? "generated"
                         : e.status == BatchStatus::Skipped ? "skipped"
                                                            : "failed";
    nlohmann::json je = {
        {"mesh_path", e.mesh_path}, {"sketch_path", e.sketch_path},
        {"status", status},         {"ms", e.ms},
        {"strokes", e.strokes},     {"points", e.points},
    };
    if (!e.error.empty()) je["error"] = e.error;
    entries.push_back(std::move(je));
  }
  return {
      {"entries", std::move(entries)}, {"generated", r.generated},
      {"skipped", r.skipped},          {"failed", r.failed},
      {"ms_total", r.ms_total},
  };
}

BatchReport generate_dataset(const DatasetManifest& manifest, const PipelineParams& params,
                             uint64_t seed, bool force, int jobs) {
  if (jobs < 1) throw std::invalid_argument("generate_dataset: jobs must be at least 1");

  auto t0 = std::chrono::steady_clock::now();
  BatchReport report;
  report.entries.resize(manifest.entries.size());

#pragma omp parallel for schedule(dynamic) num_threads(jobs) if (jobs > 1)
  for (long i = 0; i < static_cast<long>(manifest.entries.size()); ++i) {
    const ManifestEntry& entry = manifest.entries[i];
    BatchEntryReport& er = report.entries[i];
    er.mesh_path = entry.mesh_path;
    er.sketch_path = entry.sketch_path;
    auto te0 = std::chrono::steady_clock::now();
    try {
      if (!force && std::filesystem::exists(entry.sketch_path)) {
        er.status = BatchStatus::Skipped;
      } else {
        TriMesh mesh = load_mesh(entry.mesh_path);
        uint64_t mesh_seed = mix_seed(seed, fnv1a64(entry.mesh_path));
        Sketch sketch = generate_sketch(mesh, entry.mesh_path, params, mesh_seed);
        auto dir = std::filesystem::path(entry.sketch_path).parent_path();
        if (!dir.empty()) std::filesystem::create_directories(dir);
        save_sketch(sketch, entry.sketch_path);
        er.status = BatchStatus::Generated;
        er.strokes = sketch.strokes.size();
        er.points = sketch.total_points();
      }
    } catch (const std::exception& e) {
      er.status = BatchStatus::Failed;
      er.error = e.what();
    }
    er.ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - te0)
                .count();
  }

  for (const auto& e : report.entries) {
    if (e.status == BatchStatus::Generated) ++report.generated;
    else if (e.status == BatchStatus::Skipped) ++report.skipped;
    else ++report.failed;
  }
  report.ms_total =
      std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
  return report;
}

}  // namespace sketchgen
