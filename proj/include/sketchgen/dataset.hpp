#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "sketchgen/sketch.hpp"

namespace sketchgen {

enum class Split { SyntheticTrain, RealFinetune, RealEval };

std::string split_name(Split s);
Split split_from_name(const std::string& name, const std::string& context);

struct ManifestEntry {
  std::string mesh_path;
  std::string sketch_path;
  std::string category;
  Split split = Split::SyntheticTrain;
};

struct DatasetManifest {
  std::vector<ManifestEntry> entries;
};

// CSV with the exact header mesh_path,sketch_path,category,split. Sketch
// paths must be unique (each row owns its output file). Fields may not
// contain commas.
DatasetManifest load_manifest(const std::string& path);
void save_manifest(const DatasetManifest& m, const std::string& path);

enum class BatchStatus { Generated, Skipped, Failed };

struct BatchEntryReport {
  std::string mesh_path;
  std::string sketch_path;
  BatchStatus status = BatchStatus::Generated;
  std::string error;
  double ms = 0.0;
  size_t strokes = 0;
  size_t points = 0;
};

struct BatchReport {
  std::vector<BatchEntryReport> entries;  // manifest order
  size_t generated = 0;
  size_t skipped = 0;
  size_t failed = 0;
  double ms_total = 0.0;
};

nlohmann::json batch_report_to_json(const BatchReport& r);

// Generate one sketch per manifest row. Every row's randomness is derived
// from `seed` mixed with its mesh path, so outputs do not depend on row
// order or on how many jobs run, and rerunning reproduces files byte for
// byte. Existing sketch files are skipped unless `force` is set. A row that
// fails (unreadable mesh, empty salient cloud) is reported and does not stop
// the batch.
BatchReport generate_dataset(const DatasetManifest& manifest, const PipelineParams& params,
                             uint64_t seed, bool force = false, int jobs = 1);

}  // namespace sketchgen
