// Command line front end: mesh-to-sketch generation, dataset batching, and
// the token/embedding/metric utilities, all seeded and deterministic.
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "sketchgen/dataset.hpp"
#include "sketchgen/embedding.hpp"
#include "sketchgen/mesh.hpp"
#include "sketchgen/metrics.hpp"
#include "sketchgen/pipeline.hpp"
#include "sketchgen/procedural.hpp"
#include "sketchgen/sketch.hpp"
#include "sketchgen/tokenizer.hpp"

namespace {

using namespace sketchgen;

MeshFormat parse_format(const std::string& f) {
  if (f == "auto") return MeshFormat::Auto;
  if (f == "obj") return MeshFormat::Obj;
  if (f == "off") return MeshFormat::Off;
  if (f == "ply") return MeshFormat::PlyAscii;
  throw std::invalid_argument("unknown mesh format: " + f);
}

void add_pipeline_flags(CLI::App* cmd, PipelineParams& p) {
  cmd->add_option("--samples", p.surface_samples, "surface samples for smooth-mesh fallback")
      ->capture_default_str();
  cmd->add_option("--sharp-threshold-deg", p.sharp_threshold_deg,
                  "dihedral deviation that makes an edge sharp")
      ->capture_default_str();
  cmd->add_option("--salient-spacing", p.salient_spacing, "max spacing of edge samples")
      ->capture_default_str();
  cmd->add_option("--link-radius", p.link_radius, "chaining neighbourhood radius")
      ->capture_default_str();
  cmd->add_option("--min-seg-len", p.min_seg_len, "min chain points for a curve fit")
      ->capture_default_str();
  cmd->add_option("--fit-rms-max", p.fit_rms_max, "max RMS fit error before splitting")
      ->capture_default_str();
  cmd->add_option("--cull-cos-dist", p.cull_cos_dist, "min cosine distance a point must turn")
      ->capture_default_str();
  cmd->add_option("--merge-threshold", p.merge_threshold, "endpoint distance that joins strokes")
      ->capture_default_str();
  cmd->add_option("--knn", p.knn, "endpoint graph neighbours")->capture_default_str();
  cmd->add_option("--skip-prob", p.skip_prob, "traversal skip probability")
      ->capture_default_str();
}

void write_json(const nlohmann::json& j, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open for writing: " + path);
  out << j.dump(2) << '\n';
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"deterministic mesh-to-sketch toolkit"};
  app.require_subcommand(1);

  std::string mesh_path, shape_name, format = "auto", in_path, out_path;
  std::string weights_path, manifest_path, report_path, pred_path, gt_path;
  uint64_t seed = 0;
  PipelineParams params;

  auto* gen = app.add_subcommand("generate", "convert one mesh to a sketch");
  auto* gen_mesh = gen->add_option("--mesh", mesh_path, "input mesh file");
  auto* gen_shape =
      gen->add_option("--shape", shape_name, "procedural mesh: cube, table, chair, icosphere");
  gen_mesh->excludes(gen_shape);
  gen_shape->excludes(gen_mesh);
  gen->add_option("--format", format, "mesh format")
      ->check(CLI::IsMember({"auto", "obj", "off", "ply"}))
      ->capture_default_str();
  gen->add_option("--out", out_path, "output sketch JSON")->required();
  gen->add_option("--seed", seed, "random seed")->capture_default_str();
  add_pipeline_flags(gen, params);

  auto* batch = app.add_subcommand("batch", "generate every sketch in a manifest");
  batch->add_option("--manifest", manifest_path, "CSV manifest")->required();
  batch->add_option("--seed", seed, "random seed")->capture_default_str();
  bool force = false;
  int jobs = 1;
  batch->add_flag("--force", force, "regenerate existing sketch files");
  batch->add_option("--jobs", jobs, "parallel workers")->capture_default_str();
  batch->add_option("--report", report_path, "write a JSON batch report here");
  add_pipeline_flags(batch, params);

  auto* trunc = app.add_subcommand("truncate", "keep a temporal prefix of a sketch");
  trunc->add_option("--in", in_path, "input sketch JSON")->required();
  trunc->add_option("--out", out_path, "output sketch JSON")->required();
  double keep = 0.25;
  trunc->add_option("--keep", keep, "fraction of points to keep")->capture_default_str();

  auto* tok = app.add_subcommand("tokenize", "flatten a sketch into a token sequence");
  tok->add_option("--in", in_path, "input sketch JSON")->required();
  tok->add_option("--out", out_path, "output token JSON")->required();

  auto* aug = app.add_subcommand("augment", "randomly mask and swap token strokes");
  aug->add_option("--in", in_path, "input token JSON")->required();
  aug->add_option("--out", out_path, "output token JSON")->required();
  AugmentRates rates;
  aug->add_option("--stroke-drop", rates.stroke_drop, "whole-stroke mask rate")
      ->capture_default_str();
  aug->add_option("--point-drop", rates.point_drop, "point mask rate")->capture_default_str();
  aug->add_option("--stroke-swap", rates.stroke_swap, "per-slot swap rate")
      ->capture_default_str();
  aug->add_option("--seed", seed, "random seed")->capture_default_str();

  auto* comp = app.add_subcommand("completion-input",
                                  "keep a token prefix and pad it with masked strokes");
  comp->add_option("--in", in_path, "input token JSON")->required();
  comp->add_option("--out", out_path, "output token JSON")->required();
  comp->add_option("--keep", keep, "fraction of tokens to keep")->capture_default_str();
  int pad_tokens = 100;
  comp->add_option("--pad", pad_tokens, "pad token count")->capture_default_str();
  comp->add_option("--seed", seed, "random seed")->capture_default_str();

  auto* emb = app.add_subcommand("embed", "embed a token sequence into a matrix");
  emb->add_option("--in", in_path, "input token JSON")->required();
  emb->add_option("--weights", weights_path, "weight file (omit for reference weights)");
  emb->add_option("--out", out_path, "output matrix file")->required();
  bool serial = false;
  emb->add_flag("--serial", serial, "use the serial reference path");

  auto* mkw = app.add_subcommand("make-weights", "write deterministic reference weights");
  mkw->add_option("--out", out_path, "output weight file")->required();
  int levels = 10, dim = 256, hidden = 256;
  mkw->add_option("--levels", levels, "spatial frequency count")->capture_default_str();
  mkw->add_option("--dim", dim, "embedding width")->capture_default_str();
  mkw->add_option("--hidden", hidden, "MLP hidden width")->capture_default_str();
  uint64_t weight_seed = 2024;
  mkw->add_option("--seed", weight_seed, "random seed")->capture_default_str();

  auto* mkm = app.add_subcommand("make-mesh", "write a procedural test mesh");
  mkm->add_option("--shape", shape_name, "cube, table, chair, icosphere")->required();
  mkm->add_option("--out", out_path, "output OBJ file")->required();

  auto* eval = app.add_subcommand("evaluate", "Chamfer and F-score between two shapes");
  eval->add_option("--pred", pred_path, "predicted mesh, or a sketch JSON")->required();
  eval->add_option("--gt", gt_path, "ground-truth mesh")->required();
  eval->add_option("--format", format, "mesh format")
      ->check(CLI::IsMember({"auto", "obj", "off", "ply"}))
      ->capture_default_str();
  int n = 4096;
  double delta = 0.02;
  eval->add_option("--n", n, "surface samples per side")->capture_default_str();
  eval->add_option("--delta", delta, "F-score distance threshold")->capture_default_str();
  eval->add_option("--seed", seed, "random seed")->capture_default_str();
  eval->add_option("--out", report_path, "write the JSON report here");

  CLI11_PARSE(app, argc, argv);

  try {
    if (gen->parsed()) {
      if (mesh_path.empty() && shape_name.empty())
        throw std::invalid_argument("generate needs --mesh or --shape");
      TriMesh mesh = shape_name.empty() ? load_mesh(mesh_path, parse_format(format))
                                        : make_named_shape(shape_name);
      std::string mesh_id = shape_name.empty() ? mesh_path : shape_name;
      PipelineDiag diag;
      Sketch sk = generate_sketch(mesh, mesh_id, params, seed, &diag);
      save_sketch(sk, out_path);
      std::cout << "wrote " << out_path << ": " << sk.strokes.size() << " strokes, "
                << sk.total_points() << " points, " << diag.sharp_edges << " sharp edges, "
                << diag.ms_total << " ms\n";
    } else if (batch->parsed()) {
      DatasetManifest manifest = load_manifest(manifest_path);
      BatchReport r = generate_dataset(manifest, params, seed, force, jobs);
      for (const auto& e : r.entries)
        if (e.status == BatchStatus::Failed)
          std::cerr << "failed: " << e.mesh_path << ": " << e.error << "\n";
      if (!report_path.empty()) write_json(batch_report_to_json(r), report_path);
      std::cout << "generated " << r.generated << ", skipped " << r.skipped << ", failed "
                << r.failed << " (" << r.ms_total << " ms)\n";
      return r.failed == 0 ? 0 : 1;
    } else if (trunc->parsed()) {
      Sketch sk = truncate(load_sketch(in_path), keep);
      save_sketch(sk, out_path);
      std::cout << "wrote " << out_path << ": " << sk.strokes.size() << " strokes, "
                << sk.total_points() << " points\n";
    } else if (tok->parsed()) {
      TokenSequence seq = tokenize(load_sketch(in_path));
      save_tokens(seq, out_path);
      std::cout << "wrote " << out_path << ": " << seq.tokens.size() << " tokens, "
                << seq.stroke_count << " strokes\n";
    } else if (aug->parsed()) {
      AugmentStats stats;
      TokenSequence seq = augment(load_tokens(in_path), rates, seed, &stats);
      save_tokens(seq, out_path);
      std::cout << "wrote " << out_path << ": dropped " << stats.strokes_dropped << "/"
                << stats.strokes_total << " strokes, " << stats.points_dropped << "/"
                << stats.points_considered << " points, swapped " << stats.swaps_selected
                << " slots\n";
    } else if (comp->parsed()) {
      TokenSequence seq = build_completion_input(load_tokens(in_path), keep, seed, pad_tokens);
      save_tokens(seq, out_path);
      std::cout << "wrote " << out_path << ": " << seq.tokens.size() << " tokens, "
                << seq.stroke_count << " strokes\n";
    } else if (emb->parsed()) {
      EmbeddingConfig cfg =
          weights_path.empty() ? EmbeddingConfig::reference() : load_weights(weights_path);
      TokenSequence seq = load_tokens(in_path);
      std::vector<double> rows = embed(seq, cfg, !serial);
      save_embedding(rows, cfg.dim, out_path);
      std::cout << "wrote " << out_path << ": " << seq.tokens.size() << " x " << cfg.dim
                << "\n";
    } else if (mkw->parsed()) {
      save_weights(EmbeddingConfig::reference(levels, dim, hidden, weight_seed), out_path);
      std::cout << "wrote " << out_path << "\n";
    } else if (mkm->parsed()) {
      save_obj(make_named_shape(shape_name), out_path);
      std::cout << "wrote " << out_path << "\n";
    } else if (eval->parsed()) {
      TriMesh gt = load_mesh(gt_path, parse_format(format));
      EvalReport r;
      if (std::filesystem::path(pred_path).extension() == ".json")
        r = evaluate_points_vs_mesh(sketch_points(load_sketch(pred_path)), gt, n, seed, delta);
      else
        r = evaluate_meshes(load_mesh(pred_path, parse_format(format)), gt, n, seed, seed,
                            delta);
      if (!report_path.empty()) write_json(report_to_json(r), report_path);
      std::cout << "cd " << r.cd.bidirectional << ", fscore " << r.f.fscore << " (n " << n
                << ", delta " << delta << ")\n";
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
