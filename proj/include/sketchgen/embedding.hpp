#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "sketchgen/tokenizer.hpp"

namespace sketchgen {

// Spatial frequency features for a coordinate t: [sin(2^l pi t),
// cos(2^l pi t)] interleaved for l = 0..levels-1, giving 2*levels values.
std::vector<double> phi_spatial(double t, int levels);

// Transformer-style sequence features for an index t: [sin(t / 10000^(2d/D)),
// cos(t / 10000^(2d/D))] interleaved for d = 0..D/2-1, giving D values. D
// must be even.
std::vector<double> phi_sequence(int t, int dim);

// Token embedding parameters. Point tokens run their concatenated spatial
// features through a one-hidden-layer ReLU MLP; SEP/EOS/MASK substitute a
// learned vector. Every token adds two linear projections of its stroke and
// point sequence features. All matrices are row-major.
struct EmbeddingConfig {
  int levels = 10;   // spatial frequency count L
  int dim = 256;     // embedding width D
  int hidden = 256;  // MLP hidden width

  std::vector<float> spa_w1;  // [hidden x 6*levels]
  std::vector<float> spa_b1;  // [hidden]
  std::vector<float> spa_w2;  // [dim x hidden]
  std::vector<float> spa_b2;  // [dim]
  std::vector<float> stroke_w, point_w;  // [dim x dim]
  std::vector<float> stroke_b, point_b;  // [dim]
  std::vector<float> sep_vec, eos_vec, mask_vec;  // [dim]

  // Deterministic untrained weights: random orthonormal projections derived
  // from `seed`, zero biases and zero special-token vectors.
  static EmbeddingConfig reference(int levels = 10, int dim = 256, int hidden = 256,
                                   uint64_t seed = 2024);

  void validate(const std::string& context) const;
};

// Fixed-layout binary weight file: a text header naming dimensions and
// blocks, then the raw little-endian float32 payload in header order.
void save_weights(const EmbeddingConfig& cfg, const std::string& path);
EmbeddingConfig load_weights(const std::string& path);

// Row-major T x dim embedding matrix, one row per token. Rows are
// independent; `parallel` runs them under OpenMP and matches the serial
// path exactly.
std::vector<double> embed(const TokenSequence& seq, const EmbeddingConfig& cfg,
                          bool parallel = true);

// Embedding matrices on disk: text header "sketchgen-embedding 1\nrows R\n
// cols C\ndata\n" followed by row-major little-endian float64.
void save_embedding(const std::vector<double>& rows, size_t dim, const std::string& path);

}  // namespace sketchgen
