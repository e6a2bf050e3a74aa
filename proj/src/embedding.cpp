#include "sketchgen/embedding.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include "sketchgen/rng.hpp"

namespace sketchgen {

namespace {

constexpr double kPi = 3.14159265358979323846;

// Columns of an [rows x cols] matrix orthonormalized by modified
// Gram-Schmidt over seeded Gaussian draws (two passes for stability).
// Requires cols <= rows.
std::vector<float> random_orthonormal(int rows, int cols, uint64_t seed) {
  Rng rng(seed);
  std::vector<double> m(static_cast<size_t>(rows) * cols);
  for (auto& v : m) v = rng.normal();

  auto col = [&](int c, int r) -> double& { return m[static_cast<size_t>(r) * cols + c]; };
  for (int c = 0; c < cols; ++c) {
    for (int pass = 0; pass < 2; ++pass) {
      for (int prev = 0; prev < c; ++prev) {
        double proj = 0.0;
        for (int r = 0; r < rows; ++r) proj += col(c, r) * col(prev, r);
        for (int r = 0; r < rows; ++r) col(c, r) -= proj * col(prev, r);
      }
    }
    double n2 = 0.0;
    for (int r = 0; r < rows; ++r) n2 += col(c, r) * col(c, r);
    double inv = 1.0 / std::sqrt(n2);
    for (int r = 0; r < rows; ++r) col(c, r) *= inv;
  }

  std::vector<float> out(m.size());
  for (size_t i = 0; i < m.size(); ++i) out[i] = static_cast<float>(m[i]);
  return out;
}

struct BlockSpec {
  const char* name;
  size_t rows, cols;
  std::vector<float> EmbeddingConfig::*member;
};

// Fixed file block order; dimensions depend on (levels, dim, hidden).
std::vector<BlockSpec> block_specs(int levels, int dim, int hidden) {
  size_t L6 = static_cast<size_t>(6) * levels;
  size_t D = static_cast<size_t>(dim), H = static_cast<size_t>(hidden);
  return {
      {"spa_w1", H, L6, &EmbeddingConfig::spa_w1},
      {"spa_b1", H, 1, &EmbeddingConfig::spa_b1},
      {"spa_w2", D, H, &EmbeddingConfig::spa_w2},
      {"spa_b2", D, 1, &EmbeddingConfig::spa_b2},
      {"stroke_w", D, D, &EmbeddingConfig::stroke_w},
      {"stroke_b", D, 1, &EmbeddingConfig::stroke_b},
      {"point_w", D, D, &EmbeddingConfig::point_w},
      {"point_b", D, 1, &EmbeddingConfig::point_b},
      {"sep_vec", D, 1, &EmbeddingConfig::sep_vec},
      {"eos_vec", D, 1, &EmbeddingConfig::eos_vec},
      {"mask_vec", D, 1, &EmbeddingConfig::mask_vec},
  };
}

// y = W x + b with W [rows x cols] row-major; accumulation in double.
void affine(const std::vector<float>& w, const std::vector<float>& b, const double* x,
            int rows, int cols, double* y) {
  for (int r = 0; r < rows; ++r) {
    double acc = b.empty() ? 0.0 : b[r];
    const float* wr = w.data() + static_cast<size_t>(r) * cols;
    for (int c = 0; c < cols; ++c) acc += static_cast<double>(wr[c]) * x[c];
    y[r] = acc;
  }
}

}  // namespace

std::vector<double> phi_spatial(double t, int levels) {
  if (levels < 1) throw std::invalid_argument("phi_spatial: levels must be positive");
  std::vector<double> out(static_cast<size_t>(2) * levels);
  double freq = kPi;
  for (int l = 0; l < levels; ++l) {
    out[2 * l] = std::sin(freq * t);
    out[2 * l + 1] = std::cos(freq * t);
    freq *= 2.0;
  }
  return out;
}

std::vector<double> phi_sequence(int t, int dim) {
  if (dim < 2 || dim % 2 != 0)
    throw std::invalid_argument("phi_sequence: dim must be a positive even number");
  std::vector<double> out(dim);
  for (int d = 0; d < dim / 2; ++d) {
    double denom = std::pow(10000.0, 2.0 * d / dim);
    out[2 * d] = std::sin(t / denom);
    out[2 * d + 1] = std::cos(t / denom);
  }
  return out;
}

EmbeddingConfig EmbeddingConfig::reference(int levels, int dim, int hidden, uint64_t seed) {
  if (6 * levels > hidden)
    throw std::invalid_argument("EmbeddingConfig::reference: hidden must be >= 6*levels");
  if (hidden > dim)
    throw std::invalid_argument("EmbeddingConfig::reference: dim must be >= hidden");
  EmbeddingConfig cfg;
  cfg.levels = levels;
  cfg.dim = dim;
  cfg.hidden = hidden;
  cfg.spa_w1 = random_orthonormal(hidden, 6 * levels, mix_seed(seed, fnv1a64("spa_w1")));
  cfg.spa_w2 = random_orthonormal(dim, hidden, mix_seed(seed, fnv1a64("spa_w2")));
  cfg.stroke_w = random_orthonormal(dim, dim, mix_seed(seed, fnv1a64("stroke_w")));
  cfg.point_w = random_orthonormal(dim, dim, mix_seed(seed, fnv1a64("point_w")));
  cfg.spa_b1.assign(hidden, 0.0f);
  cfg.spa_b2.assign(dim, 0.0f);
  cfg.stroke_b.assign(dim, 0.0f);
  cfg.point_b.assign(dim, 0.0f);
  cfg.sep_vec.assign(dim, 0.0f);
  cfg.eos_vec.assign(dim, 0.0f);
  cfg.mask_vec.assign(dim, 0.0f);
  cfg.validate("EmbeddingConfig::reference");
  return cfg;
}

void EmbeddingConfig::validate(const std::string& context) const {
  if (levels < 1 || dim < 2 || dim % 2 != 0 || hidden < 1)
    throw std::runtime_error(context + ": bad dimensions (levels " + std::to_string(levels) +
                             ", dim " + std::to_string(dim) + ", hidden " +
                             std::to_string(hidden) + ")");
  for (const auto& spec : block_specs(levels, dim, hidden)) {
    size_t want = spec.rows * spec.cols;
    size_t got = (this->*spec.member).size();
    if (got != want)
      throw std::runtime_error(context + ": block " + spec.name + " has " +
                               std::to_string(got) + " values, expected " +
                               std::to_string(want));
  }
}

void save_weights(const EmbeddingConfig& cfg, const std::string& path) {
  cfg.validate("save_weights(" + path + ")");
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error(path + ": cannot open file for writing");
  out << "sketchgen-weights 1\n"
      << "levels " << cfg.levels << "\ndim " << cfg.dim << "\nhidden " << cfg.hidden << "\n";
  auto specs = block_specs(cfg.levels, cfg.dim, cfg.hidden);
  for (const auto& s : specs) out << "block " << s.name << ' ' << s.rows << ' ' << s.cols << "\n";
  out << "data\n";
  static_assert(sizeof(float) == 4);
  for (const auto& s : specs) {
    const auto& v = cfg.*(s.member);
    out.write(reinterpret_cast<const char*>(v.data()),
              static_cast<std::streamsize>(v.size() * sizeof(float)));
  }
  if (!out) throw std::runtime_error(path + ": write failed");
}

EmbeddingConfig load_weights(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error(path + ": cannot open file");

  std::string line;
  if (!std::getline(in, line) || line != "sketchgen-weights 1")
    throw std::runtime_error(path + ": bad magic line '" + line + "'");

  EmbeddingConfig cfg;
  struct Declared {
    std::string name;
    size_t rows, cols;
  };
  std::vector<Declared> declared;
  bool dims_seen[3] = {false, false, false};
  while (std::getline(in, line)) {
    std::istringstream ss(line);
    std::string key;
    ss >> key;
    if (key == "data") break;
    if (key == "levels") { ss >> cfg.levels; dims_seen[0] = true; }
    else if (key == "dim") { ss >> cfg.dim; dims_seen[1] = true; }
    else if (key == "hidden") { ss >> cfg.hidden; dims_seen[2] = true; }
    else if (key == "block") {
      Declared d;
      ss >> d.name >> d.rows >> d.cols;
      declared.push_back(d);
    } else {
      throw std::runtime_error(path + ": unexpected header line '" + line + "'");
    }
    if (ss.fail()) throw std::runtime_error(path + ": malformed header line '" + line + "'");
  }
  if (!dims_seen[0] || !dims_seen[1] || !dims_seen[2])
    throw std::runtime_error(path + ": header missing levels/dim/hidden");

  auto specs = block_specs(cfg.levels, cfg.dim, cfg.hidden);
  if (declared.size() != specs.size())
    throw std::runtime_error(path + ": expected " + std::to_string(specs.size()) +
                             " blocks, header declares " + std::to_string(declared.size()));
  for (size_t i = 0; i < specs.size(); ++i) {
    if (declared[i].name != specs[i].name)
      throw std::runtime_error(path + ": block " + std::to_string(i) + " is '" +
                               declared[i].name + "', expected '" + specs[i].name + "'");
    if (declared[i].rows != specs[i].rows || declared[i].cols != specs[i].cols)
      throw std::runtime_error(path + ": block " + declared[i].name + " is " +
                               std::to_string(declared[i].rows) + "x" +
                               std::to_string(declared[i].cols) + ", expected " +
                               std::to_string(specs[i].rows) + "x" +
                               std::to_string(specs[i].cols));
    auto& v = cfg.*(specs[i].member);
    v.resize(specs[i].rows * specs[i].cols);
    in.read(reinterpret_cast<char*>(v.data()),
            static_cast<std::streamsize>(v.size() * sizeof(float)));
    if (in.gcount() != static_cast<std::streamsize>(v.size() * sizeof(float)))
      throw std::runtime_error(path + ": truncated payload in block " + declared[i].name);
  }
  char extra;
  if (in.read(&extra, 1))
    throw std::runtime_error(path + ": trailing bytes after final block");
  cfg.validate(path);
  return cfg;
}

std::vector<double> embed(const TokenSequence& seq, const EmbeddingConfig& cfg, bool parallel) {
  cfg.validate("embed");
  size_t T = seq.tokens.size();
  size_t D = static_cast<size_t>(cfg.dim);
  std::vector<double> rows(T * D);

#pragma omp parallel for schedule(static) if (parallel)
  for (long r = 0; r < static_cast<long>(T); ++r) {
    const Token& tok = seq.tokens[r];
    double* out = rows.data() + static_cast<size_t>(r) * D;

    // Spatial term.
    if (tok.kind == TokenKind::Point) {
      std::vector<double> feat;
      feat.reserve(static_cast<size_t>(6) * cfg.levels);
      for (int axis = 0; axis < 3; ++axis) {
        auto f = phi_spatial(tok.coords[axis], cfg.levels);
        feat.insert(feat.end(), f.begin(), f.end());
      }
      std::vector<double> h(cfg.hidden);
      affine(cfg.spa_w1, cfg.spa_b1, feat.data(), cfg.hidden, 6 * cfg.levels, h.data());
      for (auto& v : h) v = std::max(v, 0.0);
      affine(cfg.spa_w2, cfg.spa_b2, h.data(), cfg.dim, cfg.hidden, out);
    } else {
      const std::vector<float>& learned = tok.kind == TokenKind::Sep   ? cfg.sep_vec
                                          : tok.kind == TokenKind::Eos ? cfg.eos_vec
                                                                       : cfg.mask_vec;
      for (size_t i = 0; i < D; ++i) out[i] = learned[i];
    }

    // Stroke and point position terms.
    std::vector<double> proj(D);
    auto add_positional = [&](const std::vector<float>& w, const std::vector<float>& b, int idx) {
      auto f = phi_sequence(idx, cfg.dim);
      affine(w, b, f.data(), cfg.dim, cfg.dim, proj.data());
      for (size_t i = 0; i < D; ++i) out[i] += proj[i];
    };
    add_positional(cfg.stroke_w, cfg.stroke_b, tok.stroke_index);
    add_positional(cfg.point_w, cfg.point_b, tok.point_index);
  }
  return rows;
}

void save_embedding(const std::vector<double>& rows, size_t dim, const std::string& path) {
  if (dim == 0 || rows.size() % dim != 0)
    throw std::invalid_argument("save_embedding: size is not a multiple of dim");
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error(path + ": cannot open file for writing");
  out << "sketchgen-embedding 1\nrows " << rows.size() / dim << "\ncols " << dim << "\ndata\n";
  static_assert(sizeof(double) == 8);
  out.write(reinterpret_cast<const char*>(rows.data()),
            static_cast<std::streamsize>(rows.size() * sizeof(double)));
  if (!out) throw std::runtime_error(path + ": write failed");
}

}  // namespace sketchgen
