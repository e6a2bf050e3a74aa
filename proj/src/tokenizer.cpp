#include "sketchgen/tokenizer.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <stdexcept>

#include "sketchgen/rng.hpp"

namespace sketchgen {

namespace {

struct Block {
  std::vector<Token> body;  // Point/Mask tokens
  Token sep;
  bool dropped = false;
};

// Split a validated sequence into per-stroke blocks plus the trailing EOS.
std::vector<Block> to_blocks(const TokenSequence& seq) {
  std::vector<Block> blocks;
  Block cur;
  for (size_t i = 0; i + 1 < seq.tokens.size(); ++i) {
    const Token& t = seq.tokens[i];
    if (t.kind == TokenKind::Sep) {
      cur.sep = t;
      blocks.push_back(std::move(cur));
      cur = Block{};
    } else {
      cur.body.push_back(t);
    }
  }
  return blocks;
}

TokenSequence from_blocks(const std::vector<Block>& blocks) {
  TokenSequence seq;
  seq.stroke_count = static_cast<int>(blocks.size());
  for (size_t s = 0; s < blocks.size(); ++s) {
    int stroke = static_cast<int>(s) + 1;
    int i = 1;
    for (Token t : blocks[s].body) {
      t.stroke_index = stroke;
      t.point_index = i++;
      seq.tokens.push_back(t);
    }
    Token sep = blocks[s].sep;
    sep.stroke_index = stroke;
    sep.point_index = i;
    seq.tokens.push_back(sep);
  }
  Token eos;
  eos.kind = TokenKind::Eos;
  eos.stroke_index = seq.stroke_count;
  eos.point_index = seq.tokens.back().point_index;
  seq.tokens.push_back(eos);
  return seq;
}

}  // namespace

TokenSequence tokenize(const Sketch& s) {
  validate_sketch(s, "tokenize");
  TokenSequence seq;
  seq.stroke_count = static_cast<int>(s.strokes.size());
  for (size_t k = 0; k < s.strokes.size(); ++k) {
    int stroke = static_cast<int>(k) + 1;
    const auto& pts = s.strokes[k].points;
    for (size_t i = 0; i < pts.size(); ++i)
      seq.tokens.push_back({TokenKind::Point, pts[i], stroke, static_cast<int>(i) + 1});
    seq.tokens.push_back({TokenKind::Sep, {}, stroke, static_cast<int>(pts.size()) + 1});
  }
  // EOS mirrors the final SEP's indices.
  seq.tokens.push_back({TokenKind::Eos, {}, seq.stroke_count, seq.tokens.back().point_index});
  return seq;
}

Sketch detokenize(const TokenSequence& seq) {
  Sketch out;
  Stroke cur;
  bool eos_seen = false;
  for (size_t i = 0; i < seq.tokens.size(); ++i) {
    const Token& t = seq.tokens[i];
    if (eos_seen) throw std::runtime_error("detokenize: token after EOS");
    switch (t.kind) {
      case TokenKind::Point:
        cur.points.push_back(t.coords);
        break;
      case TokenKind::Sep:
        if (cur.points.size() < 2)
          throw std::runtime_error("detokenize: stroke with fewer than 2 points");
        cur.id = static_cast<int>(out.strokes.size());
        out.strokes.push_back(std::move(cur));
        cur = Stroke{};
        break;
      case TokenKind::Eos:
        if (!cur.points.empty())
          throw std::runtime_error("detokenize: EOS inside an unterminated stroke");
        eos_seen = true;
        break;
      case TokenKind::Mask:
        throw std::runtime_error("detokenize: sequence contains MASK tokens");
    }
  }
  if (!eos_seen) throw std::runtime_error("detokenize: missing EOS");
  validate_sketch(out, "detokenize");
  return out;
}

void validate_tokens(const TokenSequence& seq, const std::string& context) {
  if (seq.tokens.empty()) throw std::runtime_error(context + ": empty token sequence");
  if (seq.tokens.back().kind != TokenKind::Eos)
    throw std::runtime_error(context + ": sequence must end with EOS");

  int stroke = 1, point = 1, seps = 0;
  for (size_t i = 0; i + 1 < seq.tokens.size(); ++i) {
    const Token& t = seq.tokens[i];
    if (t.kind == TokenKind::Eos) throw std::runtime_error(context + ": interior EOS");
    if (t.stroke_index != stroke || t.point_index != point)
      throw std::runtime_error(context + ": token " + std::to_string(i) +
                               " has indices (" + std::to_string(t.stroke_index) + ", " +
                               std::to_string(t.point_index) + "), expected (" +
                               std::to_string(stroke) + ", " + std::to_string(point) + ")");
    if (t.kind == TokenKind::Sep) {
      if (point == 1) throw std::runtime_error(context + ": empty stroke block");
      ++seps;
      ++stroke;
      point = 1;
    } else {
      ++point;
    }
  }
  if (seps == 0 || point != 1)
    throw std::runtime_error(context + ": last stroke is not SEP-terminated");
  if (seps != seq.stroke_count)
    throw std::runtime_error(context + ": stroke_count " + std::to_string(seq.stroke_count) +
                             " does not match " + std::to_string(seps) + " SEP tokens");
  const Token& eos = seq.tokens.back();
  const Token& last_sep = seq.tokens[seq.tokens.size() - 2];
  if (eos.stroke_index != last_sep.stroke_index || eos.point_index != last_sep.point_index)
    throw std::runtime_error(context + ": EOS indices do not mirror the final SEP");
}

TokenSequence augment(const TokenSequence& seq, const AugmentRates& rates, uint64_t seed,
                      AugmentStats* stats) {
  for (double r : {rates.stroke_drop, rates.point_drop, rates.stroke_swap})
    if (r < 0.0 || r > 1.0)
      throw std::invalid_argument("augment: rates must be in [0, 1]");
  validate_tokens(seq, "augment");

  auto blocks = to_blocks(seq);
  Rng rng(seed);
  AugmentStats local;
  local.strokes_total = static_cast<int64_t>(blocks.size());

  for (auto& b : blocks) {
    if (!rng.bernoulli(rates.stroke_drop)) continue;
    b.dropped = true;
    ++local.strokes_dropped;
    for (auto& t : b.body)
      if (t.kind == TokenKind::Point) t = {TokenKind::Mask, {}, t.stroke_index, t.point_index};
  }
  for (auto& b : blocks) {
    if (b.dropped) continue;
    for (auto& t : b.body) {
      if (t.kind != TokenKind::Point) continue;
      ++local.points_considered;
      if (rng.bernoulli(rates.point_drop)) {
        t = {TokenKind::Mask, {}, t.stroke_index, t.point_index};
        ++local.points_dropped;
      }
    }
  }
  int s_count = static_cast<int>(blocks.size());
  for (int p = 0; p < s_count; ++p) {
    ++local.swap_draws;
    if (!rng.bernoulli(rates.stroke_swap)) continue;
    ++local.swaps_selected;
    if (s_count < 2) continue;
    // Partner drawn uniformly among the other slots.
    int q = static_cast<int>(rng.index(static_cast<uint64_t>(s_count) - 1));
    if (q >= p) ++q;
    std::swap(blocks[p], blocks[q]);
  }

  if (stats) *stats = local;
  return from_blocks(blocks);
}

TokenSequence build_completion_input(const TokenSequence& seq, double keep_fraction,
                                     uint64_t seed, int pad_tokens) {
  if (!(keep_fraction > 0.0) || keep_fraction > 1.0)
    throw std::invalid_argument("build_completion_input: keep_fraction must be in (0, 1]");
  if (pad_tokens < 1)
    throw std::invalid_argument("build_completion_input: pad_tokens must be positive");
  if (seq.tokens.empty() || seq.tokens.back().kind != TokenKind::Eos)
    throw std::runtime_error("build_completion_input: sequence must end with EOS");

  size_t n = seq.tokens.size() - 1;  // without the EOS
  if (n == 0) throw std::runtime_error("build_completion_input: sequence has no body tokens");
  size_t kept = static_cast<size_t>(std::ceil(keep_fraction * static_cast<double>(n)));
  kept = std::max<size_t>(1, std::min(kept, n));

  TokenSequence out;
  out.tokens.assign(seq.tokens.begin(), seq.tokens.begin() + kept);

  // Observed stroke lengths in the kept region (a partial tail counts).
  std::vector<int> lengths;
  int run = 0;
  for (const Token& t : out.tokens) {
    if (t.kind == TokenKind::Sep) {
      lengths.push_back(run);
      run = 0;
    } else {
      ++run;
    }
  }
  if (run > 0) lengths.push_back(run);
  if (lengths.empty()) lengths.push_back(static_cast<int>(kept));

  int s_cur, i_cur;
  const Token& last = out.tokens.back();
  if (last.kind == TokenKind::Sep) {
    s_cur = last.stroke_index + 1;
    i_cur = 1;
  } else {
    s_cur = last.stroke_index;
    i_cur = last.point_index + 1;
  }

  Rng rng(seed);
  int remaining = pad_tokens;
  while (remaining > 0) {
    int m = lengths[rng.index(lengths.size())];
    for (int j = 0; j < m && remaining > 0; ++j, --remaining)
      out.tokens.push_back({TokenKind::Mask, {}, s_cur, i_cur++});
    if (remaining > 0) {
      out.tokens.push_back({TokenKind::Sep, {}, s_cur, i_cur});
      --remaining;
      ++s_cur;
      i_cur = 1;
    }
  }

  const Token& tail = out.tokens.back();
  int eos_point = tail.kind == TokenKind::Sep ? tail.point_index : tail.point_index + 1;
  out.tokens.push_back({TokenKind::Eos, {}, tail.stroke_index, eos_point});

  out.stroke_count = 0;
  for (const Token& t : out.tokens)
    if (t.kind == TokenKind::Sep) ++out.stroke_count;
  return out;
}

nlohmann::json tokens_to_json(const TokenSequence& seq) {
  nlohmann::json toks = nlohmann::json::array();
  for (const Token& t : seq.tokens) {
    switch (t.kind) {
      case TokenKind::Point:
        toks.push_back({"P", t.coords.x, t.coords.y, t.coords.z, t.stroke_index, t.point_index});
        break;
      case TokenKind::Sep:
        toks.push_back({"SEP", t.stroke_index, t.point_index});
        break;
      case TokenKind::Eos:
        toks.push_back({"EOS", t.stroke_index, t.point_index});
        break;
      case TokenKind::Mask:
        toks.push_back({"MASK", t.stroke_index, t.point_index});
        break;
    }
  }
  return {{"version", 1}, {"stroke_count", seq.stroke_count}, {"tokens", std::move(toks)}};
}

TokenSequence tokens_from_json(const nlohmann::json& j, const std::string& context) {
  if (!j.is_object() || j.value("version", 0) != 1)
    throw std::runtime_error(context + ": unsupported or missing token file version");
  if (!j.contains("tokens") || !j["tokens"].is_array())
    throw std::runtime_error(context + ": missing tokens array");

  TokenSequence seq;
  seq.stroke_count = j.value("stroke_count", 0);
  for (const auto& jt : j["tokens"]) {
    if (!jt.is_array() || jt.empty() || !jt[0].is_string())
      throw std::runtime_error(context + ": malformed token record");
    std::string kind = jt[0].get<std::string>();
    Token t;
    if (kind == "P") {
      if (jt.size() != 6)
        throw std::runtime_error(context + ": point token needs [P, x, y, z, stroke, point]");
      t.kind = TokenKind::Point;
      t.coords = {jt[1].get<double>(), jt[2].get<double>(), jt[3].get<double>()};
      t.stroke_index = jt[4].get<int>();
      t.point_index = jt[5].get<int>();
    } else {
      if (jt.size() != 3)
        throw std::runtime_error(context + ": " + kind + " token needs [kind, stroke, point]");
      if (kind == "SEP") t.kind = TokenKind::Sep;
      else if (kind == "EOS") t.kind = TokenKind::Eos;
      else if (kind == "MASK") t.kind = TokenKind::Mask;
      else throw std::runtime_error(context + ": unknown token kind '" + kind + "'");
      t.stroke_index = jt[1].get<int>();
      t.point_index = jt[2].get<int>();
    }
    seq.tokens.push_back(t);
  }
  return seq;
}

void save_tokens(const TokenSequence& seq, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error(path + ": cannot open file for writing");
  out << tokens_to_json(seq).dump(2) << '\n';
  if (!out) throw std::runtime_error(path + ": write failed");
}

TokenSequence load_tokens(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error(path + ": cannot open file");
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& e) {
    throw std::runtime_error(path + ": invalid JSON: " + e.what());
  }
  return tokens_from_json(j, path);
}

}  // namespace sketchgen
