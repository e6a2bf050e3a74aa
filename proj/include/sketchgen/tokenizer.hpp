#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include <json.hpp>

#include "sketchgen/sketch.hpp"

namespace sketchgen {

enum class TokenKind : uint8_t { Point, Sep, Eos, Mask };

struct Token {
  TokenKind kind = TokenKind::Point;
  Vec3 coords;           // meaningful for Point tokens only
  int stroke_index = 0;  // 1-based stroke position
  int point_index = 0;   // 1-based position within the stroke

  bool operator==(const Token&) const = default;
};

struct TokenSequence {
  std::vector<Token> tokens;
  int stroke_count = 0;

  bool operator==(const TokenSequence&) const = default;
};

// A sketch with strokes of n_1..n_S points becomes
//   P(1,1)..P(1,n_1) SEP(1,n_1+1) ... P(S,1)..P(S,n_S) SEP(S,n_S+1) EOS
// where the EOS carries the same (S, n_S+1) indices as the final SEP.
TokenSequence tokenize(const Sketch& s);

// Inverse of tokenize for well-formed sequences; the result carries default
// meta (token sequences do not record provenance). Raises on MASK tokens,
// structural damage, or strokes shorter than 2 points.
Sketch detokenize(const TokenSequence& seq);

// Raises unless the sequence has the exact tokenize() shape: one trailing
// EOS, one SEP per stroke, contiguous 1-based indices.
void validate_tokens(const TokenSequence& seq, const std::string& context);

struct AugmentRates {
  double stroke_drop = 0.15;
  double point_drop = 0.30;
  double stroke_swap = 0.20;
};

struct AugmentStats {
  int64_t strokes_total = 0;
  int64_t strokes_dropped = 0;     // whole strokes masked by stroke drop
  int64_t points_considered = 0;   // point tokens in surviving strokes
  int64_t points_dropped = 0;      // of those, masked by point drop
  int64_t swap_draws = 0;          // one per stroke slot
  int64_t swaps_selected = 0;      // slots whose swap draw fired
};

// Random corruption for training: whole strokes masked with probability
// stroke_drop, surviving points masked with probability point_drop, stroke
// blocks exchanged with probability stroke_swap per slot (partner uniform
// among the other slots). Masking replaces POINT with MASK in place, keeping
// the (stroke, point) indices; SEP tokens and sequence length never change.
// After swaps, stroke and point indices are renumbered to match the new
// block order.
TokenSequence augment(const TokenSequence& seq, const AugmentRates& rates, uint64_t seed,
                      AugmentStats* stats = nullptr);

// Completion input: drop the trailing EOS, keep the first
// ceil(keep_fraction * N) of the remaining tokens, then append exactly
// `pad_tokens` tokens of MASK runs separated by SEPs, with run lengths
// resampled from the kept region's stroke lengths, and a fresh EOS. Stroke
// and point indices continue past the kept prefix; stroke_count of the
// result counts its SEP tokens.
TokenSequence build_completion_input(const TokenSequence& seq, double keep_fraction,
                                     uint64_t seed, int pad_tokens = 100);

nlohmann::json tokens_to_json(const TokenSequence& seq);
TokenSequence tokens_from_json(const nlohmann::json& j, const std::string& context);
void save_tokens(const TokenSequence& seq, const std::string& path);
TokenSequence load_tokens(const std::string& path);

}  // namespace sketchgen
