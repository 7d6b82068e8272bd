#pragma once

#include "erglab/rational.hpp"

#include <vector>

namespace erglab {

using RatMatrix = std::vector<std::vector<Rat>>;

enum class Definiteness { positive, negative };

/// Outcome of an exact definiteness decision.
///
/// On failure `witness` is a coefficient vector alpha with
/// sum_ij alpha_i alpha_j M_ij < 0 (positive mode) or > 0 with sum alpha = 0
/// (negative mode); `witness_value` holds that quadratic form value.
struct GramCertificate {
  bool pass = false;
  std::vector<Rat> pivots;  // LDL^T pivots in elimination order
  std::vector<Rat> witness;
  Rat witness_value;
};

/// Decides positive / conditionally-negative semidefiniteness exactly.
///
/// Positive mode runs LDL^T with symmetric (largest-diagonal) pivoting over
/// the rationals. Negative mode tests -1/2 * C M C for positive
/// semidefiniteness, C = I - 11^T/n the centering projector, and maps any
/// failing direction v back to alpha = C v.
///
/// Throws ValidationError for non-square or non-symmetric input.
GramCertificate gram_check(const RatMatrix& m, Definiteness mode);

/// sum_ij a_i a_j M_ij, exact.
Rat quadratic_form(const RatMatrix& m, const std::vector<Rat>& a);

}  // namespace erglab
