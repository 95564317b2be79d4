#pragma once

// Text formats for matrices, frequency vectors and per-bin Dirichlet
// parameters.
//
// Matrix file:
//   # order: ARNDCQEGHILKMFPSTWYV      (optional; rows/columns are permuted
//                                       into the canonical order on load)
//   # type: conditional | logodds      (default conditional)
//   # scale: <c>                       (log-odds unit: S = c log2(ratio))
//   # divisor: <q>                     (optional; scores are divided by q
//                                       before use, default 1)
//   # freqs: <20 reals>                (optional background frequencies)
//   20 rows of 20 reals; row i = target residue, column j = source residue.
// Other "# key: value" lines are kept as metadata; any other line starting
// with '#' is a comment.
//
// Alpha file: one line per time bin, `t am1 am2 ai1 ai2 ai3`. Bins that are
// not listed are filled from the nearest listed bin (ties to the lower t).

#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "subinfo/core_types.hpp"
#include "subinfo/markov.hpp"

namespace subinfo::io {

enum class MatrixKind { Conditional, LogOdds };

struct MatrixFile {
    MatrixKind kind = MatrixKind::Conditional;
    Matrix20 values{};  // canonical order, column-major
    std::optional<double> scale;
    double divisor = 1.0;
    std::optional<Vector20> freqs;
    std::vector<std::pair<std::string, std::string>> metadata;
};

MatrixFile parse_matrix(std::string_view contents, const std::string& source_name);
MatrixFile read_matrix(const std::string& path);
std::string format_matrix(const MatrixFile& file);
void write_matrix(const std::string& path, const MatrixFile& file);

// Conditional matrix with zero cells floored and columns renormalised.
StochasticMatrix to_stochastic(const MatrixFile& file, const std::string& source_name);
StochasticMatrix read_stochastic_matrix(const std::string& path);

// Log-odds scores divided by the divisor. `scale_override` replaces the
// header scale; one of the two must be present.
markov::ScoringMatrix to_scoring(const MatrixFile& file, std::optional<double> scale_override,
                                 const std::string& source_name);

MatrixFile from_stochastic(const StochasticMatrix& m);
MatrixFile from_scoring(const markov::ScoringMatrix& sc);

// 20 frequencies (optionally preceded by an order header); renormalised if
// they sum to 1 within 1e-6.
Vector20 parse_frequencies(std::string_view contents, const std::string& source_name);
Vector20 read_frequencies(const std::string& path);

TimeBinnedDirichlets parse_alphas(std::string_view contents, const std::string& source_name);
TimeBinnedDirichlets read_alphas(const std::string& path);
std::string format_alphas(const TimeBinnedDirichlets& alphas);
void write_alphas(const std::string& path, const TimeBinnedDirichlets& alphas);

}  // namespace subinfo::io
