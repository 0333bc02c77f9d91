#pragma once

#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "softzca/embedding_set.hpp"
#include "softzca/retrieval.hpp"
#include "softzca/whitening.hpp"

namespace softzca {

enum class FitMode { kSeparate, kCombined };

FitMode parse_fit_mode(std::string_view name);
std::string_view to_string(FitMode mode) noexcept;

inline constexpr double kDefaultEpsilon = 0.01;

/// Default sweep grid.
std::vector<double> default_epsilon_grid();

/// Sorts ascending and drops duplicates. Throws kConfig for an empty grid or
/// any negative / non-finite value.
std::vector<double> normalize_epsilon_grid(std::vector<double> grid);

struct FittedTransforms {
  FitMode mode = FitMode::kSeparate;
  WhiteningTransform code;
  WhiteningTransform comments;
};

/// Separate mode fits each side on its own rows. Combined mode fits once on
/// the row-wise concatenation [code; comments] and uses it for both sides.
FittedTransforms fit_transforms(const EmbeddingSet& code_fit, const EmbeddingSet& comment_fit,
                                Method method, double epsilon, FitMode mode);

struct SweepRow {
  double epsilon = 0.0;
  double isoscore_code = 0.0;
  double isoscore_comment = 0.0;
  double mrr = 0.0;
};

struct SweepReport {
  Method method = Method::kSoftZca;
  FitMode mode = FitMode::kSeparate;
  std::string corpus;
  std::vector<SweepRow> rows;
};

/// One evaluation per grid value. Statistics are computed once per side and
/// reused for every epsilon.
SweepReport run_sweep(const PairedCorpus& corpus, const EmbeddingSet& code_fit,
                      const EmbeddingSet& comment_fit, Method method,
                      const std::vector<double>& grid, FitMode mode,
                      Direction direction = Direction::kCommentToCode);

// Report serialization. CSV uses 6 significant digits; JSON keeps full precision.
std::string format_sig6(double value);

nlohmann::json to_json(const EvalReport& report);
EvalReport eval_report_from_json(const nlohmann::json& j);

std::string eval_csv_header();
std::string eval_csv_row(std::string_view label, const EvalReport& report);

std::string sweep_to_csv(const SweepReport& report);
nlohmann::json to_json(const SweepReport& report);

}  // namespace softzca
