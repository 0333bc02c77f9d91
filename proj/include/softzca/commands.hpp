#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <ostream>
#include <vector>

#include "softzca/pipeline.hpp"

namespace softzca {

/// Everything a CLI invocation can ask for. Unused fields are ignored by the
/// command that receives the config.
struct RunConfig {
  Method method = Method::kSoftZca;
  bool method_given = false;
  double epsilon = kDefaultEpsilon;
  bool epsilon_given = false;
  FitMode mode = FitMode::kSeparate;
  Direction direction = Direction::kCommentToCode;

  std::optional<std::filesystem::path> code;
  std::optional<std::filesystem::path> comments;
  std::optional<std::filesystem::path> fit_code;
  std::optional<std::filesystem::path> fit_comments;
  std::optional<std::filesystem::path> manifest;
  std::optional<std::filesystem::path> transform;
  std::optional<std::filesystem::path> input;
  std::filesystem::path out_dir = ".";

  std::uint64_t seed = 0;
  std::size_t pairs = 500;
  std::vector<double> epsilon_grid;
};

/// Epsilon actually used: zca is pinned to 0 and rejects an explicit non-zero value.
double effective_epsilon(const RunConfig& config);

// Each command writes its files under config.out_dir and prints a short
// human-readable summary to `out`. Warnings go to `err`. Failures throw Error.
void cmd_fit(const RunConfig& config, std::ostream& out, std::ostream& err);
void cmd_transform(const RunConfig& config, std::ostream& out, std::ostream& err);
void cmd_isoscore(const RunConfig& config, std::ostream& out, std::ostream& err);
void cmd_eval(const RunConfig& config, std::ostream& out, std::ostream& err);
void cmd_sweep(const RunConfig& config, std::ostream& out, std::ostream& err);
/// Writes a seeded synthetic paired corpus (code.npy, comments.npy, manifest.json).
void cmd_synth(const RunConfig& config, std::ostream& out, std::ostream& err);

}  // namespace softzca
