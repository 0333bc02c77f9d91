#include "softzca/pipeline.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <sstream>
#include <string>

#include "softzca/error.hpp"

namespace softzca {

FitMode parse_fit_mode(std::string_view name) {
  if (name == "separate") return FitMode::kSeparate;
  if (name == "combined") return FitMode::kCombined;
  throw Error(ErrorKind::kConfig, "unknown fit mode '" + std::string(name) + "'");
}

std::string_view to_string(FitMode mode) noexcept {
  return mode == FitMode::kSeparate ? "separate" : "combined";
}

std::vector<double> default_epsilon_grid() { return {0.0, 1e-5, 1e-4, 1e-3, 1e-2, 1e-1, 1.0}; }

std::vector<double> normalize_epsilon_grid(std::vector<double> grid) {
  if (grid.empty()) {
    throw Error(ErrorKind::kConfig, "epsilon grid is empty");
  }
  for (double eps : grid) {
    if (!std::isfinite(eps) || eps < 0.0) {
      throw Error(ErrorKind::kConfig, "invalid epsilon grid value " + format_sig6(eps));
    }
  }
  std::sort(grid.begin(), grid.end());
  grid.erase(std::unique(grid.begin(), grid.end()), grid.end());
  return grid;
}

FittedTransforms fit_transforms(const EmbeddingSet& code_fit, const EmbeddingSet& comment_fit,
                                Method method, double epsilon, FitMode mode) {
  FittedTransforms out;
  out.mode = mode;
  if (mode == FitMode::kSeparate) {
    out.code = build_transform(fit_statistics(code_fit), method, epsilon);
    out.comments = build_transform(fit_statistics(comment_fit), method, epsilon);
  } else {
    if (code_fit.dim() != comment_fit.dim()) {
      throw Error(ErrorKind::kConfig, "combined mode needs equal code and comment dimensions");
    }
    out.code = build_transform(fit_statistics(stack_rows(code_fit, comment_fit)), method, epsilon);
    out.comments = out.code;
  }
  return out;
}

SweepReport run_sweep(const PairedCorpus& corpus, const EmbeddingSet& code_fit,
                      const EmbeddingSet& comment_fit, Method method,
                      const std::vector<double>& grid, FitMode mode, Direction direction) {
  const std::vector<double> epsilons = normalize_epsilon_grid(grid);
  if (method == Method::kZca || method == Method::kNone) {
    throw Error(ErrorKind::kConfig, "sweeps need a regularized method (soft-zca, pca, cholesky)");
  }

  FitStatistics code_stats;
  FitStatistics comment_stats;
  if (mode == FitMode::kSeparate) {
    code_stats = fit_statistics(code_fit);
    comment_stats = fit_statistics(comment_fit);
  } else {
    if (code_fit.dim() != comment_fit.dim()) {
      throw Error(ErrorKind::kConfig, "combined mode needs equal code and comment dimensions");
    }
    code_stats = fit_statistics(stack_rows(code_fit, comment_fit));
    comment_stats = code_stats;
  }
  const bool needs_eig = method != Method::kCholesky;
  const EigenDecomposition code_eig = needs_eig ? eigendecompose(code_stats) : EigenDecomposition{};
  const EigenDecomposition comment_eig =
      needs_eig ? eigendecompose(comment_stats) : EigenDecomposition{};

  SweepReport report;
  report.method = method;
  report.mode = mode;
  for (double eps : epsilons) {
    WhiteningTransform code_t;
    WhiteningTransform comment_t;
    if (needs_eig) {
      code_t = build_transform(code_stats, code_eig, method, eps);
      comment_t = build_transform(comment_stats, comment_eig, method, eps);
    } else {
      code_t = build_transform(code_stats, method, eps);
      comment_t = build_transform(comment_stats, method, eps);
    }
    const EvalReport r = evaluate(corpus, &code_t, &comment_t, direction);
    report.rows.push_back({eps, r.isoscore_code.score, r.isoscore_comment.score, r.mrr});
  }
  return report;
}

std::string format_sig6(double value) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.6g", value);
  return buf;
}

namespace {

nlohmann::json isoscore_json(const IsoScoreValue& v) {
  return {{"score", v.score}, {"dim", v.dim}, {"sample_count", v.sample_count}};
}

IsoScoreValue isoscore_from_json(const nlohmann::json& j) {
  return {j.at("score").get<double>(), j.at("dim").get<std::size_t>(),
          j.at("sample_count").get<std::size_t>()};
}

}  // namespace

nlohmann::json to_json(const EvalReport& report) {
  nlohmann::json j;
  j["method"] = report.method ? nlohmann::json(std::string(to_string(*report.method)))
                              : nlohmann::json(nullptr);
  j["epsilon"] = report.epsilon ? nlohmann::json(*report.epsilon) : nlohmann::json(nullptr);
  j["direction"] = std::string(to_string(report.direction));
  j["n"] = report.reciprocal_ranks.size();
  j["mrr"] = report.mrr;
  j["isoscore_code"] = isoscore_json(report.isoscore_code);
  j["isoscore_comment"] = isoscore_json(report.isoscore_comment);
  j["reciprocal_ranks"] = report.reciprocal_ranks;
  return j;
}

EvalReport eval_report_from_json(const nlohmann::json& j) {
  try {
    EvalReport r;
    if (!j.at("method").is_null()) r.method = parse_method(j.at("method").get<std::string>());
    if (!j.at("epsilon").is_null()) r.epsilon = j.at("epsilon").get<double>();
    r.direction = parse_direction(j.at("direction").get<std::string>());
    r.mrr = j.at("mrr").get<double>();
    r.isoscore_code = isoscore_from_json(j.at("isoscore_code"));
    r.isoscore_comment = isoscore_from_json(j.at("isoscore_comment"));
    r.reciprocal_ranks = j.at("reciprocal_ranks").get<std::vector<double>>();
    return r;
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorKind::kFormat, std::string("malformed report: ") + e.what());
  }
}

std::string eval_csv_header() {
  return "report,method,epsilon,direction,n,mrr,isoscore_code,isoscore_comment\n";
}

std::string eval_csv_row(std::string_view label, const EvalReport& report) {
  std::ostringstream out;
  out << label << ',' << (report.method ? to_string(*report.method) : "none") << ','
      << (report.epsilon ? format_sig6(*report.epsilon) : "") << ','
      << to_string(report.direction) << ',' << report.reciprocal_ranks.size() << ','
      << format_sig6(report.mrr) << ',' << format_sig6(report.isoscore_code.score) << ','
      << format_sig6(report.isoscore_comment.score) << '\n';
  return out.str();
}

std::string sweep_to_csv(const SweepReport& report) {
  std::string out = "epsilon,isoscore_code,isoscore_comment,mrr\n";
  for (const auto& row : report.rows) {
    out += format_sig6(row.epsilon) + ',' + format_sig6(row.isoscore_code) + ',' +
           format_sig6(row.isoscore_comment) + ',' + format_sig6(row.mrr) + '\n';
  }
  return out;
}

nlohmann::json to_json(const SweepReport& report) {
  nlohmann::json rows = nlohmann::json::array();
  for (const auto& row : report.rows) {
    rows.push_back({{"epsilon", row.epsilon},
                    {"isoscore_code", row.isoscore_code},
                    {"isoscore_comment", row.isoscore_comment},
                    {"mrr", row.mrr}});
  }
  return {{"method", std::string(to_string(report.method))},
          {"mode", std::string(to_string(report.mode))},
          {"corpus", report.corpus},
          {"rows", rows}};
}

}  // namespace softzca
