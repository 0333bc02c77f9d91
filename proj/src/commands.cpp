#include "softzca/commands.hpp"

#include <cstdio>
#include <string>
#include <utility>

#include <nlohmann/json.hpp>

#include "softzca/error.hpp"
#include "softzca/io.hpp"
#include "softzca/isoscore.hpp"
#include "softzca/synthetic.hpp"

namespace softzca {
namespace {

namespace fs = std::filesystem;

const fs::path& require(const std::optional<fs::path>& path, const char* flag) {
  if (!path) {
    throw Error(ErrorKind::kConfig, std::string("missing required option ") + flag);
  }
  return *path;
}

void prepare_out_dir(const fs::path& dir) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) {
    throw Error(ErrorKind::kIo, "cannot create output directory " + dir.string());
  }
}

void warn_clamped(const WhiteningTransform& t, std::string_view side, std::ostream& err) {
  if (t.clamped_eigenvalues > 0) {
    err << "warning: " << side << " covariance is rank-deficient; " << t.clamped_eigenvalues
        << " eigenvalue(s) floored at " << kEigenvalueFloor << " * lambda_max\n";
  }
}

struct LoadedCorpus {
  PairedCorpus corpus;
  EmbeddingSet code_fit;
  EmbeddingSet comment_fit;
  std::vector<std::string> ids;
};

LoadedCorpus load_corpus(const RunConfig& config) {
  EmbeddingSet code = io::load_embeddings(require(config.code, "--code"));
  EmbeddingSet comments = io::load_embeddings(require(config.comments, "--comments"));
  if (code.rows() != comments.rows()) {
    throw Error(ErrorKind::kShape, config.code->string() + " has " + std::to_string(code.rows()) +
                                       " rows but " + config.comments->string() + " has " +
                                       std::to_string(comments.rows()));
  }
  if (code.dim() != comments.dim()) {
    throw Error(ErrorKind::kShape, "code dimension " + std::to_string(code.dim()) +
                                       " != comment dimension " + std::to_string(comments.dim()));
  }

  std::vector<std::string> ids;
  if (config.manifest) {
    io::PairManifest manifest = io::read_manifest(*config.manifest);
    if (manifest.count != code.rows()) {
      throw Error(ErrorKind::kShape, config.manifest->string() + ": manifest count " +
                                         std::to_string(manifest.count) + " != corpus size " +
                                         std::to_string(code.rows()));
    }
    ids = std::move(manifest.ids);
  }

  // Fit-on-test unless a separate fit set is named.
  EmbeddingSet code_fit = config.fit_code ? io::load_embeddings(*config.fit_code) : code;
  EmbeddingSet comment_fit =
      config.fit_comments ? io::load_embeddings(*config.fit_comments) : comments;
  return {PairedCorpus(std::move(comments), std::move(code)), std::move(code_fit),
          std::move(comment_fit), std::move(ids)};
}

std::string corpus_label(const RunConfig& config) {
  return config.comments->generic_string() + " -> " + config.code->generic_string();
}

}  // namespace

double effective_epsilon(const RunConfig& config) {
  if (config.method == Method::kZca) {
    if (config.epsilon_given && config.epsilon != 0.0) {
      throw Error(ErrorKind::kConfig, "zca is unregularized; use --method soft-zca with --epsilon");
    }
    return 0.0;
  }
  return config.epsilon;
}

void cmd_fit(const RunConfig& config, std::ostream& out, std::ostream& err) {
  const double epsilon = effective_epsilon(config);
  const fs::path& code_path = config.fit_code ? *config.fit_code : require(config.code, "--code");
  const fs::path& comment_path =
      config.fit_comments ? *config.fit_comments : require(config.comments, "--comments");
  const EmbeddingSet code = io::load_embeddings(code_path);
  const EmbeddingSet comments = io::load_embeddings(comment_path);

  const FittedTransforms fitted = fit_transforms(code, comments, config.method, epsilon, config.mode);
  prepare_out_dir(config.out_dir);
  if (config.mode == FitMode::kSeparate) {
    warn_clamped(fitted.code, "code", err);
    warn_clamped(fitted.comments, "comment", err);
    io::write_transform(config.out_dir / "code.transform", fitted.code);
    io::write_transform(config.out_dir / "comments.transform", fitted.comments);
    out << "wrote " << (config.out_dir / "code.transform").string() << '\n'
        << "wrote " << (config.out_dir / "comments.transform").string() << '\n';
  } else {
    warn_clamped(fitted.code, "combined", err);
    io::write_transform(config.out_dir / "combined.transform", fitted.code);
    out << "wrote " << (config.out_dir / "combined.transform").string() << '\n';
  }
}

void cmd_transform(const RunConfig& config, std::ostream& out, std::ostream& /*err*/) {
  const WhiteningTransform t = io::read_transform(require(config.transform, "--transform"));
  const fs::path& input = require(config.input, "--input");
  const EmbeddingSet x = io::load_embeddings(input);
  const EmbeddingSet h = apply_transform(t, x);

  prepare_out_dir(config.out_dir);
  fs::path target = config.out_dir / input.stem();
  target += ".whitened";
  target += input.extension();
  io::save_embeddings(target, h);
  out << "wrote " << target.string() << '\n';
}

void cmd_isoscore(const RunConfig& config, std::ostream& out, std::ostream& /*err*/) {
  std::vector<std::pair<std::string, fs::path>> sets;
  if (config.input) sets.emplace_back("input", *config.input);
  if (config.code) sets.emplace_back("code", *config.code);
  if (config.comments) sets.emplace_back("comments", *config.comments);
  if (sets.empty()) {
    throw Error(ErrorKind::kConfig, "isoscore needs --input, --code or --comments");
  }

  std::string csv = "set,path,isoscore,dim,n\n";
  for (const auto& [label, path] : sets) {
    const IsoScoreValue v = isoscore(io::load_embeddings(path));
    csv += label + ',' + path.generic_string() + ',' + format_sig6(v.score) + ',' +
           std::to_string(v.dim) + ',' + std::to_string(v.sample_count) + '\n';
  }
  prepare_out_dir(config.out_dir);
  io::write_file(config.out_dir / "isoscore.csv", csv);
  out << csv;
}

void cmd_eval(const RunConfig& config, std::ostream& out, std::ostream& err) {
  const LoadedCorpus loaded = load_corpus(config);
  const EvalReport baseline = evaluate(loaded.corpus, nullptr, nullptr, config.direction);

  nlohmann::json j;
  j["corpus"] = {{"code", config.code->generic_string()},
                 {"comments", config.comments->generic_string()}};
  j["baseline"] = to_json(baseline);
  if (!loaded.ids.empty()) j["ids"] = loaded.ids;
  std::string csv = eval_csv_header() + eval_csv_row("baseline", baseline);

  if (config.method_given || config.epsilon_given) {
    const double epsilon = effective_epsilon(config);
    const FittedTransforms fitted = fit_transforms(loaded.code_fit, loaded.comment_fit,
                                                   config.method, epsilon, config.mode);
    warn_clamped(fitted.code, "code", err);
    if (config.mode == FitMode::kSeparate) warn_clamped(fitted.comments, "comment", err);
    const EvalReport whitened =
        evaluate(loaded.corpus, &fitted.code, &fitted.comments, config.direction);
    const double delta = whitened.mrr - baseline.mrr;

    j["mode"] = std::string(to_string(config.mode));
    j["whitened"] = to_json(whitened);
    j["delta_mrr"] = delta;
    csv += eval_csv_row("whitened", whitened);
    out << "baseline MRR " << format_sig6(baseline.mrr) << ", whitened MRR "
        << format_sig6(whitened.mrr) << " (" << to_string(config.method) << ", epsilon "
        << format_sig6(epsilon) << "), delta " << format_sig6(delta) << '\n';
  } else {
    out << "baseline MRR " << format_sig6(baseline.mrr) << '\n';
  }

  prepare_out_dir(config.out_dir);
  io::write_file(config.out_dir / "report.json", j.dump(2) + '\n');
  io::write_file(config.out_dir / "report.csv", csv);
  out << "wrote " << (config.out_dir / "report.json").string() << '\n';
}

void cmd_sweep(const RunConfig& config, std::ostream& out, std::ostream& /*err*/) {
  const LoadedCorpus loaded = load_corpus(config);
  const std::vector<double> grid =
      config.epsilon_grid.empty() ? default_epsilon_grid() : config.epsilon_grid;
  SweepReport report = run_sweep(loaded.corpus, loaded.code_fit, loaded.comment_fit,
                                 config.method, grid, config.mode, config.direction);
  report.corpus = corpus_label(config);

  prepare_out_dir(config.out_dir);
  const std::string csv = sweep_to_csv(report);
  io::write_file(config.out_dir / "sweep.csv", csv);
  io::write_file(config.out_dir / "sweep.json", to_json(report).dump(2) + '\n');
  out << csv;
}

void cmd_synth(const RunConfig& config, std::ostream& out, std::ostream& /*err*/) {
  SyntheticCorpusOptions options;
  options.seed = config.seed;
  options.pairs = config.pairs;
  const SyntheticCorpus corpus = generate_paired_corpus(options);

  nlohmann::json manifest;
  manifest["count"] = corpus.code.rows();
  manifest["ids"] = nlohmann::json::array();
  for (std::size_t i = 0; i < corpus.code.rows(); ++i) {
    char id[32];
    std::snprintf(id, sizeof(id), "pair-%06zu", i);
    manifest["ids"].push_back(id);
  }
  manifest["source"] = "synthetic";
  manifest["seed"] = config.seed;

  prepare_out_dir(config.out_dir);
  io::write_npy(config.out_dir / "code.npy", corpus.code.data());
  io::write_npy(config.out_dir / "comments.npy", corpus.comments.data());
  io::write_file(config.out_dir / "manifest.json", manifest.dump(2) + '\n');
  out << "wrote " << corpus.code.rows() << " synthetic pairs (d=" << corpus.code.dim()
      << ") to " << config.out_dir.string() << '\n';
}

}  // namespace softzca
