// softzca: whitening, isotropy and retrieval evaluation for embedding matrices.
//
//   softzca fit       --code C --comments Q [--method M] [--epsilon E] [--mode separate|combined]
//   softzca transform --transform T --input X --out DIR
//   softzca isoscore  [--input X] [--code C] [--comments Q]
//   softzca eval      --code C --comments Q [--method M] [--epsilon E] ...
//   softzca sweep     --code C --comments Q [--grid 0,1e-4,...]
//   softzca synth     --seed S --out DIR
//
// Exit codes: 0 ok, 2 input/format error, 3 numerical failure, 4 config error.

#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "softzca/commands.hpp"
#include "softzca/error.hpp"

namespace {

constexpr int kConfigExit = 4;

struct Flags {
  std::string method = "soft-zca";
  std::string mode = "separate";
  std::string direction = "comment-to-code";
  std::string code, comments, fit_code, fit_comments, manifest, transform, input;
  std::string out = ".";
  double epsilon = softzca::kDefaultEpsilon;
  std::vector<double> grid;
  std::uint64_t seed = 0;
  std::size_t pairs = 500;
};

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Soft-ZCA whitening, IsoScore and MRR evaluation for embedding matrices"};
  app.require_subcommand(1);
  Flags f;

  const std::vector<std::string> methods{"zca", "soft-zca", "pca", "cholesky"};
  auto add_method = [&](CLI::App* cmd) {
    cmd->add_option("--method", f.method, "Whitening method")->check(CLI::IsMember(methods));
    cmd->add_option("--epsilon", f.epsilon, "Eigenvalue regularizer (default 0.01)")
        ->check(CLI::NonNegativeNumber);
    cmd->add_option("--mode", f.mode, "Fit each side separately or on the concatenation")
        ->check(CLI::IsMember({"separate", "combined"}));
  };
  auto add_corpus = [&](CLI::App* cmd, bool required) {
    auto* c = cmd->add_option("--code", f.code, "Code embedding matrix (.npy or .csv)");
    auto* q = cmd->add_option("--comments", f.comments, "Comment embedding matrix (.npy or .csv)");
    if (required) {
      c->required();
      q->required();
    }
  };
  auto add_fit_sets = [&](CLI::App* cmd) {
    cmd->add_option("--fit-code", f.fit_code, "Fit the code transform on this matrix instead");
    cmd->add_option("--fit-comments", f.fit_comments,
                    "Fit the comment transform on this matrix instead");
  };
  auto add_eval_opts = [&](CLI::App* cmd) {
    cmd->add_option("--manifest", f.manifest, "Pair manifest JSON {\"count\", \"ids\"}");
    cmd->add_option("--direction", f.direction, "Ranking direction")
        ->check(CLI::IsMember({"comment-to-code", "code-to-comment"}));
  };

  auto* fit = app.add_subcommand("fit", "Fit whitening transform(s) and write them to --out");
  add_method(fit);
  add_corpus(fit, false);
  add_fit_sets(fit);

  auto* transform = app.add_subcommand("transform", "Apply a fitted transform to a matrix");
  transform->add_option("--transform", f.transform, "Transform file from `fit`")->required();
  transform->add_option("--input", f.input, "Matrix to whiten")->required();

  auto* iso = app.add_subcommand("isoscore", "IsoScore of one or more matrices");
  iso->add_option("--input", f.input, "Matrix to score");
  add_corpus(iso, false);

  auto* eval = app.add_subcommand("eval", "MRR and IsoScores, baseline and (with --method/--epsilon) whitened");
  add_method(eval);
  add_corpus(eval, true);
  add_fit_sets(eval);
  add_eval_opts(eval);

  auto* sweep = app.add_subcommand("sweep", "Evaluate over a grid of epsilon values");
  add_method(sweep);
  add_corpus(sweep, true);
  add_fit_sets(sweep);
  add_eval_opts(sweep);
  sweep->add_option("--grid", f.grid, "Comma-separated epsilon values")->delimiter(',');

  auto* synth = app.add_subcommand("synth", "Write a seeded synthetic paired corpus");
  synth->add_option("--pairs", f.pairs, "Number of pairs")->check(CLI::PositiveNumber);

  for (auto* cmd : {fit, transform, iso, eval, sweep, synth}) {
    cmd->add_option("--out", f.out, "Output directory");
    cmd->add_option("--seed", f.seed, "Random seed");
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : kConfigExit;
  }

  try {
    softzca::RunConfig config;
    config.method = softzca::parse_method(f.method);
    config.mode = softzca::parse_fit_mode(f.mode);
    config.direction = softzca::parse_direction(f.direction);
    config.epsilon = f.epsilon;
    config.out_dir = f.out;
    config.seed = f.seed;
    config.pairs = f.pairs;
    config.epsilon_grid = f.grid;

    auto* active = app.get_subcommands().front();
    auto given = [active](const char* name) {
      const CLI::Option* opt = active->get_option_no_throw(name);
      return opt != nullptr && opt->count() > 0;
    };
    config.method_given = given("--method");
    config.epsilon_given = given("--epsilon");
    if (active == sweep && given("--grid") && f.grid.empty()) {
      throw softzca::Error(softzca::ErrorKind::kConfig, "--grid is empty");
    }

    auto set_path = [](std::optional<std::filesystem::path>& dst, const std::string& src) {
      if (!src.empty()) dst = src;
    };
    set_path(config.code, f.code);
    set_path(config.comments, f.comments);
    set_path(config.fit_code, f.fit_code);
    set_path(config.fit_comments, f.fit_comments);
    set_path(config.manifest, f.manifest);
    set_path(config.transform, f.transform);
    set_path(config.input, f.input);

    if (active == fit) softzca::cmd_fit(config, std::cout, std::cerr);
    if (active == transform) softzca::cmd_transform(config, std::cout, std::cerr);
    if (active == iso) softzca::cmd_isoscore(config, std::cout, std::cerr);
    if (active == eval) softzca::cmd_eval(config, std::cout, std::cerr);
    if (active == sweep) softzca::cmd_sweep(config, std::cout, std::cerr);
    if (active == synth) softzca::cmd_synth(config, std::cout, std::cerr);
  } catch (const softzca::Error& e) {
    std::cerr << "error (" << softzca::to_string(e.kind()) << "): " << e.what() << '\n';
    return softzca::exit_code(e.kind());
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  }
  return 0;
}
