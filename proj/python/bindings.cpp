/**
 * pybind11 wrapper for softzca: whitening, IsoScore and retrieval evaluation.
 */

#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>
#include <pybind11/stl/filesystem.h>

#include <string>
#include <vector>

#include "softzca/error.hpp"
#include "softzca/io.hpp"
#include "softzca/isoscore.hpp"
#include "softzca/pipeline.hpp"
#include "softzca/retrieval.hpp"
#include "softzca/synthetic.hpp"
#include "softzca/whitening.hpp"

namespace py = pybind11;
using namespace softzca;

namespace {

EmbeddingSet as_set(const RowMatrix& x) { return EmbeddingSet(x); }

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Soft-ZCA whitening, IsoScore and MRR evaluation for embedding matrices";

  // Owned by the module attribute for the interpreter's lifetime.
  static py::handle error =
      py::exception<Error>(m, "SoftZcaError", PyExc_ValueError).release();
  py::register_exception_translator([](std::exception_ptr p) {
    try {
      if (p) std::rethrow_exception(p);
    } catch (const Error& e) {
      py::set_error(error, (std::string(to_string(e.kind())) + ": " + e.what()).c_str());
    }
  });

  py::enum_<Method>(m, "Method")
      .value("ZCA", Method::kZca)
      .value("SOFT_ZCA", Method::kSoftZca)
      .value("PCA", Method::kPca)
      .value("CHOLESKY", Method::kCholesky)
      .value("NONE", Method::kNone);

  py::enum_<Direction>(m, "Direction")
      .value("COMMENT_TO_CODE", Direction::kCommentToCode)
      .value("CODE_TO_COMMENT", Direction::kCodeToComment);

  py::class_<FitStatistics>(m, "FitStatistics")
      .def(py::init<>())
      .def_readwrite("mean", &FitStatistics::mean)
      .def_readwrite("covariance", &FitStatistics::covariance)
      .def_readwrite("sample_count", &FitStatistics::sample_count);

  py::class_<EigenDecomposition>(m, "EigenDecomposition")
      .def_readonly("eigenvectors", &EigenDecomposition::eigenvectors)
      .def_readonly("eigenvalues", &EigenDecomposition::eigenvalues)
      .def_readonly("clamped_count", &EigenDecomposition::clamped_count);

  py::class_<WhiteningTransform>(m, "WhiteningTransform")
      .def_readonly("method", &WhiteningTransform::method)
      .def_readonly("epsilon", &WhiteningTransform::epsilon)
      .def_readonly("mean", &WhiteningTransform::mean)
      .def_readonly("matrix", &WhiteningTransform::matrix)
      .def_readonly("clamped_eigenvalues", &WhiteningTransform::clamped_eigenvalues)
      .def("__repr__", [](const WhiteningTransform& t) {
        return "<WhiteningTransform method=" + std::string(to_string(t.method)) +
               " epsilon=" + format_sig6(t.epsilon) + " dim=" + std::to_string(t.dim()) + ">";
      });

  py::class_<IsoScoreValue>(m, "IsoScoreValue")
      .def_readonly("score", &IsoScoreValue::score)
      .def_readonly("dim", &IsoScoreValue::dim)
      .def_readonly("sample_count", &IsoScoreValue::sample_count)
      .def("__float__", [](const IsoScoreValue& v) { return v.score; });

  py::class_<EvalReport>(m, "EvalReport")
      .def_readonly("reciprocal_ranks", &EvalReport::reciprocal_ranks)
      .def_readonly("mrr", &EvalReport::mrr)
      .def_readonly("isoscore_code", &EvalReport::isoscore_code)
      .def_readonly("isoscore_comment", &EvalReport::isoscore_comment)
      .def_readonly("epsilon", &EvalReport::epsilon)
      .def_readonly("method", &EvalReport::method)
      .def("__repr__", [](const EvalReport& r) {
        return "<EvalReport mrr=" + format_sig6(r.mrr) +
               " isoscore_code=" + format_sig6(r.isoscore_code.score) +
               " isoscore_comment=" + format_sig6(r.isoscore_comment.score) + ">";
      });

  m.def("fit_statistics", [](const RowMatrix& x) { return fit_statistics(as_set(x)); },
        py::arg("x"), "Mean and population covariance of the rows of x");
  m.def("eigendecompose", &eigendecompose, py::arg("stats"));
  m.def("build_transform",
        py::overload_cast<const FitStatistics&, Method, double>(&build_transform),
        py::arg("stats"), py::arg("method") = Method::kSoftZca,
        py::arg("epsilon") = kDefaultEpsilon);
  m.def("apply_transform",
        [](const WhiteningTransform& t, const RowMatrix& x) {
          return apply_transform(t, as_set(x)).data();
        },
        py::arg("transform"), py::arg("x"), "Rows W (x_i - mean)");

  m.def("isoscore", [](const RowMatrix& x) { return isoscore(as_set(x)); }, py::arg("x"));

  m.def("cosine_similarity_matrix",
        [](const RowMatrix& q, const RowMatrix& d) {
          return cosine_similarity_matrix(as_set(q), as_set(d));
        },
        py::arg("queries"), py::arg("documents"));
  m.def("reciprocal_ranks", &reciprocal_ranks, py::arg("similarity"));

  m.def("evaluate",
        [](const RowMatrix& comments, const RowMatrix& code, const WhiteningTransform* code_t,
           const WhiteningTransform* comment_t, Direction direction) {
          const PairedCorpus corpus(as_set(comments), as_set(code));
          return evaluate(corpus, code_t, comment_t, direction);
        },
        py::arg("comments"), py::arg("code"), py::arg("code_transform") = nullptr,
        py::arg("comment_transform") = nullptr,
        py::arg("direction") = Direction::kCommentToCode,
        "Rank all code rows for every comment row; row i of each side is a gold pair");

  m.def("sweep",
        [](const RowMatrix& comments, const RowMatrix& code, Method method,
           std::vector<double> grid, const std::string& mode) {
          const PairedCorpus corpus(as_set(comments), as_set(code));
          if (grid.empty()) grid = default_epsilon_grid();
          const SweepReport r = run_sweep(corpus, corpus.documents(), corpus.queries(), method,
                                          grid, parse_fit_mode(mode));
          std::vector<py::tuple> rows;
          for (const auto& row : r.rows) {
            rows.push_back(
                py::make_tuple(row.epsilon, row.isoscore_code, row.isoscore_comment, row.mrr));
          }
          return rows;
        },
        py::arg("comments"), py::arg("code"), py::arg("method") = Method::kSoftZca,
        py::arg("grid") = std::vector<double>{}, py::arg("mode") = "separate",
        "List of (epsilon, isoscore_code, isoscore_comment, mrr) rows");

  m.def("generate_anisotropic_gaussian",
        [](std::uint64_t seed, std::size_t n, const std::vector<double>& spectrum, bool rotate) {
          return generate_anisotropic_gaussian(seed, n, spectrum, rotate).data();
        },
        py::arg("seed"), py::arg("n"), py::arg("spectrum"), py::arg("rotate") = true);
  m.def("generate_paired_corpus",
        [](std::uint64_t seed, std::size_t pairs) {
          SyntheticCorpusOptions options;
          options.seed = seed;
          options.pairs = pairs;
          const SyntheticCorpus c = generate_paired_corpus(options);
          return py::make_tuple(c.comments.data(), c.code.data());
        },
        py::arg("seed") = 7, py::arg("pairs") = 500, "Returns (comments, code)");

  m.def("read_npy", [](const std::filesystem::path& p) { return io::read_npy(p).data; },
        py::arg("path"));
  m.def("write_npy", [](const std::filesystem::path& p, const RowMatrix& x) { io::write_npy(p, x); },
        py::arg("path"), py::arg("x"));
  m.def("read_transform", &io::read_transform, py::arg("path"));
  m.def("write_transform", &io::write_transform, py::arg("path"), py::arg("transform"));

  m.attr("__version__") = "0.1.0";
}
