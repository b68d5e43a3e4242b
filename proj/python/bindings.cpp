#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <sstream>

#include "nap/baselines.hpp"
#include "nap/cli.hpp"
#include "nap/context.hpp"
#include "nap/corpus.hpp"
#include "nap/dataset.hpp"
#include "nap/error.hpp"
#include "nap/manifest.hpp"
#include "nap/model.hpp"
#include "nap/synthetic.hpp"

namespace py = pybind11;
using namespace nap;

namespace {

Matrix to_matrix(const std::vector<std::vector<double>>& rows) {
  Matrix m;
  m.rows = rows.size();
  m.cols = rows.empty() ? 0 : rows[0].size();
  for (const auto& r : rows) {
    if (r.size() != m.cols) throw py::value_error("rows must have equal length");
    m.data.insert(m.data.end(), r.begin(), r.end());
  }
  return m;
}

std::vector<Review> token_reviews(const std::vector<std::vector<std::string>>& tokens) {
  std::vector<Review> out(tokens.size());
  for (std::size_t i = 0; i < tokens.size(); ++i) out[i].tokens = tokens[i];
  return out;
}

}  // namespace

PYBIND11_MODULE(_nap, m) {
  m.doc() = "Neighbor-aware review helpfulness prediction";

  py::register_exception<ConfigError>(m, "ConfigError", PyExc_ValueError);
  py::register_exception<DataError>(m, "DataError", PyExc_ValueError);
  py::register_exception<NumericError>(m, "NumericError", PyExc_ArithmeticError);

  m.def(
      "run_cli",
      [](std::vector<std::string> args) {
        args.insert(args.begin(), "nap");
        std::ostringstream out, err;
        int code;
        {
          py::gil_scoped_release release;
          code = run_cli(args, out, err);
        }
        return py::make_tuple(code, out.str(), err.str());
      },
      py::arg("args"), "Runs the command line; returns (exit_code, stdout, stderr).");

  m.def(
      "synthetic_corpus_jsonl",
      [](std::size_t items, std::size_t reviews_per_item, std::size_t vocabulary_size, double rho,
         double clear_share, std::uint64_t seed) {
        SyntheticConfig c;
        c.items = items;
        c.reviews_per_item = reviews_per_item;
        c.vocabulary_size = vocabulary_size;
        c.rho = rho;
        c.clear_share = clear_share;
        c.seed = seed;
        std::ostringstream out;
        write_corpus_jsonl(out, generate_synthetic_corpus(c).corpus);
        return out.str();
      },
      py::arg("items") = 50, py::arg("reviews_per_item") = 120, py::arg("vocabulary_size") = 400,
      py::arg("rho") = 0.8, py::arg("clear_share") = 0.5, py::arg("seed") = 0);

  m.def("tokenize", [](const std::string& text) { return tokenize_review(text); });

  m.def("weighting_parameter_count",
        [](const std::string& scheme, std::size_t kernels, std::size_t neighbors) {
          return weighting_parameter_count(parse_weighting_scheme(scheme), kernels, neighbors);
        });

  m.def(
      "context_embedding",
      [](const std::vector<std::vector<double>>& rows, const std::string& scheme,
         const std::vector<double>& query, const std::vector<std::vector<double>>& regression,
         const std::string& neighbor_scheme) {
        const Matrix c = to_matrix(rows);
        WeightingParams p(parse_weighting_scheme(scheme), c.rows, c.cols);
        if (!p.query.empty()) {
          if (query.size() != p.query.size()) throw py::value_error("query must have length m");
          p.query = query;
        }
        if (!p.regression.data.empty()) {
          Matrix r = to_matrix(regression);
          if (r.rows != p.regression.rows || r.cols != p.regression.cols)
            throw py::value_error("regression must be K x m");
          p.regression = r;
        }
        auto e = build_context(c, p, parse_neighbor_scheme(neighbor_scheme));
        return py::make_tuple(e.values, e.alpha);
      },
      py::arg("rows"), py::arg("scheme") = "AVG", py::arg("query") = std::vector<double>{},
      py::arg("regression") = std::vector<std::vector<double>>{}, py::arg("neighbor_scheme") = "P",
      "Context embedding of K neighbor rows; returns (c, alpha).");

  m.def("entropy_feature", [](const std::vector<std::vector<std::string>>& tokens) {
    return entropy_feature(token_reviews(tokens));
  });
  m.def("conformity_feature", [](const std::vector<std::vector<std::string>>& tokens) {
    return conformity_feature(token_reviews(tokens));
  });
  m.def("polarity_score", [](const std::vector<std::string>& tokens) {
    return polarity_score(tokens, SentimentLexicon::builtin());
  });

  m.def("git_blob_hash", [](const py::bytes& content) { return git_blob_hash(std::string(content)); });

  m.def(
      "dataset_summary",
      [](const std::string& dir) {
        PreparedDataset ds = read_dataset(dir);
        py::dict d;
        d["reviews"] = ds.corpus.reviews.size();
        d["items"] = ds.corpus.items.size();
        d["pairs"] = ds.pairs.size();
        d["vocabulary_size"] = ds.corpus.vocabulary.size();
        d["embedding_dim"] = ds.corpus.table->dim();
        d["scheme"] = std::string(to_string(ds.scheme));
        d["K"] = ds.neighbors;
        return d;
      },
      py::arg("directory"));
}
